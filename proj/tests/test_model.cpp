#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "typmatch/error.hpp"
#include "typmatch/model.hpp"

using namespace typmatch;

namespace {

PairedEdgeModel two_community(const JointPmf& intra, const JointPmf& inter) {
  return PairedEdgeModel::assortative(2, intra, inter);
}

void check_close(std::span<const double> a, std::span<const double> b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(tol));
}

}  // namespace

TEST_CASE("layout from sizes is contiguous") {
  const auto layout = CommunityLayout::from_sizes({2, 3});
  CHECK(layout.n() == 5);
  CHECK(layout.c() == 2);
  CHECK(layout.community_of(1) == 0);
  CHECK(layout.community_of(2) == 1);
  CHECK(layout.members(1) == std::vector<std::size_t>{2, 3, 4});
  CHECK_THROWS_AS(CommunityLayout::from_sizes({2, 0}), ValidationError);
  CHECK_THROWS_AS(CommunityLayout::from_membership({0, 0, 2}, 3), ValidationError);
}

TEST_CASE("uniform joint validates") {
  const auto model = PairedEdgeModel::homogeneous(1, JointPmf::uniform(2, 2));
  CHECK(validate_model(model, CommunityLayout::from_sizes({4})).ok());
}

TEST_CASE("normalization violation is located") {
  std::vector<double> joint{0.3, 0.2, 0.2, 0.2};
  PairedEdgeModel model(EdgeAlphabet{2}, 1, joint);
  const auto report = validate_model(model, CommunityLayout::from_sizes({3}));
  REQUIRE(report.has(ViolationKind::normalization));
  CHECK(report.violations.front().i == 0);
  CHECK(report.violations.front().j == 0);
  CHECK(report.describe().find("normalization at (1,1)") != std::string::npos);
}

TEST_CASE("asymmetric community pair is an undirectedness violation") {
  const auto base = two_community(JointPmf::uniform(2, 2), JointPmf::uniform(2, 2));
  std::vector<double> joint(base.values().begin(), base.values().end());
  // block (0,1) becomes X'=X, block (1,0) stays uniform
  joint[4] = 0.5;
  joint[5] = 0.0;
  joint[6] = 0.0;
  joint[7] = 0.5;
  PairedEdgeModel model(EdgeAlphabet{2}, 2, joint);
  const auto report = validate_model(model, CommunityLayout::from_sizes({2, 2}));
  CHECK(report.has(ViolationKind::undirectedness));
  CHECK_FALSE(report.has(ViolationKind::normalization));
}

TEST_CASE("other violations") {
  PairedEdgeModel negative(EdgeAlphabet{2}, 1, {1.2, -0.2, 0.0, 0.0});
  const auto r1 = validate_model(negative, CommunityLayout::from_sizes({2}));
  CHECK(r1.has(ViolationKind::negative_entry));
  CHECK(r1.has(ViolationKind::entry_above_one));

  PairedEdgeModel short_tensor(EdgeAlphabet{2}, 1, {1.0});
  CHECK(validate_model(short_tensor, CommunityLayout::from_sizes({2})).has(ViolationKind::tensor_shape));

  const auto one = PairedEdgeModel::homogeneous(1, JointPmf::uniform(2, 2));
  CHECK(validate_model(one, CommunityLayout::from_sizes({2, 2})).has(ViolationKind::community_count));

  PairedEdgeModel unary(EdgeAlphabet{1}, 1, {1.0});
  CHECK(validate_model(unary, CommunityLayout::from_sizes({2})).has(ViolationKind::alphabet));
}

TEST_CASE("marginals") {
  const auto uniform = PairedEdgeModel::homogeneous(1, JointPmf::uniform(2, 2));
  const auto m = marginal(uniform, Side::first);
  CHECK(m(0, 0, 0) == doctest::Approx(0.5));
  CHECK(m(0, 0, 1) == doctest::Approx(0.5));

  const auto dsbs = PairedEdgeModel::homogeneous(1, JointPmf(2, 2, {0.45, 0.05, 0.05, 0.45}));
  for (const auto side : {Side::first, Side::second}) {
    const auto md = marginal(dsbs, side);
    CHECK(md(0, 0, 0) == doctest::Approx(0.5));
    CHECK(md(0, 0, 1) == doctest::Approx(0.5));
  }

  const auto point = PairedEdgeModel::homogeneous(1, JointPmf(2, 2, {1.0, 0.0, 0.0, 0.0}));
  const auto mp = marginal(point, Side::second);
  CHECK(mp(0, 0, 0) == 1.0);
  CHECK(mp(0, 0, 1) == 0.0);

  const auto skew = PairedEdgeModel::homogeneous(1, JointPmf(2, 2, {0.1, 0.2, 0.3, 0.4}));
  CHECK(marginal(skew, Side::first)(0, 0, 0) == doctest::Approx(0.3));
  CHECK(marginal(skew, Side::second)(0, 0, 0) == doctest::Approx(0.4));
}

TEST_CASE("product coupling") {
  const auto copy = PairedEdgeModel::homogeneous(1, JointPmf::copy(std::vector<double>{0.5, 0.5}));
  check_close(product_coupling(copy).values(), JointPmf::uniform(2, 2).values(), 1e-12);

  const std::vector<double> a{0.3, 0.7};
  const std::vector<double> b{0.6, 0.4};
  const auto product = PairedEdgeModel::homogeneous(1, JointPmf::product(a, b));
  check_close(product_coupling(product).values(), product.values(), 1e-12);

  const auto sbm = two_community(JointPmf(2, 2, {0.1, 0.2, 0.3, 0.4}),
                                 JointPmf(2, 2, {0.7, 0.1, 0.05, 0.15}));
  const auto layout = CommunityLayout::from_sizes({3, 2});
  const auto once = product_coupling(sbm);
  const auto twice = product_coupling(once);
  CHECK(validate_model(once, layout).ok());
  check_close(twice.values(), once.values(), 1e-12);
  for (const auto side : {Side::first, Side::second}) {
    check_close(marginal(once, side).values(), marginal(sbm, side).values(), 1e-12);
  }
  for (const double v : once.values()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("mixture interpolates between the product and the joint") {
  const auto p = JointPmf::dsbs(0.1);
  check_close(p.mixture(1.0).values(), p.values(), 1e-15);
  check_close(p.mixture(0.0).values(), p.independent().values(), 1e-15);
  const auto half = p.mixture(0.5);
  CHECK(half(0, 0) == doctest::Approx(0.5 * 0.25 + 0.5 * 0.45));
}
