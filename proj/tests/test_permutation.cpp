#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "typmatch/error.hpp"
#include "typmatch/graphgen.hpp"
#include "typmatch/permutation.hpp"
#include "typmatch/rng.hpp"
#include "typmatch/typicality.hpp"

using namespace typmatch;

namespace {

Permutation one_based(std::vector<std::int64_t> image) { return Permutation::from_one_based(image); }

std::vector<Permutation> all_permutations(std::size_t n) {
  std::vector<std::uint32_t> image(n);
  std::iota(image.begin(), image.end(), 0U);
  std::vector<Permutation> out;
  do {
    out.emplace_back(image);
  } while (std::next_permutation(image.begin(), image.end()));
  return out;
}

}  // namespace

TEST_CASE("construction rejects non-bijections") {
  CHECK_THROWS_AS(Permutation({0, 0, 1}), ValidationError);
  CHECK_THROWS_AS(Permutation({0, 3}), ValidationError);
  CHECK(one_based({2, 1}).to_one_based() == std::vector<std::int64_t>{2, 1});
}

TEST_CASE("cycle decomposition examples") {
  const auto id = cycle_decomposition(Permutation::identity(4));
  CHECK(id.fixed_points == 4);
  CHECK(id.cycles.empty());

  const auto three = cycle_decomposition(one_based({2, 3, 1, 4}));
  CHECK(three.fixed_points == 1);
  REQUIRE(three.cycles.size() == 1);
  CHECK(three.cycles[0] == std::vector<std::uint32_t>{0, 1, 2});

  const auto two = cycle_decomposition(one_based({2, 1, 4, 3}));
  CHECK(two.fixed_points == 0);
  REQUIRE(two.cycles.size() == 2);
  CHECK(two.cycles[0] == std::vector<std::uint32_t>{0, 1});
  CHECK(two.cycles[1] == std::vector<std::uint32_t>{2, 3});
  CHECK(two.lengths == std::vector<std::size_t>{2, 2});
}

TEST_CASE("cycle decomposition is canonical") {
  // (1 3 2)(4 5) given starting elsewhere
  const auto cs = cycle_decomposition(one_based({3, 1, 2, 5, 4}));
  REQUIRE(cs.cycles.size() == 2);
  CHECK(cs.cycles[0] == std::vector<std::uint32_t>{0, 2, 1});
  CHECK(cs.cycles[1] == std::vector<std::uint32_t>{3, 4});
  CHECK(cs.lengths == std::vector<std::size_t>{2, 3});
}

TEST_CASE("standard permutation examples") {
  const std::vector<std::size_t> three{3};
  const auto p = standard_permutation(1, three, 4);
  CHECK(p.to_one_based() == std::vector<std::int64_t>{2, 3, 1, 4});

  CHECK(standard_permutation(5, std::vector<std::size_t>{}, 5) == Permutation::identity(5));

  const std::vector<std::size_t> pairs{2, 2};
  CHECK(standard_permutation(0, pairs, 4).to_one_based() == std::vector<std::int64_t>{2, 1, 4, 3});

  const std::vector<std::size_t> bad_sum{2};
  CHECK_THROWS_AS(standard_permutation(1, bad_sum, 4), ParameterMismatchError);
  const std::vector<std::size_t> short_cycle{1, 3};
  CHECK_THROWS_AS(standard_permutation(0, short_cycle, 4), ParameterMismatchError);
}

TEST_CASE("standard permutation round trip, exhaustive to n = 7") {
  for (std::size_t n = 1; n <= 7; ++n) {
    for (const auto& p : all_permutations(n)) {
      const auto cs = cycle_decomposition(p);
      const auto s = standard_permutation(cs.fixed_points, cs.lengths, n);
      const auto back = cycle_decomposition(s);
      CHECK(back.fixed_points == cs.fixed_points);
      CHECK(back.lengths == cs.lengths);
      std::size_t covered = cs.fixed_points;
      for (const auto& c : cs.cycles) covered += c.size();
      CHECK(covered == n);
    }
  }
}

TEST_CASE("apply") {
  const std::vector<char> ab{'a', 'b'};
  CHECK(typmatch::apply(one_based({2, 1}), ab) == std::vector<char>{'b', 'a'});
  const std::vector<char> abc{'a', 'b', 'c'};
  CHECK(typmatch::apply(Permutation::identity(3), abc) == abc);
  CHECK(typmatch::apply(one_based({2, 3, 1}), abc) == std::vector<char>{'b', 'c', 'a'});
  CHECK_THROWS_AS(typmatch::apply(Permutation::identity(2), abc), LengthMismatchError);
}

TEST_CASE("apply inverse round trip for n <= 7") {
  SplitMix64 rng(11);
  for (std::size_t n = 1; n <= 7; ++n) {
    for (const auto& p : all_permutations(n)) {
      std::vector<int> s(n);
      for (auto& v : s) v = static_cast<int>(rng.below(100));
      CHECK(typmatch::apply(p, typmatch::apply(p.inverse(), s)) == s);
    }
  }
}

TEST_CASE("joint type is invariant under joint permutation") {
  SplitMix64 rng(5);
  for (const auto& p : all_permutations(6)) {
    std::vector<EdgeValue> x(6);
    std::vector<EdgeValue> y(6);
    for (auto& v : x) v = static_cast<EdgeValue>(rng.below(3));
    for (auto& v : y) v = static_cast<EdgeValue>(rng.below(3));
    CHECK(joint_type(typmatch::apply(p, x), typmatch::apply(p, y), 3, 3) == joint_type(x, y, 3, 3));
  }
}

TEST_CASE("permutation from labelings") {
  const auto sigma = Labeling::from_one_based(std::vector<std::int64_t>{3, 1, 2});
  CHECK(from_labelings(sigma, sigma) == Permutation::identity(3));

  const auto s = Labeling::from_one_based(std::vector<std::int64_t>{1, 2});
  const auto t = Labeling::from_one_based(std::vector<std::int64_t>{2, 1});
  CHECK(from_labelings(s, t).to_one_based() == std::vector<std::int64_t>{2, 1});

  CHECK_THROWS_AS(from_labelings(s, sigma), DomainMismatchError);
}

TEST_CASE("permutations from labelings compose, all labelings of 4 vertices") {
  std::vector<Labeling> all;
  for (const auto& p : all_permutations(4)) {
    all.emplace_back(std::vector<std::uint32_t>(p.image().begin(), p.image().end()));
  }
  std::size_t checked = 0;
  for (const auto& a : all) {
    for (const auto& b : all) {
      for (const auto& mid : all) {
        // the first map is applied first
        CHECK(compose(from_labelings(mid, b), from_labelings(a, mid)) == from_labelings(a, b));
        ++checked;
      }
    }
  }
  CHECK(checked == 24 * 24 * 24);
}

TEST_CASE("fixed point fraction") {
  CHECK(fixed_point_fraction(Permutation::identity(5)) == 1.0);
  CHECK(fixed_point_fraction(one_based({2, 3, 1})) == 0.0);
  CHECK(fixed_point_fraction(one_based({2, 3, 1, 4})) == 0.25);
}

TEST_CASE("random permutation is seeded and bijective") {
  const auto a = random_permutation(20, 99);
  CHECK(a == random_permutation(20, 99));
  CHECK(a != random_permutation(20, 100));
  CHECK(is_bijection(a.image()));
}
