#include "typmatch/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "typmatch/bounds.hpp"
#include "typmatch/graphgen.hpp"
#include "typmatch/rng.hpp"

namespace typmatch::oracle {

namespace {

void compositions(std::size_t left, std::vector<std::size_t>& prefix,
                  std::vector<std::vector<std::size_t>>& out) {
  if (left == 0) {
    out.push_back(prefix);
    return;
  }
  for (std::size_t part = 2; part <= left; ++part) {
    prefix.push_back(part);
    compositions(left - part, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::string CycleParameters::describe() const {
  std::ostringstream out;
  out << "m=" << fixed_points << " lengths=(";
  for (std::size_t k = 0; k < lengths.size(); ++k) out << (k ? "," : "") << lengths[k];
  out << ')';
  return out.str();
}

std::vector<CycleParameters> cycle_parameter_tuples(std::size_t n) {
  std::vector<CycleParameters> out;
  for (std::size_t m = n + 1; m-- > 0;) {
    std::vector<std::vector<std::size_t>> parts;
    std::vector<std::size_t> prefix;
    compositions(n - m, prefix, parts);
    for (auto& lengths : parts) out.push_back({m, std::move(lengths)});
  }
  return out;
}

Permutation arbitrary_permutation(const CycleParameters& params, std::size_t n,
                                  std::uint64_t seed) {
  const auto standard = standard_permutation(params.fixed_points, params.lengths, n);
  const auto tau = random_permutation(n, seed);
  return compose(tau, compose(standard, tau.inverse()));
}

std::vector<Prop1Row> verify_prop1(const RationalPmf& p, std::size_t n, const Rational& eps,
                                   std::uint64_t seed) {
  const auto identity = Permutation::identity(n);
  const auto base = exact_typicality_probability(p, n, identity, identity, eps).value;
  std::vector<Prop1Row> rows;
  std::uint64_t stream = 0;
  for (const auto& params : cycle_parameter_tuples(n)) {
    Prop1Row row;
    row.params = params;
    const auto standard = standard_permutation(params.fixed_points, params.lengths, n);
    const auto arbitrary = arbitrary_permutation(params, n, derive_seed(seed, stream++));
    row.identity = base;
    row.jointly_permuted = exact_typicality_probability(p, n, arbitrary, arbitrary, eps).value;
    row.standard = exact_typicality_probability(p, n, standard, eps).value;
    row.arbitrary = exact_typicality_probability(p, n, arbitrary, eps).value;
    row.invariance_holds = row.identity == row.jointly_permuted;
    row.standard_holds = row.standard == row.arbitrary;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Thm1Row> verify_thm1(const JointPmf& p, std::size_t n, double eps,
                                 const std::vector<std::size_t>& fixed_point_counts) {
  const auto exact_p = RationalPmf::from(p);
  const auto exact_eps = exact(eps);
  std::vector<Thm1Row> rows;
  for (const auto& params : cycle_parameter_tuples(n)) {
    if (std::find(fixed_point_counts.begin(), fixed_point_counts.end(), params.fixed_points) ==
        fixed_point_counts.end()) {
      continue;
    }
    Thm1Row row;
    row.params = params;
    row.alpha = static_cast<double>(params.fixed_points) / static_cast<double>(n);
    const auto pi = standard_permutation(params.fixed_points, params.lengths, n);
    const auto probability = exact_typicality_probability(exact_p, n, pi, exact_eps);
    row.probability = probability.approx;
    row.bound_log2 = theorem1_bound(n, row.alpha, eps, p).bound_log2;
    row.holds = probability.value == 0 || std::log2(row.probability) <= row.bound_log2;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace typmatch::oracle
