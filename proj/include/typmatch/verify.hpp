#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "typmatch/oracle.hpp"
#include "typmatch/permutation.hpp"

namespace typmatch::oracle {

struct CycleParameters {
  std::size_t fixed_points = 0;
  /// Ordered cycle lengths, each at least 2.
  std::vector<std::size_t> lengths;
  std::string describe() const;
};

/// Every (fixed points, ordered lengths) tuple describing a permutation of n.
std::vector<CycleParameters> cycle_parameter_tuples(std::size_t n);

/// A permutation with the given cycle parameters, placed by a random
/// relabeling of the standard one.
Permutation arbitrary_permutation(const CycleParameters& params, std::size_t n,
                                  std::uint64_t seed);

struct Prop1Row {
  CycleParameters params;
  Rational identity;
  Rational jointly_permuted;
  Rational standard;
  Rational arbitrary;
  bool invariance_holds = false;
  bool standard_holds = false;
};

/// Per tuple: identity against (pi, pi) applied to both sequences, and an
/// arbitrary permutation against the standard one on the second sequence.
std::vector<Prop1Row> verify_prop1(const RationalPmf& p, std::size_t n, const Rational& eps,
                                   std::uint64_t seed);

struct Thm1Row {
  CycleParameters params;
  double alpha = 0.0;
  double probability = 0.0;
  double bound_log2 = 0.0;
  bool holds = false;
};

/// Exact probability against the exponent bound for every tuple whose fixed
/// point count is listed.
std::vector<Thm1Row> verify_thm1(const JointPmf& p, std::size_t n, double eps,
                                 const std::vector<std::size_t>& fixed_point_counts);

}  // namespace typmatch::oracle
