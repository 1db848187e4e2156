#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "typmatch/graphgen.hpp"
#include "typmatch/model.hpp"

namespace typmatch {

// All information quantities are in bits.

inline constexpr double kInfiniteDivergence = std::numeric_limits<double>::infinity();

/// sum p log2(p / q), 0 log(0/q) = 0; +infinity when p > 0 = q somewhere.
double kl_divergence(std::span<const double> p, std::span<const double> q);
double kl_divergence(const JointPmf& p, const JointPmf& q);

double mutual_information(const JointPmf& joint);

struct ExponentReport {
  double alpha = 0.0;
  /// Smallest D(q || (1-alpha) P_X P_Y + alpha P) over typical joint types q.
  double divergence_term = 0.0;
  /// |X| |Y| eps
  double eps_penalty = 0.0;
  /// 4 |X| |Y| log2(n + 1), the count of type tuples.
  double type_count_log = 0.0;
  /// log2 of the probability bound; -infinity when no type is typical.
  double bound_log2 = 0.0;
};

/// Upper bound on P((X^n, pi(Y^n)) typical) for any pi with alpha n fixed points.
ExponentReport theorem1_bound(std::size_t n, double alpha, double eps, const JointPmf& p);

struct RegionPoint {
  double alpha = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  std::vector<double> allocation;
};

struct RegionVerdict {
  bool satisfied = false;
  double worst_alpha = 0.0;
  std::vector<double> worst_allocation;
  /// min over the grid of rhs - lhs
  double margin = 0.0;
  std::vector<RegionPoint> points;
};

/// Community sizes rescaled to total n by largest remainder, each at least 1.
CommunityLayout scale_layout(const CommunityLayout& layout, std::size_t n);

/// Weighted divergence sum for one allocation of fixed points to communities.
double allocation_objective(const PairedEdgeModel& model, std::span<const std::size_t> sizes,
                            std::span<const double> allocation);

/// Grid evaluation of the achievability condition over alpha in [0, 1 - delta].
/// Side-information does not enter the condition; `mode` is accepted so both
/// scenarios share this one code path.
RegionVerdict achievability_check(const PairedEdgeModel& model, const CommunityLayout& layout,
                                  std::size_t n, double delta, double grid_step,
                                  MatchMode mode = MatchMode::csi);

/// Single-community form: 8 (1 - alpha) log2(n) / n <= D(P || mixture(alpha)),
/// alpha on the grid k / n.
RegionVerdict er_achievability(const JointPmf& joint, std::size_t n, double delta);

struct ConverseVerdict {
  double lhs = 0.0;
  double rhs = 0.0;
  bool impossible = false;
};

/// n log2 n against the block-weighted mutual information sum.
ConverseVerdict converse_check(const PairedEdgeModel& model, const CommunityLayout& layout,
                               std::size_t n);

/// 2 log2(n) / n against I(X; X').
ConverseVerdict er_converse(const JointPmf& joint, std::size_t n);

}  // namespace typmatch
