#include "typmatch/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "typmatch/error.hpp"
#include "typmatch/typicality.hpp"

namespace typmatch {

namespace {

constexpr double kGridSlack = 1e-12;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

/// Admissible counts per cell under the typicality predicate.
std::vector<std::vector<std::size_t>> admissible_counts(std::size_t n, double eps,
                                                        const JointPmf& p) {
  std::vector<std::vector<std::size_t>> out(p.values().size());
  for (std::size_t cell = 0; cell < out.size(); ++cell) {
    for (std::size_t count = 0; count <= n; ++count) {
      if (cell_within(count, n, p.values()[cell], eps)) out[cell].push_back(count);
    }
  }
  return out;
}

struct TypeSearch {
  const std::vector<std::vector<std::size_t>>& admissible;
  std::span<const double> reference;
  std::size_t n;
  std::vector<double> q;
  double best = kInfiniteDivergence;

  void visit(std::size_t cell, std::size_t left) {
    const std::size_t last = admissible.size() - 1;
    if (cell == last) {
      if (!std::binary_search(admissible[last].begin(), admissible[last].end(), left)) return;
      q[last] = static_cast<double>(left) / static_cast<double>(n);
      best = std::min(best, kl_divergence(q, reference));
      return;
    }
    for (const auto count : admissible[cell]) {
      if (count > left) break;
      q[cell] = static_cast<double>(count) / static_cast<double>(n);
      visit(cell + 1, left - count);
    }
  }
};

}  // namespace

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw LengthMismatchError("divergence between distributions of different support size");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] <= 0.0) continue;
    if (q[k] <= 0.0) return kInfiniteDivergence;
    total += p[k] * std::log2(p[k] / q[k]);
  }
  return std::max(total, 0.0);
}

double kl_divergence(const JointPmf& p, const JointPmf& q) {
  if (p.rows() != q.rows() || p.cols() != q.cols()) {
    throw LengthMismatchError("divergence between pmfs of different shape");
  }
  return kl_divergence(p.values(), q.values());
}

double mutual_information(const JointPmf& joint) {
  return kl_divergence(joint, joint.independent());
}

ExponentReport theorem1_bound(std::size_t n, double alpha, double eps, const JointPmf& p) {
  ExponentReport report;
  report.alpha = alpha;
  const double cells = static_cast<double>(p.rows() * p.cols());
  report.eps_penalty = cells * eps;
  report.type_count_log = 4.0 * cells * std::log2(static_cast<double>(n) + 1.0);

  const JointPmf mixture = p.mixture(alpha);
  const auto admissible = admissible_counts(n, eps, p);
  TypeSearch search{admissible, mixture.values(), n, std::vector<double>(admissible.size(), 0.0)};
  if (n > 0) search.visit(0, n);
  report.divergence_term = search.best;

  if (std::isinf(report.divergence_term)) {
    report.bound_log2 = -std::numeric_limits<double>::infinity();
  } else {
    report.bound_log2 = report.type_count_log - static_cast<double>(n) / 4.0 *
                                                    (report.divergence_term - report.eps_penalty);
  }
  return report;
}

CommunityLayout scale_layout(const CommunityLayout& layout, std::size_t n) {
  if (layout.n() == n) return layout;
  const std::size_t c = layout.c();
  if (n < c) throw ValidationError("n is smaller than the number of communities");
  const double total = static_cast<double>(layout.n());
  std::vector<std::size_t> sizes(c);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < c; ++i) {
    const double exact = static_cast<double>(n) * static_cast<double>(layout.size(i)) / total;
    sizes[i] = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(exact)));
    remainders.emplace_back(-(exact - std::floor(exact)), i);
    assigned += sizes[i];
  }
  std::sort(remainders.begin(), remainders.end());
  for (std::size_t k = 0; assigned < n; k = (k + 1) % c) {
    ++sizes[remainders[k].second];
    ++assigned;
  }
  while (assigned > n) {
    const auto largest = std::max_element(sizes.begin(), sizes.end());
    --*largest;
    --assigned;
  }
  return CommunityLayout::from_sizes(std::move(sizes));
}

double allocation_objective(const PairedEdgeModel& model, std::span<const std::size_t> sizes,
                            std::span<const double> allocation) {
  const double n = static_cast<double>(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}));
  double total = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double ni = static_cast<double>(sizes[i]);
    for (std::size_t j = i + 1; j < sizes.size(); ++j) {
      const double nj = static_cast<double>(sizes[j]);
      const double beta = clamp01(n * n * allocation[i] * allocation[j] / (ni * nj));
      const auto block = model.block(i, j);
      total += ni * nj / (n * n) * kl_divergence(block, block.mixture(beta));
    }
    // an intra block of one vertex is empty and contributes nothing
    if (sizes[i] < 2) continue;
    const double fixed = n * allocation[i];
    const double beta = clamp01(fixed * (fixed - 1.0) / (ni * (ni - 1.0)));
    const auto block = model.block(i, i);
    total += ni * (ni - 1.0) / (2.0 * n * n) * kl_divergence(block, block.mixture(beta));
  }
  return total;
}

namespace {

/// Best allocation on the grid for one alpha; throws when none is feasible.
std::pair<double, std::vector<double>> best_allocation(const PairedEdgeModel& model,
                                                       std::span<const std::size_t> sizes,
                                                       double alpha, double step) {
  const std::size_t c = sizes.size();
  const double n = static_cast<double>(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}));
  std::vector<double> allocation(c, 0.0);
  double best = -1.0;
  std::vector<double> best_alloc;

  auto visit = [&](auto&& self, std::size_t k, double left) -> void {
    const double cap = static_cast<double>(sizes[k]) / n;
    if (k + 1 == c) {
      if (left < -kGridSlack || left > cap + kGridSlack) return;
      allocation[k] = std::clamp(left, 0.0, cap);
      const double value = allocation_objective(model, sizes, allocation);
      if (value > best) {
        best = value;
        best_alloc = allocation;
      }
      return;
    }
    for (std::size_t m = 0;; ++m) {
      const double a = static_cast<double>(m) * step;
      if (a > cap + kGridSlack || a > left + kGridSlack) break;
      allocation[k] = std::min(a, cap);
      self(self, k + 1, left - a);
    }
  };
  visit(visit, 0, alpha);
  if (best_alloc.empty()) {
    throw InfeasibleAllocationError("no grid allocation sums to alpha = " + std::to_string(alpha));
  }
  return {best, best_alloc};
}

std::vector<double> alpha_grid(double delta, double step) {
  if (!(step > 0.0)) throw ValidationError("grid step must be positive");
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  std::vector<double> grid;
  for (std::size_t k = 0;; ++k) {
    const double alpha = static_cast<double>(k) * step;
    if (alpha > 1.0 - delta + kGridSlack) break;
    grid.push_back(alpha);
  }
  return grid;
}

RegionVerdict reduce(std::vector<RegionPoint> points) {
  RegionVerdict verdict;
  verdict.margin = std::numeric_limits<double>::infinity();
  for (const auto& point : points) {
    if (point.margin < verdict.margin) {
      verdict.margin = point.margin;
      verdict.worst_alpha = point.alpha;
      verdict.worst_allocation = point.allocation;
    }
  }
  verdict.satisfied = verdict.margin >= 0.0;
  verdict.points = std::move(points);
  return verdict;
}

}  // namespace

RegionVerdict achievability_check(const PairedEdgeModel& model, const CommunityLayout& layout,
                                  std::size_t n, double delta, double grid_step, MatchMode) {
  if (n < 2) throw ValidationError("achievability needs n >= 2");
  const auto scaled = scale_layout(layout, n);
  const auto report = validate_model(model, scaled);
  if (!report.ok()) throw ValidationError("invalid model:\n" + report.describe());

  const auto grid = alpha_grid(delta, grid_step);
  const double log_term = std::log2(static_cast<double>(n)) / static_cast<double>(n);
  std::vector<RegionPoint> points(grid.size());
  bool infeasible = false;
  double infeasible_alpha = 0.0;
  const auto count = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t g = 0; g < count; ++g) {
    const double alpha = grid[static_cast<std::size_t>(g)];
    try {
      auto [rhs, allocation] = best_allocation(model, scaled.sizes(), alpha, grid_step);
      const double lhs = 4.0 * (1.0 - alpha) * log_term;
      points[static_cast<std::size_t>(g)] = {alpha, lhs, rhs, rhs - lhs, std::move(allocation)};
    } catch (const InfeasibleAllocationError&) {
#pragma omp critical
      {
        if (!infeasible || alpha < infeasible_alpha) infeasible_alpha = alpha;
        infeasible = true;
      }
    }
  }
  if (infeasible) {
    throw InfeasibleAllocationError("allocation constraints are empty at alpha = " +
                                    std::to_string(infeasible_alpha));
  }
  return reduce(std::move(points));
}

RegionVerdict er_achievability(const JointPmf& joint, std::size_t n, double delta) {
  if (n < 2) throw ValidationError("achievability needs n >= 2");
  const auto grid = alpha_grid(delta, 1.0 / static_cast<double>(n));
  const double log_term = std::log2(static_cast<double>(n)) / static_cast<double>(n);
  std::vector<RegionPoint> points(grid.size());
  const auto count = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t g = 0; g < count; ++g) {
    const double alpha = grid[static_cast<std::size_t>(g)];
    const double lhs = 8.0 * (1.0 - alpha) * log_term;
    const double rhs = kl_divergence(joint, joint.mixture(alpha));
    points[static_cast<std::size_t>(g)] = {alpha, lhs, rhs, rhs - lhs, {alpha}};
  }
  return reduce(std::move(points));
}

ConverseVerdict converse_check(const PairedEdgeModel& model, const CommunityLayout& layout,
                               std::size_t n) {
  const auto scaled = scale_layout(layout, n);
  const auto report = validate_model(model, scaled);
  if (!report.ok()) throw ValidationError("invalid model:\n" + report.describe());
  ConverseVerdict verdict;
  const double nd = static_cast<double>(n);
  verdict.lhs = n < 2 ? 0.0 : nd * std::log2(nd);
  const auto& sizes = scaled.sizes();
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double ni = static_cast<double>(sizes[i]);
    for (std::size_t j = i + 1; j < sizes.size(); ++j) {
      verdict.rhs += ni * static_cast<double>(sizes[j]) * mutual_information(model.block(i, j));
    }
    verdict.rhs += ni * (ni - 1.0) / 2.0 * mutual_information(model.block(i, i));
  }
  verdict.impossible = verdict.lhs > verdict.rhs;
  return verdict;
}

ConverseVerdict er_converse(const JointPmf& joint, std::size_t n) {
  ConverseVerdict verdict;
  const double nd = static_cast<double>(n);
  verdict.lhs = n < 2 ? 0.0 : 2.0 * std::log2(nd) / nd;
  verdict.rhs = mutual_information(joint);
  verdict.impossible = verdict.lhs > verdict.rhs;
  return verdict;
}

}  // namespace typmatch
