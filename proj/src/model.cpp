#include "typmatch/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "typmatch/error.hpp"

namespace typmatch {

CommunityLayout CommunityLayout::from_sizes(std::vector<std::size_t> sizes) {
  if (sizes.empty()) throw ValidationError("layout needs at least one community");
  CommunityLayout layout;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) {
      throw ValidationError("community " + std::to_string(i + 1) + " is empty");
    }
    layout.membership_.insert(layout.membership_.end(), sizes[i], i);
  }
  layout.sizes_ = std::move(sizes);
  return layout;
}

CommunityLayout CommunityLayout::from_membership(
    std::vector<std::size_t> membership, std::size_t community_count) {
  CommunityLayout layout;
  layout.sizes_.assign(community_count, 0);
  for (std::size_t v = 0; v < membership.size(); ++v) {
    if (membership[v] >= community_count) {
      throw ValidationError("vertex " + std::to_string(v + 1) +
                            " assigned to unknown community");
    }
    ++layout.sizes_[membership[v]];
  }
  for (std::size_t i = 0; i < community_count; ++i) {
    if (layout.sizes_[i] == 0) {
      throw ValidationError("community " + std::to_string(i + 1) + " is empty");
    }
  }
  layout.membership_ = std::move(membership);
  return layout;
}

std::vector<std::size_t> CommunityLayout::members(std::size_t community) const {
  std::vector<std::size_t> out;
  out.reserve(size(community));
  for (std::size_t v = 0; v < membership_.size(); ++v) {
    if (membership_[v] == community) out.push_back(v);
  }
  return out;
}

JointPmf::JointPmf(std::size_t rows, std::size_t cols, std::vector<double> p)
    : rows_(rows), cols_(cols), p_(std::move(p)) {
  if (p_.size() != rows_ * cols_) {
    throw LengthMismatchError("pmf has " + std::to_string(p_.size()) +
                              " entries, expected " +
                              std::to_string(rows_ * cols_));
  }
}

JointPmf JointPmf::uniform(std::size_t rows, std::size_t cols) {
  return {rows, cols,
          std::vector<double>(rows * cols, 1.0 / static_cast<double>(rows * cols))};
}

JointPmf JointPmf::copy(std::span<const double> marginal) {
  const std::size_t l = marginal.size();
  std::vector<double> p(l * l, 0.0);
  for (std::size_t a = 0; a < l; ++a) p[a * l + a] = marginal[a];
  return {l, l, std::move(p)};
}

JointPmf JointPmf::product(std::span<const double> first,
                           std::span<const double> second) {
  std::vector<double> p(first.size() * second.size());
  for (std::size_t a = 0; a < first.size(); ++a) {
    for (std::size_t b = 0; b < second.size(); ++b) {
      p[a * second.size() + b] = first[a] * second[b];
    }
  }
  return {first.size(), second.size(), std::move(p)};
}

JointPmf JointPmf::dsbs(double crossover) {
  const double same = (1.0 - crossover) / 2.0;
  const double diff = crossover / 2.0;
  return {2, 2, {same, diff, diff, same}};
}

std::vector<double> JointPmf::first_marginal() const {
  std::vector<double> m(rows_, 0.0);
  for (std::size_t a = 0; a < rows_; ++a) {
    for (std::size_t b = 0; b < cols_; ++b) m[a] += (*this)(a, b);
  }
  return m;
}

std::vector<double> JointPmf::second_marginal() const {
  std::vector<double> m(cols_, 0.0);
  for (std::size_t a = 0; a < rows_; ++a) {
    for (std::size_t b = 0; b < cols_; ++b) m[b] += (*this)(a, b);
  }
  return m;
}

JointPmf JointPmf::independent() const {
  const auto first = first_marginal();
  const auto second = second_marginal();
  return product(first, second);
}

JointPmf JointPmf::mixture(double weight) const {
  const JointPmf indep = independent();
  std::vector<double> p(p_.size());
  for (std::size_t k = 0; k < p_.size(); ++k) {
    p[k] = (1.0 - weight) * indep.p_[k] + weight * p_[k];
  }
  return {rows_, cols_, std::move(p)};
}

PairedEdgeModel::PairedEdgeModel(EdgeAlphabet alphabet, std::size_t communities,
                                 std::vector<double> joint)
    : alphabet_(alphabet), communities_(communities), joint_(std::move(joint)) {}

PairedEdgeModel PairedEdgeModel::homogeneous(std::size_t communities,
                                             const JointPmf& block) {
  return assortative(communities, block, block);
}

PairedEdgeModel PairedEdgeModel::assortative(std::size_t communities,
                                             const JointPmf& intra,
                                             const JointPmf& inter) {
  if (intra.rows() != intra.cols() || inter.rows() != intra.rows() ||
      inter.cols() != intra.cols()) {
    throw ValidationError("block tables must share one square alphabet");
  }
  const std::size_t l = intra.rows();
  std::vector<double> joint;
  joint.reserve(communities * communities * l * l);
  for (std::size_t i = 0; i < communities; ++i) {
    for (std::size_t j = 0; j < communities; ++j) {
      const auto& src = (i == j) ? intra : inter;
      joint.insert(joint.end(), src.values().begin(), src.values().end());
    }
  }
  return {EdgeAlphabet{l}, communities, std::move(joint)};
}

JointPmf PairedEdgeModel::block(std::size_t i, std::size_t j) const {
  const std::size_t cells = l() * l();
  const auto first = joint_.begin() +
                     static_cast<std::ptrdiff_t>((i * communities_ + j) * cells);
  return {l(), l(), std::vector<double>(first, first + static_cast<std::ptrdiff_t>(cells))};
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::alphabet: return "alphabet";
    case ViolationKind::community_count: return "community-count";
    case ViolationKind::empty_community: return "empty-community";
    case ViolationKind::tensor_shape: return "tensor-shape";
    case ViolationKind::negative_entry: return "negative-entry";
    case ViolationKind::entry_above_one: return "entry-above-one";
    case ViolationKind::normalization: return "normalization";
    case ViolationKind::undirectedness: return "undirectedness";
  }
  return "unknown";
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::describe() const {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << to_string(v.kind) << " at (" << v.i + 1 << "," << v.j + 1;
    if (v.kind == ViolationKind::negative_entry ||
        v.kind == ViolationKind::entry_above_one ||
        v.kind == ViolationKind::undirectedness) {
      out << "," << v.x << "," << v.y;
    }
    out << ")";
    if (!v.detail.empty()) out << ": " << v.detail;
    out << '\n';
  }
  return out.str();
}

ValidationReport validate_model(const PairedEdgeModel& model,
                                const CommunityLayout& layout) {
  ValidationReport report;
  auto add = [&report](ViolationKind kind, std::size_t i, std::size_t j,
                       std::size_t x, std::size_t y, std::string detail) {
    report.violations.push_back({kind, i, j, x, y, std::move(detail)});
  };

  const std::size_t l = model.l();
  const std::size_t c = model.c();
  if (l < 2) add(ViolationKind::alphabet, 0, 0, 0, 0, "l must be at least 2");
  if (c == 0 || c != layout.c()) {
    add(ViolationKind::community_count, 0, 0, 0, 0,
        "model has " + std::to_string(c) + " communities, layout has " +
            std::to_string(layout.c()));
  }
  for (std::size_t i = 0; i < layout.c(); ++i) {
    if (layout.size(i) == 0) add(ViolationKind::empty_community, i, i, 0, 0, "");
  }
  if (model.values().size() != c * c * l * l) {
    add(ViolationKind::tensor_shape, 0, 0, 0, 0,
        "expected " + std::to_string(c * c * l * l) + " entries, got " +
            std::to_string(model.values().size()));
    return report;
  }

  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      double total = 0.0;
      for (std::size_t x = 0; x < l; ++x) {
        for (std::size_t y = 0; y < l; ++y) {
          const double p = model(i, j, x, y);
          if (!(p >= 0.0)) add(ViolationKind::negative_entry, i, j, x, y, "");
          if (p > 1.0) add(ViolationKind::entry_above_one, i, j, x, y, "");
          if (j > i && std::abs(p - model(j, i, x, y)) > kNormalizationTolerance) {
            add(ViolationKind::undirectedness, i, j, x, y,
                "differs from pair (" + std::to_string(j + 1) + "," +
                    std::to_string(i + 1) + ")");
          }
          total += p;
        }
      }
      if (!(std::abs(total - 1.0) <= kNormalizationTolerance)) {
        std::ostringstream sum;
        sum.precision(17);
        sum << "sum = " << total;
        add(ViolationKind::normalization, i, j, 0, 0, sum.str());
      }
    }
  }
  return report;
}

EdgeMarginal marginal(const PairedEdgeModel& model, Side side) {
  const std::size_t l = model.l();
  const std::size_t c = model.c();
  std::vector<double> p(c * c * l, 0.0);
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      for (std::size_t x = 0; x < l; ++x) {
        for (std::size_t y = 0; y < l; ++y) {
          const std::size_t kept = side == Side::first ? x : y;
          p[(i * c + j) * l + kept] += model(i, j, x, y);
        }
      }
    }
  }
  return {l, c, std::move(p)};
}

PairedEdgeModel product_coupling(const PairedEdgeModel& model) {
  const auto first = marginal(model, Side::first);
  const auto second = marginal(model, Side::second);
  const std::size_t l = model.l();
  const std::size_t c = model.c();
  std::vector<double> joint(c * c * l * l);
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      for (std::size_t x = 0; x < l; ++x) {
        for (std::size_t y = 0; y < l; ++y) {
          joint[((i * c + j) * l + x) * l + y] = first(i, j, x) * second(i, j, y);
        }
      }
    }
  }
  return {model.alphabet(), c, std::move(joint)};
}

}  // namespace typmatch
