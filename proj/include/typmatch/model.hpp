#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace typmatch {

using EdgeValue = std::uint8_t;

inline constexpr double kNormalizationTolerance = 1e-12;

/// Edge values {0, ..., size-1}; at least two values.
struct EdgeAlphabet {
  std::size_t size = 2;
  bool operator==(const EdgeAlphabet&) const = default;
};

/// Partition of vertices {0, ..., n-1} into c non-empty communities.
class CommunityLayout {
 public:
  CommunityLayout() = default;

  /// Contiguous blocks: the first sizes[0] vertices form community 0, etc.
  static CommunityLayout from_sizes(std::vector<std::size_t> sizes);
  /// Arbitrary membership map; communities are 0..community_count-1.
  static CommunityLayout from_membership(std::vector<std::size_t> membership,
                                         std::size_t community_count);

  std::size_t n() const noexcept { return membership_.size(); }
  std::size_t c() const noexcept { return sizes_.size(); }
  std::size_t size(std::size_t community) const { return sizes_.at(community); }
  const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
  const std::vector<std::size_t>& membership() const noexcept {
    return membership_;
  }
  std::size_t community_of(std::size_t vertex) const {
    return membership_.at(vertex);
  }
  /// Sorted vertices of one community.
  std::vector<std::size_t> members(std::size_t community) const;

  bool operator==(const CommunityLayout&) const = default;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> membership_;
};

/// Probability mass function on a rows x cols grid, row-major.
class JointPmf {
 public:
  JointPmf() = default;
  JointPmf(std::size_t rows, std::size_t cols, std::vector<double> p);

  static JointPmf uniform(std::size_t rows, std::size_t cols);
  /// X' = X with the given marginal.
  static JointPmf copy(std::span<const double> marginal);
  /// Product of two marginals.
  static JointPmf product(std::span<const double> first,
                          std::span<const double> second);
  /// Doubly symmetric binary source with the given crossover.
  static JointPmf dsbs(double crossover);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t a, std::size_t b) const {
    return p_[a * cols_ + b];
  }
  std::span<const double> values() const noexcept { return p_; }

  std::vector<double> first_marginal() const;
  std::vector<double> second_marginal() const;
  /// Product of the two marginals of this pmf.
  JointPmf independent() const;
  /// (1 - weight) * independent() + weight * (*this).
  JointPmf mixture(double weight) const;

  bool operator==(const JointPmf&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> p_;
};

/// Joint law of paired edge values, one l x l table per ordered community pair.
class PairedEdgeModel {
 public:
  PairedEdgeModel() = default;
  /// `joint` is indexed [i][j][x][x'] flattened row-major.
  PairedEdgeModel(EdgeAlphabet alphabet, std::size_t communities,
                  std::vector<double> joint);

  /// Same table for every community pair.
  static PairedEdgeModel homogeneous(std::size_t communities,
                                     const JointPmf& block);
  /// Table `intra` on diagonal pairs, `inter` elsewhere.
  static PairedEdgeModel assortative(std::size_t communities,
                                     const JointPmf& intra,
                                     const JointPmf& inter);

  std::size_t l() const noexcept { return alphabet_.size; }
  std::size_t c() const noexcept { return communities_; }
  EdgeAlphabet alphabet() const noexcept { return alphabet_; }

  double operator()(std::size_t i, std::size_t j, std::size_t x,
                    std::size_t y) const {
    return joint_[((i * communities_ + j) * l() + x) * l() + y];
  }
  std::span<const double> values() const noexcept { return joint_; }
  JointPmf block(std::size_t i, std::size_t j) const;

  bool operator==(const PairedEdgeModel&) const = default;

 private:
  EdgeAlphabet alphabet_{};
  std::size_t communities_ = 0;
  std::vector<double> joint_;
};

/// Per-graph edge law, indexed [i][j][x].
class EdgeMarginal {
 public:
  EdgeMarginal(std::size_t l, std::size_t communities, std::vector<double> p)
      : l_(l), communities_(communities), p_(std::move(p)) {}

  std::size_t l() const noexcept { return l_; }
  std::size_t c() const noexcept { return communities_; }
  double operator()(std::size_t i, std::size_t j, std::size_t x) const {
    return p_[(i * communities_ + j) * l_ + x];
  }
  std::span<const double> values() const noexcept { return p_; }

 private:
  std::size_t l_;
  std::size_t communities_;
  std::vector<double> p_;
};

enum class ViolationKind {
  alphabet,
  community_count,
  empty_community,
  tensor_shape,
  negative_entry,
  entry_above_one,
  normalization,
  undirectedness,
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t x = 0;
  std::size_t y = 0;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(ViolationKind kind) const;
  /// One line per violation, indices 1-based.
  std::string describe() const;
};

ValidationReport validate_model(const PairedEdgeModel& model,
                                const CommunityLayout& layout);

enum class Side { first, second };

EdgeMarginal marginal(const PairedEdgeModel& model, Side side);

/// Independent coupling with the same per-graph marginals.
PairedEdgeModel product_coupling(const PairedEdgeModel& model);

}  // namespace typmatch
