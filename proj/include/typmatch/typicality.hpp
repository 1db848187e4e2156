#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "typmatch/labeling.hpp"
#include "typmatch/model.hpp"

namespace typmatch {

/// Occurrence counts of symbol pairs in two aligned sequences.
class JointTypeMatrix {
 public:
  JointTypeMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), counts_(rows * cols, 0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  /// Sequence length; equals the sum of all counts.
  std::size_t length() const noexcept { return length_; }
  std::uint64_t operator()(std::size_t a, std::size_t b) const {
    return counts_[a * cols_ + b];
  }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }

  void add(std::size_t a, std::size_t b) {
    ++counts_[a * cols_ + b];
    ++length_;
  }

  bool operator==(const JointTypeMatrix&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t length_ = 0;
  std::vector<std::uint64_t> counts_;
};

/// Throws LengthMismatchError on unequal lengths or symbols outside the grid.
JointTypeMatrix joint_type(std::span<const EdgeValue> x, std::span<const EdgeValue> y,
                           std::size_t rows, std::size_t cols);

/// |count / length - p| <= eps, the per-cell typicality predicate.
bool cell_within(std::uint64_t count, std::size_t length, double p, double eps);

/// Every cell of type/length within eps of p. Length-0 types are typical.
bool is_jointly_typical(const JointTypeMatrix& type, const JointPmf& p, double eps);

bool is_jointly_typical(std::span<const EdgeValue> x, std::span<const EdgeValue> y,
                        const JointPmf& p, double eps);

/// eps_n = kappa * log2(n) / n.
double default_epsilon(std::size_t n, double kappa = 2.0);

struct BlockId {
  std::size_t i = 0;
  std::size_t j = 0;
  bool operator==(const BlockId&) const = default;
};

struct SlotPair {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
};

/// Canonical slot order for every community pair i <= j, given the community
/// of each label. Blocks are listed (0,0), (0,1), ..., (0,c-1), (1,1), ...
/// Within an off-diagonal block slots run row-major over (sorted labels of i)
/// x (sorted labels of j); a diagonal block runs row-major over its strict
/// upper triangle.
class BlockSlots {
 public:
  BlockSlots(std::span<const std::size_t> label_community, std::size_t communities);

  std::size_t communities() const noexcept { return communities_; }
  std::size_t block_count() const noexcept { return ids_.size(); }
  BlockId id(std::size_t block) const { return ids_[block]; }
  std::span<const SlotPair> slots(std::size_t block) const { return slots_[block]; }
  std::size_t total_slots() const noexcept;
  /// Position of block (i, j), i <= j, in the block list.
  std::size_t block_index(std::size_t i, std::size_t j) const;

 private:
  std::size_t communities_;
  std::vector<BlockId> ids_;
  std::vector<std::vector<SlotPair>> slots_;
};

struct PairedBlock {
  BlockId id;
  std::vector<EdgeValue> first;
  std::vector<EdgeValue> second;
};

struct PairedBlockSequences {
  std::vector<PairedBlock> blocks;
};

/// Sequence one reads `first` at label slots (a, b); sequence two reads
/// `second` at (h(a), h(b)) where h is the inverse of `handle_to_label`.
PairedBlockSequences extract_paired_blocks(const BlockSlots& slots,
                                           const UpperTriangle& first,
                                           const UpperTriangle& second,
                                           const Labeling& handle_to_label);

/// All blocks jointly typical with respect to the model's table for their pair.
bool blocks_typical(const PairedBlockSequences& blocks, const PairedEdgeModel& model,
                    double eps);

}  // namespace typmatch
