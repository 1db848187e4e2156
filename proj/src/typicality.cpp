#include "typmatch/typicality.hpp"

#include <cmath>
#include <string>

#include "typmatch/error.hpp"

namespace typmatch {

JointTypeMatrix joint_type(std::span<const EdgeValue> x, std::span<const EdgeValue> y,
                           std::size_t rows, std::size_t cols) {
  if (x.size() != y.size()) {
    throw LengthMismatchError("sequences of length " + std::to_string(x.size()) +
                              " and " + std::to_string(y.size()));
  }
  JointTypeMatrix type(rows, cols);
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] >= rows || y[k] >= cols) {
      throw LengthMismatchError("symbol outside alphabet at position " +
                                std::to_string(k + 1));
    }
    type.add(x[k], y[k]);
  }
  return type;
}

bool cell_within(std::uint64_t count, std::size_t length, double p, double eps) {
  return std::abs(static_cast<double>(count) / static_cast<double>(length) - p) <= eps;
}

bool is_jointly_typical(const JointTypeMatrix& type, const JointPmf& p, double eps) {
  if (type.rows() != p.rows() || type.cols() != p.cols()) {
    throw LengthMismatchError("joint type and pmf have different shapes");
  }
  if (type.length() == 0) return true;
  for (std::size_t a = 0; a < type.rows(); ++a) {
    for (std::size_t b = 0; b < type.cols(); ++b) {
      if (!cell_within(type(a, b), type.length(), p(a, b), eps)) return false;
    }
  }
  return true;
}

bool is_jointly_typical(std::span<const EdgeValue> x, std::span<const EdgeValue> y,
                        const JointPmf& p, double eps) {
  return is_jointly_typical(joint_type(x, y, p.rows(), p.cols()), p, eps);
}

double default_epsilon(std::size_t n, double kappa) {
  if (n < 2) return kappa;
  return kappa * std::log2(static_cast<double>(n)) / static_cast<double>(n);
}

BlockSlots::BlockSlots(std::span<const std::size_t> label_community,
                       std::size_t communities)
    : communities_(communities) {
  std::vector<std::vector<std::uint32_t>> labels(communities);
  for (std::size_t a = 0; a < label_community.size(); ++a) {
    if (label_community[a] >= communities) {
      throw ValidationError("label assigned to unknown community");
    }
    labels[label_community[a]].push_back(static_cast<std::uint32_t>(a));
  }
  for (std::size_t i = 0; i < communities; ++i) {
    for (std::size_t j = i; j < communities; ++j) {
      std::vector<SlotPair> block;
      if (i == j) {
        const auto& ls = labels[i];
        for (std::size_t r = 0; r < ls.size(); ++r) {
          for (std::size_t s = r + 1; s < ls.size(); ++s) block.push_back({ls[r], ls[s]});
        }
      } else {
        block.reserve(labels[i].size() * labels[j].size());
        for (const auto a : labels[i]) {
          for (const auto b : labels[j]) block.push_back({a, b});
        }
      }
      ids_.push_back({i, j});
      slots_.push_back(std::move(block));
    }
  }
}

std::size_t BlockSlots::total_slots() const noexcept {
  std::size_t total = 0;
  for (const auto& s : slots_) total += s.size();
  return total;
}

std::size_t BlockSlots::block_index(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  // blocks before row i: c + (c-1) + ... + (c-i+1)
  return i * communities_ - i * (i - 1) / 2 + (j - i);
}

PairedBlockSequences extract_paired_blocks(const BlockSlots& slots,
                                           const UpperTriangle& first,
                                           const UpperTriangle& second,
                                           const Labeling& handle_to_label) {
  if (first.n() != second.n() || second.n() != handle_to_label.size()) {
    throw DomainMismatchError("graphs and labeling must share one vertex count");
  }
  const auto handle_of = handle_to_label.inverse();
  PairedBlockSequences out;
  out.blocks.reserve(slots.block_count());
  for (std::size_t k = 0; k < slots.block_count(); ++k) {
    PairedBlock block{slots.id(k), {}, {}};
    const auto s = slots.slots(k);
    block.first.reserve(s.size());
    block.second.reserve(s.size());
    for (const auto& [a, b] : s) {
      block.first.push_back(first(a, b));
      block.second.push_back(second(handle_of[a], handle_of[b]));
    }
    out.blocks.push_back(std::move(block));
  }
  return out;
}

bool blocks_typical(const PairedBlockSequences& blocks, const PairedEdgeModel& model,
                    double eps) {
  for (const auto& block : blocks.blocks) {
    if (!is_jointly_typical(block.first, block.second,
                            model.block(block.id.i, block.id.j), eps)) {
      return false;
    }
  }
  return true;
}

}  // namespace typmatch
