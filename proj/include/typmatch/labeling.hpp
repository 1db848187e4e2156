#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "typmatch/model.hpp"

namespace typmatch {

/// Bijection from vertex indices to labels, both 0-based internally.
/// Files and user-facing output use 1-based labels.
class Labeling {
 public:
  Labeling() = default;
  /// Throws ValidationError unless `label_of` is a bijection of [0, n).
  explicit Labeling(std::vector<std::uint32_t> label_of);

  static Labeling identity(std::size_t n);
  static Labeling from_one_based(std::span<const std::int64_t> labels);

  std::size_t size() const noexcept { return label_of_.size(); }
  std::uint32_t operator()(std::size_t vertex) const { return label_of_[vertex]; }
  std::span<const std::uint32_t> labels() const noexcept { return label_of_; }
  /// vertex_of[label]
  std::vector<std::uint32_t> inverse() const;
  std::vector<std::int64_t> to_one_based() const;

  auto operator<=>(const Labeling&) const = default;

 private:
  std::vector<std::uint32_t> label_of_;
};

/// Checks bijectivity without constructing.
bool is_bijection(std::span<const std::uint32_t> map);

/// One value per unordered pair {a, b}, a != b, of an n-element index set.
class UpperTriangle {
 public:
  UpperTriangle() = default;
  explicit UpperTriangle(std::size_t n, EdgeValue fill = 0)
      : n_(n), values_(n < 2 ? 0 : n * (n - 1) / 2, fill) {}
  UpperTriangle(std::size_t n, std::vector<EdgeValue> row_major);

  std::size_t n() const noexcept { return n_; }
  std::size_t slot_count() const noexcept { return values_.size(); }

  /// Row-major slot index of the pair; order of a and b is irrelevant.
  std::size_t index(std::size_t a, std::size_t b) const noexcept {
    if (a > b) std::swap(a, b);
    return a * (2 * n_ - a - 1) / 2 + (b - a - 1);
  }
  EdgeValue operator()(std::size_t a, std::size_t b) const noexcept {
    return values_[index(a, b)];
  }
  void set(std::size_t a, std::size_t b, EdgeValue v) noexcept {
    values_[index(a, b)] = v;
  }
  std::span<const EdgeValue> values() const noexcept { return values_; }

  /// Same graph seen through a relabeling: out(map[a], map[b]) = this(a, b).
  UpperTriangle relabeled(std::span<const std::uint32_t> map) const;

  bool operator==(const UpperTriangle&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<EdgeValue> values_;
};

}  // namespace typmatch
