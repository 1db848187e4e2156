#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "typmatch/error.hpp"
#include "typmatch/labeling.hpp"

namespace typmatch {

/// Bijection pi of {0, ..., n-1}; pi(i) is stored at position i.
class Permutation {
 public:
  Permutation() = default;
  /// Throws ValidationError unless `image` is a bijection of [0, n).
  explicit Permutation(std::vector<std::uint32_t> image);

  static Permutation identity(std::size_t n);
  static Permutation from_one_based(std::span<const std::int64_t> image);

  std::size_t size() const noexcept { return image_.size(); }
  std::uint32_t operator()(std::size_t i) const { return image_[i]; }
  std::span<const std::uint32_t> image() const noexcept { return image_; }
  std::vector<std::int64_t> to_one_based() const;

  Permutation inverse() const;

  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<std::uint32_t> image_;
};

/// (outer o inner)(i) = outer(inner(i)).
Permutation compose(const Permutation& outer, const Permutation& inner);

/// Fixed points plus non-trivial cycles. Each cycle starts at its smallest
/// element and cycles are sorted by that element; `lengths` is ascending.
struct CycleStructure {
  std::size_t fixed_points = 0;
  std::vector<std::vector<std::uint32_t>> cycles;
  std::vector<std::size_t> lengths;

  std::size_t n() const noexcept;
  bool operator==(const CycleStructure&) const = default;
};

CycleStructure cycle_decomposition(const Permutation& p);

/// Cycles (1..i_1)(i_1+1..i_1+i_2)... in 1-based terms, followed by
/// `fixed_points` trailing fixed points. Lengths are placed in the given order.
Permutation standard_permutation(std::size_t fixed_points,
                                 std::span<const std::size_t> lengths,
                                 std::size_t n);

/// out[i] = seq[pi(i)].
template <class T>
std::vector<T> apply(const Permutation& p, std::span<const T> seq) {
  if (seq.size() != p.size()) {
    throw LengthMismatchError("sequence length " + std::to_string(seq.size()) +
                              " does not match permutation size " +
                              std::to_string(p.size()));
  }
  std::vector<T> out(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) out[i] = seq[p(i)];
  return out;
}

template <class T>
std::vector<T> apply(const Permutation& p, const std::vector<T>& seq) {
  return apply(p, std::span<const T>(seq));
}

/// pi(i) = j iff sigma_prime^{-1}(j) = sigma^{-1}(i).
Permutation from_labelings(const Labeling& sigma, const Labeling& sigma_prime);

double fixed_point_fraction(const Permutation& p);

}  // namespace typmatch
