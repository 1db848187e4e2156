#include "typmatch/permutation.hpp"

#include <algorithm>
#include <numeric>

namespace typmatch {

Permutation::Permutation(std::vector<std::uint32_t> image) : image_(std::move(image)) {
  if (!is_bijection(image_)) throw ValidationError("permutation is not a bijection");
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::uint32_t> image(n);
  std::iota(image.begin(), image.end(), 0U);
  return Permutation(std::move(image));
}

Permutation Permutation::from_one_based(std::span<const std::int64_t> image) {
  std::vector<std::uint32_t> zero_based(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (image[i] < 1 || static_cast<std::size_t>(image[i]) > image.size()) {
      throw ValidationError("permutation entry out of range");
    }
    zero_based[i] = static_cast<std::uint32_t>(image[i] - 1);
  }
  return Permutation(std::move(zero_based));
}

std::vector<std::int64_t> Permutation::to_one_based() const {
  std::vector<std::int64_t> out(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) out[i] = image_[i] + 1;
  return out;
}

Permutation Permutation::inverse() const {
  std::vector<std::uint32_t> inv(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) {
    inv[image_[i]] = static_cast<std::uint32_t>(i);
  }
  return Permutation(std::move(inv));
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
  if (outer.size() != inner.size()) {
    throw DomainMismatchError("cannot compose permutations of different sizes");
  }
  std::vector<std::uint32_t> image(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) image[i] = outer(inner(i));
  return Permutation(std::move(image));
}

std::size_t CycleStructure::n() const noexcept {
  return fixed_points + std::accumulate(lengths.begin(), lengths.end(), std::size_t{0});
}

CycleStructure cycle_decomposition(const Permutation& p) {
  CycleStructure out;
  std::vector<bool> visited(p.size(), false);
  for (std::uint32_t start = 0; start < p.size(); ++start) {
    if (visited[start]) continue;
    if (p(start) == start) {
      visited[start] = true;
      ++out.fixed_points;
      continue;
    }
    std::vector<std::uint32_t> cycle;
    for (std::uint32_t i = start; !visited[i]; i = p(i)) {
      visited[i] = true;
      cycle.push_back(i);
    }
    out.lengths.push_back(cycle.size());
    out.cycles.push_back(std::move(cycle));
  }
  std::sort(out.lengths.begin(), out.lengths.end());
  return out;
}

Permutation standard_permutation(std::size_t fixed_points,
                                 std::span<const std::size_t> lengths,
                                 std::size_t n) {
  std::size_t moved = 0;
  for (const auto len : lengths) {
    if (len < 2) throw ParameterMismatchError("cycle lengths must be at least 2");
    moved += len;
  }
  if (moved + fixed_points != n) {
    throw ParameterMismatchError("fixed points plus cycle lengths must equal n");
  }
  std::vector<std::uint32_t> image(n);
  std::iota(image.begin(), image.end(), 0U);
  std::size_t offset = 0;
  for (const auto len : lengths) {
    for (std::size_t k = 0; k + 1 < len; ++k) {
      image[offset + k] = static_cast<std::uint32_t>(offset + k + 1);
    }
    image[offset + len - 1] = static_cast<std::uint32_t>(offset);
    offset += len;
  }
  return Permutation(std::move(image));
}

Permutation from_labelings(const Labeling& sigma, const Labeling& sigma_prime) {
  if (sigma.size() != sigma_prime.size()) {
    throw DomainMismatchError("labelings are defined on different vertex sets");
  }
  const auto vertex_of = sigma.inverse();
  std::vector<std::uint32_t> image(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) image[i] = sigma_prime(vertex_of[i]);
  return Permutation(std::move(image));
}

double fixed_point_fraction(const Permutation& p) {
  if (p.size() == 0) return 1.0;
  std::size_t fixed = 0;
  for (std::size_t i = 0; i < p.size(); ++i) fixed += p(i) == i;
  return static_cast<double>(fixed) / static_cast<double>(p.size());
}

}  // namespace typmatch
