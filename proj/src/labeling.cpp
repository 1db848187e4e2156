#include "typmatch/labeling.hpp"

#include <numeric>
#include <string>

#include "typmatch/error.hpp"

namespace typmatch {

bool is_bijection(std::span<const std::uint32_t> map) {
  std::vector<bool> seen(map.size(), false);
  for (const auto v : map) {
    if (v >= map.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

Labeling::Labeling(std::vector<std::uint32_t> label_of)
    : label_of_(std::move(label_of)) {
  if (!is_bijection(label_of_)) throw ValidationError("labeling is not a bijection");
}

Labeling Labeling::identity(std::size_t n) {
  std::vector<std::uint32_t> map(n);
  std::iota(map.begin(), map.end(), 0U);
  return Labeling(std::move(map));
}

Labeling Labeling::from_one_based(std::span<const std::int64_t> labels) {
  std::vector<std::uint32_t> map(labels.size());
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (labels[v] < 1 || static_cast<std::size_t>(labels[v]) > labels.size()) {
      throw ValidationError("label " + std::to_string(labels[v]) +
                            " outside [1, " + std::to_string(labels.size()) + "]");
    }
    map[v] = static_cast<std::uint32_t>(labels[v] - 1);
  }
  return Labeling(std::move(map));
}

std::vector<std::uint32_t> Labeling::inverse() const {
  std::vector<std::uint32_t> inv(label_of_.size());
  for (std::size_t v = 0; v < label_of_.size(); ++v) {
    inv[label_of_[v]] = static_cast<std::uint32_t>(v);
  }
  return inv;
}

std::vector<std::int64_t> Labeling::to_one_based() const {
  std::vector<std::int64_t> out(label_of_.size());
  for (std::size_t v = 0; v < label_of_.size(); ++v) out[v] = label_of_[v] + 1;
  return out;
}

UpperTriangle::UpperTriangle(std::size_t n, std::vector<EdgeValue> row_major)
    : n_(n), values_(std::move(row_major)) {
  const std::size_t expected = n < 2 ? 0 : n * (n - 1) / 2;
  if (values_.size() != expected) {
    throw LengthMismatchError("upper triangle of " + std::to_string(n) +
                              " vertices needs " + std::to_string(expected) +
                              " values, got " + std::to_string(values_.size()));
  }
}

UpperTriangle UpperTriangle::relabeled(std::span<const std::uint32_t> map) const {
  if (map.size() != n_) throw DomainMismatchError("relabeling size mismatch");
  UpperTriangle out(n_);
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = a + 1; b < n_; ++b) out.set(map[a], map[b], (*this)(a, b));
  }
  return out;
}

}  // namespace typmatch
