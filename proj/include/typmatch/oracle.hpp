#pragma once

// Exact brute-force ground truth for tiny instances. Nothing here calls into
// the typicality or matcher code paths it is used to check.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "typmatch/graphgen.hpp"
#include "typmatch/model.hpp"
#include "typmatch/permutation.hpp"

namespace typmatch::oracle {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr std::uint64_t kOutcomeGuard = 100'000'000;
inline constexpr std::uint64_t kLabelingGuard = 10'000'000;

/// The exact value of a double (every finite double is a dyadic rational).
Rational exact(double value);

class RationalPmf {
 public:
  RationalPmf(std::size_t rows, std::size_t cols, std::vector<Rational> p);
  static RationalPmf from(const JointPmf& pmf);
  static RationalPmf uniform(std::size_t rows, std::size_t cols);
  /// Doubly symmetric binary source with an exact crossover.
  static RationalPmf dsbs(const Rational& crossover);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const Rational& operator()(std::size_t a, std::size_t b) const { return p_[a * cols_ + b]; }
  std::span<const Rational> values() const noexcept { return p_; }
  JointPmf to_double() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Rational> p_;
};

struct ExactProbability {
  Rational value;
  double approx = 0.0;
};

/// P((X^n, pi(Y^n)) is eps-typical) for (X_k, Y_k) i.i.d. from p.
ExactProbability exact_typicality_probability(const RationalPmf& p, std::size_t n,
                                              const Permutation& pi, const Rational& eps);

/// P((pi_x(X^n), pi_y(Y^n)) is eps-typical).
ExactProbability exact_typicality_probability(const RationalPmf& p, std::size_t n,
                                              const Permutation& pi_x,
                                              const Permutation& pi_y, const Rational& eps);

namespace reference {
/// Outcome-by-outcome sum of exact products, no grouping or threading.
ExactProbability exact_typicality_probability(const RationalPmf& p, std::size_t n,
                                              const Permutation& pi_x,
                                              const Permutation& pi_y, const Rational& eps);
}  // namespace reference

/// !k by the recurrence !k = (k-1)(!(k-1) + !(k-2)); k <= 20.
std::uint64_t derangement_count(unsigned k);
/// k!; k <= 20.
std::uint64_t factorial(unsigned k);
std::uint64_t binomial(unsigned n, unsigned k);

/// Exhaustive, duplicate-free enumeration of labelings (vertex -> label) in
/// a fixed order. With `community_preserving`, vertex v may only take labels
/// of vertices in its own community.
class LabelingEnumerator {
 public:
  LabelingEnumerator(const CommunityLayout& layout, bool community_preserving,
                     std::uint64_t guard = kLabelingGuard);

  std::uint64_t total() const noexcept { return total_; }
  std::optional<Labeling> next();

 private:
  bool advance();

  std::vector<std::vector<std::uint32_t>> members_;
  std::vector<std::vector<std::uint32_t>> arrangement_;
  std::size_t n_;
  std::uint64_t total_;
  bool started_ = false;
  bool done_ = false;
};

LabelingEnumerator enumerate_labelings(const CommunityLayout& layout, bool community_preserving,
                                       std::uint64_t guard = kLabelingGuard);

/// Exact typicality of one candidate, blocks formed from `label_community`.
bool candidate_typical(const MatchingInstance& instance,
                       std::span<const std::size_t> label_community, const Labeling& candidate,
                       double eps);

/// Every candidate whose blocks are typical, sorted. With
/// `handle_community`, only candidates that send each handle to a label of
/// the same community are considered.
std::vector<Labeling> brute_force_ambiguity_set(
    const MatchingInstance& instance, std::span<const std::size_t> label_community,
    std::optional<std::span<const std::size_t>> handle_community, double eps);

/// Candidates typical under at least one assignment of labels to communities
/// with the instance's community sizes.
std::vector<Labeling> brute_force_wsi_set(const MatchingInstance& instance, double eps);

}  // namespace typmatch::oracle
