#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "typmatch/graphgen.hpp"
#include "typmatch/labeling.hpp"

namespace typmatch {

inline constexpr std::uint64_t kDefaultSizeGuard = 10'000'000;

struct MatcherOptions {
  double eps = 0.1;
  /// Restrict candidates to labelings that map each community's handles onto
  /// the same community's labels.
  bool community_preserving = true;
  /// WSI only: sweep every assignment in [c]^n instead of only those with
  /// the known community sizes. Refused above n = 8.
  bool full_assignment_sweep = false;
  std::uint64_t size_guard = kDefaultSizeGuard;
  bool parallel = true;
};

/// Candidate labelings (handle -> label) whose blocks are all jointly typical.
/// Members are unique and sorted lexicographically.
class AmbiguitySet {
 public:
  AmbiguitySet(std::size_t n, std::vector<std::uint32_t> flat_members, double eps,
               MatchMode mode, std::uint64_t candidate_space);

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return n_ == 0 ? 0 : flat_.size() / n_; }
  bool empty() const noexcept { return size() == 0; }
  double eps() const noexcept { return eps_; }
  MatchMode mode() const noexcept { return mode_; }
  std::uint64_t candidate_space() const noexcept { return candidate_space_; }

  std::span<const std::uint32_t> raw(std::size_t index) const {
    return std::span<const std::uint32_t>(flat_).subspan(index * n_, n_);
  }
  Labeling member(std::size_t index) const;
  bool contains(const Labeling& labeling) const;
  /// Every member of this set is a member of `other`.
  bool subset_of(const AmbiguitySet& other) const;

 private:
  std::size_t n_;
  std::vector<std::uint32_t> flat_;
  double eps_;
  MatchMode mode_;
  std::uint64_t candidate_space_;
};

/// Number of candidates the CSI enumeration would visit.
std::uint64_t csi_candidate_space(const MatchingInstance& instance,
                                  const MatcherOptions& options);
/// Number of (assignment pair, candidate) combinations the WSI sweep visits.
std::uint64_t wsi_candidate_space(const MatchingInstance& instance,
                                  const MatcherOptions& options);

AmbiguitySet ambiguity_set_csi(const MatchingInstance& instance,
                               const MatcherOptions& options);

/// Union over hypothesised community assignments of both graphs of the CSI
/// set computed under that assignment.
AmbiguitySet ambiguity_set_wsi(const MatchingInstance& instance,
                               const MatcherOptions& options);

/// Uniform member, deterministic in (set, seed). Throws
/// EmptyAmbiguitySetError on an empty set.
Labeling select_labeling(const AmbiguitySet& set, std::uint64_t seed);

/// Re-checks one candidate through the public typicality path, with blocks
/// formed from the given community of each first-graph label.
bool satisfies_typicality(const MatchingInstance& instance,
                          std::span<const std::size_t> label_community,
                          const Labeling& candidate, double eps);

struct MatchDiagnostics {
  std::size_t set_size = 0;
  double eps = 0.0;
  std::uint64_t candidate_space = 0;
  double wall_ms = 0.0;
  bool truth_in_set = false;
};

struct MatchResult {
  Labeling labeling;
  double accuracy = 0.0;
  MatchDiagnostics diagnostics;
};

/// Builds the ambiguity set for `mode`, selects a member with `seed`, and
/// scores it against the sealed truth.
MatchResult run_matching(const AnonymizedPair& pair, MatchMode mode,
                         const MatcherOptions& options, std::uint64_t seed);

namespace reference {
/// Plain enumeration of the whole candidate space with a full re-check of
/// every block per candidate.
AmbiguitySet ambiguity_set_csi(const MatchingInstance& instance,
                               const MatcherOptions& options);
}  // namespace reference

}  // namespace typmatch
