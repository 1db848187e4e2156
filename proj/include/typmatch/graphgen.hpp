#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "typmatch/labeling.hpp"
#include "typmatch/model.hpp"
#include "typmatch/permutation.hpp"

namespace typmatch {

/// Undirected marked graph with communities, stored by label pair.
class LabeledGraph {
 public:
  LabeledGraph(CommunityLayout layout, Labeling labeling, UpperTriangle by_label);

  std::size_t n() const noexcept { return layout_.n(); }
  const CommunityLayout& layout() const noexcept { return layout_; }
  const Labeling& labeling() const noexcept { return labeling_; }
  /// Adjacency under the labeling: value between labels a and b.
  const UpperTriangle& by_label() const noexcept { return by_label_; }
  EdgeValue at_labels(std::size_t a, std::size_t b) const { return by_label_(a, b); }
  /// Value between vertices u and v.
  EdgeValue edge(std::size_t u, std::size_t v) const {
    return by_label_(labeling_(u), labeling_(v));
  }
  /// Community of the vertex carrying each label.
  std::vector<std::size_t> label_communities() const;

 private:
  CommunityLayout layout_;
  Labeling labeling_;
  UpperTriangle by_label_;
};

/// Both graphs share vertices and layout; paired slots are drawn jointly.
struct CorrelatedPair {
  LabeledGraph first;
  LabeledGraph second;
  PairedEdgeModel model;
  std::uint64_t seed = 0;
};

/// Draws every label pair (a, b), a < b, from the model's table for the
/// communities of a and b. The draw for a slot depends only on
/// (seed, block index, slot index in the canonical block order).
CorrelatedPair sample_pair(const PairedEdgeModel& model, const CommunityLayout& layout,
                           std::uint64_t seed);

namespace reference {
CorrelatedPair sample_pair(const PairedEdgeModel& model, const CommunityLayout& layout,
                           std::uint64_t seed);
}  // namespace reference

enum class MatchMode { csi, wsi };

std::string to_string(MatchMode mode);
MatchMode parse_match_mode(std::string_view text);

/// Community memberships revealed to a matcher with side-information.
struct SideInformation {
  std::vector<std::size_t> first_label_community;
  std::vector<std::size_t> second_handle_community;
};

/// What a matcher is allowed to see. The second graph is indexed by opaque
/// handles; its labeling is withheld.
struct MatchingInstance {
  UpperTriangle first;
  UpperTriangle second;
  PairedEdgeModel model;
  std::vector<std::size_t> community_sizes;
  std::optional<SideInformation> side_information;

  std::size_t n() const noexcept { return first.n(); }
};

/// Ground-truth labeling of the second graph's handles. Only scoring code
/// should read it.
class SealedTruth {
 public:
  explicit SealedTruth(Labeling truth) : truth_(std::move(truth)) {}

  double score(const Labeling& hat) const;
  bool matches(const Labeling& hat) const { return hat == truth_; }
  const Labeling& reveal() const noexcept { return truth_; }

 private:
  Labeling truth_;
};

struct AnonymizedPair {
  MatchingInstance instance;
  SealedTruth truth;
};

/// Relabels the second graph's vertices by `shuffle` (vertex v gets handle
/// shuffle(v)) and withholds its labeling.
AnonymizedPair anonymize(const CorrelatedPair& pair, MatchMode mode,
                         const Permutation& shuffle);
/// Same with a uniformly random shuffle drawn from `shuffle_seed`.
AnonymizedPair anonymize(const CorrelatedPair& pair, MatchMode mode,
                         std::uint64_t shuffle_seed);

/// Uniform permutation of [0, n) by Fisher-Yates.
Permutation random_permutation(std::size_t n, std::uint64_t seed);

/// Fraction of vertices on which the two labelings agree.
double vertex_accuracy(const Labeling& truth, const Labeling& hat);

}  // namespace typmatch
