#include "typmatch/graphgen.hpp"

#include <algorithm>
#include <string>

#include "typmatch/error.hpp"
#include "typmatch/rng.hpp"
#include "typmatch/typicality.hpp"

namespace typmatch {

LabeledGraph::LabeledGraph(CommunityLayout layout, Labeling labeling,
                           UpperTriangle by_label)
    : layout_(std::move(layout)),
      labeling_(std::move(labeling)),
      by_label_(std::move(by_label)) {
  if (labeling_.size() != layout_.n() || by_label_.n() != layout_.n()) {
    throw DomainMismatchError("graph parts disagree on the vertex count");
  }
}

std::vector<std::size_t> LabeledGraph::label_communities() const {
  std::vector<std::size_t> out(n());
  for (std::size_t v = 0; v < n(); ++v) out[labeling_(v)] = layout_.community_of(v);
  return out;
}

namespace {

struct BlockSampler {
  std::vector<double> cumulative;  // row-major over (x, x')
  std::size_t l;

  std::pair<EdgeValue, EdgeValue> draw(double u) const {
    std::size_t cell = 0;
    while (cell + 1 < cumulative.size() && u >= cumulative[cell]) ++cell;
    return {static_cast<EdgeValue>(cell / l), static_cast<EdgeValue>(cell % l)};
  }
};

struct SamplingPlan {
  BlockSlots slots;
  std::vector<BlockSampler> samplers;
};

SamplingPlan make_plan(const PairedEdgeModel& model, const CommunityLayout& layout) {
  const auto report = validate_model(model, layout);
  if (!report.ok()) throw ValidationError("invalid model:\n" + report.describe());
  if (model.l() > 256) throw ValidationError("edge alphabets above 256 values are unsupported");

  SamplingPlan plan{BlockSlots(layout.membership(), layout.c()), {}};
  for (std::size_t k = 0; k < plan.slots.block_count(); ++k) {
    const auto [i, j] = plan.slots.id(k);
    BlockSampler sampler{{}, model.l()};
    double total = 0.0;
    // The last positive cell absorbs rounding so u close to 1 never lands on a
    // zero-probability cell.
    std::size_t last_positive = 0;
    for (std::size_t x = 0; x < model.l(); ++x) {
      for (std::size_t y = 0; y < model.l(); ++y) {
        total += model(i, j, x, y);
        if (model(i, j, x, y) > 0.0) last_positive = x * model.l() + y;
        sampler.cumulative.push_back(total);
      }
    }
    for (std::size_t cell = last_positive; cell < sampler.cumulative.size(); ++cell) {
      sampler.cumulative[cell] = 2.0;
    }
    plan.samplers.push_back(std::move(sampler));
  }
  return plan;
}

CorrelatedPair assemble(const PairedEdgeModel& model, const CommunityLayout& layout,
                        std::uint64_t seed, UpperTriangle first, UpperTriangle second) {
  const auto identity = Labeling::identity(layout.n());
  return CorrelatedPair{LabeledGraph(layout, identity, std::move(first)),
                        LabeledGraph(layout, identity, std::move(second)), model, seed};
}

}  // namespace

CorrelatedPair sample_pair(const PairedEdgeModel& model, const CommunityLayout& layout,
                           std::uint64_t seed) {
  const auto plan = make_plan(model, layout);
  UpperTriangle first(layout.n());
  UpperTriangle second(layout.n());
  for (std::size_t k = 0; k < plan.slots.block_count(); ++k) {
    const auto slots = plan.slots.slots(k);
    const auto& sampler = plan.samplers[k];
    const auto count = static_cast<std::int64_t>(slots.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < count; ++s) {
      const auto [a, b] = slots[static_cast<std::size_t>(s)];
      const auto [x, y] = sampler.draw(counter_uniform(seed, k, static_cast<std::uint64_t>(s)));
      first.set(a, b, x);
      second.set(a, b, y);
    }
  }
  return assemble(model, layout, seed, std::move(first), std::move(second));
}

namespace reference {

CorrelatedPair sample_pair(const PairedEdgeModel& model, const CommunityLayout& layout,
                           std::uint64_t seed) {
  const auto plan = make_plan(model, layout);
  UpperTriangle first(layout.n());
  UpperTriangle second(layout.n());
  for (std::size_t k = 0; k < plan.slots.block_count(); ++k) {
    const auto slots = plan.slots.slots(k);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      const auto [x, y] = plan.samplers[k].draw(counter_uniform(seed, k, s));
      first.set(slots[s].a, slots[s].b, x);
      second.set(slots[s].a, slots[s].b, y);
    }
  }
  return assemble(model, layout, seed, std::move(first), std::move(second));
}

}  // namespace reference

std::string to_string(MatchMode mode) { return mode == MatchMode::csi ? "csi" : "wsi"; }

MatchMode parse_match_mode(std::string_view text) {
  if (text == "csi") return MatchMode::csi;
  if (text == "wsi") return MatchMode::wsi;
  throw ValidationError("unknown mode '" + std::string(text) + "' (expected csi or wsi)");
}

double SealedTruth::score(const Labeling& hat) const { return vertex_accuracy(truth_, hat); }

AnonymizedPair anonymize(const CorrelatedPair& pair, MatchMode mode,
                         const Permutation& shuffle) {
  const auto& g2 = pair.second;
  const std::size_t n = g2.n();
  if (shuffle.size() != n) throw DomainMismatchError("shuffle size differs from graph size");

  // handle h = shuffle(v); edge(handle(u), handle(v)) = g2.edge(u, v)
  UpperTriangle by_handle(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) by_handle.set(shuffle(u), shuffle(v), g2.edge(u, v));
  }
  std::vector<std::uint32_t> truth(n);
  for (std::size_t v = 0; v < n; ++v) truth[shuffle(v)] = g2.labeling()(v);

  MatchingInstance instance{pair.first.by_label(), std::move(by_handle), pair.model,
                            pair.first.layout().sizes(), std::nullopt};
  if (mode == MatchMode::csi) {
    SideInformation side{pair.first.label_communities(), std::vector<std::size_t>(n)};
    for (std::size_t v = 0; v < n; ++v) {
      side.second_handle_community[shuffle(v)] = g2.layout().community_of(v);
    }
    instance.side_information = std::move(side);
  }
  return AnonymizedPair{std::move(instance), SealedTruth(Labeling(std::move(truth)))};
}

Permutation random_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::uint32_t> image(n);
  for (std::size_t i = 0; i < n; ++i) image[i] = static_cast<std::uint32_t>(i);
  SplitMix64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(image[i - 1], image[rng.below(i)]);
  }
  return Permutation(std::move(image));
}

AnonymizedPair anonymize(const CorrelatedPair& pair, MatchMode mode,
                         std::uint64_t shuffle_seed) {
  return anonymize(pair, mode, random_permutation(pair.second.n(), shuffle_seed));
}

double vertex_accuracy(const Labeling& truth, const Labeling& hat) {
  if (truth.size() != hat.size()) {
    throw DomainMismatchError("labelings cover " + std::to_string(truth.size()) +
                              " and " + std::to_string(hat.size()) + " vertices");
  }
  if (truth.size() == 0) return 1.0;
  std::size_t agree = 0;
  for (std::size_t v = 0; v < truth.size(); ++v) agree += truth(v) == hat(v);
  return static_cast<double>(agree) / static_cast<double>(truth.size());
}

}  // namespace typmatch
