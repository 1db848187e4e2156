#include "typmatch/matcher.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <map>
#include <numeric>

#include "typmatch/error.hpp"
#include "typmatch/rng.hpp"
#include "typmatch/typicality.hpp"

namespace typmatch {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return b > kSaturated - a ? kSaturated : a + b;
}

std::uint64_t saturating_factorial(std::size_t k) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= k; ++i) f = saturating_mul(f, i);
  return f;
}

std::uint64_t multinomial(std::span<const std::size_t> counts) {
  // product of binomials, exact while it fits
  std::uint64_t result = 1;
  std::size_t placed = 0;
  for (const auto k : counts) {
    for (std::size_t i = 1; i <= k; ++i) {
      ++placed;
      const std::uint64_t num = saturating_mul(result, placed);
      if (num == kSaturated) return kSaturated;
      result = num / i;
    }
  }
  return result;
}

std::vector<std::size_t> count_by_community(std::span<const std::size_t> assignment,
                                            std::size_t c) {
  std::vector<std::size_t> counts(c, 0);
  for (const auto k : assignment) ++counts[k];
  return counts;
}

/// Block typicality reduced to table lookups on joint-type counts.
class SearchProblem {
 public:
  SearchProblem(const MatchingInstance& instance, std::span<const std::size_t> label_comm,
                std::span<const std::size_t> handle_comm, std::size_t c, double eps)
      : second_(instance.second),
        n_(instance.n()),
        l_(instance.model.l()),
        slots_(label_comm, c),
        labels_of_(c),
        handles_of_(c) {
    for (std::size_t a = 0; a < n_; ++a) {
      labels_of_[label_comm[a]].push_back(static_cast<std::uint32_t>(a));
      handles_of_[handle_comm[a]].push_back(static_cast<std::uint32_t>(a));
    }
    first_values_.resize(slots_.block_count());
    allowed_.resize(slots_.block_count());
    for (std::size_t k = 0; k < slots_.block_count(); ++k) {
      const auto slots = slots_.slots(k);
      for (const auto& [a, b] : slots) first_values_[k].push_back(instance.first(a, b));
      const auto [i, j] = slots_.id(k);
      const auto pmf = instance.model.block(i, j);
      const std::size_t length = slots.size();
      auto& table = allowed_[k];
      table.assign(l_ * l_ * (length + 1), 0);
      for (std::size_t cell = 0; cell < l_ * l_; ++cell) {
        for (std::size_t count = 0; count <= length; ++count) {
          table[cell * (length + 1) + count] =
              length == 0 || cell_within(count, length, pmf.values()[cell], eps);
        }
      }
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t c() const noexcept { return labels_of_.size(); }
  const BlockSlots& slots() const noexcept { return slots_; }
  const std::vector<std::uint32_t>& labels_of(std::size_t k) const { return labels_of_[k]; }
  const std::vector<std::uint32_t>& handles_of(std::size_t k) const { return handles_of_[k]; }

  /// `handle_of` maps labels to handles; only labels touched by block k are read.
  bool block_ok(std::size_t k, std::span<const std::uint32_t> handle_of,
                std::vector<std::uint32_t>& counts) const {
    const auto slots = slots_.slots(k);
    const std::size_t length = slots.size();
    if (length == 0) return true;
    counts.assign(l_ * l_, 0);
    const auto& first = first_values_[k];
    for (std::size_t s = 0; s < length; ++s) {
      ++counts[first[s] * l_ + second_(handle_of[slots[s].a], handle_of[slots[s].b])];
    }
    const auto& table = allowed_[k];
    for (std::size_t cell = 0; cell < counts.size(); ++cell) {
      if (!table[cell * (length + 1) + counts[cell]]) return false;
    }
    return true;
  }

  bool all_blocks_ok(std::span<const std::uint32_t> handle_of,
                     std::vector<std::uint32_t>& counts) const {
    for (std::size_t k = 0; k < slots_.block_count(); ++k) {
      if (!block_ok(k, handle_of, counts)) return false;
    }
    return true;
  }

  void emit(std::span<const std::uint32_t> handle_of, std::vector<std::uint32_t>& out) const {
    const std::size_t base = out.size();
    out.resize(base + n_);
    for (std::size_t a = 0; a < n_; ++a) out[base + handle_of[a]] = static_cast<std::uint32_t>(a);
  }

 private:
  const UpperTriangle& second_;
  std::size_t n_;
  std::size_t l_;
  BlockSlots slots_;
  std::vector<std::vector<std::uint32_t>> labels_of_;
  std::vector<std::vector<std::uint32_t>> handles_of_;
  std::vector<std::vector<EdgeValue>> first_values_;
  std::vector<std::vector<char>> allowed_;
};

class PreservingSearch {
 public:
  explicit PreservingSearch(const SearchProblem& problem) : problem_(problem) {}

  void run(bool parallel, std::vector<std::uint32_t>& out) {
    const std::size_t c = problem_.c();
    for (std::size_t k = 0; k < c; ++k) {
      if (problem_.labels_of(k).size() != problem_.handles_of(k).size()) return;
    }
    if (problem_.n() == 0) return;

    // Intra blocks depend on one community only, so each is filtered alone.
    survivors_.assign(c, {});
    std::vector<std::uint32_t> handle_of(problem_.n(), 0);
    std::vector<std::uint32_t> counts;
    for (std::size_t k = 0; k < c; ++k) {
      const auto& labels = problem_.labels_of(k);
      auto perm = problem_.handles_of(k);
      const std::size_t intra = problem_.slots().block_index(k, k);
      do {
        for (std::size_t r = 0; r < labels.size(); ++r) handle_of[labels[r]] = perm[r];
        if (problem_.block_ok(intra, handle_of, counts)) survivors_[k].push_back(perm);
      } while (std::next_permutation(perm.begin(), perm.end()));
      if (survivors_[k].empty()) return;
    }

    const auto top = static_cast<std::int64_t>(survivors_[0].size());
    std::vector<std::vector<std::uint32_t>> found(survivors_[0].size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::int64_t t = 0; t < top; ++t) {
      std::vector<std::uint32_t> local_handle_of(problem_.n(), 0);
      std::vector<std::uint32_t> local_counts;
      place(0, static_cast<std::size_t>(t), local_handle_of);
      descend(1, local_handle_of, local_counts, found[static_cast<std::size_t>(t)]);
    }
    for (const auto& part : found) out.insert(out.end(), part.begin(), part.end());
  }

 private:
  void place(std::size_t k, std::size_t index, std::vector<std::uint32_t>& handle_of) const {
    const auto& labels = problem_.labels_of(k);
    const auto& perm = survivors_[k][index];
    for (std::size_t r = 0; r < labels.size(); ++r) handle_of[labels[r]] = perm[r];
  }

  void descend(std::size_t depth, std::vector<std::uint32_t>& handle_of,
               std::vector<std::uint32_t>& counts, std::vector<std::uint32_t>& out) const {
    if (depth == problem_.c()) {
      problem_.emit(handle_of, out);
      return;
    }
    for (std::size_t s = 0; s < survivors_[depth].size(); ++s) {
      place(depth, s, handle_of);
      bool ok = true;
      for (std::size_t i = 0; i < depth && ok; ++i) {
        ok = problem_.block_ok(problem_.slots().block_index(i, depth), handle_of, counts);
      }
      if (ok) descend(depth + 1, handle_of, counts, out);
    }
  }

  const SearchProblem& problem_;
  std::vector<std::vector<std::vector<std::uint32_t>>> survivors_;
};

void search_unrestricted(const SearchProblem& problem, bool parallel,
                         std::vector<std::uint32_t>& out) {
  const std::size_t n = problem.n();
  if (n == 0) return;
  const auto branches = static_cast<std::int64_t>(n);
  std::vector<std::vector<std::uint32_t>> found(n);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t f = 0; f < branches; ++f) {
    std::vector<std::uint32_t> rest;
    for (std::uint32_t h = 0; h < n; ++h) {
      if (h != static_cast<std::uint32_t>(f)) rest.push_back(h);
    }
    std::vector<std::uint32_t> handle_of(n);
    std::vector<std::uint32_t> counts;
    handle_of[0] = static_cast<std::uint32_t>(f);
    do {
      std::copy(rest.begin(), rest.end(), handle_of.begin() + 1);
      if (problem.all_blocks_ok(handle_of, counts)) {
        problem.emit(handle_of, found[static_cast<std::size_t>(f)]);
      }
    } while (std::next_permutation(rest.begin(), rest.end()));
  }
  for (const auto& part : found) out.insert(out.end(), part.begin(), part.end());
}

const SideInformation& require_side_information(const MatchingInstance& instance) {
  if (!instance.side_information) {
    throw ValidationError("CSI matching needs community side-information");
  }
  const auto& side = *instance.side_information;
  if (side.first_label_community.size() != instance.n() ||
      side.second_handle_community.size() != instance.n()) {
    throw DomainMismatchError("side-information does not cover every vertex");
  }
  return side;
}

void check_instance(const MatchingInstance& instance) {
  if (instance.first.n() != instance.second.n()) {
    throw DomainMismatchError("graphs have different vertex counts");
  }
  const std::size_t total = std::accumulate(instance.community_sizes.begin(),
                                            instance.community_sizes.end(), std::size_t{0});
  if (total != instance.n() || instance.community_sizes.size() != instance.model.c()) {
    throw ValidationError("community sizes do not match the instance");
  }
}

void enforce_guard(std::uint64_t space, const MatcherOptions& options) {
  if (space > options.size_guard) {
    throw SizeGuardError("candidate space of " + std::to_string(space) +
                         " exceeds the size guard of " + std::to_string(options.size_guard));
  }
}

/// Hypothesised assignments grouped by community-count vector.
std::map<std::vector<std::size_t>, std::vector<std::vector<std::size_t>>> assignment_groups(
    const MatchingInstance& instance, const MatcherOptions& options) {
  const std::size_t n = instance.n();
  const std::size_t c = instance.community_sizes.size();
  std::map<std::vector<std::size_t>, std::vector<std::vector<std::size_t>>> groups;
  if (options.full_assignment_sweep) {
    if (n > 8) throw SizeGuardError("full assignment sweep is limited to n <= 8");
    std::vector<std::size_t> assignment(n, 0);
    while (true) {
      groups[count_by_community(assignment, c)].push_back(assignment);
      std::size_t pos = 0;
      while (pos < n && ++assignment[pos] == c) assignment[pos++] = 0;
      if (pos == n) break;
    }
  } else {
    std::vector<std::size_t> assignment;
    for (std::size_t k = 0; k < c; ++k) {
      assignment.insert(assignment.end(), instance.community_sizes[k], k);
    }
    auto& group = groups[instance.community_sizes];
    do {
      group.push_back(assignment);
    } while (std::next_permutation(assignment.begin(), assignment.end()));
  }
  return groups;
}

std::uint64_t wsi_space_for_counts(const std::vector<std::size_t>& counts) {
  const std::uint64_t assignments = multinomial(counts);
  std::uint64_t per_pair = 1;
  for (const auto k : counts) per_pair = saturating_mul(per_pair, saturating_factorial(k));
  return saturating_mul(saturating_mul(assignments, assignments), per_pair);
}

}  // namespace

AmbiguitySet::AmbiguitySet(std::size_t n, std::vector<std::uint32_t> flat_members,
                           double eps, MatchMode mode, std::uint64_t candidate_space)
    : n_(n), eps_(eps), mode_(mode), candidate_space_(candidate_space) {
  if (n_ == 0) return;
  const std::size_t count = flat_members.size() / n_;
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto row = [&](std::size_t i) {
    return std::span<const std::uint32_t>(flat_members).subspan(i * n_, n_);
  };
  auto less = [&](std::size_t a, std::size_t b) {
    const auto ra = row(a);
    const auto rb = row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  if (!std::is_sorted(order.begin(), order.end(), less)) {
    std::sort(order.begin(), order.end(), less);
  }
  flat_.reserve(flat_members.size());
  for (std::size_t k = 0; k < count; ++k) {
    const auto r = row(order[k]);
    if (k > 0 && std::equal(r.begin(), r.end(), row(order[k - 1]).begin())) continue;
    flat_.insert(flat_.end(), r.begin(), r.end());
  }
}

Labeling AmbiguitySet::member(std::size_t index) const {
  const auto r = raw(index);
  return Labeling(std::vector<std::uint32_t>(r.begin(), r.end()));
}

bool AmbiguitySet::contains(const Labeling& labeling) const {
  if (labeling.size() != n_ || empty()) return false;
  const auto target = labeling.labels();
  std::size_t lo = 0;
  std::size_t hi = size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const auto r = raw(mid);
    if (std::lexicographical_compare(r.begin(), r.end(), target.begin(), target.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo < size() && std::equal(target.begin(), target.end(), raw(lo).begin());
}

bool AmbiguitySet::subset_of(const AmbiguitySet& other) const {
  for (std::size_t k = 0; k < size(); ++k) {
    if (!other.contains(member(k))) return false;
  }
  return true;
}

std::uint64_t csi_candidate_space(const MatchingInstance& instance,
                                  const MatcherOptions& options) {
  if (!options.community_preserving) return saturating_factorial(instance.n());
  std::uint64_t space = 1;
  for (const auto k : instance.community_sizes) {
    space = saturating_mul(space, saturating_factorial(k));
  }
  return space;
}

std::uint64_t wsi_candidate_space(const MatchingInstance& instance,
                                  const MatcherOptions& options) {
  if (!options.full_assignment_sweep) return wsi_space_for_counts(instance.community_sizes);
  // sum over count vectors of c^n; enumerate compositions of n into c parts
  const std::size_t n = instance.n();
  const std::size_t c = instance.community_sizes.size();
  std::uint64_t total = 0;
  std::vector<std::size_t> counts(c, 0);
  auto visit = [&](auto&& self, std::size_t k, std::size_t left) -> void {
    if (k + 1 == c) {
      counts[k] = left;
      total = saturating_add(total, wsi_space_for_counts(counts));
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      counts[k] = v;
      self(self, k + 1, left - v);
    }
  };
  if (c > 0) visit(visit, 0, n);
  return total;
}

AmbiguitySet ambiguity_set_csi(const MatchingInstance& instance,
                               const MatcherOptions& options) {
  check_instance(instance);
  const auto& side = require_side_information(instance);
  const auto space = csi_candidate_space(instance, options);
  enforce_guard(space, options);

  const SearchProblem problem(instance, side.first_label_community,
                              side.second_handle_community, instance.model.c(), options.eps);
  std::vector<std::uint32_t> flat;
  if (options.community_preserving) {
    PreservingSearch(problem).run(options.parallel, flat);
  } else {
    search_unrestricted(problem, options.parallel, flat);
  }
  return {instance.n(), std::move(flat), options.eps, MatchMode::csi, space};
}

AmbiguitySet ambiguity_set_wsi(const MatchingInstance& instance,
                               const MatcherOptions& options) {
  check_instance(instance);
  const auto space = wsi_candidate_space(instance, options);
  enforce_guard(space, options);

  const std::size_t c = instance.model.c();
  std::vector<std::pair<const std::vector<std::size_t>*, const std::vector<std::vector<std::size_t>>*>>
      jobs;
  const auto groups = assignment_groups(instance, options);
  for (const auto& [counts, group] : groups) {
    for (const auto& assignment : group) jobs.emplace_back(&assignment, &group);
  }

  std::vector<std::vector<std::uint32_t>> found(jobs.size());
  const auto job_count = static_cast<std::int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic) if (options.parallel)
  for (std::int64_t j = 0; j < job_count; ++j) {
    const auto& [label_assignment, group] = jobs[static_cast<std::size_t>(j)];
    for (const auto& handle_assignment : *group) {
      const SearchProblem problem(instance, *label_assignment, handle_assignment, c,
                                  options.eps);
      PreservingSearch(problem).run(false, found[static_cast<std::size_t>(j)]);
    }
  }
  std::vector<std::uint32_t> flat;
  for (const auto& part : found) flat.insert(flat.end(), part.begin(), part.end());
  return {instance.n(), std::move(flat), options.eps, MatchMode::wsi, space};
}

Labeling select_labeling(const AmbiguitySet& set, std::uint64_t seed) {
  if (set.empty()) throw EmptyAmbiguitySetError("ambiguity set is empty; matching failed");
  SplitMix64 rng(seed);
  return set.member(static_cast<std::size_t>(rng.below(set.size())));
}

bool satisfies_typicality(const MatchingInstance& instance,
                          std::span<const std::size_t> label_community,
                          const Labeling& candidate, double eps) {
  const BlockSlots slots(label_community, instance.model.c());
  return blocks_typical(extract_paired_blocks(slots, instance.first, instance.second, candidate),
                        instance.model, eps);
}

MatchResult run_matching(const AnonymizedPair& pair, MatchMode mode,
                         const MatcherOptions& options, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const auto set = mode == MatchMode::csi ? ambiguity_set_csi(pair.instance, options)
                                          : ambiguity_set_wsi(pair.instance, options);
  MatchDiagnostics diagnostics;
  diagnostics.set_size = set.size();
  diagnostics.eps = options.eps;
  diagnostics.candidate_space = set.candidate_space();
  diagnostics.truth_in_set = set.contains(pair.truth.reveal());
  auto labeling = select_labeling(set, seed);
  diagnostics.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  const double accuracy = pair.truth.score(labeling);
  return MatchResult{std::move(labeling), accuracy, diagnostics};
}

namespace reference {

AmbiguitySet ambiguity_set_csi(const MatchingInstance& instance,
                               const MatcherOptions& options) {
  check_instance(instance);
  const auto& side = require_side_information(instance);
  const auto space = csi_candidate_space(instance, options);
  enforce_guard(space, options);

  const std::size_t n = instance.n();
  const std::size_t c = instance.model.c();
  std::vector<std::uint32_t> flat;
  std::vector<std::uint32_t> candidate(n);
  std::iota(candidate.begin(), candidate.end(), 0U);
  do {
    if (options.community_preserving) {
      bool preserving = true;
      for (std::size_t h = 0; h < n && preserving; ++h) {
        preserving = side.second_handle_community[h] == side.first_label_community[candidate[h]];
      }
      if (!preserving) continue;
    }
    const Labeling labeling(candidate);
    const BlockSlots slots(side.first_label_community, c);
    if (blocks_typical(extract_paired_blocks(slots, instance.first, instance.second, labeling),
                       instance.model, options.eps)) {
      flat.insert(flat.end(), candidate.begin(), candidate.end());
    }
  } while (std::next_permutation(candidate.begin(), candidate.end()));
  return {n, std::move(flat), options.eps, MatchMode::csi, space};
}

}  // namespace reference

}  // namespace typmatch
