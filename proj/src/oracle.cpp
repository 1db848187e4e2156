#include "typmatch/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "typmatch/error.hpp"

namespace typmatch::oracle {

namespace {

using boost::multiprecision::cpp_int;

Rational abs_value(const Rational& r) { return r < 0 ? Rational(-r) : r; }

std::uint64_t checked_power(std::uint64_t base, std::size_t exponent, std::uint64_t cap) {
  std::uint64_t result = 1;
  for (std::size_t k = 0; k < exponent; ++k) {
    if (base != 0 && result > cap / base) return cap + 1;
    result *= base;
  }
  return result;
}

/// allowed[cell][count]: |count - length * p| <= length * eps, exactly.
std::vector<std::vector<char>> exact_cell_table(std::span<const Rational> p, std::size_t length,
                                                const Rational& eps) {
  const Rational len(static_cast<long long>(length));
  std::vector<std::vector<char>> table(p.size(), std::vector<char>(length + 1, 0));
  for (std::size_t cell = 0; cell < p.size(); ++cell) {
    const Rational centre = len * p[cell];
    for (std::size_t count = 0; count <= length; ++count) {
      table[cell][count] =
          abs_value(Rational(static_cast<long long>(count)) - centre) <= len * eps;
    }
  }
  return table;
}

void check_permutations(std::size_t n, const Permutation& pi_x, const Permutation& pi_y) {
  if (pi_x.size() != n || pi_y.size() != n) {
    throw DomainMismatchError("permutation size differs from sequence length");
  }
}

}  // namespace

Rational exact(double value) {
  if (!std::isfinite(value)) throw ValidationError("cannot convert a non-finite value");
  if (value == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  cpp_int numerator(scaled);
  cpp_int denominator(1);
  if (exponent >= 0) {
    numerator <<= exponent;
  } else {
    denominator <<= -exponent;
  }
  return Rational(numerator, denominator);
}

RationalPmf::RationalPmf(std::size_t rows, std::size_t cols, std::vector<Rational> p)
    : rows_(rows), cols_(cols), p_(std::move(p)) {
  if (p_.size() != rows_ * cols_) throw LengthMismatchError("pmf shape mismatch");
  Rational total = 0;
  for (const auto& v : p_) {
    if (v < 0) throw ValidationError("negative probability");
    total += v;
  }
  if (total != 1) throw ValidationError("exact pmf does not sum to one");
}

RationalPmf RationalPmf::from(const JointPmf& pmf) {
  std::vector<Rational> p;
  for (const double v : pmf.values()) p.push_back(exact(v));
  // exact images of rounded decimals rarely sum to one; renormalise exactly
  Rational total = 0;
  for (const auto& v : p) total += v;
  for (auto& v : p) v /= total;
  return {pmf.rows(), pmf.cols(), std::move(p)};
}

RationalPmf RationalPmf::uniform(std::size_t rows, std::size_t cols) {
  return {rows, cols,
          std::vector<Rational>(rows * cols, Rational(1, static_cast<long long>(rows * cols)))};
}

RationalPmf RationalPmf::dsbs(const Rational& crossover) {
  const Rational same = (1 - crossover) / 2;
  const Rational diff = crossover / 2;
  return {2, 2, {same, diff, diff, same}};
}

JointPmf RationalPmf::to_double() const {
  std::vector<double> p;
  for (const auto& v : p_) p.push_back(v.convert_to<double>());
  return {rows_, cols_, std::move(p)};
}

ExactProbability exact_typicality_probability(const RationalPmf& p, std::size_t n,
                                              const Permutation& pi, const Rational& eps) {
  return exact_typicality_probability(p, n, Permutation::identity(n), pi, eps);
}

ExactProbability exact_typicality_probability(const RationalPmf& p, std::size_t n,
                                              const Permutation& pi_x,
                                              const Permutation& pi_y, const Rational& eps) {
  check_permutations(n, pi_x, pi_y);
  const std::size_t cells = p.rows() * p.cols();
  const std::uint64_t outcomes = checked_power(cells, n, kOutcomeGuard);
  if (outcomes > kOutcomeGuard) {
    throw SizeGuardError("exact enumeration of " + std::to_string(cells) + "^" +
                         std::to_string(n) + " outcomes exceeds the guard");
  }
  // Outcome probabilities depend only on the joint type of (x, y), so typical
  // outcomes are tallied per type and weighted at the end.
  const std::uint64_t type_keys = checked_power(n + 1, cells, 10'000'000);
  if (type_keys > 10'000'000) throw SizeGuardError("too many joint types to tally");
  std::vector<std::uint64_t> radix(cells);
  for (std::size_t cell = 0; cell < cells; ++cell) radix[cell] = checked_power(n + 1, cell, type_keys);

  const auto allowed = exact_cell_table(p.values(), n, eps);
  const std::size_t cols = p.cols();
  std::vector<std::uint64_t> tally(type_keys, 0);

#pragma omp parallel
  {
    std::vector<std::uint64_t> local(type_keys, 0);
    std::vector<std::size_t> w(n);
    std::vector<std::size_t> z_counts(cells);
#pragma omp for schedule(static)
    for (std::int64_t o = 0; o < static_cast<std::int64_t>(outcomes); ++o) {
      auto rest = static_cast<std::uint64_t>(o);
      std::uint64_t key = 0;
      for (std::size_t k = 0; k < n; ++k) {
        w[k] = rest % cells;
        rest /= cells;
        key += radix[w[k]];
      }
      std::fill(z_counts.begin(), z_counts.end(), 0);
      for (std::size_t k = 0; k < n; ++k) {
        ++z_counts[(w[pi_x(k)] / cols) * cols + w[pi_y(k)] % cols];
      }
      bool typical = true;
      for (std::size_t cell = 0; cell < cells && typical; ++cell) {
        typical = allowed[cell][z_counts[cell]] != 0;
      }
      if (typical) ++local[key];
    }
#pragma omp critical
    for (std::size_t k = 0; k < type_keys; ++k) tally[k] += local[k];
  }

  std::vector<std::vector<Rational>> powers(cells, std::vector<Rational>(n + 1, Rational(1)));
  for (std::size_t cell = 0; cell < cells; ++cell) {
    for (std::size_t t = 1; t <= n; ++t) powers[cell][t] = powers[cell][t - 1] * p.values()[cell];
  }
  ExactProbability result{Rational(0), 0.0};
  for (std::uint64_t key = 0; key < type_keys; ++key) {
    if (tally[key] == 0) continue;
    Rational term(static_cast<unsigned long long>(tally[key]));
    auto rest = key;
    for (std::size_t cell = 0; cell < cells; ++cell) {
      term *= powers[cell][rest % (n + 1)];
      rest /= (n + 1);
    }
    result.value += term;
  }
  result.approx = result.value.convert_to<double>();
  return result;
}

namespace reference {

ExactProbability exact_typicality_probability(const RationalPmf& p, std::size_t n,
                                              const Permutation& pi_x,
                                              const Permutation& pi_y, const Rational& eps) {
  check_permutations(n, pi_x, pi_y);
  const std::size_t rows = p.rows();
  const std::size_t cols = p.cols();
  const std::uint64_t xs = checked_power(rows, n, kOutcomeGuard);
  const std::uint64_t ys = checked_power(cols, n, kOutcomeGuard);
  if (xs > kOutcomeGuard || ys > kOutcomeGuard || xs * ys > kOutcomeGuard) {
    throw SizeGuardError("reference enumeration too large");
  }
  const Rational len(static_cast<long long>(n));
  ExactProbability result{Rational(0), 0.0};
  std::vector<std::size_t> x(n);
  std::vector<std::size_t> y(n);
  for (std::uint64_t xi = 0; xi < xs; ++xi) {
    for (std::uint64_t yi = 0; yi < ys; ++yi) {
      auto rx = xi;
      auto ry = yi;
      Rational weight(1);
      for (std::size_t k = 0; k < n; ++k) {
        x[k] = rx % rows;
        rx /= rows;
        y[k] = ry % cols;
        ry /= cols;
        weight *= p(x[k], y[k]);
      }
      if (weight == 0) continue;
      std::vector<long long> counts(rows * cols, 0);
      for (std::size_t k = 0; k < n; ++k) ++counts[x[pi_x(k)] * cols + y[pi_y(k)]];
      bool typical = true;
      for (std::size_t cell = 0; cell < counts.size() && typical; ++cell) {
        typical = abs_value(Rational(counts[cell]) / len - p.values()[cell]) <= eps;
      }
      if (typical) result.value += weight;
    }
  }
  result.approx = result.value.convert_to<double>();
  return result;
}

}  // namespace reference

std::uint64_t derangement_count(unsigned k) {
  if (k > 20) throw SizeGuardError("derangement counts above 20 overflow 64 bits");
  std::uint64_t before = 1;  // !0
  if (k == 0) return before;
  std::uint64_t current = 0;  // !1
  for (unsigned m = 2; m <= k; ++m) {
    const std::uint64_t next = (m - 1) * (current + before);
    before = current;
    current = next;
  }
  return current;
}

std::uint64_t factorial(unsigned k) {
  if (k > 20) throw SizeGuardError("factorials above 20 overflow 64 bits");
  std::uint64_t f = 1;
  for (unsigned m = 2; m <= k; ++m) f *= m;
  return f;
}

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

LabelingEnumerator::LabelingEnumerator(const CommunityLayout& layout,
                                       bool community_preserving, std::uint64_t guard)
    : n_(layout.n()) {
  if (community_preserving) {
    for (std::size_t k = 0; k < layout.c(); ++k) {
      std::vector<std::uint32_t> members;
      for (const auto v : layout.members(k)) members.push_back(static_cast<std::uint32_t>(v));
      members_.push_back(std::move(members));
    }
  } else {
    std::vector<std::uint32_t> all(n_);
    std::iota(all.begin(), all.end(), 0U);
    members_.push_back(std::move(all));
  }
  total_ = 1;
  for (const auto& group : members_) {
    if (group.size() > 20) throw SizeGuardError("labeling enumeration too large");
    const auto f = factorial(static_cast<unsigned>(group.size()));
    if (f != 0 && total_ > guard / f) throw SizeGuardError("labeling enumeration exceeds the guard");
    total_ *= f;
  }
  if (total_ > guard) throw SizeGuardError("labeling enumeration exceeds the guard");
  arrangement_ = members_;
}

bool LabelingEnumerator::advance() {
  for (std::size_t k = arrangement_.size(); k-- > 0;) {
    if (std::next_permutation(arrangement_[k].begin(), arrangement_[k].end())) return true;
  }
  return false;
}

std::optional<Labeling> LabelingEnumerator::next() {
  if (done_) return std::nullopt;
  if (started_ && !advance()) {
    done_ = true;
    return std::nullopt;
  }
  started_ = true;
  std::vector<std::uint32_t> label_of(n_);
  for (std::size_t k = 0; k < members_.size(); ++k) {
    for (std::size_t r = 0; r < members_[k].size(); ++r) {
      label_of[members_[k][r]] = arrangement_[k][r];
    }
  }
  return Labeling(std::move(label_of));
}

LabelingEnumerator enumerate_labelings(const CommunityLayout& layout, bool community_preserving,
                                       std::uint64_t guard) {
  return LabelingEnumerator(layout, community_preserving, guard);
}

namespace {

/// Exact per-block typicality with tables cached by (i, j, length).
class ExactChecker {
 public:
  ExactChecker(const MatchingInstance& instance, double eps)
      : instance_(instance), eps_(exact(eps)) {}

  bool typical(std::span<const std::size_t> label_community, const Labeling& candidate) {
    const std::size_t n = instance_.n();
    const std::size_t c = instance_.model.c();
    const std::size_t l = instance_.model.l();
    const auto handle_of = candidate.inverse();
    std::vector<std::vector<std::size_t>> counts(c * c, std::vector<std::size_t>(l * l, 0));
    std::vector<std::size_t> lengths(c * c, 0);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        const auto i = std::min(label_community[a], label_community[b]);
        const auto j = std::max(label_community[a], label_community[b]);
        const auto x = instance_.first(a, b);
        const auto y = instance_.second(handle_of[a], handle_of[b]);
        ++counts[i * c + j][x * l + y];
        ++lengths[i * c + j];
      }
    }
    for (std::size_t i = 0; i < c; ++i) {
      for (std::size_t j = i; j < c; ++j) {
        const std::size_t length = lengths[i * c + j];
        if (length == 0) continue;
        const auto& table = table_for(i, j, length);
        for (std::size_t cell = 0; cell < l * l; ++cell) {
          if (!table[cell][counts[i * c + j][cell]]) return false;
        }
      }
    }
    return true;
  }

 private:
  const std::vector<std::vector<char>>& table_for(std::size_t i, std::size_t j,
                                                  std::size_t length) {
    const auto key = std::make_tuple(i, j, length);
    auto it = tables_.find(key);
    if (it != tables_.end()) return it->second;
    const std::size_t l = instance_.model.l();
    std::vector<Rational> p;
    for (std::size_t x = 0; x < l; ++x) {
      for (std::size_t y = 0; y < l; ++y) p.push_back(exact(instance_.model(i, j, x, y)));
    }
    return tables_.emplace(key, exact_cell_table(p, length, eps_)).first->second;
  }

  const MatchingInstance& instance_;
  Rational eps_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<std::vector<char>>>
      tables_;
};

void guard_factorial(std::size_t n) {
  if (n > 10) throw SizeGuardError("brute-force search is limited to n <= 10");
}

}  // namespace

bool candidate_typical(const MatchingInstance& instance,
                       std::span<const std::size_t> label_community, const Labeling& candidate,
                       double eps) {
  ExactChecker checker(instance, eps);
  return checker.typical(label_community, candidate);
}

std::vector<Labeling> brute_force_ambiguity_set(
    const MatchingInstance& instance, std::span<const std::size_t> label_community,
    std::optional<std::span<const std::size_t>> handle_community, double eps) {
  guard_factorial(instance.n());
  ExactChecker checker(instance, eps);
  std::vector<Labeling> out;
  std::vector<std::uint32_t> candidate(instance.n());
  std::iota(candidate.begin(), candidate.end(), 0U);
  do {
    if (handle_community) {
      bool preserving = true;
      for (std::size_t h = 0; h < candidate.size() && preserving; ++h) {
        preserving = (*handle_community)[h] == label_community[candidate[h]];
      }
      if (!preserving) continue;
    }
    Labeling labeling(candidate);
    if (checker.typical(label_community, labeling)) out.push_back(std::move(labeling));
  } while (std::next_permutation(candidate.begin(), candidate.end()));
  return out;
}

std::vector<Labeling> brute_force_wsi_set(const MatchingInstance& instance, double eps) {
  guard_factorial(instance.n());
  std::vector<std::vector<std::size_t>> assignments;
  std::vector<std::size_t> assignment;
  for (std::size_t k = 0; k < instance.community_sizes.size(); ++k) {
    assignment.insert(assignment.end(), instance.community_sizes[k], k);
  }
  do {
    assignments.push_back(assignment);
  } while (std::next_permutation(assignment.begin(), assignment.end()));

  ExactChecker checker(instance, eps);
  std::vector<Labeling> out;
  std::vector<std::uint32_t> candidate(instance.n());
  std::iota(candidate.begin(), candidate.end(), 0U);
  do {
    Labeling labeling(candidate);
    for (const auto& a : assignments) {
      if (checker.typical(a, labeling)) {
        out.push_back(std::move(labeling));
        break;
      }
    }
  } while (std::next_permutation(candidate.begin(), candidate.end()));
  return out;
}

}  // namespace typmatch::oracle
