// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "typmatch/bounds.hpp"
#include "typmatch/campaign.hpp"
#include "typmatch/graphgen.hpp"
#include "typmatch/io.hpp"
#include "typmatch/matcher.hpp"
#include "typmatch/oracle.hpp"
#include "typmatch/rng.hpp"
#include "typmatch/verify.hpp"

using namespace typmatch;
using oracle::Rational;
using oracle::RationalPmf;
namespace fs = std::filesystem;

namespace {

const std::string kData = TYPMATCH_DATA_DIR;

constexpr double kProp1Seconds = 60;
constexpr double kThm1Seconds = 120;
constexpr double kMatchingSeconds = 600;
constexpr double kSeparation = 0.5;
constexpr double kInclusion = 0.95;
constexpr double kValueTolerance = 1e-9;
constexpr std::size_t kTrials = 200;

// Reference values, computed at 50 digits.
constexpr double kLhsAtTen = 2.6575424759098899;       // 8 log2(10) / 10
constexpr double kConverseLhsAtThousand = 0.019931568569324174;  // 2 log2(1000) / 1000
constexpr double kHalfBitCrossover = 0.11002786443835955;      // 1 - h2(q) = 1/2

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome prop1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t rows = 0;
  std::size_t bad = 0;
  const std::vector<RationalPmf> pmfs{RationalPmf::uniform(2, 2), RationalPmf::dsbs(Rational(1, 10))};
  for (const auto& p : pmfs) {
    for (std::size_t n = 2; n <= 6; ++n) {
      for (const auto& eps : {Rational(1, 10), Rational(1, 4), Rational(1, 2)}) {
        for (const auto& r : oracle::verify_prop1(p, n, eps, n)) {
          ++rows;
          bad += r.invariance_holds && r.standard_holds ? 0 : 1;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << rows << " tuples, " << bad << " mismatches, " << secs << " s";
  return {bad == 0 && secs < kProp1Seconds, d.str()};
}

Outcome thm1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t rows = 0;
  std::size_t bad = 0;
  for (const std::size_t n : {4, 6, 8}) {
    for (const auto& r : oracle::verify_thm1(JointPmf::dsbs(0.1), n, 0.25, {0, 1, n / 2})) {
      ++rows;
      bad += r.holds ? 0 : 1;
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << rows << " tuples, " << bad << " violations, " << secs << " s";
  return {bad == 0 && rows > 0 && secs < kThm1Seconds, d.str()};
}

ExperimentConfig campaign_config(const std::string& name, std::size_t n) {
  ExperimentConfig cfg;
  cfg.model_path = kData + "/" + name;
  auto file = io::load_model(cfg.model_path);
  cfg.model = file.model;
  cfg.layout = file.layout;
  cfg.n = n;
  cfg.trials = kTrials;
  cfg.master_seed = 1;
  return cfg;
}

double mean_accuracy(const CampaignResult& r) { return r.summary["mean_accuracy"].get<double>(); }

CampaignResult correlated_ten;

Outcome separation() {
  const auto t0 = std::chrono::steady_clock::now();
  correlated_ten = run_campaign(campaign_config("sbm2_copy.json", 10));
  const auto independent = run_campaign(campaign_config("sbm2_independent.json", 10));
  const auto eight = run_campaign(campaign_config("sbm2_copy.json", 8));
  const auto twelve = run_campaign(campaign_config("sbm2_copy.json", 12));
  const double secs = seconds_since(t0);
  const double gap = mean_accuracy(correlated_ten) - mean_accuracy(independent);
  std::ostringstream d;
  d << "eps " << correlated_ten.summary["eps"].get<double>() << ", copy " << mean_accuracy(correlated_ten)
    << " - independent " << mean_accuracy(independent) << " = " << gap << " (need >= " << kSeparation
    << "); n=12 " << mean_accuracy(twelve) << " vs n=8 " << mean_accuracy(eight) << ", " << secs << " s";
  return {gap >= kSeparation && mean_accuracy(twelve) >= mean_accuracy(eight) && secs < kMatchingSeconds,
          d.str()};
}

Outcome inclusion() {
  const double frac = correlated_ten.summary["truth_in_set_fraction"].get<double>();
  std::ostringstream d;
  d << "truth in set in a fraction " << frac << " of " << kTrials << " correlated trials (need >= " << kInclusion << ")";
  return {frac >= kInclusion, d.str()};
}

Outcome structure() {
  std::size_t instances = 0;
  std::size_t bad = 0;
  const auto check = [&](const PairedEdgeModel& model, const std::vector<std::size_t>& sizes, double eps,
                         bool single) {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      const auto layout = CommunityLayout::from_sizes(sizes);
      const auto pair = sample_pair(model, layout, seed);
      MatcherOptions options;
      options.eps = eps;
      const auto csi = ambiguity_set_csi(anonymize(pair, MatchMode::csi, seed + 50).instance, options);
      const auto wsi = ambiguity_set_wsi(anonymize(pair, MatchMode::wsi, seed + 50).instance, options);
      ++instances;
      bad += csi.subset_of(wsi) ? 0 : 1;
      if (single) bad += wsi.subset_of(csi) ? 0 : 1;
    }
  };
  const auto sbm = PairedEdgeModel::assortative(2, JointPmf::dsbs(0.1), JointPmf::dsbs(0.3));
  for (const double eps : {0.1, 0.3}) {
    check(sbm, {2, 2}, eps, false);
    check(sbm, {3, 3}, eps, false);
    check(sbm, {2, 4}, eps, false);
    check(PairedEdgeModel::homogeneous(1, JointPmf::dsbs(0.1)), {6}, eps, true);
  }

  std::size_t verdicts = 0;
  for (const auto* name : {"sbm2_copy.json", "sbm2_independent.json", "dsbs_0.1.json"}) {
    const auto file = io::load_model(kData + "/" + name);
    for (const std::size_t n : {10, 100, 1000}) {
      const auto a = achievability_check(file.model, file.layout, n, 0.05, 1.0 / n, MatchMode::csi);
      const auto b = achievability_check(file.model, file.layout, n, 0.05, 1.0 / n, MatchMode::wsi);
      ++verdicts;
      bad += a.satisfied == b.satisfied && a.margin == b.margin ? 0 : 1;
    }
  }
  std::ostringstream d;
  d << instances << " instances, " << verdicts << " region pairs, " << bad << " mismatches";
  return {bad == 0, d.str()};
}

Outcome numerics() {
  const auto copy = JointPmf::copy(std::vector<double>{0.5, 0.5});
  const auto at10 = er_achievability(copy, 10, 0.05);
  const auto at1000 = er_achievability(copy, 1000, 0.05);
  const auto& first = at10.points.front();
  const auto indep = io::load_model(kData + "/independent_uniform.json");
  bool indep_ok = true;
  for (std::size_t n = 2; n <= 64; ++n) {
    indep_ok = indep_ok && converse_check(indep.model, scale_layout(indep.layout, n), n).impossible &&
               er_converse(indep.model.block(0, 0), n).impossible;
  }
  indep_ok = indep_ok && converse_check(indep.model, scale_layout(indep.layout, 1000), 1000).impossible;
  const auto half = er_converse(JointPmf::dsbs(kHalfBitCrossover), 1000);

  const bool verdicts = !at10.satisfied && at1000.satisfied && indep_ok && !half.impossible;
  const bool values = first.alpha == 0.0 && std::abs(first.lhs - kLhsAtTen) <= kValueTolerance &&
                      std::abs(first.rhs - 1.0) <= kValueTolerance &&
                      std::abs(half.lhs - kConverseLhsAtThousand) <= kValueTolerance &&
                      std::abs(half.rhs - 0.5) <= kValueTolerance;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "n=10 lhs %.12f rhs %.12f sat=%d; n=1000 sat=%d; independent impossible=%d; "
                "I=0.5 lhs %.12f rhs %.12f impossible=%d",
                first.lhs, first.rhs, at10.satisfied, at1000.satisfied, indep_ok, half.lhs, half.rhs,
                half.impossible);
  return {verdicts && values, buf};
}

Outcome counting() {
  std::vector<int> v{0, 1, 2, 3};
  std::uint64_t none_fixed = 0;
  do {
    bool fixed = false;
    for (int k = 0; k < 4; ++k) fixed = fixed || v[k] == k;
    none_fixed += fixed ? 0 : 1;
  } while (std::next_permutation(v.begin(), v.end()));
  bool sums = true;
  for (unsigned n = 0; n <= 8; ++n) {
    std::uint64_t total = 0;
    for (unsigned m = 0; m <= n; ++m) total += oracle::binomial(n, m) * oracle::derangement_count(n - m);
    sums = sums && total == oracle::factorial(n);
  }
  std::ostringstream d;
  d << "!4 by enumeration = " << none_fixed << ", formula = " << oracle::derangement_count(4)
    << ", binomial sums " << (sums ? "match" : "differ") << " for n <= 8";
  return {none_fixed == 9 && oracle::derangement_count(4) == 9 && sums, d.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const auto dir = fs::temp_directory_path() / "typmatch_acceptance";
  fs::create_directories(dir);
  const std::string cli = TYPMATCH_CLI;
  const std::string copy = kData + "/sbm2_copy.json";
  const auto pair = (dir / "pair.json").string();
  if (std::system((cli + " --seed 4 --out " + pair + " generate --model " + copy + " --n 8").c_str()) != 0) {
    return {false, "could not generate the input pair"};
  }
  const std::vector<std::string> commands{
      "--seed 4 generate --model " + copy + " --n 8",
      "--seed 4 match --input " + pair,
      "--seed 4 match --mode wsi --input " + pair,
      "region --model " + copy + " --n 100",
      "converse --model " + copy + " --n 100",
      "verify --check prop1 --n 4 --model " + kData + "/dsbs_0.1.json",
      "--seed 9 campaign --model " + copy + " --n 8 --trials 20",
      "--seed 9 --threads 3 campaign --model " + copy + " --n 8 --trials 20",
      "scan --model " + copy + " --n-list 10,100,1000"};
  std::size_t differ = 0;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    std::string outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      const auto path = dir / ("out" + std::to_string(k) + "_" + std::to_string(rep));
      const int status = std::system((cli + " " + commands[k] + " > " + path.string() + " 2>&1").c_str());
      outputs[rep] = status == 0 ? slurp(path) : std::string();
    }
    differ += outputs[0] == outputs[1] && !outputs[0].empty() ? 0 : 1;
  }
  fs::remove_all(dir);
  std::ostringstream d;
  d << commands.size() << " invocations run twice, " << differ << " differ";
  return {differ == 0, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 permutation invariance exact", prop1},
      {"2 fixed-point bound holds", thm1},
      {"3 matching separation", separation},
      {"4 true labeling inclusion", inclusion},
      {"5 CSI within WSI", structure},
      {"6 region numerics", numerics},
      {"7 counting identities", counting},
      {"8 CLI determinism", determinism}};
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s criterion %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
