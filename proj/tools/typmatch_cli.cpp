#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <omp.h>

#include "typmatch/bounds.hpp"
#include "typmatch/campaign.hpp"
#include "typmatch/error.hpp"
#include "typmatch/graphgen.hpp"
#include "typmatch/io.hpp"
#include "typmatch/matcher.hpp"
#include "typmatch/rng.hpp"
#include "typmatch/typicality.hpp"
#include "typmatch/verify.hpp"

using namespace typmatch;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::string out = "-";
  int threads = 0;
  bool timings = false;
};

std::string tool_string() { return std::string(io::kToolName) + " " + io::kToolVersion; }

std::string stamp(json args) { return io::fnv1a_hex(args.dump()); }

void emit_json(const Globals& g, const json& doc) { io::write_text(g.out, doc.dump() + "\n"); }

std::optional<double> parse_eps(const std::string& text) {
  if (text == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !(v >= 0.0)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("--eps expects a non-negative real or \"auto\", got " + text);
  }
}

io::ModelFile model_for(const std::string& path, std::size_t n) {
  auto file = io::load_model(path);
  if (n != 0) file.layout = scale_layout(file.layout, n);
  return file;
}

// generate --model m.json [--n N]
struct GenerateArgs {
  std::string model;
  std::size_t n = 0;
};

void run_generate(const Globals& g, const GenerateArgs& a) {
  const auto file = model_for(a.model, a.n);
  const auto pair = sample_pair(file.model, file.layout, g.seed);
  auto doc = io::pair_to_json(pair);
  doc["config_hash"] = stamp({{"cmd", "generate"},
                              {"model", io::model_to_json(file.model, file.layout)},
                              {"seed", g.seed}});
  emit_json(g, doc);
}

// match --input pair.json --mode csi|wsi --eps real|auto
struct MatchArgs {
  std::string input;
  std::string mode = "csi";
  std::string eps = "auto";
  double kappa = 2.0;
  bool unrestricted = false;
  bool full_sweep = false;
  std::uint64_t size_guard = kDefaultSizeGuard;
};

void run_match(const Globals& g, const MatchArgs& a) {
  const auto mode = parse_match_mode(a.mode);
  const auto pair = io::load_pair(a.input);
  MatcherOptions options;
  const auto fixed = parse_eps(a.eps);
  options.eps = fixed ? *fixed : default_epsilon(pair.first.n(), a.kappa);
  options.community_preserving = !a.unrestricted;
  options.full_assignment_sweep = a.full_sweep;
  options.size_guard = a.size_guard;
  const auto anonymized = anonymize(pair, mode, derive_seed(g.seed, 2));
  const auto result = run_matching(anonymized, mode, options, derive_seed(g.seed, 3));

  json doc = {{"tool", tool_string()},
              {"config_hash", stamp({{"cmd", "match"},
                                     {"input", io::pair_to_json(pair)},
                                     {"mode", a.mode},
                                     {"eps", options.eps},
                                     {"preserving", options.community_preserving},
                                     {"full_sweep", a.full_sweep},
                                     {"seed", g.seed}})},
              {"mode", to_string(mode)},
              {"seed", g.seed},
              {"eps", options.eps},
              {"labeling", io::labeling_to_json(result.labeling)},
              {"accuracy", result.accuracy},
              {"set_size", result.diagnostics.set_size},
              {"candidate_space", result.diagnostics.candidate_space},
              {"community_preserving", options.community_preserving},
              {"truth_in_set", result.diagnostics.truth_in_set}};
  if (g.timings) doc["timings"] = {{"wall_ms", result.diagnostics.wall_ms}};
  emit_json(g, doc);
}

// region --model m.json --n N --delta d --grid s
struct RegionArgs {
  std::string model;
  std::size_t n = 0;
  double delta = 0.05;
  double grid = 0.0;
  std::string mode = "csi";
};

void run_region(const Globals& g, const RegionArgs& a) {
  const auto file = io::load_model(a.model);
  const auto mode = parse_match_mode(a.mode);
  const double step = a.grid > 0.0 ? a.grid : 1.0 / static_cast<double>(a.n);
  const auto verdict = achievability_check(file.model, file.layout, a.n, a.delta, step, mode);
  std::ostringstream out;
  out << "# " << tool_string() << " config="
      << stamp({{"cmd", "region"},
                {"model", io::model_to_json(file.model, file.layout)},
                {"n", a.n},
                {"delta", a.delta},
                {"grid", a.grid}})
      << '\n';
  out << "alpha,lhs,rhs,margin\n";
  for (const auto& p : verdict.points) {
    out << format_double(p.alpha) << ',' << format_double(p.lhs) << ',' << format_double(p.rhs)
        << ',' << format_double(p.margin) << '\n';
  }
  out << "# verdict satisfied=" << (verdict.satisfied ? 1 : 0)
      << " margin=" << format_double(verdict.margin)
      << " worst_alpha=" << format_double(verdict.worst_alpha) << '\n';
  io::write_text(g.out, out.str());
}

// converse --model m.json --n N
struct ConverseArgs {
  std::string model;
  std::size_t n = 0;
};

void run_converse(const Globals& g, const ConverseArgs& a) {
  const auto file = io::load_model(a.model);
  const auto verdict = converse_check(file.model, file.layout, a.n);
  emit_json(g, {{"tool", tool_string()},
                {"config_hash", stamp({{"cmd", "converse"},
                                       {"model", io::model_to_json(file.model, file.layout)},
                                       {"n", a.n}})},
                {"n", a.n},
                {"lhs", verdict.lhs},
                {"rhs", verdict.rhs},
                {"impossible", verdict.impossible}});
}

// verify --check prop1|thm1 --n N --eps e --model m.json
struct VerifyArgs {
  std::string check;
  std::size_t n = 0;
  double eps = 0.25;
  std::string model;
};

bool run_verify(const Globals& g, const VerifyArgs& a) {
  const auto file = io::load_model(a.model);
  std::ostringstream out;
  out << "# " << tool_string() << " config="
      << stamp({{"cmd", "verify"},
                {"check", a.check},
                {"model", io::model_to_json(file.model, file.layout)},
                {"n", a.n},
                {"eps", a.eps},
                {"seed", g.seed}})
      << '\n';
  std::size_t passed = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < file.model.c(); ++i) {
    for (std::size_t j = i; j < file.model.c(); ++j) {
      const auto block = file.model.block(i, j);
      const std::string name = "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
      if (a.check == "prop1") {
        const auto rows = oracle::verify_prop1(oracle::RationalPmf::from(block), a.n,
                                               oracle::exact(a.eps), derive_seed(g.seed, i, j));
        for (const auto& r : rows) {
          const bool ok = r.invariance_holds && r.standard_holds;
          out << (ok ? "PASS" : "FAIL") << " block=" << name << ' ' << r.params.describe()
              << " identity=" << format_double(r.identity.convert_to<double>())
              << " joint=" << format_double(r.jointly_permuted.convert_to<double>())
              << " standard=" << format_double(r.standard.convert_to<double>())
              << " arbitrary=" << format_double(r.arbitrary.convert_to<double>()) << '\n';
          passed += ok ? 1 : 0;
          ++total;
        }
      } else if (a.check == "thm1") {
        std::vector<std::size_t> counts(a.n + 1);
        for (std::size_t m = 0; m <= a.n; ++m) counts[m] = m;
        for (const auto& r : oracle::verify_thm1(block, a.n, a.eps, counts)) {
          out << (r.holds ? "PASS" : "FAIL") << " block=" << name << ' ' << r.params.describe()
              << " alpha=" << format_double(r.alpha)
              << " probability=" << format_double(r.probability)
              << " bound_log2=" << format_double(r.bound_log2) << '\n';
          passed += r.holds ? 1 : 0;
          ++total;
        }
      } else {
        throw ValidationError("--check expects prop1 or thm1");
      }
    }
  }
  out << "# passed " << passed << '/' << total << '\n';
  io::write_text(g.out, out.str());
  return passed == total;
}

// campaign --model m.json --n N --mode csi|wsi --trials T
struct CampaignArgs {
  std::string model;
  std::size_t n = 0;
  std::string mode = "csi";
  std::string eps = "auto";
  double kappa = 2.0;
  std::size_t trials = 10;
  bool unrestricted = false;
  std::uint64_t size_guard = kDefaultSizeGuard;
  std::string summary;
};

void run_campaign_cmd(const Globals& g, const CampaignArgs& a) {
  const auto file = io::load_model(a.model);
  ExperimentConfig cfg;
  cfg.model_path = a.model;
  cfg.model = file.model;
  cfg.layout = file.layout;
  cfg.n = a.n == 0 ? file.layout.n() : a.n;
  cfg.mode = parse_match_mode(a.mode);
  cfg.eps = parse_eps(a.eps);
  cfg.kappa = a.kappa;
  cfg.trials = a.trials;
  cfg.master_seed = g.seed;
  cfg.community_preserving = !a.unrestricted;
  cfg.size_guard = a.size_guard;
  cfg.output_path = g.out;
  const auto result = run_campaign(cfg);
  const auto csv = records_csv(result.records, config_hash(cfg), g.timings);
  const auto summary = result.summary.dump() + "\n";
  std::string summary_path = a.summary;
  if (summary_path.empty() && g.out != "-") summary_path = g.out + ".summary.json";
  if (summary_path.empty()) {
    io::write_text(g.out, csv + "# summary " + summary);
  } else {
    io::write_text(g.out, csv);
    io::write_text(summary_path, summary);
  }
}

// scan --model m.json --n-list 10,100,1000
struct ScanArgs {
  std::string model;
  std::vector<std::size_t> ns;
  double delta = 0.05;
  double grid = 0.0;
};

void run_scan(const Globals& g, const ScanArgs& a) {
  const auto file = io::load_model(a.model);
  const auto rows = scan_region(file.model, file.layout, a.ns, a.delta, a.grid);
  const auto hash = stamp({{"cmd", "scan"},
                           {"model", io::model_to_json(file.model, file.layout)},
                           {"ns", a.ns},
                           {"delta", a.delta},
                           {"grid", a.grid}});
  io::write_text(g.out, scan_csv(rows, hash));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Typicality matching of correlated community-structured graphs"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--out", g.out, "Output file, - for stdout");
  app.add_option("--threads", g.threads, "OpenMP threads, 0 for the runtime default")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--timings", g.timings, "Include wall-clock timings (not reproducible)");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Sample a correlated graph pair");
  generate->add_option("--model", gen.model)->required()->check(CLI::ExistingFile);
  generate->add_option("--n", gen.n, "Vertex count; rescales the model's community sizes");

  MatchArgs mat;
  auto* match = app.add_subcommand("match", "Anonymize the second graph and match it");
  match->add_option("--input", mat.input)->required()->check(CLI::ExistingFile);
  match->add_option("--mode", mat.mode)->check(CLI::IsMember({"csi", "wsi"}));
  match->add_option("--eps", mat.eps, "Tolerance or auto");
  match->add_option("--kappa", mat.kappa, "Schedule constant for --eps auto");
  match->add_flag("--unrestricted", mat.unrestricted, "CSI over all n! labelings");
  match->add_flag("--full-sweep", mat.full_sweep, "WSI over every assignment in [c]^n");
  match->add_option("--size-guard", mat.size_guard);

  RegionArgs reg;
  auto* region = app.add_subcommand("region", "Achievability condition on an alpha grid");
  region->add_option("--model", reg.model)->required()->check(CLI::ExistingFile);
  region->add_option("--n", reg.n)->required();
  region->add_option("--delta", reg.delta);
  region->add_option("--grid", reg.grid, "Grid step, 0 for 1/n");
  region->add_option("--mode", reg.mode)->check(CLI::IsMember({"csi", "wsi"}));

  ConverseArgs con;
  auto* converse = app.add_subcommand("converse", "Converse condition");
  converse->add_option("--model", con.model)->required()->check(CLI::ExistingFile);
  converse->add_option("--n", con.n)->required();

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Exact oracle checks");
  verify->add_option("--check", ver.check)->required()->check(CLI::IsMember({"prop1", "thm1"}));
  verify->add_option("--n", ver.n)->required();
  verify->add_option("--eps", ver.eps);
  verify->add_option("--model", ver.model)->required()->check(CLI::ExistingFile);

  CampaignArgs camp;
  auto* campaign = app.add_subcommand("campaign", "Seeded matching trials");
  campaign->add_option("--model", camp.model)->required()->check(CLI::ExistingFile);
  campaign->add_option("--n", camp.n);
  campaign->add_option("--mode", camp.mode)->check(CLI::IsMember({"csi", "wsi"}));
  campaign->add_option("--eps", camp.eps);
  campaign->add_option("--kappa", camp.kappa);
  campaign->add_option("--trials", camp.trials);
  campaign->add_flag("--unrestricted", camp.unrestricted);
  campaign->add_option("--size-guard", camp.size_guard);
  campaign->add_option("--summary", camp.summary, "Summary JSON path");

  ScanArgs sc;
  auto* scan = app.add_subcommand("scan", "Achievability and converse verdicts over n");
  scan->add_option("--model", sc.model)->required()->check(CLI::ExistingFile);
  scan->add_option("--n-list", sc.ns)->required()->delimiter(',');
  scan->add_option("--delta", sc.delta);
  scan->add_option("--grid", sc.grid, "Grid step, 0 for 1/n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (g.threads > 0) omp_set_num_threads(g.threads);
  try {
    if (*generate) run_generate(g, gen);
    if (*match) run_match(g, mat);
    if (*region) run_region(g, reg);
    if (*converse) run_converse(g, con);
    if (*verify && !run_verify(g, ver)) return 1;
    if (*campaign) run_campaign_cmd(g, camp);
    if (*scan) run_scan(g, sc);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const SizeGuardError& e) {
    std::cerr << "size guard: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
