#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "typmatch/campaign.hpp"
#include "typmatch/error.hpp"
#include "typmatch/io.hpp"

using namespace typmatch;
namespace fs = std::filesystem;

namespace {

const std::string kData = TYPMATCH_DATA_DIR;

ExperimentConfig config_for(const std::string& name, std::size_t n, std::size_t trials) {
  ExperimentConfig cfg;
  cfg.model_path = kData + "/" + name;
  auto file = io::load_model(cfg.model_path);
  cfg.model = file.model;
  cfg.layout = file.layout;
  cfg.n = n;
  cfg.trials = trials;
  cfg.master_seed = 7;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string(TYPMATCH_CLI) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("model files round trip") {
  for (const auto* name : {"copy_uniform.json", "dsbs_0.1.json", "sbm2_copy.json", "sbm2_independent.json"}) {
    const auto file = io::load_model(kData + "/" + name);
    const auto back = io::model_from_json(io::model_to_json(file.model, file.layout));
    CHECK(back.model == file.model);
    CHECK(back.layout == file.layout);
  }
}

TEST_CASE("pair files round trip") {
  const auto file = io::load_model(kData + "/sbm2_copy.json");
  const auto pair = sample_pair(file.model, file.layout, 3);
  const auto doc = io::pair_to_json(pair);
  const auto back = io::pair_from_json(nlohmann::json::parse(doc.dump()));
  CHECK(back.seed == pair.seed);
  CHECK(back.model == pair.model);
  CHECK(back.first.labeling() == pair.first.labeling());
  CHECK(back.second.labeling() == pair.second.labeling());
  CHECK(back.first.by_label() == pair.first.by_label());
  CHECK(back.second.by_label() == pair.second.by_label());
  CHECK(io::pair_to_json(back).dump() == doc.dump());
}

TEST_CASE("invalid model files list their violations") {
  nlohmann::json doc = {{"l", 2},
                        {"communities", {2}},
                        {"joint", {{{{0.5, 0.3}, {0.1, 0.3}}}}}};
  try {
    io::model_from_json(doc);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("invalid model") != std::string::npos);
  }
  doc["joint"] = {{{0.5, 0.5}}};
  CHECK_THROWS_AS(io::model_from_json(doc), ValidationError);
  doc.erase("joint");
  CHECK_THROWS_AS(io::model_from_json(doc), ValidationError);
  CHECK_THROWS_AS(io::read_json(kData + "/missing.json"), ValidationError);

  auto cfg = config_for("copy_uniform.json", 10, 1);
  cfg.trials = 0;
  CHECK_THROWS_AS(run_campaign(cfg), ValidationError);
  cfg.trials = 1;
  cfg.eps = -0.5;
  CHECK_THROWS_AS(run_campaign(cfg), ValidationError);
}

TEST_CASE("campaigns are deterministic") {
  const auto cfg = config_for("sbm2_copy.json", 8, 12);
  const auto a = run_campaign(cfg);
  const auto b = run_campaign(cfg);
  const auto hash = config_hash(cfg);
  CHECK(records_csv(a.records, hash, false) == records_csv(b.records, hash, false));
  CHECK(a.summary.dump() == b.summary.dump());
  CHECK(records_csv(a.records, hash, false).rfind("# typmatch 0.1.0 config=" + hash, 0) == 0);

  auto other = cfg;
  other.master_seed = 8;
  CHECK(config_hash(other) != hash);
}

TEST_CASE("single-community campaigns agree across modes") {
  auto cfg = config_for("copy_uniform.json", 6, 10);
  cfg.eps = 0.3;
  const auto csi = run_campaign(cfg);
  cfg.mode = MatchMode::wsi;
  const auto wsi = run_campaign(cfg);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    CHECK(csi.records[t].set_size == wsi.records[t].set_size);
    CHECK(csi.records[t].accuracy == wsi.records[t].accuracy);
    CHECK(csi.records[t].truth_in_set == wsi.records[t].truth_in_set);
  }
}

TEST_CASE("copied graphs always keep the truth") {
  const auto result = run_campaign(config_for("copy_uniform.json", 8, 10));
  for (const auto& r : result.records) {
    CHECK(r.error.empty());
    CHECK(r.set_size >= 1);
    CHECK(r.truth_in_set);
  }
  CHECK(result.summary["truth_in_set_fraction"] == 1.0);
  CHECK(result.summary["failed_trials"] == 0);
}

TEST_CASE("quantiles") {
  CHECK(quantile({3.0, 1.0, 2.0}, 0.5) == 2.0);
  CHECK(quantile({0.0, 1.0}, 0.1) == doctest::Approx(0.1));
  CHECK(quantile({4.0}, 0.9) == 4.0);
}

TEST_CASE("scan verdicts") {
  const auto ind = io::load_model(kData + "/independent_uniform.json");
  for (const auto& row : scan_region(ind.model, ind.layout, {10, 100, 1000}, 0.05, 0.0)) {
    CHECK_FALSE(row.achievable);
    CHECK(row.impossible);
  }
  const auto copy = io::load_model(kData + "/copy_uniform.json");
  const auto rows = scan_region(copy.model, copy.layout, {10, 100, 1000}, 0.05, 0.0);
  CHECK(rows.back().achievable);
  CHECK_FALSE(rows.back().impossible);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK(rows[k].achievability_margin >= rows[k - 1].achievability_margin);
  }
}

TEST_CASE("command line exit codes and output") {
  const auto dir = fs::temp_directory_path() / "typmatch_cli_test";
  fs::create_directories(dir);
  const auto log = dir / "log.txt";
  const std::string model = kData + "/sbm2_copy.json";

  CHECK(run_cli("--seed 5 generate --model " + model + " --n 8", dir / "pair.json") == 0);
  CHECK(run_cli("--seed 5 generate --model " + model + " --n 8", dir / "pair2.json") == 0);
  CHECK(slurp(dir / "pair.json") == slurp(dir / "pair2.json"));
  CHECK(run_cli("match --input " + (dir / "pair.json").string(), dir / "match.json") == 0);
  CHECK(nlohmann::json::parse(slurp(dir / "match.json")).contains("config_hash"));

  CHECK(run_cli("bogus", log) == 2);
  CHECK(run_cli("match --input " + (dir / "pair.json").string() + " --eps nope", log) == 2);
  CHECK(run_cli("campaign --model " + model + " --n 8 --trials 0", log) == 2);
  CHECK(run_cli("--seed 5 generate --model " + model + " --n 10", dir / "pair10.json") == 0);
  CHECK(run_cli("match --mode wsi --size-guard 1000 --input " + (dir / "pair10.json").string(), log) == 3);
  CHECK(run_cli("campaign --model " + model + " --n 10 --mode wsi --trials 1 --size-guard 1000", log) == 0);
  CHECK(slurp(log).find("size_guard") != std::string::npos);
  CHECK(run_cli("converse --model " + model + " --n 10", log) == 0);
  CHECK(run_cli("verify --check prop1 --n 4 --model " + kData + "/dsbs_0.1.json", log) == 0);

  const std::string camp = "--seed 3 campaign --model " + model + " --n 8 --trials 6";
  CHECK(run_cli(camp, dir / "c1.csv") == 0);
  CHECK(run_cli(camp, dir / "c2.csv") == 0);
  CHECK(slurp(dir / "c1.csv") == slurp(dir / "c2.csv"));
  CHECK(run_cli("--timings " + camp, dir / "c3.csv") == 0);
  CHECK(slurp(dir / "c3.csv").find("runtime_ms") != std::string::npos);
  fs::remove_all(dir);
}
