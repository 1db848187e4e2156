#include "typmatch/campaign.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "typmatch/bounds.hpp"
#include "typmatch/error.hpp"
#include "typmatch/io.hpp"
#include "typmatch/rng.hpp"
#include "typmatch/typicality.hpp"

namespace typmatch {

using nlohmann::json;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw ValidationError("trial count must be at least 1");
  if (!cfg.model_path.empty() && !std::filesystem::exists(cfg.model_path)) {
    throw ValidationError("model file does not exist: " + cfg.model_path);
  }
  if (cfg.n < 2) throw ValidationError("n must be at least 2");
  if (cfg.eps && !(*cfg.eps >= 0.0)) throw ValidationError("eps must be non-negative");
  if (!(cfg.kappa > 0.0)) throw ValidationError("kappa must be positive");
  const auto layout = scale_layout(cfg.layout, cfg.n);
  const auto report = validate_model(cfg.model, layout);
  if (!report.ok()) throw ValidationError("invalid model:\n" + report.describe());
}

double effective_eps(const ExperimentConfig& cfg) {
  return cfg.eps ? *cfg.eps : default_epsilon(cfg.n, cfg.kappa);
}

json config_json(const ExperimentConfig& cfg) {
  json doc = {{"model", io::model_to_json(cfg.model, cfg.layout)},
              {"n", cfg.n},
              {"mode", to_string(cfg.mode)},
              {"kappa", cfg.kappa},
              {"trials", cfg.trials},
              {"master_seed", cfg.master_seed},
              {"community_preserving", cfg.community_preserving},
              {"size_guard", cfg.size_guard}};
  doc["eps"] = cfg.eps ? json(*cfg.eps) : json("auto");
  return doc;
}

std::string config_hash(const ExperimentConfig& cfg) {
  return io::fnv1a_hex(config_json(cfg).dump());
}

TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t trial) {
  TrialRecord record;
  record.trial = trial;
  record.seed = derive_seed(cfg.master_seed, trial);
  record.mode = cfg.mode;
  record.eps = effective_eps(cfg);

  MatcherOptions options;
  options.eps = record.eps;
  options.community_preserving = cfg.community_preserving;
  options.size_guard = cfg.size_guard;
  options.parallel = false;

  const auto start = std::chrono::steady_clock::now();
  try {
    const auto layout = scale_layout(cfg.layout, cfg.n);
    const auto pair = sample_pair(cfg.model, layout, derive_seed(record.seed, 1));
    const auto anonymized = anonymize(pair, cfg.mode, derive_seed(record.seed, 2));
    const auto set = cfg.mode == MatchMode::csi ? ambiguity_set_csi(anonymized.instance, options)
                                                : ambiguity_set_wsi(anonymized.instance, options);
    record.set_size = set.size();
    record.truth_in_set = set.contains(anonymized.truth.reveal());
    const auto hat = select_labeling(set, derive_seed(record.seed, 3));
    record.accuracy = anonymized.truth.score(hat);
  } catch (const EmptyAmbiguitySetError&) {
    record.error = "empty_ambiguity_set";
  } catch (const SizeGuardError&) {
    record.error = "size_guard";
  } catch (const ValidationError&) {
    record.error = "validation";
  } catch (const Error&) {
    record.error = "error";
  }
  record.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return record;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

CampaignResult run_campaign(const ExperimentConfig& cfg) {
  validate_config(cfg);
  CampaignResult result;
  result.records.resize(cfg.trials);
  const auto trials = static_cast<std::int64_t>(cfg.trials);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < trials; ++t) {
    result.records[static_cast<std::size_t>(t)] = run_trial(cfg, static_cast<std::size_t>(t));
  }

  std::vector<double> accuracy;
  std::size_t in_set = 0;
  std::size_t empty = 0;
  std::size_t failed = 0;
  for (const auto& r : result.records) {
    accuracy.push_back(r.accuracy);
    in_set += r.truth_in_set ? 1 : 0;
    empty += r.error == "empty_ambiguity_set" ? 1 : 0;
    failed += !r.error.empty() && r.error != "empty_ambiguity_set" ? 1 : 0;
  }
  double mean = 0.0;
  for (const double a : accuracy) mean += a;
  mean /= static_cast<double>(accuracy.size());
  const double count = static_cast<double>(cfg.trials);

  result.summary = {{"tool", std::string(io::kToolName) + " " + io::kToolVersion},
                    {"config_hash", config_hash(cfg)},
                    {"config", config_json(cfg)},
                    {"eps", effective_eps(cfg)},
                    {"trials", cfg.trials},
                    {"mean_accuracy", mean},
                    {"quantiles",
                     {{"q10", quantile(accuracy, 0.1)},
                      {"q50", quantile(accuracy, 0.5)},
                      {"q90", quantile(accuracy, 0.9)}}},
                    {"truth_in_set_fraction", static_cast<double>(in_set) / count},
                    {"empty_set_fraction", static_cast<double>(empty) / count},
                    {"failed_trials", failed}};
  return result;
}

std::string records_csv(const std::vector<TrialRecord>& records, const std::string& hash,
                        bool timings) {
  std::ostringstream out;
  out << "# " << io::kToolName << ' ' << io::kToolVersion << " config=" << hash << '\n';
  out << "trial,seed,mode,eps,accuracy,set_size,truth_in_set,error";
  if (timings) out << ",runtime_ms";
  out << '\n';
  for (const auto& r : records) {
    out << r.trial << ',' << r.seed << ',' << to_string(r.mode) << ',' << format_double(r.eps)
        << ',' << format_double(r.accuracy) << ',' << r.set_size << ','
        << (r.truth_in_set ? 1 : 0) << ',' << r.error;
    if (timings) out << ',' << format_double(r.runtime_ms);
    out << '\n';
  }
  return out.str();
}

std::vector<ScanRow> scan_region(const PairedEdgeModel& model, const CommunityLayout& layout,
                                 const std::vector<std::size_t>& ns, double delta, double grid) {
  std::vector<ScanRow> rows;
  for (const auto n : ns) {
    ScanRow row;
    row.n = n;
    const double step = grid > 0.0 ? grid : 1.0 / static_cast<double>(n);
    const auto verdict = achievability_check(model, layout, n, delta, step);
    row.achievable = verdict.satisfied;
    row.achievability_margin = verdict.margin;
    row.worst_alpha = verdict.worst_alpha;
    const auto converse = converse_check(model, layout, n);
    row.impossible = converse.impossible;
    row.converse_lhs = converse.lhs;
    row.converse_rhs = converse.rhs;
    rows.push_back(row);
  }
  return rows;
}

std::string scan_csv(const std::vector<ScanRow>& rows, const std::string& hash) {
  std::ostringstream out;
  out << "# " << io::kToolName << ' ' << io::kToolVersion << " config=" << hash << '\n';
  out << "n,achievable,achievability_margin,worst_alpha,impossible,converse_lhs,converse_rhs\n";
  for (const auto& r : rows) {
    out << r.n << ',' << (r.achievable ? 1 : 0) << ',' << format_double(r.achievability_margin)
        << ',' << format_double(r.worst_alpha) << ',' << (r.impossible ? 1 : 0) << ','
        << format_double(r.converse_lhs) << ',' << format_double(r.converse_rhs) << '\n';
  }
  return out.str();
}

}  // namespace typmatch
