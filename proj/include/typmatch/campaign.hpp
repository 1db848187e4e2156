#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "typmatch/graphgen.hpp"
#include "typmatch/matcher.hpp"
#include "typmatch/model.hpp"

namespace typmatch {

struct ExperimentConfig {
  std::string model_path;
  PairedEdgeModel model;
  /// Layout of the model file; rescaled when `n` differs from its total.
  CommunityLayout layout;
  std::size_t n = 0;
  MatchMode mode = MatchMode::csi;
  /// Fixed tolerance; when empty, kappa * log2(n) / n.
  std::optional<double> eps;
  double kappa = 2.0;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  bool community_preserving = true;
  std::uint64_t size_guard = kDefaultSizeGuard;
  std::string output_path;
};

/// Throws ValidationError on a config that cannot run.
void validate_config(const ExperimentConfig& cfg);

double effective_eps(const ExperimentConfig& cfg);

/// Canonical JSON of the fields that determine results.
nlohmann::json config_json(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  std::size_t set_size = 0;
  double eps = 0.0;
  double runtime_ms = 0.0;
  MatchMode mode = MatchMode::csi;
  bool truth_in_set = false;
  /// Empty on success; otherwise the error class that ended the trial.
  std::string error;
};

/// Runs one trial end to end from its derived seed.
TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t trial);

struct CampaignResult {
  std::vector<TrialRecord> records;
  nlohmann::json summary;
};

/// Trials run concurrently; trial i draws everything from
/// derive_seed(master_seed, i).
CampaignResult run_campaign(const ExperimentConfig& cfg);

/// Header line with tool version and config hash, then one row per trial.
/// Runtime is a column only when `timings` is set, so default output is
/// reproducible byte for byte.
std::string records_csv(const std::vector<TrialRecord>& records, const std::string& hash,
                        bool timings);

/// Linear-interpolation quantile of unsorted values.
double quantile(std::vector<double> values, double q);

struct ScanRow {
  std::size_t n = 0;
  bool achievable = false;
  double achievability_margin = 0.0;
  double worst_alpha = 0.0;
  bool impossible = false;
  double converse_lhs = 0.0;
  double converse_rhs = 0.0;
};

/// A non-positive `grid` means step 1 / n for each row.
std::vector<ScanRow> scan_region(const PairedEdgeModel& model, const CommunityLayout& layout,
                                 const std::vector<std::size_t>& ns, double delta, double grid);

std::string scan_csv(const std::vector<ScanRow>& rows, const std::string& hash);

/// Shortest round-trip decimal form, so text output is stable.
std::string format_double(double value);

}  // namespace typmatch
