#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "typmatch/graphgen.hpp"
#include "typmatch/model.hpp"
#include "typmatch/permutation.hpp"

namespace typmatch::io {

inline constexpr const char* kToolName = "typmatch";
inline constexpr const char* kToolVersion = "0.1.0";

struct ModelFile {
  PairedEdgeModel model;
  CommunityLayout layout;
};

/// {"l": int, "communities": [sizes], "joint": [c][c][l][l]}. Throws
/// ValidationError listing every violation.
ModelFile model_from_json(const nlohmann::json& doc);
nlohmann::json model_to_json(const PairedEdgeModel& model, const CommunityLayout& layout);
ModelFile load_model(const std::filesystem::path& path);

nlohmann::json pair_to_json(const CorrelatedPair& pair);
CorrelatedPair pair_from_json(const nlohmann::json& doc);
CorrelatedPair load_pair(const std::filesystem::path& path);

nlohmann::json permutation_to_json(const Permutation& p);
nlohmann::json labeling_to_json(const Labeling& labeling);

nlohmann::json read_json(const std::filesystem::path& path);
/// Writes `text` to `path`, or to stdout when the path is empty or "-".
void write_text(const std::filesystem::path& path, const std::string& text);

/// 64-bit FNV-1a of a string, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace typmatch::io
