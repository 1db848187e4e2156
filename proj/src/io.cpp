#include "typmatch/io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "typmatch/error.hpp"

namespace typmatch::io {

using nlohmann::json;

namespace {

template <typename T>
T field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw ValidationError(std::string("missing field \"") + key + "\"");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("field \"") + key + "\": " + e.what());
  }
}

std::vector<std::size_t> sizes_of(const json& doc) {
  const auto raw = field<std::vector<std::int64_t>>(doc, "communities");
  std::vector<std::size_t> sizes;
  for (const auto s : raw) {
    if (s < 0) throw ValidationError("negative community size");
    sizes.push_back(static_cast<std::size_t>(s));
  }
  return sizes;
}

json graph_to_json(const LabeledGraph& g) {
  return {{"labeling", g.labeling().to_one_based()},
          {"edges", std::vector<int>(g.by_label().values().begin(), g.by_label().values().end())}};
}

LabeledGraph graph_from_json(const json& doc, const CommunityLayout& layout, std::size_t l) {
  const auto labels = field<std::vector<std::int64_t>>(doc, "labeling");
  if (labels.size() != layout.n()) throw LengthMismatchError("labeling length differs from n");
  const auto raw = field<std::vector<std::int64_t>>(doc, "edges");
  std::vector<EdgeValue> values;
  for (const auto v : raw) {
    if (v < 0 || static_cast<std::size_t>(v) >= l) {
      throw ValidationError("edge value outside the alphabet");
    }
    values.push_back(static_cast<EdgeValue>(v));
  }
  return LabeledGraph(layout, Labeling::from_one_based(labels),
                      UpperTriangle(layout.n(), std::move(values)));
}

}  // namespace

ModelFile model_from_json(const json& doc) {
  const auto l = field<std::int64_t>(doc, "l");
  const auto sizes = sizes_of(doc);
  const auto joint = field<json>(doc, "joint");
  const std::size_t c = sizes.size();

  std::vector<double> flat;
  bool shape_ok = joint.is_array() && joint.size() == c;
  for (std::size_t i = 0; shape_ok && i < c; ++i) {
    shape_ok = joint[i].is_array() && joint[i].size() == c;
    for (std::size_t j = 0; shape_ok && j < c; ++j) {
      const auto& block = joint[i][j];
      shape_ok = l > 0 && block.is_array() && block.size() == static_cast<std::size_t>(l);
      for (std::size_t x = 0; shape_ok && x < block.size(); ++x) {
        shape_ok = block[x].is_array() && block[x].size() == static_cast<std::size_t>(l);
        for (std::size_t y = 0; shape_ok && y < block[x].size(); ++y) {
          shape_ok = block[x][y].is_number();
          if (shape_ok) flat.push_back(block[x][y].get<double>());
        }
      }
    }
  }
  if (!shape_ok) {
    throw ValidationError("tensor_shape: \"joint\" must be nested [c][c][l][l] with c = " +
                          std::to_string(c) + ", l = " + std::to_string(l));
  }
  for (const auto s : sizes) {
    if (s == 0) throw ValidationError("empty_community: every community needs a vertex");
  }
  if (l < 2) throw ValidationError("alphabet: l must be at least 2");
  PairedEdgeModel model(EdgeAlphabet{static_cast<std::size_t>(l)}, c, std::move(flat));
  auto layout = CommunityLayout::from_sizes(sizes);
  const auto report = validate_model(model, layout);
  if (!report.ok()) throw ValidationError("invalid model:\n" + report.describe());
  return {std::move(model), std::move(layout)};
}

json model_to_json(const PairedEdgeModel& model, const CommunityLayout& layout) {
  json joint = json::array();
  for (std::size_t i = 0; i < model.c(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < model.c(); ++j) {
      json block = json::array();
      for (std::size_t x = 0; x < model.l(); ++x) {
        json cells = json::array();
        for (std::size_t y = 0; y < model.l(); ++y) cells.push_back(model(i, j, x, y));
        block.push_back(std::move(cells));
      }
      row.push_back(std::move(block));
    }
    joint.push_back(std::move(row));
  }
  return {{"l", model.l()}, {"communities", layout.sizes()}, {"joint", std::move(joint)}};
}

ModelFile load_model(const std::filesystem::path& path) { return model_from_json(read_json(path)); }

json pair_to_json(const CorrelatedPair& pair) {
  const auto& layout = pair.first.layout();
  return {{"tool", std::string(kToolName) + " " + kToolVersion},
          {"seed", pair.seed},
          {"layout", {{"sizes", layout.sizes()}, {"membership", layout.membership()}}},
          {"model", model_to_json(pair.model, layout)},
          {"first", graph_to_json(pair.first)},
          {"second", graph_to_json(pair.second)}};
}

CorrelatedPair pair_from_json(const json& doc) {
  auto [model, ignored] = model_from_json(field<json>(doc, "model"));
  const auto layout_doc = field<json>(doc, "layout");
  const auto membership = field<std::vector<std::size_t>>(layout_doc, "membership");
  const auto sizes = field<std::vector<std::size_t>>(layout_doc, "sizes");
  auto layout = CommunityLayout::from_membership(membership, sizes.size());
  if (layout.sizes() != sizes) throw ValidationError("layout sizes disagree with membership");
  const auto report = validate_model(model, layout);
  if (!report.ok()) throw ValidationError("invalid model:\n" + report.describe());
  auto first = graph_from_json(field<json>(doc, "first"), layout, model.l());
  auto second = graph_from_json(field<json>(doc, "second"), layout, model.l());
  return CorrelatedPair{std::move(first), std::move(second), std::move(model),
                        field<std::uint64_t>(doc, "seed")};
}

CorrelatedPair load_pair(const std::filesystem::path& path) {
  return pair_from_json(read_json(path));
}

json permutation_to_json(const Permutation& p) { return p.to_one_based(); }

json labeling_to_json(const Labeling& labeling) { return labeling.to_one_based(); }

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace typmatch::io
