#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "continuer/graph.hpp"

namespace continuer {

using json = nlohmann::ordered_json;

namespace detail {

inline json layer_to_json(const LayerSpec& l) {
  json j;
  j["type"] = layer_type_name(l.type);
  j["input_h"] = l.input_h;
  j["input_w"] = l.input_w;
  j["input_c"] = l.input_c;
  if (l.kernel) j["kernel"] = *l.kernel;
  if (l.stride) j["stride"] = *l.stride;
  if (l.filters) j["filters"] = *l.filters;
  if (l.units) j["units"] = *l.units;
  return j;
}

inline LayerSpec layer_from_json(const json& j) {
  LayerSpec l;
  l.type = layer_type_from_name(j.at("type").get<std::string>());
  l.input_h = j.at("input_h").get<int>();
  l.input_w = j.at("input_w").get<int>();
  l.input_c = j.at("input_c").get<int>();
  if (j.contains("kernel")) l.kernel = j.at("kernel").get<int>();
  if (j.contains("stride")) l.stride = j.at("stride").get<int>();
  if (j.contains("filters")) l.filters = j.at("filters").get<int>();
  if (j.contains("units")) l.units = j.at("units").get<int>();
  return l;
}

inline json layers_to_json(const std::vector<LayerSpec>& layers) {
  json arr = json::array();
  for (const auto& l : layers) arr.push_back(layer_to_json(l));
  return arr;
}

inline std::vector<LayerSpec> layers_from_json(const json& arr) {
  std::vector<LayerSpec> out;
  for (const auto& j : arr) out.push_back(layer_from_json(j));
  return out;
}

}  // namespace detail

inline json graph_to_json(const DnnGraph& g) {
  json j;
  j["name"] = g.name;
  j["baseline_accuracy"] = g.baseline_accuracy;
  j["head_layers"] = detail::layers_to_json(g.head_layers);
  json blocks = json::array();
  for (const auto& b : g.blocks) {
    json jb;
    jb["block_id"] = b.block_id;
    jb["is_residual"] = b.is_residual;
    jb["layers"] = detail::layers_to_json(b.layers);
    blocks.push_back(jb);
  }
  j["blocks"] = blocks;
  j["tail_layers"] = detail::layers_to_json(g.tail_layers);
  json exits = json::array();
  for (const auto& e : g.exits) {
    json je;
    je["exit_id"] = e.exit_id;
    je["after_block"] = e.after_block;
    je["head_layers"] = detail::layers_to_json(e.head_layers);
    exits.push_back(je);
  }
  j["exits"] = exits;
  json skips = json::array();
  for (const auto& s : g.skips) {
    json js;
    js["skip_id"] = s.skip_id;
    js["from_block"] = s.from_block;
    js["to_block"] = s.to_block;
    js["bypassed_blocks"] = s.bypassed_blocks;
    skips.push_back(js);
  }
  j["skips"] = skips;
  return j;
}

inline DnnGraph graph_from_json(const json& j) {
  try {
    DnnGraph g;
    g.name = j.at("name").get<std::string>();
    g.baseline_accuracy = j.at("baseline_accuracy").get<double>();
    g.head_layers = detail::layers_from_json(j.at("head_layers"));
    for (const auto& jb : j.at("blocks")) {
      Block b;
      b.block_id = jb.at("block_id").get<int>();
      b.is_residual = jb.at("is_residual").get<bool>();
      b.layers = detail::layers_from_json(jb.at("layers"));
      g.blocks.push_back(std::move(b));
    }
    g.tail_layers = detail::layers_from_json(j.at("tail_layers"));
    for (const auto& je : j.at("exits")) {
      ExitPoint e;
      e.exit_id = je.at("exit_id").get<int>();
      e.after_block = je.at("after_block").get<int>();
      e.head_layers = detail::layers_from_json(je.at("head_layers"));
      g.exits.push_back(std::move(e));
    }
    for (const auto& js : j.at("skips")) {
      SkipConnection s;
      s.skip_id = js.at("skip_id").get<int>();
      s.from_block = js.at("from_block").get<int>();
      s.to_block = js.at("to_block").get<int>();
      for (const auto& b : js.at("bypassed_blocks")) s.bypassed_blocks.insert(b.get<int>());
      g.skips.push_back(std::move(s));
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse_error, std::string("manifest: ") + e.what());
  }
}

inline json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(errc::parse_error, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse_error, path.string() + ": " + e.what());
  }
}

inline DnnGraph load_manifest(const std::filesystem::path& path) {
  return graph_from_json(load_json_file(path));
}

inline void save_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) fail(errc::parse_error, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace continuer
