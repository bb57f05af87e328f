#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "continuer/layer.hpp"
#include "continuer/manifest.hpp"
#include "continuer/technique.hpp"

namespace continuer {

// One measured layer latency, keyed by type + hyperparameters + platform.
struct LatencyRow {
  LayerType layer_type = LayerType::ReLU;
  int input_h = 1;
  int input_w = 1;
  int input_c = 1;
  std::optional<int> kernel;
  std::optional<int> stride;
  std::optional<int> filters;
  std::optional<int> units;
  std::string platform;
  double ms = 0.0;
  std::optional<double> estimated_ms;

  LayerSpec spec() const {
    LayerSpec s;
    s.type = layer_type;
    s.input_h = input_h;
    s.input_w = input_w;
    s.input_c = input_c;
    s.kernel = kernel;
    s.stride = stride;
    s.filters = filters;
    s.units = units;
    return s;
  }

  auto key() const {
    return std::make_tuple(static_cast<int>(layer_type), input_h, input_w, input_c,
                           kernel.value_or(0), stride.value_or(0), filters.value_or(0),
                           units.value_or(0), platform);
  }
};

// Measured accuracy of one recovery action (exit id / skip id; 0 for
// repartition, which keeps the baseline).
struct AccuracyRow {
  std::string model;
  Technique technique = Technique::Repartition;
  int action = 0;
  double fraction = 0.0;
  std::optional<double> estimated;

  auto key() const { return std::make_tuple(model, static_cast<int>(technique), action); }
};

struct DowntimeRow {
  std::string model;
  Technique technique = Technique::Repartition;
  double ms = 0.0;
};

// Ingested measurements standing in for live profiling.
struct ProfileTable {
  std::vector<LatencyRow> latency;
  std::vector<AccuracyRow> accuracy;
  std::vector<DowntimeRow> downtime;

  std::optional<double> accuracy_of(const std::string& model, Technique t, int action) const {
    for (const auto& row : accuracy)
      if (row.model == model && row.technique == t && row.action == action)
        return row.fraction;
    return std::nullopt;
  }

  std::optional<double> downtime_of(const std::string& model, Technique t) const {
    for (const auto& row : downtime)
      if (row.model == model && row.technique == t) return row.ms;
    return std::nullopt;
  }

  // Downtime bases for one model. The bundled downtime rows are measured
  // totals, which already contain one reinstatement delay for repartition and
  // skip connection; the base strips it back out.
  DowntimeTable downtime_table(const std::string& model, double reinstate_ms = 0.99) const {
    DowntimeTable table;
    table.reinstate_ms = reinstate_ms;
    for (Technique t :
         {Technique::Repartition, Technique::EarlyExit, Technique::SkipConnection}) {
      if (auto total = downtime_of(model, t)) {
        double base = *total;
        if (t == Technique::Repartition || t == Technique::SkipConnection)
          base = std::max(0.0, base - reinstate_ms);
        table.base_ms[t] = base;
      }
    }
    return table;
  }
};

namespace detail {

inline LatencyRow latency_row_from_json(const json& j, const std::string& where) {
  LatencyRow row;
  row.layer_type = layer_type_from_name(j.at("layer_type").get<std::string>());
  row.input_h = j.at("input_h").get<int>();
  row.input_w = j.at("input_w").get<int>();
  row.input_c = j.at("input_c").get<int>();
  if (j.contains("kernel")) row.kernel = j.at("kernel").get<int>();
  if (j.contains("stride")) row.stride = j.at("stride").get<int>();
  if (j.contains("filters")) row.filters = j.at("filters").get<int>();
  if (j.contains("units")) row.units = j.at("units").get<int>();
  if (j.contains("platform")) row.platform = j.at("platform").get<std::string>();
  row.ms = j.at("ms").get<double>();
  if (j.contains("estimated_ms")) row.estimated_ms = j.at("estimated_ms").get<double>();
  if (row.ms < 0.0) fail(errc::range_error, where + ": negative latency");
  return row;
}

inline json latency_row_to_json(const LatencyRow& row) {
  json j;
  j["layer_type"] = layer_type_name(row.layer_type);
  j["input_h"] = row.input_h;
  j["input_w"] = row.input_w;
  j["input_c"] = row.input_c;
  if (row.kernel) j["kernel"] = *row.kernel;
  if (row.stride) j["stride"] = *row.stride;
  if (row.filters) j["filters"] = *row.filters;
  if (row.units) j["units"] = *row.units;
  j["platform"] = row.platform;
  j["ms"] = row.ms;
  if (row.estimated_ms) j["estimated_ms"] = *row.estimated_ms;
  return j;
}

}  // namespace detail

inline ProfileTable profiles_from_json(const json& j) {
  ProfileTable table;
  try {
    size_t i = 0;
    for (const auto& jr : j.value("latency", json::array())) {
      table.latency.push_back(
          detail::latency_row_from_json(jr, "latency[" + std::to_string(i) + "]"));
      ++i;
    }
    i = 0;
    for (const auto& jr : j.value("accuracy", json::array())) {
      const std::string where = "accuracy[" + std::to_string(i) + "]";
      AccuracyRow row;
      row.model = jr.at("model").get<std::string>();
      row.technique = technique_from_name(jr.at("technique").get<std::string>());
      row.action = jr.at("action").get<int>();
      row.fraction = jr.at("fraction").get<double>();
      if (jr.contains("estimated")) row.estimated = jr.at("estimated").get<double>();
      if (row.fraction < 0.0 || row.fraction > 1.0)
        fail(errc::range_error, where + ": accuracy " + std::to_string(row.fraction) +
                                    " outside [0,1]");
      if (row.estimated && (*row.estimated < 0.0 || *row.estimated > 1.0))
        fail(errc::range_error, where + ": estimated accuracy outside [0,1]");
      table.accuracy.push_back(row);
      ++i;
    }
    i = 0;
    for (const auto& jr : j.value("downtime", json::array())) {
      DowntimeRow row;
      row.model = jr.at("model").get<std::string>();
      row.technique = technique_from_name(jr.at("technique").get<std::string>());
      row.ms = jr.at("ms").get<double>();
      if (row.ms < 0.0)
        fail(errc::range_error, "downtime[" + std::to_string(i) + "]: negative downtime");
      table.downtime.push_back(row);
      ++i;
    }
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse_error, std::string("profiles: ") + e.what());
  }

  std::set<decltype(table.latency[0].key())> latency_keys;
  for (const auto& row : table.latency)
    if (!latency_keys.insert(row.key()).second)
      fail(errc::duplicate_key, "duplicate latency row for " +
                                    std::string(layer_type_name(row.layer_type)) + " " +
                                    std::to_string(row.input_h) + "x" +
                                    std::to_string(row.input_w) + "x" +
                                    std::to_string(row.input_c));
  std::set<decltype(table.accuracy[0].key())> accuracy_keys;
  for (const auto& row : table.accuracy)
    if (!accuracy_keys.insert(row.key()).second)
      fail(errc::duplicate_key, "duplicate accuracy row for " + row.model + "/" +
                                    technique_name(row.technique) + "/" +
                                    std::to_string(row.action));
  std::set<std::pair<std::string, int>> downtime_keys;
  for (const auto& row : table.downtime)
    if (!downtime_keys.insert({row.model, static_cast<int>(row.technique)}).second)
      fail(errc::duplicate_key,
           "duplicate downtime row for " + row.model + "/" + technique_name(row.technique));

  return table;
}

inline json profiles_to_json(const ProfileTable& table) {
  json j;
  json latency = json::array();
  for (const auto& row : table.latency) latency.push_back(detail::latency_row_to_json(row));
  j["latency"] = latency;
  json accuracy = json::array();
  for (const auto& row : table.accuracy) {
    json jr;
    jr["model"] = row.model;
    jr["technique"] = technique_name(row.technique);
    jr["action"] = row.action;
    jr["fraction"] = row.fraction;
    if (row.estimated) jr["estimated"] = *row.estimated;
    accuracy.push_back(jr);
  }
  j["accuracy"] = accuracy;
  json downtime = json::array();
  for (const auto& row : table.downtime) {
    json jr;
    jr["model"] = row.model;
    jr["technique"] = technique_name(row.technique);
    jr["ms"] = row.ms;
    downtime.push_back(jr);
  }
  j["downtime"] = downtime;
  return j;
}

inline ProfileTable load_profiles(const std::filesystem::path& path) {
  return profiles_from_json(load_json_file(path));
}

}  // namespace continuer
