#pragma once

#include <map>
#include <string>

#include "continuer/error.hpp"

namespace continuer {

enum class Technique { Repartition, EarlyExit, SkipConnection };

inline const char* technique_name(Technique t) {
  switch (t) {
    case Technique::Repartition: return "repartition";
    case Technique::EarlyExit: return "early_exit";
    case Technique::SkipConnection: return "skip_connection";
  }
  return "unknown";
}

inline Technique technique_from_name(const std::string& name) {
  if (name == "repartition") return Technique::Repartition;
  if (name == "early_exit") return Technique::EarlyExit;
  if (name == "skip_connection") return Technique::SkipConnection;
  fail(errc::parse_error, "unknown technique '" + name + "'");
}

// The three metrics a recovery action is judged by.
struct MetricTriple {
  double accuracy = 0.0;
  double latency_ms = 0.0;
  double downtime_ms = 0.0;

  bool operator==(const MetricTriple&) const = default;
};

// Empirical downtime bases per technique, plus the extra connection
// reinstatement delay paid by repartitioning and skip connections.
struct DowntimeTable {
  std::map<Technique, double> base_ms;
  double reinstate_ms = 0.99;

  double base_for(Technique t) const {
    auto it = base_ms.find(t);
    return it == base_ms.end() ? 0.0 : it->second;
  }
};

// downtime = technique base + time spent selecting + reinstatement where the
// technique rewires connections (repartition, skip connection).
inline double compose_downtime(Technique technique, const DowntimeTable& table,
                               double measured_selection_ms) {
  double total = table.base_for(technique) + measured_selection_ms;
  if (technique == Technique::Repartition || technique == Technique::SkipConnection)
    total += table.reinstate_ms;
  return total;
}

}  // namespace continuer
