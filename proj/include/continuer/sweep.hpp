#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "continuer/scheduler.hpp"

namespace continuer {

struct GridAxis {
  double min = 0.1;
  double max = 0.9;
  double step = 0.1;

  std::vector<double> values() const {
    if (step <= 0.0 || max < min) fail(errc::invalid_config, "bad grid axis");
    std::vector<double> out;
    const int count = static_cast<int>(std::floor((max - min) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) out.push_back(min + i * step);
    return out;
  }
};

struct SweepGrid {
  GridAxis accuracy;
  GridAxis latency;
  GridAxis downtime;

  // Full cartesian product; the default axes make 9^3 = 729 triples.
  std::vector<Weights> enumerate() const {
    std::vector<Weights> out;
    for (double a : accuracy.values())
      for (double l : latency.values())
        for (double d : downtime.values()) out.push_back(Weights{a, l, d});
    return out;
  }
};

// Multiplicative estimation noise: estimated = measured * (1 + U(-e, +e)),
// drawn once per candidate metric per scenario from the seeded generator.
// Downtime stays exact, matching its empirical origin.
struct NoiseSpec {
  double latency = 0.0;
  double accuracy = 0.0;
  std::uint64_t seed = 0;
};

struct ScenarioAgreement {
  int failed_node = 0;
  std::size_t agreements = 0;
  std::size_t total = 0;
};

struct SweepReport {
  std::size_t grid_size = 0;
  std::vector<ScenarioAgreement> per_scenario;
  std::size_t instances = 0;
  std::size_t agreements = 0;
  double classification_accuracy = 0.0;
  NoiseSpec noise;
};

struct SweepInputs {
  const Deployment* deployment = nullptr;
  PredictorSet measured;  // ground truth (profile table)
  DowntimeTable downtime;
  EnumerateOptions options;
  Thresholds thresholds;
};

// For every (failure scenario, weight triple) pair, decides once from
// measured metrics and once from noise-perturbed estimates, and reports the
// fraction of matching technique choices.
inline SweepReport run_sweep(const SweepInputs& inputs, const std::vector<int>& failed_nodes,
                             const SweepGrid& grid, const NoiseSpec& noise) {
  if (failed_nodes.empty()) fail(errc::empty_input, "sweep: no failure scenarios");
  const std::vector<Weights> weights = grid.enumerate();

  SweepReport report;
  report.grid_size = weights.size();
  report.noise = noise;

  std::mt19937_64 rng(noise.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  for (int failed : failed_nodes) {
    const std::vector<Candidate> measured = enumerate_candidates(
        *inputs.deployment, FailureScenario{failed}, inputs.measured, inputs.downtime,
        inputs.options);

    std::vector<Candidate> estimated = measured;
    for (auto& c : estimated) {
      c.metrics.latency_ms *= 1.0 + noise.latency * unit(rng);
      c.metrics.accuracy *= 1.0 + noise.accuracy * unit(rng);
      c.metrics.accuracy = std::clamp(c.metrics.accuracy, 0.0, 1.0);
    }

    ScenarioAgreement agreement;
    agreement.failed_node = failed;
    for (const Weights& w : weights) {
      bool measured_ok = true, estimated_ok = true;
      Technique measured_choice = Technique::Repartition;
      Technique estimated_choice = Technique::Repartition;
      try {
        measured_choice =
            measured[select_technique(measured, w, inputs.thresholds).chosen_index].technique;
      } catch (const Error& e) {
        if (e.code() != errc::all_filtered_out) throw;
        measured_ok = false;
      }
      try {
        estimated_choice =
            estimated[select_technique(estimated, w, inputs.thresholds).chosen_index].technique;
      } catch (const Error& e) {
        if (e.code() != errc::all_filtered_out) throw;
        estimated_ok = false;
      }
      if (!measured_ok && !estimated_ok) continue;  // filtered out of the instance set
      ++agreement.total;
      if (measured_ok == estimated_ok && measured_choice == estimated_choice)
        ++agreement.agreements;
    }
    report.per_scenario.push_back(agreement);
    report.instances += agreement.total;
    report.agreements += agreement.agreements;
  }

  report.classification_accuracy =
      report.instances == 0
          ? 1.0
          : static_cast<double>(report.agreements) / static_cast<double>(report.instances);
  return report;
}

}  // namespace continuer
