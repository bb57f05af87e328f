#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "continuer/candidates.hpp"

namespace continuer {

// Importance weights for accuracy, end-to-end latency and downtime. A metric
// without a user objective gets weight 0.
struct Weights {
  double accuracy = 0.0;
  double latency = 0.0;
  double downtime = 0.0;

  void validate() const {
    for (double w : {accuracy, latency, downtime})
      if (!(w >= 0.0 && w <= 1.0))
        fail(errc::invalid_config, "weights must lie in [0,1]");
    if (accuracy == 0.0 && latency == 0.0 && downtime == 0.0)
      fail(errc::invalid_config, "at least one weight must be positive");
  }
};

// Hard per-metric limits applied before scoring.
struct Thresholds {
  std::optional<double> min_accuracy;
  std::optional<double> max_latency_ms;
  std::optional<double> max_downtime_ms;
};

// Linear max-min normalization onto [0,1]. A column with no spread maps to
// all zeros, which makes that metric decision-neutral.
inline std::vector<double> normalize_min_max(const std::vector<double>& values) {
  if (values.empty()) fail(errc::empty_input, "normalize_min_max: no values");
  double lo = values[0], hi = values[0];
  for (double v : values) {
    if (!std::isfinite(v)) fail(errc::non_finite, "normalize_min_max: non-finite value");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::vector<double> out(values.size(), 0.0);
  if (hi == lo) return out;
  for (size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) / (hi - lo);
  return out;
}

// Normalizes each metric across the candidate set, then scores
// w_a * A' - w_l * L' - w_d * D'. Selection maximizes this score.
inline std::vector<double> score_candidates(const std::vector<Candidate>& candidates,
                                            const Weights& weights) {
  if (candidates.empty()) fail(errc::empty_input, "score_candidates: no candidates");
  weights.validate();

  std::vector<double> acc, lat, dt;
  for (const auto& c : candidates) {
    acc.push_back(c.metrics.accuracy);
    lat.push_back(c.metrics.latency_ms);
    dt.push_back(c.metrics.downtime_ms);
  }
  const std::vector<double> a = normalize_min_max(acc);
  const std::vector<double> l = normalize_min_max(lat);
  const std::vector<double> d = normalize_min_max(dt);

  std::vector<double> scores(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i)
    scores[i] = weights.accuracy * a[i] - weights.latency * l[i] - weights.downtime * d[i];
  return scores;
}

struct ScoredCandidate {
  size_t index = 0;  // position in the input candidate list
  MetricTriple normalized;
  double score = 0.0;
};

struct FilteredCandidate {
  size_t index = 0;
  std::string violation;
};

struct Decision {
  size_t chosen_index = 0;  // position in the input candidate list
  Candidate chosen;
  std::vector<ScoredCandidate> scored;      // the candidates that survived filtering
  std::vector<FilteredCandidate> filtered;  // and the ones that did not
  double selection_time_ms = 0.0;
};

namespace detail {

// Tie-break: higher score wins; on equal scores the accuracy-preserving
// technique order repartition > skip connection > early exit applies, then
// the lowest action id.
inline int technique_rank(Technique t) {
  switch (t) {
    case Technique::Repartition: return 0;
    case Technique::SkipConnection: return 1;
    case Technique::EarlyExit: return 2;
  }
  return 3;
}

inline bool beats(double score_a, const Candidate& a, double score_b, const Candidate& b) {
  if (score_a != score_b) return score_a > score_b;
  if (technique_rank(a.technique) != technique_rank(b.technique))
    return technique_rank(a.technique) < technique_rank(b.technique);
  return a.action_id() < b.action_id();
}

inline std::optional<std::string> threshold_violation(const MetricTriple& m,
                                                      const Thresholds& t) {
  if (t.min_accuracy && m.accuracy < *t.min_accuracy)
    return "accuracy " + std::to_string(m.accuracy) + " < min " +
           std::to_string(*t.min_accuracy);
  if (t.max_latency_ms && m.latency_ms > *t.max_latency_ms)
    return "latency " + std::to_string(m.latency_ms) + " ms > max " +
           std::to_string(*t.max_latency_ms) + " ms";
  if (t.max_downtime_ms && m.downtime_ms > *t.max_downtime_ms)
    return "downtime " + std::to_string(m.downtime_ms) + " ms > max " +
           std::to_string(*t.max_downtime_ms) + " ms";
  return std::nullopt;
}

}  // namespace detail

// Applies thresholds, scores the survivors and picks the argmax. Wall-clock
// time of the whole call lands in Decision::selection_time_ms.
inline Decision select_technique(const std::vector<Candidate>& candidates,
                                 const Weights& weights, const Thresholds& thresholds = {}) {
  const auto started = std::chrono::steady_clock::now();
  if (candidates.empty()) fail(errc::empty_input, "select_technique: no candidates");

  Decision decision;
  std::vector<size_t> survivors;
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (auto violation = detail::threshold_violation(candidates[i].metrics, thresholds))
      decision.filtered.push_back({i, *violation});
    else
      survivors.push_back(i);
  }

  if (survivors.empty()) {
    std::string detail = "every candidate violates a threshold:";
    for (const auto& f : decision.filtered)
      detail += " [" + std::string(technique_name(candidates[f.index].technique)) + " " +
                std::to_string(candidates[f.index].action_id()) + ": " + f.violation + "]";
    fail(errc::all_filtered_out, detail);
  }

  std::vector<Candidate> pool;
  for (size_t i : survivors) pool.push_back(candidates[i]);
  const std::vector<double> scores = score_candidates(pool, weights);

  std::vector<double> acc, lat, dt;
  for (const auto& c : pool) {
    acc.push_back(c.metrics.accuracy);
    lat.push_back(c.metrics.latency_ms);
    dt.push_back(c.metrics.downtime_ms);
  }
  const std::vector<double> na = normalize_min_max(acc);
  const std::vector<double> nl = normalize_min_max(lat);
  const std::vector<double> nd = normalize_min_max(dt);

  size_t best = 0;
  for (size_t i = 0; i < pool.size(); ++i) {
    decision.scored.push_back({survivors[i], MetricTriple{na[i], nl[i], nd[i]}, scores[i]});
    if (i > 0 && detail::beats(scores[i], pool[i], scores[best], pool[best])) best = i;
  }

  decision.chosen_index = survivors[best];
  decision.chosen = candidates[decision.chosen_index];
  decision.selection_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  return decision;
}

// Straight-line re-implementation of the selection contract, kept
// independent of select_technique for cross-checking: filter, normalize,
// score, exhaustive argmax with the same tie-break.
inline size_t oracle_select(const std::vector<Candidate>& candidates, const Weights& weights,
                            const Thresholds& thresholds = {}) {
  if (candidates.empty()) fail(errc::empty_input, "oracle_select: no candidates");
  weights.validate();

  std::vector<size_t> kept;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const MetricTriple& m = candidates[i].metrics;
    bool ok = true;
    if (thresholds.min_accuracy && m.accuracy < *thresholds.min_accuracy) ok = false;
    if (thresholds.max_latency_ms && m.latency_ms > *thresholds.max_latency_ms) ok = false;
    if (thresholds.max_downtime_ms && m.downtime_ms > *thresholds.max_downtime_ms) ok = false;
    if (ok) kept.push_back(i);
  }
  if (kept.empty()) fail(errc::all_filtered_out, "oracle_select: every candidate filtered");

  double a_lo = candidates[kept[0]].metrics.accuracy, a_hi = a_lo;
  double l_lo = candidates[kept[0]].metrics.latency_ms, l_hi = l_lo;
  double d_lo = candidates[kept[0]].metrics.downtime_ms, d_hi = d_lo;
  for (size_t i : kept) {
    const MetricTriple& m = candidates[i].metrics;
    a_lo = std::min(a_lo, m.accuracy);
    a_hi = std::max(a_hi, m.accuracy);
    l_lo = std::min(l_lo, m.latency_ms);
    l_hi = std::max(l_hi, m.latency_ms);
    d_lo = std::min(d_lo, m.downtime_ms);
    d_hi = std::max(d_hi, m.downtime_ms);
  }

  auto norm = [](double v, double lo, double hi) { return hi == lo ? 0.0 : (v - lo) / (hi - lo); };
  auto rank = [](Technique t) {
    if (t == Technique::Repartition) return 0;
    if (t == Technique::SkipConnection) return 1;
    return 2;
  };

  size_t best = kept[0];
  double best_score = 0.0;
  bool first = true;
  for (size_t i : kept) {
    const MetricTriple& m = candidates[i].metrics;
    const double score = weights.accuracy * norm(m.accuracy, a_lo, a_hi) -
                         weights.latency * norm(m.latency_ms, l_lo, l_hi) -
                         weights.downtime * norm(m.downtime_ms, d_lo, d_hi);
    bool wins = false;
    if (first) {
      wins = true;
    } else if (score > best_score) {
      wins = true;
    } else if (score == best_score) {
      const int ri = rank(candidates[i].technique);
      const int rb = rank(candidates[best].technique);
      if (ri < rb || (ri == rb && candidates[i].action_id() < candidates[best].action_id()))
        wins = true;
    }
    if (wins) {
      best = i;
      best_score = score;
      first = false;
    }
  }
  return best;
}

}  // namespace continuer
