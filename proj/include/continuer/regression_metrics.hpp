#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "continuer/error.hpp"

namespace continuer {

struct RegressionQuality {
  double mse = 0.0;
  double r2 = 0.0;
};

// Mean squared error and coefficient of determination. A constant target
// vector has no variance to explain: R^2 is 1 for a perfect fit and -inf
// otherwise.
inline RegressionQuality evaluate_regression(const std::vector<double>& y_true,
                                             const std::vector<double>& y_pred) {
  if (y_true.empty()) fail(errc::empty_input, "evaluate_regression: no samples");
  if (y_true.size() != y_pred.size())
    fail(errc::length_mismatch, "evaluate_regression: " + std::to_string(y_true.size()) +
                                    " targets vs " + std::to_string(y_pred.size()) +
                                    " predictions");

  const double n = static_cast<double>(y_true.size());
  double mean = 0.0;
  for (double v : y_true) mean += v;
  mean /= n;

  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (size_t i = 0; i < y_true.size(); ++i) {
    const double r = y_true[i] - y_pred[i];
    ss_res += r * r;
    const double d = y_true[i] - mean;
    ss_tot += d * d;
  }

  RegressionQuality q;
  q.mse = ss_res / n;
  if (ss_tot == 0.0)
    q.r2 = (ss_res == 0.0) ? 1.0 : -std::numeric_limits<double>::infinity();
  else
    q.r2 = 1.0 - ss_res / ss_tot;
  return q;
}

// |measured - estimated| / measured, as a percentage.
inline double percentage_error(double measured, double estimated) {
  if (measured == 0.0) fail(errc::zero_measured, "percentage error of a zero measurement");
  return std::abs(measured - estimated) / measured * 100.0;
}

}  // namespace continuer
