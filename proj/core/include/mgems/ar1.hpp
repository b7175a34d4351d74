#pragma once

#include <array>
#include <vector>

#include "mgems/physical_model.hpp"
#include "mgems/scenarios.hpp"

namespace mgems {

/// Per-step, per-dimension linear predictor  w_{t+1} = alpha_t * w_t + beta_t + eps_t,
/// fitted by ordinary least squares across scenarios. Entry t maps values[t] to values[t+1];
/// index 0 is d_el_net, index 1 is d_th.
struct Ar1Model {
  struct Coefficients {
    double alpha = 0.0;
    double beta = 0.0;
    double residual_sd = 0.0;
    double residual_mean = 0.0;
    bool degenerate = false;  // zero predictor variance: alpha = 0, beta = mean
  };
  std::vector<std::array<Coefficients, 2>> steps;

  int transitions() const { return static_cast<int>(steps.size()); }
  int degenerate_count() const;
  /// Prediction of values[t+1] given values[t] = w; hot-water demand is floored at 0.
  Uncertainty predict(int t, const Uncertainty& w) const;
};

/// Closed-form OLS per step and dimension; needs at least 2 scenarios.
Ar1Model fit_ar1(const ScenarioSet& optimization);

/// Forecast of values[t..T-1] for a controller deciding at step t that has observed
/// history = values[0..t-1]:
///   entry 0 is the AR prediction from the last observation (the step-0 mean when t = 0),
///   entries k >= 1 are the per-step means of the optimization scenarios.
std::vector<Uncertainty> mpc_forecast(const Ar1Model& ar, const std::vector<Uncertainty>& means,
                                      int t, const std::vector<Uncertainty>& history);

}  // namespace mgems
