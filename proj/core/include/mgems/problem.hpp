#pragma once

#include <string>
#include <vector>

#include "mgems/physical_model.hpp"

namespace mgems {

/// Tolerance on stock bounds before a state is declared infeasible.
inline constexpr double kStateTolerance = 1e-6;

struct CostParams {
  std::vector<double> price_elec;        // EUR/kWh
  std::vector<double> price_discomfort;  // EUR per degC per step
  std::vector<double> temp_setpoint;     // degC
  double kappa = 0.5;                    // EUR/kWh on battery and tank shortfall at t = T
  /// EUR/kWh of hot-water demand the tank could not serve.
  double unserved_penalty = 1.0;

  void validate(int horizon_steps) const;

  /// CSV with header `step,price_elec,price_discomfort,temp_setpoint`.
  static CostParams load_csv(const std::string& path, double kappa, double unserved_penalty);
  void save_csv(const std::string& path) const;
};

struct TariffSettings {
  double on_peak_price = 0.15;
  double off_peak_price = 0.09;
  double on_peak_start_hour = 7.0;
  double on_peak_end_hour = 23.0;
  double discomfort_price = 0.08;
  double day_setpoint = 19.0;
  double night_setpoint = 16.0;
  double day_start_hour = 6.0;
  double day_end_hour = 22.0;
};

CostParams make_cost_params(const TariffSettings& tariff, const TimeGrid& grid, double kappa,
                            double unserved_penalty);

/// Everything that defines one daily instance apart from the uncertainty.
struct ProblemSpec {
  TimeGrid grid;
  PhysicalParams physical;
  CostParams costs;
  WeatherTrace weather;
  State x0;

  void validate() const;
  int horizon() const { return grid.horizon_steps; }
};

struct AdmissibleBox {
  double fb_lo = 0.0, fb_hi = 0.0;
  double fw_lo = 0.0, fw_hi = 0.0;
  double fh_lo = 0.0, fh_hi = 0.0;

  bool contains(const Control& u, double tol = 1e-9) const;
  /// Component-wise clamp onto the box.
  Control project(const Control& u) const;
};

/// Imported power f_ne = f_b + f_w + f_h + d_el_net; negative means wasted surplus.
double net_import(const Control& u, const Uncertainty& w);

/// Hot-water energy (kWh) the tank cannot deliver during the step.
double unserved_hot_water(const State& x, const Control& u, const Uncertainty& w,
                          const PhysicalParams& params, const TimeGrid& grid);

/// Energy bill plus discomfort plus the unserved hot-water penalty.
double stage_cost(const State& x, const Control& u, const Uncertainty& w, int t,
                  const CostParams& costs, const PhysicalParams& params, const TimeGrid& grid);

/// kappa times the shortfall of battery and tank stocks with respect to the initial state.
double final_cost(const State& x_T, const State& x_0, double kappa);

/// Throws InfeasibleStateError when x leaves the stock bounds by more than kStateTolerance.
void check_state(const State& x, const PhysicalParams& params);

/// Control bounds that keep the next battery and tank stocks inside their bounds for every
/// nonnegative hot-water demand (the tank may still run dry, see unserved_hot_water).
AdmissibleBox admissible_box(const State& x, const PhysicalParams& params, const TimeGrid& grid);

struct StepOutcome {
  State next;
  double cost = 0.0;
  double f_ne = 0.0;
  double unserved_kwh = 0.0;
};

/// Plant used by the simulators: caches the thermal map and clamps the tank at zero.
class Plant {
 public:
  explicit Plant(const ProblemSpec& spec);

  const ProblemSpec& spec() const { return *spec_; }
  const ThermalStepMap& thermal() const { return thermal_; }

  StepOutcome step(int t, const State& x, const Control& u, const Uncertainty& w) const;
  double final_cost(const State& x_T) const;

 private:
  const ProblemSpec* spec_;
  ThermalStepMap thermal_;
};

}  // namespace mgems
