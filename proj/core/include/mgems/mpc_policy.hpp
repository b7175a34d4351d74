#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mgems/ar1.hpp"
#include "mgems/horizon_lp.hpp"
#include "mgems/policy.hpp"
#include "mgems/problem.hpp"

namespace mgems {

/// Point forecast of the uncertainty during intervals t..T-1 from the history up to t.
class Forecaster {
 public:
  virtual ~Forecaster() = default;
  virtual std::vector<Uncertainty> forecast(int t, std::span<const Uncertainty> history) const = 0;
};

/// AR one-step prediction, then per-step means of the optimization scenarios.
class ArForecaster final : public Forecaster {
 public:
  ArForecaster(Ar1Model ar, std::vector<Uncertainty> means);
  std::vector<Uncertainty> forecast(int t, std::span<const Uncertainty> history) const override;

 private:
  Ar1Model ar_;
  std::vector<Uncertainty> means_;
};

/// Always returns the given sequence; with the realized scenario this is a perfect forecast.
class FixedForecaster final : public Forecaster {
 public:
  explicit FixedForecaster(std::vector<Uncertainty> values) : values_(std::move(values)) {}
  std::vector<Uncertainty> forecast(int t, std::span<const Uncertainty> history) const override;

 private:
  std::vector<Uncertainty> values_;
};

/// Receding horizon: at every step solve the deterministic problem to the end of the day with
/// the forecast in place of the uncertainty and apply the first control. One LP per rollout is
/// kept and updated in place (past steps pinned to what happened), so re-solves warm start.
class MpcPolicy final : public Policy {
 public:
  MpcPolicy(const ProblemSpec& spec, std::shared_ptr<const Forecaster> forecaster);
  std::string name() const override { return "mpc"; }
  std::string variant() const override { return variant_; }
  /// Free-form description of the forecaster, reported with the results.
  void set_variant(std::string v) { variant_ = std::move(v); }
  std::unique_ptr<Controller> start() const override;

  const ProblemSpec& spec() const { return *spec_; }
  const Forecaster& forecaster() const { return *forecaster_; }
  const HorizonLp& prepared() const { return template_; }

 private:
  const ProblemSpec* spec_;
  std::shared_ptr<const Forecaster> forecaster_;
  HorizonLp template_;
  std::string variant_ = "forecast=ar1";
};

}  // namespace mgems
