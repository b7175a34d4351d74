#pragma once

#include "mgems/policy.hpp"
#include "mgems/problem.hpp"

namespace mgems {

/// Heuristic controller:
///  - battery: after a surplus (last observed net demand < 0) charge with the surplus left by the
///    tank and heater powers; otherwise discharge to cover that net load, within the box;
///  - tank: full power while below its initial level;
///  - heater: on below the set point, off above set point + margin, unchanged in between.
/// At t = 0 nothing has been observed and the last net demand is taken as 0.
class RuleBasedPolicy final : public Policy {
 public:
  explicit RuleBasedPolicy(const ProblemSpec& spec, double margin = 1.0);
  std::string name() const override { return "rule_based"; }
  std::string variant() const override;
  std::unique_ptr<Controller> start() const override;

  /// One decision with an explicit heater memory; updates `heater_on`.
  Control decide(int t, const State& x, double last_net_demand, bool& heater_on) const;

 private:
  const ProblemSpec* spec_;
  double margin_;
};

}  // namespace mgems
