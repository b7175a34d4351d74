#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mgems/ar1.hpp"
#include "mgems/distribution.hpp"
#include "mgems/polyhedral.hpp"
#include "mgems/policy.hpp"
#include "mgems/problem.hpp"
#include "mgems/stage_lp.hpp"

namespace mgems {

enum class OnlineLaw {
  kOffline,      // the distributions used in training
  kConditional,  // AR prediction from the last observation plus quantized AR residuals
};

OnlineLaw parse_online_law(const std::string& name);
std::string to_string(OnlineLaw law);

/// Residual atoms of the AR fit: entry t holds the law of values[t+1] - prediction(values[t]).
std::vector<DiscreteDistribution> quantize_residuals(const Ar1Model& ar,
                                                     const ScenarioSet& optimization, int atoms,
                                                     std::uint64_t seed);

/// Online decision: the one-step lookahead LP with the trained cuts of the next step.
class SddpPolicy final : public Policy {
 public:
  /// `value` has T+1 entries; `offline[t]` is the law of the uncertainty during interval t.
  SddpPolicy(const ProblemSpec& spec, std::vector<PolyhedralFunction> value,
             std::vector<DiscreteDistribution> offline);
  /// Conditional online law; residuals come from quantize_residuals.
  SddpPolicy(const ProblemSpec& spec, std::vector<PolyhedralFunction> value,
             std::vector<DiscreteDistribution> offline, Ar1Model ar,
             std::vector<DiscreteDistribution> residuals);

  // Step LPs point into value_.
  SddpPolicy(const SddpPolicy&) = delete;
  SddpPolicy& operator=(const SddpPolicy&) = delete;

  std::string name() const override { return "sddp"; }
  std::string variant() const override { return "online_law=" + to_string(law_); }
  const ProblemSpec& spec() const { return *spec_; }
  const std::vector<PolyhedralFunction>& value_functions() const { return value_; }
  std::unique_ptr<Controller> start() const override;
  OnlineLaw online_law() const { return law_; }

  /// Online law at step t given the observed history (size t).
  DiscreteDistribution online_distribution(int t, std::span<const Uncertainty> history) const;
  /// A fresh copy of the prepared step-t subproblem.
  StageProblem stage(int t) const { return templates_.at(t); }

 private:
  void prepare();

  const ProblemSpec* spec_;
  std::vector<PolyhedralFunction> value_;
  std::vector<DiscreteDistribution> offline_;
  OnlineLaw law_ = OnlineLaw::kOffline;
  std::optional<Ar1Model> ar_;
  std::vector<DiscreteDistribution> residuals_;
  std::vector<StageProblem> templates_;
};

}  // namespace mgems
