#include "mgems/sddp_policy.hpp"

#include <algorithm>

#include "mgems/error.hpp"
#include "mgems/quantize.hpp"

namespace mgems {

OnlineLaw parse_online_law(const std::string& name) {
  if (name == "offline") return OnlineLaw::kOffline;
  if (name == "conditional") return OnlineLaw::kConditional;
  throw InvalidArgument("unknown online law '" + name + "' (expected offline or conditional)");
}

std::string to_string(OnlineLaw law) {
  return law == OnlineLaw::kOffline ? "offline" : "conditional";
}

std::vector<DiscreteDistribution> quantize_residuals(const Ar1Model& ar,
                                                     const ScenarioSet& opt, int atoms,
                                                     std::uint64_t seed) {
  std::vector<DiscreteDistribution> out;
  std::vector<std::vector<double>> pts(opt.size(), std::vector<double>(2));
  for (int t = 0; t < ar.transitions(); ++t) {
    const auto& c = ar.steps[t];
    for (int i = 0; i < opt.size(); ++i) {
      const auto& x = opt.values[i][t];
      const auto& y = opt.values[i][t + 1];
      pts[i][0] = y.d_el_net - (c[0].alpha * x.d_el_net + c[0].beta);
      pts[i][1] = y.d_th - (c[1].alpha * x.d_th + c[1].beta);
    }
    const auto q = lloyd_max(pts, atoms, derive_seed(seed, static_cast<std::uint64_t>(t)));
    DiscreteDistribution d;
    for (std::size_t j = 0; j < q.centroids.size(); ++j) {
      d.atoms.push_back({q.centroids[j][0], q.centroids[j][1]});
      d.weights.push_back(q.weights[j]);
    }
    out.push_back(std::move(d));
  }
  return out;
}

namespace {

class SddpController final : public Controller {
 public:
  explicit SddpController(const SddpPolicy& p) : policy_(p) {}
  Control decide(const PolicyContext& ctx) override {
    auto stage = policy_.stage(ctx.t);
    if (policy_.online_law() != OnlineLaw::kOffline) {
      stage.set_distribution(policy_.online_distribution(ctx.t, ctx.history));
    }
    const auto sol = stage.solve(ctx.x);
    const auto& spec = policy_.spec();
    return admissible_box(ctx.x, spec.physical, spec.grid).project(sol.control);
  }

 private:
  const SddpPolicy& policy_;
};

}  // namespace

SddpPolicy::SddpPolicy(const ProblemSpec& spec, std::vector<PolyhedralFunction> value,
                       std::vector<DiscreteDistribution> offline)
    : spec_(&spec), value_(std::move(value)), offline_(std::move(offline)) {
  prepare();
}

SddpPolicy::SddpPolicy(const ProblemSpec& spec, std::vector<PolyhedralFunction> value,
                       std::vector<DiscreteDistribution> offline, Ar1Model ar,
                       std::vector<DiscreteDistribution> residuals)
    : spec_(&spec),
      value_(std::move(value)),
      offline_(std::move(offline)),
      law_(OnlineLaw::kConditional),
      ar_(std::move(ar)),
      residuals_(std::move(residuals)) {
  if (static_cast<int>(residuals_.size()) != ar_->transitions()) {
    throw InvalidArgument("need one residual law per AR transition");
  }
  prepare();
}

DiscreteDistribution SddpPolicy::online_distribution(int t,
                                                     std::span<const Uncertainty> history) const {
  if (law_ == OnlineLaw::kOffline || t == 0) return offline_.at(t);
  if (static_cast<int>(history.size()) < t) throw InvalidArgument("history shorter than t");
  const auto& c = ar_->steps.at(t - 1);
  const auto& w = history[t - 1];
  const double el = c[0].alpha * w.d_el_net + c[0].beta;
  const double th = c[1].alpha * w.d_th + c[1].beta;
  DiscreteDistribution d = residuals_.at(t - 1);
  for (auto& a : d.atoms) {
    a.d_el_net += el;
    a.d_th = std::max(0.0, a.d_th + th);
  }
  return d;
}

void SddpPolicy::prepare() {
  spec_->validate();
  const int T = spec_->horizon();
  if (static_cast<int>(value_.size()) != T + 1) {
    throw InvalidArgument("value functions cover " + std::to_string(value_.size()) +
                          " steps, expected " + std::to_string(T + 1));
  }
  if (static_cast<int>(offline_.size()) != T) {
    throw InvalidArgument("need one offline distribution per step");
  }
  std::vector<Uncertainty> means;
  for (const auto& d : offline_) means.push_back(d.mean());
  std::vector<DiscreteDistribution> laws;
  for (int t = 0; t < T; ++t) laws.push_back(online_distribution(t, means));
  templates_ = decision_templates(*spec_, laws, means, value_);
}

std::unique_ptr<Controller> SddpPolicy::start() const {
  return std::make_unique<SddpController>(*this);
}

}  // namespace mgems
