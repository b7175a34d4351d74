#include "mgems/mpc_policy.hpp"

#include <algorithm>

#include "mgems/error.hpp"

namespace mgems {

ArForecaster::ArForecaster(Ar1Model ar, std::vector<Uncertainty> means)
    : ar_(std::move(ar)), means_(std::move(means)) {
  if (ar_.transitions() + 1 != static_cast<int>(means_.size())) {
    throw InvalidArgument("AR model and mean profile have different horizons");
  }
}

std::vector<Uncertainty> ArForecaster::forecast(int t,
                                                std::span<const Uncertainty> history) const {
  return mpc_forecast(ar_, means_, t, std::vector<Uncertainty>(history.begin(), history.end()));
}

std::vector<Uncertainty> FixedForecaster::forecast(int t, std::span<const Uncertainty>) const {
  if (t < 0 || t >= static_cast<int>(values_.size())) throw InvalidArgument("forecast step");
  return {values_.begin() + t, values_.end()};
}

namespace {

class MpcController final : public Controller {
 public:
  explicit MpcController(const MpcPolicy& p) : policy_(p), lp_(p.prepared()) {}

  Control decide(const PolicyContext& ctx) override {
    const int t = ctx.t;
    if (t != next_step_) throw InvalidArgument("MPC controller must be driven step by step");
    if (t > 0) lp_.commit_step(t - 1, prev_x_, prev_u_, ctx.history[t - 1], ctx.x);
    const auto f = policy_.forecaster().forecast(t, ctx.history);
    if (static_cast<int>(f.size()) != lp_.horizon() - t) {
      throw InvalidArgument("forecast length does not match the remaining horizon");
    }
    for (std::size_t k = 0; k < f.size(); ++k) {
      lp_.set_uncertainty(t + static_cast<int>(k), {f[k].d_el_net, std::max(0.0, f[k].d_th)});
    }
    const auto sol = lp_.solve();
    const auto& spec = policy_.spec();
    const Control u =
        admissible_box(ctx.x, spec.physical, spec.grid).project(sol.controls[t]);
    prev_x_ = ctx.x;
    prev_u_ = u;
    ++next_step_;
    return u;
  }

 private:
  const MpcPolicy& policy_;
  HorizonLp lp_;
  State prev_x_;
  Control prev_u_;
  int next_step_ = 0;
};

std::vector<Uncertainty> initial_forecast(const ProblemSpec& spec, const Forecaster& f) {
  auto w = f.forecast(0, {});
  if (static_cast<int>(w.size()) != spec.horizon()) {
    throw InvalidArgument("forecast length does not match the horizon");
  }
  for (auto& v : w) v.d_th = std::max(0.0, v.d_th);
  return w;
}

}  // namespace

MpcPolicy::MpcPolicy(const ProblemSpec& spec, std::shared_ptr<const Forecaster> forecaster)
    : spec_(&spec),
      forecaster_(std::move(forecaster)),
      template_(spec, initial_forecast(spec, *forecaster_)) {
  template_.solve();
}

std::unique_ptr<Controller> MpcPolicy::start() const {
  return std::make_unique<MpcController>(*this);
}

}  // namespace mgems
