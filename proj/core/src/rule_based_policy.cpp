#include "mgems/rule_based_policy.hpp"

#include <algorithm>
#include <sstream>

#include "mgems/error.hpp"

namespace mgems {

namespace {

class RuleController final : public Controller {
 public:
  explicit RuleController(const RuleBasedPolicy& p) : policy_(p) {}
  Control decide(const PolicyContext& ctx) override {
    const double last = ctx.t > 0 ? ctx.history[ctx.t - 1].d_el_net : 0.0;
    return policy_.decide(ctx.t, ctx.x, last, heater_on_);
  }

 private:
  const RuleBasedPolicy& policy_;
  bool heater_on_ = false;
};

}  // namespace

RuleBasedPolicy::RuleBasedPolicy(const ProblemSpec& spec, double margin)
    : spec_(&spec), margin_(margin) {
  if (!(margin >= 0)) throw InvalidArgument("hysteresis margin must be >= 0");
}

std::string RuleBasedPolicy::variant() const {
  std::ostringstream s;
  s << "margin=" << margin_;
  return s.str();
}

std::unique_ptr<Controller> RuleBasedPolicy::start() const {
  return std::make_unique<RuleController>(*this);
}

Control RuleBasedPolicy::decide(int t, const State& x, double last, bool& heater_on) const {
  const auto& p = spec_->physical;
  const auto box = admissible_box(x, p, spec_->grid);
  const double setpoint = spec_->costs.temp_setpoint.at(t);
  Control u;
  if (x.theta_i < setpoint) heater_on = true;
  if (x.theta_i > setpoint + margin_) heater_on = false;
  u.f_h = heater_on ? box.fh_hi : 0.0;
  u.f_w = x.h < spec_->x0.h ? box.fw_hi : 0.0;
  const double net = last + u.f_w + u.f_h;
  if (last < 0) {
    u.f_b = std::min(std::max(0.0, -net), box.fb_hi);
  } else {
    u.f_b = 0.0 - std::min(std::max(0.0, net), -box.fb_lo);
  }
  return u;
}

}  // namespace mgems
