#pragma once

#include <memory>
#include <span>
#include <string>

#include "mgems/physical_model.hpp"

namespace mgems {

/// What a controller may look at when deciding at step t: the current state and the
/// uncertainty realized during intervals 0..t-1 (history.size() == t).
struct PolicyContext {
  int t = 0;
  State x;
  std::span<const Uncertainty> history;
};

/// Per-rollout decision maker; may keep private memory across the steps of one rollout.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual Control decide(const PolicyContext& ctx) = 0;
};

/// Immutable policy shared across rollouts and threads; start() opens a fresh rollout.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  /// Settings that distinguish variants of the same policy, e.g. "online_law=offline".
  virtual std::string variant() const { return {}; }
  virtual std::unique_ptr<Controller> start() const = 0;
};

}  // namespace mgems
