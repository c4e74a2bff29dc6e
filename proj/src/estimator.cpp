// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

#include "nlsnet/estimator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nlsnet/errors.hpp"

namespace nlsnet {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::gd_momentum: return "gd_momentum";
    case Algorithm::adam: return "adam";
    case Algorithm::adadelta: return "adadelta";
    case Algorithm::rmsprop: return "rmsprop";
  }
  return "unknown";
}

Algorithm algorithm_from_string(std::string_view name) {
  for (Algorithm a : {Algorithm::gd_momentum, Algorithm::adam, Algorithm::adadelta, Algorithm::rmsprop})
    if (to_string(a) == name) return a;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::loss_tol: return "loss_tol";
    case StopReason::grad_tol: return "grad_tol";
    case StopReason::max_iters: return "max_iters";
    case StopReason::blow_up: return "blow_up";
  }
  return "unknown";
}

OptimizerConfig OptimizerConfig::defaults(Algorithm algorithm) {
  OptimizerConfig c;
  c.algorithm = algorithm;
  switch (algorithm) {
    case Algorithm::adam:
      c.learning_rate = 0.05;
      break;
    case Algorithm::rmsprop:
      c.learning_rate = 0.003;
      c.decay_rho = 0.9;
      break;
    case Algorithm::adadelta:
      c.learning_rate = 1.0;
      c.decay_rho = 0.95;
      c.epsilon_guard = 1e-6;
      break;
    case Algorithm::gd_momentum:
      c.learning_rate = 1e-3;
      c.momentum = 0.9;
      break;
  }
  return c;
}

void OptimizerConfig::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v < 1.0; };
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
  if (!in_unit(momentum)) throw std::invalid_argument("momentum must lie in [0, 1)");
  if (!in_unit(beta1) || !in_unit(beta2)) throw std::invalid_argument("beta1 and beta2 must lie in [0, 1)");
  if (!in_unit(decay_rho)) throw std::invalid_argument("decay_rho must lie in [0, 1)");
  if (!(epsilon_guard > 0.0)) throw std::invalid_argument("epsilon_guard must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(loss_tol >= 0.0) || !(grad_tol >= 0.0)) throw std::invalid_argument("tolerances must be nonnegative");
  if (!(scale.array() > 0.0).all()) throw std::invalid_argument("parameter scales must be positive");
}

Eigen::Vector2d optimizer_step(OptimizerState& state, const Eigen::Vector2d& grad, const OptimizerConfig& config) {
  if (!grad.allFinite()) throw NumericalError("non-finite gradient");
  ++state.step;
  const double eps = config.epsilon_guard;
  switch (config.algorithm) {
    case Algorithm::gd_momentum:
      state.first = config.momentum * state.first + grad;
      return -config.learning_rate * state.first;

    case Algorithm::adam: {
      state.first = config.beta1 * state.first + (1.0 - config.beta1) * grad;
      state.second = config.beta2 * state.second + (1.0 - config.beta2) * grad.cwiseAbs2();
      const double t = static_cast<double>(state.step);
      const Eigen::Vector2d m_hat = state.first / (1.0 - std::pow(config.beta1, t));
      const Eigen::Vector2d v_hat = state.second / (1.0 - std::pow(config.beta2, t));
      return -config.learning_rate * m_hat.array() / (v_hat.array().sqrt() + eps);
    }

    case Algorithm::rmsprop:
      state.second = config.decay_rho * state.second + (1.0 - config.decay_rho) * grad.cwiseAbs2();
      return -config.learning_rate * grad.array() / (state.second.array() + eps).sqrt();

    case Algorithm::adadelta: {
      const double rho = config.decay_rho;
      state.second = rho * state.second + (1.0 - rho) * grad.cwiseAbs2();
      const Eigen::Vector2d delta =
          -config.learning_rate * ((state.delta_sq.array() + eps).sqrt() / (state.second.array() + eps).sqrt() *
                                   grad.array()).matrix();
      state.delta_sq = rho * state.delta_sq + (1.0 - rho) * delta.cwiseAbs2();
      return delta;
    }
  }
  return Eigen::Vector2d::Zero();
}

std::optional<long> TrainHistory::iterations_to(double threshold) const {
  for (const TrainRecord& r : iterations)
    if (r.loss < threshold) return r.iter;
  return std::nullopt;
}

FitResult fit(const ComplexSignal& input, const ComplexSignal& target, const Eigen::Vector2d& start,
              const SimGrid& grid, const OptimizerConfig& config, const std::optional<Eigen::Vector2d>& truth) {
  config.validate();
  if (!start.allFinite()) throw std::invalid_argument("start point must be finite");

  FitResult result;
  result.estimate = start;
  result.loss = std::numeric_limits<double>::infinity();
  TrainHistory& history = result.history;

  auto record = [&](long iter, double value, const Eigen::Vector2d& params) {
    TrainRecord rec{iter, value, params[0], params[1], std::nullopt, std::nullopt};
    if (truth) {
      rec.e_beta = std::abs(params[0] - (*truth)[0]);
      rec.e_gamma = std::abs(params[1] - (*truth)[1]);
    }
    history.iterations.push_back(rec);
  };

  OptimizerState state;
  Eigen::Vector2d x = start.cwiseQuotient(config.scale);
  for (long iter = 0;; ++iter) {
    const Eigen::Vector2d params = x.cwiseProduct(config.scale);
    LossAndGradient lg;
    try {
      if (!params.allFinite()) throw NumericalError("parameters overflowed");
      lg = loss_and_gradient(NetworkParams{params[0], params[1], grid}, input, target);
    } catch (const NumericalError&) {
      record(iter, std::numeric_limits<double>::infinity(), params);
      history.stop_reason = StopReason::blow_up;
      break;
    }

    record(iter, lg.loss.value, params);
    if (lg.loss.value < result.loss) {
      result.loss = lg.loss.value;
      result.estimate = params;
    }

    const Eigen::Vector2d grad =
        Eigen::Vector2d(lg.gradient.d_beta, lg.gradient.d_gamma).cwiseProduct(config.scale);
    if (!std::isfinite(lg.loss.value) || !grad.allFinite()) {
      history.stop_reason = StopReason::blow_up;
      break;
    }
    if (lg.loss.value < config.loss_tol) {
      history.converged = true;
      history.stop_reason = StopReason::loss_tol;
      break;
    }
    if (grad.norm() < config.grad_tol) {
      history.converged = true;
      history.stop_reason = StopReason::grad_tol;
      break;
    }
    if (iter >= config.max_iters) {
      history.stop_reason = StopReason::max_iters;
      break;
    }
    x += optimizer_step(state, grad, config);
  }
  return result;
}

}  // namespace nlsnet
