#include "mgcrb/bandit.hpp"

#include <cmath>

namespace mgcrb {

void PolicyParams::validate() const {
  auto open_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!open_unit(fusion_weight)) throw ConfigError("policy params: fusion_weight must lie in (0, 1)");
  if (!open_unit(prediction_blend)) throw ConfigError("policy params: prediction_blend must lie in (0, 1)");
  if (!(exploration > 0.0)) throw ConfigError("policy params: exploration must be > 0");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("policy params: epsilon must lie in [0, 1]");
  if (!(baseline_smoothing > 0.0 && baseline_smoothing <= 1.0)) {
    throw ConfigError("policy params: baseline_smoothing must lie in (0, 1]");
  }
}

GroupState GroupState::warm_start(const Eigen::MatrixXd& first_samples, int target) {
  GroupState g;
  g.y_hat = first_samples;
  g.plays = Eigen::MatrixXi::Ones(first_samples.rows(), first_samples.cols());
  g.target = target;
  return g;
}

double predict_reward(double y_prev, const StateVector& x_pred, const StateVector& x_est, const RadarLayout& layout,
                      const ScatterModel& scatter, Channel c, int k, double alpha) {
  if (!(y_prev > 0.0)) throw std::invalid_argument("predict_reward: previous estimate must be > 0");
  const double loss_pred = channel_geometry(layout, position_of(x_pred), c.m, c.n).path_loss;
  const double loss_est = channel_geometry(layout, position_of(x_est), c.m, c.n).path_loss;
  // reflectivity is time-invariant in ScatterModel, so the psi ratio is psi / psi
  const double psi_ratio = scatter(c.m, c.n, k) / scatter(c.m, c.n, k);
  return alpha * (loss_pred * psi_ratio / loss_est) * y_prev + (1.0 - alpha) * y_prev;
}

Eigen::MatrixXd predict_rewards(const GroupState& group, const StateVector& x_pred, const StateVector& x_est,
                                const RadarLayout& layout, const ScatterModel& scatter, double alpha) {
  Eigen::MatrixXd out(group.y_hat.rows(), group.y_hat.cols());
  for (int m = 0; m < out.rows(); ++m) {
    for (int n = 0; n < out.cols(); ++n) {
      out(m, n) = predict_reward(group.y_hat(m, n), x_pred, x_est, layout, scatter, {m, n}, group.target, alpha);
    }
  }
  return out;
}

GroupState update_group(const GroupState& group, const SuperArm& arm, std::span<const ArmObservation> observations,
                        const Eigen::MatrixXd& predictions, double fusion_weight) {
  if (predictions.rows() != group.y_hat.rows() || predictions.cols() != group.y_hat.cols()) {
    throw ContractError("update_group: predictions must cover every arm");
  }
  const auto expected = arm.channels().size();
  if (observations.size() != expected) {
    throw ContractError("update_group: observations must cover exactly the selected arms");
  }
  GroupState out = group;
  out.y_hat = predictions;
  for (const ArmObservation& o : observations) {
    if (!arm.contains(o.channel)) throw ContractError("update_group: observation for an unselected arm");
    out.y_hat(o.channel.m, o.channel.n) =
        (1.0 - fusion_weight) * predictions(o.channel.m, o.channel.n) + fusion_weight * o.sinr;
    out.plays(o.channel.m, o.channel.n) += 1;
  }
  return out;
}

Eigen::MatrixXd ucb_index(const Eigen::MatrixXd& means, const Eigen::MatrixXi& plays, double t, double beta) {
  if (!(t >= 1.0)) throw std::invalid_argument("ucb_index: t must be >= 1");
  if ((plays.array() < 1).any()) throw ContractError("ucb_index: every arm must be played at least once");
  const double log_t = std::log(t);
  Eigen::MatrixXd out(means.rows(), means.cols());
  for (Eigen::Index m = 0; m < means.rows(); ++m) {
    for (Eigen::Index n = 0; n < means.cols(); ++n) {
      out(m, n) = means(m, n) + std::sqrt(beta * log_t / static_cast<double>(plays(m, n)));
    }
  }
  return out;
}

Eigen::MatrixXd fuse_indices(std::span<const Eigen::MatrixXd> indices, std::span<const double> omega) {
  if (indices.empty() || indices.size() != omega.size()) {
    throw std::invalid_argument("fuse_indices: one weight per group required");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(indices.front().rows(), indices.front().cols());
  for (std::size_t k = 0; k < indices.size(); ++k) out += omega[k] * indices[k];
  return out;
}

double baseline_update(double y_hat, double gamma, bool played, double smoothing) {
  return played ? (1.0 - smoothing) * y_hat + smoothing * gamma : y_hat;
}

RunningMean classic_ucb1_update(RunningMean state, double gamma, bool played) {
  if (!played) return state;
  const double sum = state.count * state.mean + gamma;
  return {sum / (state.count + 1), state.count + 1};
}

double expected_reward(const SuperArm& arm, std::span<const Eigen::MatrixXd> means, std::span<const double> omega) {
  return channel_sum(arm, fuse_indices(means, omega));
}

ArmChoice exhaustive_argmax(std::span<const SuperArm> arms, std::span<const Eigen::MatrixXd> values,
                            std::span<const double> omega) {
  if (arms.empty()) throw std::invalid_argument("exhaustive_argmax: no candidate arms");
  const Eigen::MatrixXd weighted = fuse_indices(values, omega);
  ArmChoice best{arms.front(), channel_sum(arms.front(), weighted)};
  for (std::size_t i = 1; i < arms.size(); ++i) {
    const double v = channel_sum(arms[i], weighted);
    if (v > best.value) best = {arms[i], v};
  }
  return best;
}

}  // namespace mgcrb
