#include "mgcrb/tracking.hpp"

#include "mgcrb/sensing.hpp"

#include <cmath>
#include <numbers>

namespace mgcrb {

void ModelBank::validate() const {
  const auto n = static_cast<Eigen::Index>(models.size());
  if (n == 0) throw ConfigError("model bank: at least one model required");
  if (transition_prob.rows() != n || transition_prob.cols() != n) {
    throw ConfigError("model bank: transition matrix must be square with one row per model");
  }
  if (initial_prob.size() != n) throw ConfigError("model bank: initial probabilities must match model count");
  for (const MotionModel& m : models) m.validate();
  if ((transition_prob.array() < 0.0).any()) throw ConfigError("model bank: negative transition probability");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(transition_prob.row(i).sum() - 1.0) > 1e-9) {
      throw ConfigError("model bank: transition matrix rows must sum to 1");
    }
  }
  if ((initial_prob.array() < 0.0).any() || std::abs(initial_prob.sum() - 1.0) > 1e-9) {
    throw ConfigError("model bank: initial probabilities must lie on the simplex");
  }
  if (!(process_noise >= 0.0)) throw ConfigError("model bank: process noise must be >= 0");
}

ModelBank ModelBank::standard(double sample_interval, double process_noise, double turn_rate, double stay,
                              Eigen::VectorXd initial_prob) {
  ModelBank bank;
  bank.models = {MotionModel::ncv(sample_interval), MotionModel::nct(turn_rate, sample_interval),
                 MotionModel::nct(-turn_rate, sample_interval)};
  bank.transition_prob = Eigen::MatrixXd::Constant(3, 3, (1.0 - stay) / 2.0);
  bank.transition_prob.diagonal().setConstant(stay);
  if (initial_prob.size() == 0) {
    initial_prob = Eigen::Vector3d(0.8, 0.1, 0.1);
  }
  bank.initial_prob = std::move(initial_prob);
  bank.process_noise = process_noise;
  return bank;
}

MeasurementFunction bistatic_measurement(const RadarLayout& layout, Channel channel) {
  return {[&layout, channel](const StateVector& x) {
            return ideal_measurement(layout, position_of(x), channel.m, channel.n);
          },
          true};
}

ChannelFilter ChannelFilter::initialize(const StateVector& state, const StateMatrix& cov,
                                        const Eigen::VectorXd& model_prob, Channel channel, int target) {
  ChannelFilter f;
  const auto n = static_cast<std::size_t>(model_prob.size());
  f.states.assign(n, state);
  f.covariances.assign(n, cov);
  f.model_prob = model_prob;
  f.channel = channel;
  f.target = target;
  return f;
}

StateVector ChannelFilter::combined_state() const {
  StateVector x = StateVector::Zero();
  for (std::size_t i = 0; i < states.size(); ++i) x += model_prob(static_cast<Eigen::Index>(i)) * states[i];
  return x;
}

StateMatrix ChannelFilter::combined_covariance() const {
  const StateVector x = combined_state();
  StateMatrix p = StateMatrix::Zero();
  for (std::size_t i = 0; i < states.size(); ++i) {
    const StateVector d = states[i] - x;
    p += model_prob(static_cast<Eigen::Index>(i)) * (covariances[i] + d * d.transpose());
  }
  return p;
}

namespace {

StateMatrix symmetrize(const StateMatrix& p) { return 0.5 * (p + p.transpose()); }

bool positive_definite(const StateMatrix& p) {
  if (!p.allFinite()) return false;
  Eigen::LLT<StateMatrix> llt(p);
  return llt.info() == Eigen::Success;
}

Vec2 residual(const Vec2& a, const Vec2& b, bool angular) {
  Vec2 d = a - b;
  if (angular) d(1) = wrap_angle(d(1));
  return d;
}

struct ModelUpdate {
  StateVector state;
  StateMatrix cov;
  double log_likelihood = 0.0;
};

ModelUpdate ukf_cycle(const StateVector& x0, const StateMatrix& p0, const StateMatrix& f, const StateMatrix& q,
                      const Vec2& z, const Mat2& r, const MeasurementFunction& h, const ImmOptions& options,
                      const ChannelFilter& filter) {
  auto diverged = [&] { return FilterDivergenceError(filter.channel, filter.target); };
  if (!positive_definite(p0)) throw diverged();

  // predict
  const SigmaSet prior = sigma_points(x0, p0, options.unscented);
  auto [x_pred, p_pred] = unscented_transform(prior, [&f](const StateVector& s) -> StateVector { return f * s; });
  p_pred = symmetrize(p_pred + q);
  if (!positive_definite(p_pred)) throw diverged();

  // update
  const SigmaSet sig = sigma_points(x_pred, p_pred, options.unscented);
  std::array<Vec2, kSigmaCount> zs;
  for (int i = 0; i < kSigmaCount; ++i) zs[i] = h.h(sig.points[i]);
  Vec2 offset = Vec2::Zero();
  for (int i = 1; i < kSigmaCount; ++i) offset += sig.mean_weights[i] * residual(zs[i], zs[0], h.angular_second);
  Vec2 z_hat = zs[0] + offset;
  if (h.angular_second) z_hat(1) = wrap_angle(z_hat(1));

  Mat2 pzz = Mat2::Zero();
  Eigen::Matrix<double, 4, 2> pxz = Eigen::Matrix<double, 4, 2>::Zero();
  for (int i = 0; i < kSigmaCount; ++i) {
    const Vec2 dz = residual(zs[i], zs[0], h.angular_second) - offset;
    const StateVector dx = sig.points[i] - sig.points[0];
    pzz += sig.cov_weights[i] * dz * dz.transpose();
    pxz += sig.cov_weights[i] * dx * dz.transpose();
  }
  Mat2 s = pzz + r + options.innovation_jitter * Mat2::Identity();
  s = 0.5 * (s + s.transpose());
  Eigen::LLT<Mat2> s_llt(s);
  if (s_llt.info() != Eigen::Success || !s.allFinite()) throw diverged();

  const Vec2 nu = residual(z, z_hat, h.angular_second);
  const Eigen::Matrix<double, 4, 2> gain = s_llt.solve(pxz.transpose()).transpose();

  ModelUpdate out;
  out.state = x_pred + gain * nu;
  out.cov = symmetrize(p_pred - gain * s * gain.transpose());
  if (!out.state.allFinite() || !positive_definite(out.cov)) throw diverged();

  const Vec2 whitened = s_llt.matrixL().solve(nu);
  const double log_det = 2.0 * std::log(s_llt.matrixL()(0, 0) * s_llt.matrixL()(1, 1));
  out.log_likelihood = -0.5 * whitened.squaredNorm() - 0.5 * log_det - std::log(2.0 * std::numbers::pi);
  return out;
}

}  // namespace

ChannelFilter imm_step(const ChannelFilter& filter, const ModelBank& bank, const Vec2& z, const Mat2& meas_cov,
                       const MeasurementFunction& h, const ImmOptions& options) {
  const int r = bank.size();
  if (static_cast<int>(filter.states.size()) != r || filter.model_prob.size() != r) {
    throw ContractError("imm_step: filter and model bank sizes differ");
  }
  const Eigen::VectorXd& u = filter.model_prob;

  // interaction
  const Eigen::VectorXd c_bar = bank.transition_prob.transpose() * u;
  std::vector<StateVector> mixed_x(static_cast<std::size_t>(r));
  std::vector<StateMatrix> mixed_p(static_cast<std::size_t>(r));
  for (int j = 0; j < r; ++j) {
    if (c_bar(j) <= 0.0) {
      mixed_x[j] = filter.states[j];
      mixed_p[j] = filter.covariances[j];
      continue;
    }
    StateVector x = StateVector::Zero();
    for (int i = 0; i < r; ++i) x += (bank.transition_prob(i, j) * u(i) / c_bar(j)) * filter.states[i];
    StateMatrix p = StateMatrix::Zero();
    for (int i = 0; i < r; ++i) {
      const double mu = bank.transition_prob(i, j) * u(i) / c_bar(j);
      const StateVector d = filter.states[i] - x;
      p += mu * (filter.covariances[i] + d * d.transpose());
    }
    mixed_x[j] = x;
    mixed_p[j] = symmetrize(p);
  }

  // model-matched filtering
  ChannelFilter out = filter;
  Eigen::VectorXd log_weight(r);
  for (int j = 0; j < r; ++j) {
    const MotionModel& model = bank.models[j];
    const ModelUpdate upd =
        ukf_cycle(mixed_x[j], mixed_p[j], transition_matrix(model),
                  process_noise_cov(bank.process_noise, model.sample_interval), z, meas_cov, h, options, filter);
    out.states[j] = upd.state;
    out.covariances[j] = upd.cov;
    log_weight(j) = (c_bar(j) > 0.0 ? std::log(c_bar(j)) : -INFINITY) + upd.log_likelihood;
  }

  // model probability update
  const double peak = log_weight.maxCoeff();
  if (!std::isfinite(peak)) throw FilterDivergenceError(filter.channel, filter.target);
  Eigen::VectorXd w = (log_weight.array() - peak).exp();
  out.model_prob = w / w.sum();
  return out;
}

ChannelFilter imm_step(const ChannelFilter& filter, const ModelBank& bank, const Vec2& z, const Mat2& meas_cov,
                       const RadarLayout& layout, const ImmOptions& options) {
  return imm_step(filter, bank, z, meas_cov, bistatic_measurement(layout, filter.channel), options);
}

FusedEstimate fuse_channels(std::span<const ChannelFilter> filters) {
  if (filters.empty()) throw std::invalid_argument("fuse_channels: no channel estimates");
  FusedEstimate out;
  out.model_prob = Eigen::VectorXd::Zero(filters.front().model_prob.size());
  for (const ChannelFilter& f : filters) {
    if (f.target != filters.front().target) throw ContractError("fuse_channels: mixed targets");
    out.state += f.combined_state();
    out.model_prob += f.model_prob;
  }
  const double count = static_cast<double>(filters.size());
  out.state /= count;
  out.model_prob /= count;
  out.contributors = static_cast<int>(filters.size());
  return out;
}

StateVector predict_state(const FusedEstimate& fused, const ModelBank& bank) {
  StateVector x = StateVector::Zero();
  for (int i = 0; i < bank.size(); ++i) x += fused.model_prob(i) * transition(fused.state, bank.models[i]);
  return x;
}

}  // namespace mgcrb
