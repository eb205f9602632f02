#include "mgcrb/sensing.hpp"

#include <cmath>
#include <numbers>

namespace mgcrb {

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::remainder(a, two_pi);
  if (w <= -std::numbers::pi) w += two_pi;
  return w;
}

Vec2 ideal_measurement(const RadarLayout& layout, Position target, int m, int n) {
  const ChannelGeometry g = channel_geometry(layout, target, m, n);
  return {g.tx_range + g.rx_range, g.azimuth};
}

Measurement noisy_measurement(const Vec2& ideal, const Mat2& cov, Rng& rng, Channel channel, int target) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Measurement out;
  out.range_sum = ideal(0) + std::sqrt(cov(0, 0)) * normal(rng);
  out.azimuth = wrap_angle(ideal(1) + std::sqrt(cov(1, 1)) * normal(rng));
  out.channel = channel;
  out.target = target;
  return out;
}

StandardDraws draw_standard(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::exponential_distribution<double> exp1(1.0);
  StandardDraws d;
  d.range = normal(rng);
  d.azimuth = normal(rng);
  d.sinr = exp1(rng);
  while (d.sinr <= 0.0) d.sinr = exp1(rng);
  return d;
}

Measurement apply_noise(const Vec2& ideal, const Mat2& cov, const StandardDraws& draws, Channel channel, int target) {
  Measurement out;
  out.range_sum = ideal(0) + std::sqrt(cov(0, 0)) * draws.range;
  out.azimuth = wrap_angle(ideal(1) + std::sqrt(cov(1, 1)) * draws.azimuth);
  out.channel = channel;
  out.target = target;
  return out;
}

double sample_sinr(double mean, Rng& rng) {
  if (!(mean > 0.0)) throw std::invalid_argument("sample_sinr: mean must be > 0");
  std::exponential_distribution<double> dist(1.0 / mean);
  double g = dist(rng);
  // exponential_distribution may return exactly 0 for a zero uniform draw
  while (g <= 0.0) g = dist(rng);
  return g;
}

MeasurementBatch observe(const ObservationModel& model, const SuperArm& arm,
                         std::span<const StateVector> states, int t, Rng& rng) {
  return observe(model, arm, states, t, [&rng](int, Channel) { return draw_standard(rng); });
}

MeasurementBatch observe(const ObservationModel& model, const SuperArm& arm,
                         std::span<const StateVector> states, int t,
                         const std::function<StandardDraws(int, Channel)>& draws) {
  const std::vector<Channel> channels = arm.channels();
  MeasurementBatch batch;
  batch.t = t;
  batch.measurements.reserve(channels.size() * states.size());
  batch.sinr_samples.reserve(channels.size() * states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    const Position p = position_of(states[k]);
    const SinrBounds& b = model.bounds[k];
    for (const Channel& c : channels) {
      const int target = static_cast<int>(k);
      const double s = true_sinr(*model.layout, *model.scatter, p, c.m, c.n, target);
      const Mat2 cov = measurement_covariance(lambda_coeff(s, b.min, b.max), model.sigma0);
      const StandardDraws d = draws(target, c);
      batch.measurements.push_back(apply_noise(ideal_measurement(*model.layout, p, c.m, c.n), cov, d, c, target));
      batch.sinr_samples.push_back(s * d.sinr);
    }
  }
  return batch;
}

}  // namespace mgcrb
