#include "mgcrb/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mgcrb {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("radar layout: " + what);
}

bool finite(Position p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace

void RadarLayout::validate() const {
  const auto m = tx_positions.size();
  const auto n = rx_positions.size();
  require(m >= 1, "at least one transmitter required");
  require(n >= 1, "at least one receiver required");
  require(tx_power.size() == m, "tx_power must have one entry per transmitter");
  require(effective_bandwidth.size() == m, "effective_bandwidth must have one entry per transmitter");
  require(beamwidth.size() == n, "beamwidth must have one entry per receiver");
  require(interference_power.size() == n, "interference_power must have one entry per receiver");
  require(std::all_of(tx_positions.begin(), tx_positions.end(), finite), "transmitter positions must be finite");
  require(std::all_of(rx_positions.begin(), rx_positions.end(), finite), "receiver positions must be finite");
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  require(std::all_of(tx_power.begin(), tx_power.end(), positive), "tx_power must be > 0");
  require(std::all_of(effective_bandwidth.begin(), effective_bandwidth.end(), positive),
          "effective_bandwidth must be > 0");
  require(std::all_of(beamwidth.begin(), beamwidth.end(), positive), "beamwidth must be > 0");
  require(std::all_of(interference_power.begin(), interference_power.end(), positive),
          "interference_power must be > 0");
  require(positive(noise_power), "noise_power must be > 0");
  require(positive(gain_constant), "gain_constant must be > 0");
}

ScatterModel::ScatterModel(int num_tx, int num_rx, int num_targets, double value)
    : num_tx_(num_tx),
      num_rx_(num_rx),
      num_targets_(num_targets),
      psi_(static_cast<std::size_t>(num_tx) * num_rx * num_targets, value) {}

bool ScatterModel::is_uniform() const {
  return std::adjacent_find(psi_.begin(), psi_.end(), std::not_equal_to<>()) == psi_.end();
}

void ScatterModel::validate() const {
  if (psi_.empty()) throw ConfigError("scatter model: empty");
  for (double v : psi_) {
    if (!(std::isfinite(v) && v > 0.0)) throw ConfigError("scatter model: all coefficients must be > 0");
  }
}

ChannelGeometry channel_geometry(const RadarLayout& layout, Position target, int m, int n) {
  const Position tx = layout.tx_positions.at(m);
  const Position rx = layout.rx_positions.at(n);
  ChannelGeometry g;
  g.tx_range = std::hypot(target.x - tx.x, target.y - tx.y);
  g.rx_range = std::hypot(target.x - rx.x, target.y - rx.y);
  if (g.tx_range == 0.0 || g.rx_range == 0.0) {
    throw DegenerateGeometryError("target coincides with station on channel " + std::to_string(m + 1) +
                                  "-" + std::to_string(n + 1));
  }
  g.azimuth = std::atan2(target.y - rx.y, target.x - rx.x);
  const double product = g.tx_range * g.rx_range;
  g.path_loss = 1.0 / (product * product);
  return g;
}

double true_sinr(const RadarLayout& layout, const ScatterModel& scatter, Position target, int m,
                 int n, int k) {
  const ChannelGeometry g = channel_geometry(layout, target, m, n);
  const double noise = layout.noise_power + layout.interference_power.at(n);
  return layout.gain_constant * g.path_loss * scatter(m, n, k) * layout.tx_power.at(m) / noise;
}

Eigen::MatrixXd true_sinr_matrix(const RadarLayout& layout, const ScatterModel& scatter,
                                 Position target, int k) {
  Eigen::MatrixXd out(layout.num_tx(), layout.num_rx());
  for (int m = 0; m < layout.num_tx(); ++m) {
    for (int n = 0; n < layout.num_rx(); ++n) out(m, n) = true_sinr(layout, scatter, target, m, n, k);
  }
  return out;
}

double lambda_coeff(double s, double s_min, double s_max) {
  if (!(s_max > s_min)) throw std::invalid_argument("lambda_coeff: s_max must exceed s_min");
  return (s - s_min) / (s_max - s_min) + 0.2;
}

SinrBounds sinr_bounds(const RadarLayout& layout, const ScatterModel& scatter,
                       std::span<const StateVector> truth, int k) {
  if (truth.empty()) throw std::invalid_argument("sinr_bounds: empty trajectory");
  double lowest = std::numeric_limits<double>::infinity();
  for (const StateVector& s : truth) {
    const Position p = position_of(s);
    for (int m = 0; m < layout.num_tx(); ++m) {
      for (int n = 0; n < layout.num_rx(); ++n) lowest = std::min(lowest, true_sinr(layout, scatter, p, m, n, k));
    }
  }
  return {lowest, kSinrNormalizationMax};
}

Mat2 measurement_covariance(double lambda, const Mat2& sigma0) {
  if (!(lambda > 0.0)) throw std::invalid_argument("measurement_covariance: lambda must be > 0");
  Mat2 out = Mat2::Zero();
  out(0, 0) = sigma0(0, 0) / lambda;
  out(1, 1) = sigma0(1, 1) / lambda;
  return out;
}

}  // namespace mgcrb
