#pragma once

#include "mgcrb/types.hpp"

#include <span>
#include <vector>

namespace mgcrb {

struct RadarLayout {
  std::vector<Position> tx_positions;
  std::vector<Position> rx_positions;
  std::vector<double> tx_power;             // W
  std::vector<double> effective_bandwidth;  // Hz, carried but unused by the SINR scaling scheme
  std::vector<double> beamwidth;            // rad, carried but unused by the SINR scaling scheme
  double noise_power = 1e-26;               // W
  std::vector<double> interference_power;   // W, per receiver
  double gain_constant = 1.0;

  int num_tx() const { return static_cast<int>(tx_positions.size()); }
  int num_rx() const { return static_cast<int>(rx_positions.size()); }

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;
};

/// Scattering coefficients psi[k][m][n], constant in time.
class ScatterModel {
 public:
  ScatterModel() = default;
  ScatterModel(int num_tx, int num_rx, int num_targets, double value = 1.0);

  double operator()(int m, int n, int k) const { return psi_[index(m, n, k)]; }
  double& at(int m, int n, int k) { return psi_[index(m, n, k)]; }

  int num_tx() const { return num_tx_; }
  int num_rx() const { return num_rx_; }
  int num_targets() const { return num_targets_; }
  bool is_uniform() const;
  const std::vector<double>& values() const { return psi_; }

  void validate() const;

 private:
  std::size_t index(int m, int n, int k) const {
    return (static_cast<std::size_t>(k) * num_tx_ + m) * num_rx_ + n;
  }

  int num_tx_ = 0;
  int num_rx_ = 0;
  int num_targets_ = 0;
  std::vector<double> psi_;
};

struct ChannelGeometry {
  double tx_range = 0.0;   // m
  double rx_range = 0.0;   // m
  double azimuth = 0.0;    // rad, receiver-to-target bearing
  double path_loss = 0.0;  // (R_t R_r)^-2, m^-4
};

ChannelGeometry channel_geometry(const RadarLayout& layout, Position target, int m, int n);

double true_sinr(const RadarLayout& layout, const ScatterModel& scatter, Position target, int m,
                 int n, int k);

/// Linear SINR of every channel for target k, as an M x N matrix.
Eigen::MatrixXd true_sinr_matrix(const RadarLayout& layout, const ScatterModel& scatter,
                                 Position target, int k);

struct SinrBounds {
  double min = 0.0;
  double max = 0.0;
};

/// Upper normalization bound used by the noise-scaling coefficient.
inline constexpr double kSinrNormalizationMax = 10.0;

/// (s - s_min) / (s_max - s_min) + 0.2, unclamped.
double lambda_coeff(double s, double s_min, double s_max);

/// Minimum true SINR of target k over every channel and every state in `truth`;
/// the maximum is pinned to kSinrNormalizationMax.
SinrBounds sinr_bounds(const RadarLayout& layout, const ScatterModel& scatter,
                       std::span<const StateVector> truth, int k);

/// diag(sigma0) / lambda.
Mat2 measurement_covariance(double lambda, const Mat2& sigma0);

}  // namespace mgcrb
