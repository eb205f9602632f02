#pragma once

#include "mgcrb/geometry.hpp"
#include "mgcrb/super_arm.hpp"

#include <functional>
#include <span>
#include <vector>

namespace mgcrb {

struct Measurement {
  double range_sum = 0.0;  // R_t + R_r, m
  double azimuth = 0.0;    // rad, in (-pi, pi]
  Channel channel;
  int target = 0;

  Vec2 vector() const { return {range_sum, azimuth}; }
};

/// One kinematic measurement and one SINR sample per (target, selected channel),
/// ordered by ascending target, then m, then n.
struct MeasurementBatch {
  int t = 0;
  std::vector<Measurement> measurements;
  std::vector<double> sinr_samples;
};

/// Wraps to (-pi, pi].
double wrap_angle(double a);

/// Noiseless (range sum, four-quadrant receiver bearing).
Vec2 ideal_measurement(const RadarLayout& layout, Position target, int m, int n);

Measurement noisy_measurement(const Vec2& ideal, const Mat2& cov, Rng& rng, Channel channel = {},
                              int target = 0);

/// Swerling-I SINR draw: exponential with the given mean.
double sample_sinr(double mean, Rng& rng);

/// Standardized draws for one (target, channel) observation: two N(0,1) values for
/// range and azimuth and one Exp(1) value scaling the SINR mean.
struct StandardDraws {
  double range = 0.0;
  double azimuth = 0.0;
  double sinr = 1.0;
};

StandardDraws draw_standard(Rng& rng);

/// ideal + sqrt(diag(cov)) * draws, azimuth wrapped.
Measurement apply_noise(const Vec2& ideal, const Mat2& cov, const StandardDraws& draws, Channel channel = {},
                        int target = 0);

struct ObservationModel {
  const RadarLayout* layout = nullptr;
  const ScatterModel* scatter = nullptr;
  std::span<const SinrBounds> bounds;  // one per target
  Mat2 sigma0 = Mat2::Identity();
};

MeasurementBatch observe(const ObservationModel& model, const SuperArm& arm,
                         std::span<const StateVector> states, int t, Rng& rng);

/// Same as above with draws supplied per (target, channel), so policies that select the
/// same channel at the same step see the same realization.
MeasurementBatch observe(const ObservationModel& model, const SuperArm& arm,
                         std::span<const StateVector> states, int t,
                         const std::function<StandardDraws(int, Channel)>& draws);

}  // namespace mgcrb
