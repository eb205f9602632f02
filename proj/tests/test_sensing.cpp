#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mgcrb/sensing.hpp"

#include <cmath>
#include <numbers>

using namespace mgcrb;

namespace {

RadarLayout small_layout() {
  RadarLayout l;
  l.tx_positions = {{0.0, 0.0}, {10000.0, 0.0}};
  l.rx_positions = {{0.0, 10000.0}, {10000.0, 10000.0}, {5000.0, -5000.0}};
  l.tx_power = {1000.0, 1000.0};
  l.effective_bandwidth = {1e5, 1e5};
  l.beamwidth = {0.05, 0.05, 0.05};
  l.noise_power = 1e-26;
  l.interference_power = {0.5e-21, 0.5e-21, 0.5e-21};
  l.gain_constant = 1e-8;
  return l;
}

Mat2 sigma0() {
  Mat2 s = Mat2::Zero();
  s(0, 0) = 5.0;
  s(1, 1) = 0.002;
  return s;
}

}  // namespace

TEST_CASE("ideal measurement examples") {
  RadarLayout l = small_layout();
  // tx (0,0), rx (0,10000), target (3000, 4000): R_t = 5000, R_r = hypot(3000, -6000)
  const Vec2 z = ideal_measurement(l, {3000.0, 4000.0}, 0, 0);
  CHECK(z(0) == doctest::Approx(5000.0 + std::hypot(3000.0, 6000.0)).epsilon(1e-12));
  CHECK(z(1) == doctest::Approx(std::atan2(-6000.0, 3000.0)).epsilon(1e-12));
  // due west of rx 2: azimuth pi
  const Vec2 w = ideal_measurement(l, {0.0, 10000.0 - 1e-9}, 1, 1);
  CHECK(std::abs(std::abs(w(1)) - std::numbers::pi) < 1e-9);
}

TEST_CASE("angle wrapping") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(std::numbers::pi) == doctest::Approx(std::numbers::pi));
  CHECK(wrap_angle(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
  CHECK(wrap_angle(3.0 * std::numbers::pi / 2.0) == doctest::Approx(-std::numbers::pi / 2.0));
  CHECK(wrap_angle(-7.0) == doctest::Approx(-7.0 + 2.0 * std::numbers::pi));
}

TEST_CASE("measurement noise variances match the covariance") {
  const Vec2 ideal(20000.0, 0.3);
  for (double lambda : {0.2, 0.7, 1.2}) {
    const Mat2 cov = measurement_covariance(lambda, sigma0());
    Rng rng(17);
    const int draws = 100000;
    double s0 = 0, s1 = 0, q0 = 0, q1 = 0, c01 = 0;
    for (int i = 0; i < draws; ++i) {
      const Measurement z = noisy_measurement(ideal, cov, rng);
      const double d0 = z.range_sum - ideal(0);
      const double d1 = wrap_angle(z.azimuth - ideal(1));
      s0 += d0;
      s1 += d1;
      q0 += d0 * d0;
      q1 += d1 * d1;
      c01 += d0 * d1;
    }
    const double v0 = q0 / draws - (s0 / draws) * (s0 / draws);
    const double v1 = q1 / draws - (s1 / draws) * (s1 / draws);
    CHECK(std::abs(v0 / cov(0, 0) - 1.0) < 0.03);
    CHECK(std::abs(v1 / cov(1, 1) - 1.0) < 0.03);
    CHECK(std::abs(c01 / draws) / std::sqrt(cov(0, 0) * cov(1, 1)) < 0.02);
  }
}

TEST_CASE("swerling-I sinr samples are exponential about the mean") {
  Rng rng(3);
  const double mean = 7.5;
  const int draws = 1000000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double g = sample_sinr(mean, rng);
    REQUIRE(g > 0.0);
    sum += g;
    sq += g * g;
  }
  const double m = sum / draws;
  CHECK(std::abs(m / mean - 1.0) < 0.005);
  // exponential: variance = mean^2
  CHECK(std::abs((sq / draws - m * m) / (mean * mean) - 1.0) < 0.02);
  CHECK_THROWS(sample_sinr(0.0, rng));
}

TEST_CASE("observe: one measurement per target and channel, ordered") {
  const RadarLayout l = small_layout();
  const ScatterModel psi(2, 3, 2, 1.0);
  const std::vector<SinrBounds> bounds = {{1e-6, 10.0}, {1e-6, 10.0}};
  const ObservationModel model{&l, &psi, bounds, sigma0()};
  const std::vector<StateVector> states = {StateVector(3000.0, 10.0, 4000.0, 0.0),
                                           StateVector(7000.0, 0.0, 2000.0, 10.0)};
  const std::vector<int> tx = {0, 1};
  const std::vector<int> rx = {0, 1, 2};
  const SuperArm arm = SuperArm::from_indices(2, 3, tx, rx);
  Rng rng(5);
  const MeasurementBatch b = observe(model, arm, states, 12, rng);
  CHECK(b.t == 12);
  REQUIRE(b.measurements.size() == 12);
  REQUIRE(b.sinr_samples.size() == 12);
  int i = 0;
  for (int k = 0; k < 2; ++k) {
    for (int m = 0; m < 2; ++m) {
      for (int n = 0; n < 3; ++n, ++i) {
        CHECK(b.measurements[i].target == k);
        CHECK(b.measurements[i].channel.m == m);
        CHECK(b.measurements[i].channel.n == n);
      }
    }
  }
}

TEST_CASE("observe with supplied draws is reproducible per channel") {
  const RadarLayout l = small_layout();
  const ScatterModel psi(2, 3, 1, 1.0);
  const std::vector<SinrBounds> bounds = {{1e-6, 10.0}};
  const ObservationModel model{&l, &psi, bounds, sigma0()};
  const std::vector<StateVector> states = {StateVector(3000.0, 10.0, 4000.0, 0.0)};
  auto draws = [](int, Channel c) { return StandardDraws{0.1 * c.m, -0.2 * c.n, 1.0 + c.n}; };
  const std::vector<int> a_tx = {0, 1}, a_rx = {0, 1, 2}, b_tx = {1}, b_rx = {2};
  const MeasurementBatch a = observe(model, SuperArm::from_indices(2, 3, a_tx, a_rx), states, 1, draws);
  const MeasurementBatch b = observe(model, SuperArm::from_indices(2, 3, b_tx, b_rx), states, 1, draws);
  // channel (1, 2) is the last entry of a and the only entry of b
  CHECK(a.measurements.back().range_sum == b.measurements[0].range_sum);
  CHECK(a.measurements.back().azimuth == b.measurements[0].azimuth);
  CHECK(a.sinr_samples.back() == b.sinr_samples[0]);
  CHECK(b.sinr_samples[0] == doctest::Approx(3.0 * true_sinr(l, psi, {3000.0, 4000.0}, 1, 2, 0)));
}

TEST_CASE("noise across channels is uncorrelated") {
  const RadarLayout l = small_layout();
  const ScatterModel psi(2, 3, 1, 1.0);
  const std::vector<SinrBounds> bounds = {{1e-6, 10.0}};
  const ObservationModel model{&l, &psi, bounds, sigma0()};
  const std::vector<StateVector> states = {StateVector(3000.0, 10.0, 4000.0, 0.0)};
  const std::vector<int> tx = {0, 1}, rx = {0, 1, 2};
  const SuperArm arm = SuperArm::from_indices(2, 3, tx, rx);
  const Vec2 i0 = ideal_measurement(l, {3000.0, 4000.0}, 0, 0);
  const Vec2 i1 = ideal_measurement(l, {3000.0, 4000.0}, 1, 2);
  Rng rng(99);
  const int draws = 20000;
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (int i = 0; i < draws; ++i) {
    const MeasurementBatch b = observe(model, arm, states, 1, rng);
    const double x = b.measurements.front().range_sum - i0(0);
    const double y = b.measurements.back().range_sum - i1(0);
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
    sab += x * y;
  }
  const double cov = sab / draws - (sa / draws) * (sb / draws);
  const double corr =
      cov / std::sqrt((saa / draws - sa * sa / draws / draws) * (sbb / draws - sb * sb / draws / draws));
  CHECK(std::abs(corr) < 0.05);
}
