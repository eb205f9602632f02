#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mgcrb/dynamics.hpp"

#include <cmath>
#include <numbers>

using namespace mgcrb;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// closed-form coordinated turn: rotate velocity by w dt, integrate position along the arc
StateVector turn_oracle(const StateVector& x, double w, double dt) {
  const double a = w * dt;
  const double vx = x(1), vy = x(3);
  StateVector out;
  out(1) = vx * std::cos(a) - vy * std::sin(a);
  out(3) = vx * std::sin(a) + vy * std::cos(a);
  out(0) = x(0) + (vx * std::sin(a) - vy * (1.0 - std::cos(a))) / w;
  out(2) = x(2) + (vx * (1.0 - std::cos(a)) + vy * std::sin(a)) / w;
  return out;
}

}  // namespace

TEST_CASE("ncv unit step") {
  const StateVector x(1.0, 1.0, 2.0, -1.0);
  const StateVector y = transition(x, MotionModel::ncv(1.0));
  CHECK(y(0) == 2.0);
  CHECK(y(1) == 1.0);
  CHECK(y(2) == 1.0);
  CHECK(y(3) == -1.0);
  const StateVector z = transition(x, MotionModel::ncv(2.5));
  CHECK(z(0) == doctest::Approx(3.5));
  CHECK(z(2) == doctest::Approx(-0.5));
}

TEST_CASE("nct rotates velocity by w dt counterclockwise") {
  const StateVector x(0.0, 100.0, 0.0, 0.0);
  const MotionModel m = MotionModel::nct(3.0 * kDeg, 1.0);
  const StateVector y = transition(x, m);
  CHECK(y(1) == doctest::Approx(100.0 * std::cos(3.0 * kDeg)).epsilon(1e-12));
  CHECK(y(3) == doctest::Approx(100.0 * std::sin(3.0 * kDeg)).epsilon(1e-12));
  CHECK(y(3) > 0.0);
  const StateVector expect = turn_oracle(x, 3.0 * kDeg, 1.0);
  CHECK((y - expect).norm() < 1e-9);
}

TEST_CASE("nct one step equals two half steps") {
  const StateVector x(500.0, 80.0, -200.0, 60.0);
  for (double w : {3.0 * kDeg, -3.0 * kDeg, 10.0 * kDeg}) {
    const StateVector full = transition(x, MotionModel::nct(w, 2.0));
    const MotionModel half = MotionModel::nct(w, 1.0);
    const StateVector twice = transition(transition(x, half), half);
    CHECK((full - twice).norm() < 1e-9);
  }
}

TEST_CASE("nct preserves speed over many steps") {
  StateVector x(0.0, 100.0, 0.0, 100.0);
  const double speed = std::hypot(x(1), x(3));
  const MotionModel m = MotionModel::nct(-3.0 * kDeg, 1.0);
  for (int i = 0; i < 1000; ++i) x = transition(x, m);
  CHECK(std::hypot(x(1), x(3)) == doctest::Approx(speed).epsilon(1e-9));
}

TEST_CASE("transitions are linear") {
  const StateVector a(1.0, 2.0, 3.0, 4.0);
  const StateVector b(-7.0, 0.5, 11.0, -2.0);
  for (const MotionModel& m : {MotionModel::ncv(1.0), MotionModel::nct(3.0 * kDeg, 1.0)}) {
    const StateVector lhs = transition(2.0 * a - 3.0 * b, m);
    const StateVector rhs = 2.0 * transition(a, m) - 3.0 * transition(b, m);
    CHECK((lhs - rhs).norm() < 1e-10);
  }
}

TEST_CASE("process noise structure") {
  // T = 1, q = 1: blocks [[1/4, 1/2], [1/2, 1]]
  const StateMatrix q1 = process_noise_cov(1.0, 1.0);
  StateMatrix expect = StateMatrix::Zero();
  expect.block<2, 2>(0, 0) << 0.25, 0.5, 0.5, 1.0;
  expect.block<2, 2>(2, 2) << 0.25, 0.5, 0.5, 1.0;
  CHECK((q1 - expect).cwiseAbs().maxCoeff() < 1e-12);

  // T = 2, q = 0.1: q [[T^4/4, T^3/2], [T^3/2, T^2]]
  const double t = 2.0, q = 0.1;
  const StateMatrix q2 = process_noise_cov(q, t);
  StateMatrix e2 = StateMatrix::Zero();
  e2.block<2, 2>(0, 0) << q * std::pow(t, 4) / 4.0, q * std::pow(t, 3) / 2.0, q * std::pow(t, 3) / 2.0, q * t * t;
  e2.block<2, 2>(2, 2) = e2.block<2, 2>(0, 0);
  CHECK((q2 - e2).cwiseAbs().maxCoeff() < 1e-12);

  // rank 2: two zero eigenvalues, the rest positive
  Eigen::SelfAdjointEigenSolver<StateMatrix> es(q2);
  const auto ev = es.eigenvalues();
  CHECK(std::abs(ev(0)) < 1e-12);
  CHECK(std::abs(ev(1)) < 1e-12);
  CHECK(ev(2) > 0.0);
  CHECK(ev(3) > 0.0);
}

TEST_CASE("truth generation") {
  TargetPlan plan;
  plan.initial_state = StateVector(5.0, 100.0, 5.0, 100.0);
  plan.segments = {{400, 440, MotionModel::nct(3.0 * kDeg, 1.0)}};
  CHECK_NOTHROW(plan.validate(1000));
  CHECK(plan.model_at(399).kind == MotionKind::ncv);
  CHECK(plan.model_at(400).kind == MotionKind::nct);
  CHECK(plan.model_at(439).kind == MotionKind::nct);
  CHECK(plan.model_at(440).kind == MotionKind::ncv);

  Rng a(42), b(42);
  const auto ta = generate_truth(plan, 1000, a);
  const auto tb = generate_truth(plan, 1000, b);
  REQUIRE(ta.size() == 1001);
  for (std::size_t i = 0; i < ta.size(); ++i) CHECK(ta[i] == tb[i]);

  // zero process noise and zero-variance start follow the noiseless transitions
  TargetPlan clean = plan;
  clean.process_noise = 0.0;
  clean.initial_covariance = StateMatrix::Identity() * 1e-30;
  Rng c(1);
  const auto tc = generate_truth(clean, 500, c);
  StateVector x = clean.initial_state;
  for (int t = 0; t < 500; ++t) x = transition(x, clean.model_at(t));
  CHECK((tc.back() - x).norm() < 1e-6);
}

TEST_CASE("plan validation") {
  TargetPlan plan;
  plan.segments = {{10, 5, MotionModel::nct(0.05, 1.0)}};
  CHECK_THROWS_AS(plan.validate(100), ConfigError);
  plan.segments = {{0, 20, MotionModel::nct(0.05, 1.0)}, {10, 30, MotionModel::nct(-0.05, 1.0)}};
  CHECK_THROWS_AS(plan.validate(100), ConfigError);
  plan.segments = {{90, 200, MotionModel::nct(0.05, 1.0)}};
  CHECK_THROWS_AS(plan.validate(100), ConfigError);
  plan.segments.clear();
  plan.initial_covariance = -StateMatrix::Identity();
  CHECK_THROWS_AS(plan.validate(100), ConfigError);
}

TEST_CASE("empirical process-noise covariance") {
  const StateMatrix q = process_noise_cov(0.1, 1.0);
  const Eigen::Matrix<double, 4, 2> g = noise_gain(1.0);
  Rng rng(7);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.1));
  StateMatrix acc = StateMatrix::Zero();
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const Eigen::Vector2d w(normal(rng), normal(rng));
    const StateVector d = g * w;
    acc += d * d.transpose();
  }
  acc /= draws;
  CHECK((acc - q).norm() / q.norm() < 0.03);
}

TEST_CASE("truth increments carry the process noise") {
  // NCV residuals x_{t+1} - F x_t should have covariance G Q G'
  TargetPlan plan;
  plan.initial_state = StateVector(0.0, 10.0, 0.0, -5.0);
  Rng rng(11);
  const auto truth = generate_truth(plan, 100000, rng);
  const StateMatrix f = transition_matrix(MotionModel::ncv(1.0));
  StateMatrix acc = StateMatrix::Zero();
  for (std::size_t t = 0; t + 1 < truth.size(); ++t) {
    const StateVector d = truth[t + 1] - f * truth[t];
    acc += d * d.transpose();
  }
  acc /= static_cast<double>(truth.size() - 1);
  const StateMatrix q = process_noise_cov(0.1, 1.0);
  CHECK((acc - q).norm() / q.norm() < 0.03);
}
