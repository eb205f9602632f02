#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mgcrb/bandit.hpp"
#include "mgcrb/policies.hpp"
#include "mgcrb/super_arm.hpp"

#include <cmath>
#include <numbers>
#include <set>

using namespace mgcrb;

namespace {

RadarLayout colocated_layout() {
  RadarLayout l;
  l.tx_positions = {{0.0, 0.0}};
  l.rx_positions = {{0.0, 0.0}};
  l.tx_power = {1.0};
  l.effective_bandwidth = {1e5};
  l.beamwidth = {0.05};
  l.interference_power = {1.0};
  return l;
}

std::vector<int> ints(std::initializer_list<int> v) { return v; }

}  // namespace

TEST_CASE("played arm blends prediction and sample") {
  GroupState g = GroupState::warm_start(Eigen::MatrixXd::Constant(1, 2, 1.0), 0);
  const SuperArm arm = SuperArm::from_indices(1, 2, ints({0}), ints({0}));
  Eigen::MatrixXd pred(1, 2);
  pred << 4.0, 3.0;
  const std::vector<ArmObservation> obs = {{{0, 0}, 9.0}};
  const GroupState out = update_group(g, arm, obs, pred, 0.2);
  CHECK(out.y_hat(0, 0) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(out.y_hat(0, 1) == 3.0);  // unplayed arm takes the prediction
  CHECK(out.plays(0, 0) == 2);
  CHECK(out.plays(0, 1) == 1);

  const std::vector<ArmObservation> wrong = {{{0, 1}, 9.0}};
  CHECK_THROWS_AS(update_group(g, arm, wrong, pred, 0.2), ContractError);
  CHECK_THROWS_AS(update_group(g, arm, std::span<const ArmObservation>{}, pred, 0.2), ContractError);
}

TEST_CASE("ucb index golden") {
  Eigen::MatrixXd means(1, 1);
  means << 5.0;
  Eigen::MatrixXi plays(1, 1);
  plays << 2;
  CHECK(ucb_index(means, plays, std::numbers::e, 2.0)(0, 0) == doctest::Approx(6.0).epsilon(1e-12));
  // bonus shrinks with plays and grows with t
  plays << 8;
  CHECK(ucb_index(means, plays, std::numbers::e, 2.0)(0, 0) == doctest::Approx(5.5).epsilon(1e-12));
  CHECK(ucb_index(means, plays, 1.0, 2.0)(0, 0) == 5.0);
  CHECK_THROWS(ucb_index(means, plays, 0.5, 2.0));
  plays << 0;
  CHECK_THROWS_AS(ucb_index(means, plays, 3.0, 2.0), ContractError);
}

TEST_CASE("baseline smoothing golden") {
  CHECK(baseline_update(2.0, 10.0, true, 0.998) == doctest::Approx(9.984).epsilon(1e-12));
  CHECK(baseline_update(2.0, 10.0, false, 0.998) == 2.0);
}

TEST_CASE("classic ucb1 keeps the sample mean") {
  RunningMean s;
  const std::vector<double> samples = {3.0, 5.0, 10.0, 2.0};
  for (double g : samples) s = classic_ucb1_update(s, g, true);
  s = classic_ucb1_update(s, 100.0, false);
  CHECK(s.count == 4);
  CHECK(s.mean == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("group fusion by target weights") {
  Eigen::MatrixXd a(1, 2), b(1, 2);
  a << 10.0, 0.0;
  b << 0.0, 10.0;
  const std::vector<Eigen::MatrixXd> idx = {a, b};
  const std::vector<double> w = {0.6, 0.4};
  const Eigen::MatrixXd f = fuse_indices(idx, w);
  CHECK(f(0, 0) == doctest::Approx(6.0));
  CHECK(f(0, 1) == doctest::Approx(4.0));
  const std::vector<Eigen::MatrixXd> one = {a};
  const std::vector<double> unit = {1.0};
  CHECK(fuse_indices(one, unit) == a);
}

TEST_CASE("geometry-driven reward prediction") {
  const RadarLayout l = colocated_layout();
  const ScatterModel psi(1, 1, 1, 1.0);
  const StateVector est(100.0, 0.0, 0.0, 0.0);
  const StateVector away(200.0, 0.0, 0.0, 0.0);
  CHECK(predict_reward(8.0, away, est, l, psi, {0, 0}, 0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(predict_reward(8.0, est, est, l, psi, {0, 0}, 0, 0.998) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(predict_reward(8.0, away, est, l, psi, {0, 0}, 0, 0.0) == 8.0);
  // blend: 0.5 * 8/16 + 0.5 * 8
  CHECK(predict_reward(8.0, away, est, l, psi, {0, 0}, 0, 0.5) == doctest::Approx(4.25).epsilon(1e-12));
}

TEST_CASE("super arm enumeration") {
  const auto arms = enumerate_super_arms(4, 6, 2, 3);
  CHECK(arms.size() == 120);
  std::set<std::string> unique;
  for (const SuperArm& a : arms) {
    CHECK(a.is_feasible(2, 3));
    CHECK(a.channels().size() == 6);
    unique.insert(a.bit_string());
  }
  CHECK(unique.size() == 120);
  for (std::size_t i = 1; i < arms.size(); ++i) CHECK(precedes(arms[i - 1], arms[i]));
  CHECK(enumerate_super_arms(1, 1, 1, 1).size() == 1);
}

TEST_CASE("fixed arms map to bit vectors") {
  // transmitters {3, 4}, receivers {1, 3, 4} in one-based numbering
  const SuperArm fix1 = SuperArm::from_indices(4, 6, ints({2, 3}), ints({0, 2, 3}));
  CHECK(fix1.bit_string() == "0011|101100");
  const SuperArm fix2 = SuperArm::from_indices(4, 6, ints({2, 3}), ints({3, 4, 5}));
  CHECK(fix2.bit_string() == "0011|000111");
  const auto ch = fix1.channels();
  REQUIRE(ch.size() == 6);
  CHECK(ch.front().m == 2);
  CHECK(ch.front().n == 0);
  CHECK(ch.back().m == 3);
  CHECK(ch.back().n == 3);
  CHECK(SuperArm::from_position(fix1.position(), 4) == fix1);
}

TEST_CASE("exhaustive argmax") {
  const auto arms = enumerate_super_arms(4, 6, 2, 3);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(4, 6);
  v(2, 0) = 5.0;
  v(3, 2) = 4.0;
  v(3, 3) = 3.0;
  v(2, 3) = 1.0;
  const std::vector<Eigen::MatrixXd> vals = {v};
  const std::vector<double> w = {1.0};
  const ArmChoice c = exhaustive_argmax(arms, vals, w);
  CHECK(c.arm.bit_string() == "0011|101100");
  CHECK(c.value == doctest::Approx(13.0));
  // positive scaling does not move the argmax
  const std::vector<Eigen::MatrixXd> scaled = {v * 37.5};
  CHECK(exhaustive_argmax(arms, scaled, w).arm == c.arm);
  // ties go to the earliest arm
  const std::vector<Eigen::MatrixXd> flat = {Eigen::MatrixXd::Ones(4, 6)};
  CHECK(exhaustive_argmax(arms, flat, w).arm == arms.front());
}

TEST_CASE("expected reward is the weighted channel sum") {
  const SuperArm a = SuperArm::from_indices(2, 2, ints({0}), ints({0, 1}));
  Eigen::MatrixXd s1(2, 2), s2(2, 2);
  s1 << 1, 2, 3, 4;
  s2 << 10, 20, 30, 40;
  const std::vector<Eigen::MatrixXd> means = {s1, s2};
  const std::vector<double> w = {0.6, 0.4};
  CHECK(expected_reward(a, means, w) == doctest::Approx(0.6 * 3.0 + 0.4 * 30.0));
}

TEST_CASE("epsilon-greedy with epsilon 0 exploits") {
  RadarLayout l;
  for (int m = 0; m < 4; ++m) l.tx_positions.push_back({1000.0 * m, 0.0});
  for (int n = 0; n < 6; ++n) l.rx_positions.push_back({1000.0 * n, 5000.0});
  l.tx_power.assign(4, 1.0);
  l.effective_bandwidth.assign(4, 1e5);
  l.beamwidth.assign(6, 0.05);
  l.interference_power.assign(6, 1.0);
  const ScatterModel psi(4, 6, 1, 1.0);
  SelectionProblem p;
  p.layout = &l;
  p.scatter = &psi;
  p.ms = 2;
  p.ns = 3;
  p.omega = {1.0};
  p.params.epsilon = 0.0;
  p.feasible_arms = enumerate_super_arms(4, 6, 2, 3);
  auto policy = make_policy({"eg", PolicyKind::egreedy, std::nullopt}, p);
  Eigen::MatrixXd first = Eigen::MatrixXd::Ones(4, 6);
  first(0, 5) = first(1, 5) = first(0, 4) = first(1, 4) = first(0, 3) = first(1, 3) = 9.0;
  const std::vector<Eigen::MatrixXd> samples = {first};
  policy->warm_start(samples);
  const std::vector<StateVector> x = {StateVector(500.0, 0.0, 2000.0, 0.0)};
  const SelectionContext ctx{1, x, x, {}};
  Rng rng(1);
  for (int i = 0; i < 50; ++i) CHECK(policy->select(ctx, rng).bit_string() == "1100|000111");
}

TEST_CASE("policy factory rejects a missing fixed arm") {
  SelectionProblem p;
  p.ms = 2;
  p.ns = 3;
  CHECK_THROWS_AS(make_policy({"f", PolicyKind::fixed, std::nullopt}, p), ConfigError);
  const SuperArm bad = SuperArm::from_indices(4, 6, ints({0}), ints({0, 1, 2}));
  CHECK_THROWS_AS(make_policy({"f", PolicyKind::fixed, bad}, p), ConfigError);
  CHECK(parse_policy_kind("mgcrbcl") == PolicyKind::mgcrbcl);
  CHECK_THROWS_AS(parse_policy_kind("thompson"), ConfigError);
}
