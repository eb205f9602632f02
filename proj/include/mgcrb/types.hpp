#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace mgcrb {

/// Kinematic state ordered [x, vx, y, vy] (m, m/s).
using StateVector = Eigen::Matrix<double, 4, 1>;
using StateMatrix = Eigen::Matrix<double, 4, 4>;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

using Rng = std::mt19937_64;

struct Position {
  double x = 0.0;
  double y = 0.0;
};

inline Position position_of(const StateVector& s) { return {s(0), s(2)}; }

/// Zero-based transmitter/receiver pair.
struct Channel {
  int m = 0;
  int n = 0;
  friend bool operator==(const Channel&, const Channel&) = default;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Target coincides with a station, so a range is zero.
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

class ContractError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class FilterDivergenceError : public Error {
 public:
  FilterDivergenceError(Channel channel, int target)
      : Error("filter divergence on channel " + std::to_string(channel.m + 1) + "-" +
              std::to_string(channel.n + 1) + " for target " + std::to_string(target + 1)),
        channel_(channel),
        target_(target) {}

  Channel channel() const { return channel_; }
  int target() const { return target_; }

 private:
  Channel channel_;
  int target_;
};

}  // namespace mgcrb
