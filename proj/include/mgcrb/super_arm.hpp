#pragma once

#include "mgcrb/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mgcrb {

/// A joint transmitter/receiver selection: bit vectors delta_t (length M) and delta_r (length N).
class SuperArm {
 public:
  SuperArm() = default;
  SuperArm(std::vector<std::uint8_t> tx_bits, std::vector<std::uint8_t> rx_bits);

  /// From zero-based transmitter and receiver index lists.
  static SuperArm from_indices(int num_tx, int num_rx, std::span<const int> tx, std::span<const int> rx);
  /// From a concatenated position vector [delta_t | delta_r].
  static SuperArm from_position(std::span<const std::uint8_t> position, int num_tx);

  const std::vector<std::uint8_t>& tx_bits() const { return tx_; }
  const std::vector<std::uint8_t>& rx_bits() const { return rx_; }
  int num_tx() const { return static_cast<int>(tx_.size()); }
  int num_rx() const { return static_cast<int>(rx_.size()); }

  int selected_tx_count() const;
  int selected_rx_count() const;
  bool is_feasible(int ms, int ns) const;
  bool contains(Channel c) const { return tx_.at(c.m) && rx_.at(c.n); }

  std::vector<int> tx_indices() const;
  std::vector<int> rx_indices() const;
  /// Selected channels ordered by ascending m, then n.
  std::vector<Channel> channels() const;
  std::vector<std::uint8_t> position() const;

  /// "0011|101100"
  std::string bit_string() const;

  friend bool operator==(const SuperArm&, const SuperArm&) = default;

 private:
  std::vector<std::uint8_t> tx_;
  std::vector<std::uint8_t> rx_;
};

/// Tie-break order: compares selected tx index lists, then rx index lists, lexicographically.
bool precedes(const SuperArm& a, const SuperArm& b);

/// Every feasible super-arm, in `precedes` order.
std::vector<SuperArm> enumerate_super_arms(int num_tx, int num_rx, int ms, int ns);

/// Sum of matrix entries over the arm's channels.
double channel_sum(const SuperArm& arm, const Eigen::MatrixXd& values);

}  // namespace mgcrb
