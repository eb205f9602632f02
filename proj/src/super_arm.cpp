#include "mgcrb/super_arm.hpp"

#include <algorithm>
#include <numeric>

namespace mgcrb {

namespace {

void combinations(int n, int k, std::vector<std::vector<int>>& out) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return;
  while (true) {
    out.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<int> set_bits(const std::vector<std::uint8_t>& bits) {
  std::vector<int> out;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace

SuperArm::SuperArm(std::vector<std::uint8_t> tx_bits, std::vector<std::uint8_t> rx_bits)
    : tx_(std::move(tx_bits)), rx_(std::move(rx_bits)) {
  for (auto& b : tx_) b = b ? 1 : 0;
  for (auto& b : rx_) b = b ? 1 : 0;
}

SuperArm SuperArm::from_indices(int num_tx, int num_rx, std::span<const int> tx, std::span<const int> rx) {
  std::vector<std::uint8_t> tb(static_cast<std::size_t>(num_tx), 0);
  std::vector<std::uint8_t> rb(static_cast<std::size_t>(num_rx), 0);
  for (int m : tx) {
    if (m < 0 || m >= num_tx) throw ContractError("super arm: transmitter index out of range");
    tb[m] = 1;
  }
  for (int n : rx) {
    if (n < 0 || n >= num_rx) throw ContractError("super arm: receiver index out of range");
    rb[n] = 1;
  }
  return SuperArm(std::move(tb), std::move(rb));
}

SuperArm SuperArm::from_position(std::span<const std::uint8_t> position, int num_tx) {
  return SuperArm(std::vector<std::uint8_t>(position.begin(), position.begin() + num_tx),
                  std::vector<std::uint8_t>(position.begin() + num_tx, position.end()));
}

int SuperArm::selected_tx_count() const { return static_cast<int>(std::count(tx_.begin(), tx_.end(), 1)); }
int SuperArm::selected_rx_count() const { return static_cast<int>(std::count(rx_.begin(), rx_.end(), 1)); }

bool SuperArm::is_feasible(int ms, int ns) const {
  return selected_tx_count() == ms && selected_rx_count() == ns;
}

std::vector<int> SuperArm::tx_indices() const { return set_bits(tx_); }
std::vector<int> SuperArm::rx_indices() const { return set_bits(rx_); }

std::vector<Channel> SuperArm::channels() const {
  std::vector<Channel> out;
  for (int m : tx_indices()) {
    for (int n : rx_indices()) out.push_back({m, n});
  }
  return out;
}

std::vector<std::uint8_t> SuperArm::position() const {
  std::vector<std::uint8_t> out(tx_);
  out.insert(out.end(), rx_.begin(), rx_.end());
  return out;
}

std::string SuperArm::bit_string() const {
  std::string s;
  for (auto b : tx_) s.push_back(b ? '1' : '0');
  s.push_back('|');
  for (auto b : rx_) s.push_back(b ? '1' : '0');
  return s;
}

bool precedes(const SuperArm& a, const SuperArm& b) {
  const auto at = a.tx_indices();
  const auto bt = b.tx_indices();
  if (at != bt) return std::lexicographical_compare(at.begin(), at.end(), bt.begin(), bt.end());
  const auto ar = a.rx_indices();
  const auto br = b.rx_indices();
  return std::lexicographical_compare(ar.begin(), ar.end(), br.begin(), br.end());
}

std::vector<SuperArm> enumerate_super_arms(int num_tx, int num_rx, int ms, int ns) {
  std::vector<std::vector<int>> tx_sets;
  std::vector<std::vector<int>> rx_sets;
  combinations(num_tx, ms, tx_sets);
  combinations(num_rx, ns, rx_sets);
  std::vector<SuperArm> out;
  out.reserve(tx_sets.size() * rx_sets.size());
  for (const auto& t : tx_sets) {
    for (const auto& r : rx_sets) out.push_back(SuperArm::from_indices(num_tx, num_rx, t, r));
  }
  return out;
}

double channel_sum(const SuperArm& arm, const Eigen::MatrixXd& values) {
  double total = 0.0;
  for (std::size_t m = 0; m < arm.tx_bits().size(); ++m) {
    if (!arm.tx_bits()[m]) continue;
    for (std::size_t n = 0; n < arm.rx_bits().size(); ++n) {
      if (arm.rx_bits()[n]) total += values(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    }
  }
  return total;
}

}  // namespace mgcrb
