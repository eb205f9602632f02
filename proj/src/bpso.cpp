#include "mgcrb/bpso.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mgcrb::bpso {

void SwarmParams::validate() const {
  if (population < 2) throw ConfigError("swarm: population must be >= 2");
  if (max_iterations < 1) throw ConfigError("swarm: iterations must be >= 1");
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw ConfigError("swarm: c1 and c2 must be > 0");
  if (!(v_max > 0.0)) throw ConfigError("swarm: v_max must be > 0");
}

bool is_feasible(std::span<const std::uint8_t> position, int num_tx, int ms, int ns) {
  const auto tx = std::count(position.begin(), position.begin() + num_tx, 1);
  const auto rx = std::count(position.begin() + num_tx, position.end(), 1);
  return tx == ms && rx == ns;
}

double fitness(std::span<const std::uint8_t> position, const Eigen::MatrixXd& index, int ms, int ns) {
  const auto num_tx = static_cast<int>(index.rows());
  const auto num_rx = static_cast<int>(index.cols());
  if (static_cast<int>(position.size()) != num_tx + num_rx) {
    throw ContractError("bpso fitness: position length must equal M + N");
  }
  if (!is_feasible(position, num_tx, ms, ns)) return 0.0;
  double total = 0.0;
  for (int m = 0; m < num_tx; ++m) {
    if (!position[m]) continue;
    for (int n = 0; n < num_rx; ++n) {
      if (position[num_tx + n]) total += index(m, n);
    }
  }
  return total;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

bool improves(const Candidate& challenger, const Candidate& incumbent) {
  if (challenger.feasible != incumbent.feasible) return challenger.feasible;
  return challenger.fitness > incumbent.fitness;
}

Candidate Problem::evaluate(std::vector<std::uint8_t> position) const {
  Candidate c;
  c.feasible = is_feasible(position, num_tx(), ms, ns);
  c.fitness = fitness(position, *index, ms, ns);
  c.position = std::move(position);
  return c;
}

namespace {

// 53-bit uniform in [0, 1) from one engine call
double unit_draw(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<std::uint8_t> random_feasible(int num_tx, int num_rx, int ms, int ns, Rng& rng) {
  auto pick = [&rng](int n, int k) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    // partial Fisher-Yates with explicit uniform draws keeps the stream portable
    for (int i = 0; i < k; ++i) {
      std::uniform_int_distribution<int> d(i, n - 1);
      std::swap(idx[i], idx[d(rng)]);
    }
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < k; ++i) bits[idx[i]] = 1;
    return bits;
  };
  std::vector<std::uint8_t> pos = pick(num_tx, ms);
  const auto rx = pick(num_rx, ns);
  pos.insert(pos.end(), rx.begin(), rx.end());
  return pos;
}

}  // namespace

Swarm init_swarm(const Problem& problem, const SwarmParams& params, Rng& rng, const std::optional<SuperArm>& seed) {
  const int dim = problem.num_tx() + problem.num_rx();
  Swarm swarm;
  swarm.particles.resize(static_cast<std::size_t>(params.population));
  const int feasible_count = (params.population + 1) / 2;
  for (int i = 0; i < params.population; ++i) {
    Particle& p = swarm.particles[i];
    if (i == 0 && seed) {
      p.position = seed->position();
    } else if (i < feasible_count) {
      p.position = random_feasible(problem.num_tx(), problem.num_rx(), problem.ms, problem.ns, rng);
    } else {
      p.position.resize(static_cast<std::size_t>(dim));
      for (auto& b : p.position) b = unit_draw(rng) < 0.5 ? 1 : 0;
    }
    p.velocity.assign(static_cast<std::size_t>(dim), 0.0);
    p.personal_best = problem.evaluate(p.position);
    if (i == 0 || improves(p.personal_best, swarm.global_best)) swarm.global_best = p.personal_best;
  }
  return swarm;
}

double inertia_at(const SwarmParams& params, int q) {
  if (params.max_iterations <= 1) return params.inertia_start;
  const double frac = static_cast<double>(q) / static_cast<double>(params.max_iterations - 1);
  return params.inertia_start + (params.inertia_end - params.inertia_start) * frac;
}

void step(Swarm& swarm, const Problem& problem, const SwarmParams& params, double inertia, Rng& rng) {
  const std::vector<std::uint8_t> global = swarm.global_best.position;
  for (Particle& p : swarm.particles) {
    const double r1 = unit_draw(rng);
    const double r2 = unit_draw(rng);
    for (std::size_t j = 0; j < p.position.size(); ++j) {
      const double bit = p.position[j];
      double v = inertia * p.velocity[j] + params.c1 * r1 * (p.personal_best.position[j] - bit) +
                 params.c2 * r2 * (global[j] - bit);
      v = std::clamp(v, -params.v_max, params.v_max);
      p.velocity[j] = v;
      // positive velocity pulls toward 1, negative toward 0
      const double toward = p.position[j] ? -v : v;
      if (unit_draw(rng) < sigmoid(toward)) p.position[j] ^= 1;
    }
    Candidate c;
    c.feasible = is_feasible(p.position, problem.num_tx(), problem.ms, problem.ns);
    c.fitness = c.feasible ? fitness(p.position, *problem.index, problem.ms, problem.ns) : 0.0;
    if (improves(c, p.personal_best)) {
      p.personal_best.fitness = c.fitness;
      p.personal_best.feasible = c.feasible;
      p.personal_best.position = p.position;
    }
  }
  for (const Particle& p : swarm.particles) {
    if (improves(p.personal_best, swarm.global_best)) swarm.global_best = p.personal_best;
  }
}

SuperArm optimize(const Eigen::MatrixXd& index, int ms, int ns, const SwarmParams& params, Rng& rng,
                  const std::optional<SuperArm>& seed) {
  if (!index.allFinite()) throw ContractError("bpso: index matrix must be finite");
  const Problem problem{&index, ms, ns};
  Swarm swarm = init_swarm(problem, params, rng, seed);
  for (int q = 0; q < params.max_iterations; ++q) step(swarm, problem, params, inertia_at(params, q), rng);
  if (!swarm.global_best.feasible) throw Error("bpso: no feasible particle found");
  return SuperArm::from_position(swarm.global_best.position, problem.num_tx());
}

}  // namespace mgcrb::bpso
