#pragma once

#include "mgcrb/super_arm.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mgcrb::bpso {

struct SwarmParams {
  int population = 50;
  int max_iterations = 100;
  double c1 = 2.0;
  double c2 = 2.0;
  double inertia_start = 0.9;
  double inertia_end = 0.4;
  double v_max = 4.0;

  void validate() const;
};

/// Sum of index entries over the selected channels when the position selects exactly
/// ms transmitters and ns receivers, 0 otherwise.
double fitness(std::span<const std::uint8_t> position, const Eigen::MatrixXd& index, int ms, int ns);

bool is_feasible(std::span<const std::uint8_t> position, int num_tx, int ms, int ns);

double sigmoid(double x);

struct Candidate {
  std::vector<std::uint8_t> position;
  double fitness = 0.0;
  bool feasible = false;
};

/// Feasible candidates always outrank infeasible ones; among equals the incumbent stays.
bool improves(const Candidate& challenger, const Candidate& incumbent);

struct Particle {
  std::vector<std::uint8_t> position;
  std::vector<double> velocity;
  Candidate personal_best;
};

struct Swarm {
  std::vector<Particle> particles;
  Candidate global_best;
};

/// Problem shape shared by init/step/optimize.
struct Problem {
  const Eigen::MatrixXd* index = nullptr;
  int ms = 0;
  int ns = 0;

  int num_tx() const { return static_cast<int>(index->rows()); }
  int num_rx() const { return static_cast<int>(index->cols()); }
  Candidate evaluate(std::vector<std::uint8_t> position) const;
};

/// Half the swarm on random feasible positions, half on random bit vectors; the first
/// particle takes `seed` when given.
Swarm init_swarm(const Problem& problem, const SwarmParams& params, Rng& rng,
                 const std::optional<SuperArm>& seed = std::nullopt);

/// Inertia weight at iteration q (0-based), decaying linearly from start to end.
double inertia_at(const SwarmParams& params, int q);

/// One velocity update and XOR bit-flip pass, followed by best-keeping.
void step(Swarm& swarm, const Problem& problem, const SwarmParams& params, double inertia, Rng& rng);

SuperArm optimize(const Eigen::MatrixXd& index, int ms, int ns, const SwarmParams& params, Rng& rng,
                  const std::optional<SuperArm>& seed = std::nullopt);

}  // namespace mgcrb::bpso
