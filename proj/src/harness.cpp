#include "mgcrb/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

namespace mgcrb {

Rng make_stream(std::uint64_t master_seed, int trial, std::string_view consumer) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (char c : consumer) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(h),
                    static_cast<std::uint32_t>(h >> 32)};
  return Rng(seq);
}

namespace {

/// Simulator-side knowledge shared by every policy in a trial.
struct TrialWorld {
  std::vector<std::vector<StateVector>> truth;             // [k][t], t = 0..T
  std::vector<SinrBounds> bounds;                          // [k]
  std::vector<std::vector<Eigen::MatrixXd>> true_means;    // [t][k]
  std::vector<ArmChoice> optimal;                          // [t - 1]
  std::vector<StandardDraws> draws;                        // [t][k][m][n], t = 0..T
  int K = 0, M = 0, N = 0;

  const StandardDraws& draw(int t, int k, Channel c) const {
    return draws[((static_cast<std::size_t>(t) * K + k) * M + c.m) * N + c.n];
  }
};

TrialWorld build_world(const Scenario& sc, const std::vector<SuperArm>& feasible, std::uint64_t seed, int trial) {
  TrialWorld w;
  Rng truth_rng = make_stream(seed, trial, "truth");
  const int K = sc.num_targets();
  for (int k = 0; k < K; ++k) {
    w.truth.push_back(generate_truth(sc.targets[k], sc.horizon, truth_rng));
    w.bounds.push_back(sinr_bounds(sc.layout, sc.scatter, std::span(w.truth.back()).subspan(1), k));
  }
  w.true_means.resize(static_cast<std::size_t>(sc.horizon) + 1);
  for (int t = 0; t <= sc.horizon; ++t) {
    for (int k = 0; k < K; ++k) {
      w.true_means[t].push_back(true_sinr_matrix(sc.layout, sc.scatter, position_of(w.truth[k][t]), k));
    }
  }
  for (int t = 1; t <= sc.horizon; ++t) w.optimal.push_back(exhaustive_argmax(feasible, w.true_means[t], sc.omega));

  // channel noise is a property of the world: identical selections see identical measurements
  w.K = K;
  w.M = sc.layout.num_tx();
  w.N = sc.layout.num_rx();
  Rng obs_rng = make_stream(seed, trial, "observe");
  w.draws.resize(static_cast<std::size_t>(sc.horizon + 1) * K * w.M * w.N);
  for (auto& d : w.draws) d = draw_standard(obs_rng);
  return w;
}

/// Per-model mean of the channel posteriors; seeds every selected channel at the next step.
ChannelFilter feedback_filter(const std::vector<ChannelFilter>& filters) {
  ChannelFilter out = filters.front();
  const double count = static_cast<double>(filters.size());
  for (std::size_t j = 0; j < out.states.size(); ++j) {
    StateVector x = StateVector::Zero();
    StateMatrix p = StateMatrix::Zero();
    for (const ChannelFilter& f : filters) x += f.states[j] / count;
    for (const ChannelFilter& f : filters) {
      const StateVector d = f.states[j] - x;
      p += (f.covariances[j] + d * d.transpose()) / count;
    }
    out.states[j] = x;
    out.covariances[j] = 0.5 * (p + p.transpose());
  }
  out.model_prob = Eigen::VectorXd::Zero(out.model_prob.size());
  for (const ChannelFilter& f : filters) out.model_prob += f.model_prob / count;
  return out;
}

PolicyTrace run_policy(const Scenario& sc, const SelectionProblem& problem, const std::vector<ModelBank>& banks,
                       const TrialWorld& world, const PolicySpec& spec, std::uint64_t seed, int trial,
                       std::vector<DebugRow>* debug) {
  const int K = sc.num_targets();
  const int M = sc.layout.num_tx();
  const int N = sc.layout.num_rx();
  const int T = sc.horizon;
  Rng sel_rng = make_stream(seed, trial, "select/" + spec.name);
  auto policy = make_policy(spec, problem);

  PolicyTrace trace;
  trace.name = spec.name;
  trace.arms.reserve(T);
  trace.reward.reserve(T);
  trace.cumulative_regret.reserve(T);
  trace.squared_error.assign(K, std::vector<double>(static_cast<std::size_t>(T), 0.0));

  // warm start: every channel sampled once per target at t = 0
  std::vector<Eigen::MatrixXd> first(K);
  for (int k = 0; k < K; ++k) {
    first[k].resize(M, N);
    for (int m = 0; m < M; ++m) {
      for (int n = 0; n < N; ++n) first[k](m, n) = world.true_means[0][k](m, n) * world.draw(0, k, {m, n}).sinr;
    }
  }
  policy->warm_start(first);

  std::vector<FusedEstimate> fused(K);
  std::vector<StateVector> estimated(K);
  std::vector<StateVector> predicted(K);
  for (int k = 0; k < K; ++k) {
    fused[k].state = sc.targets[k].initial_state;
    fused[k].model_prob = banks[k].initial_prob;
    fused[k].contributors = 0;
    estimated[k] = fused[k].state;
    predicted[k] = predict_state(fused[k], banks[k]);
  }
  // per-target fused filter fed back to every selected channel at the next step
  std::vector<ChannelFilter> shared(K);
  for (int k = 0; k < K; ++k) {
    shared[k] = ChannelFilter::initialize(sc.targets[k].initial_state, sc.targets[k].initial_covariance,
                                          banks[k].initial_prob, {}, k);
  }

  const ObservationModel obs_model{&sc.layout, &sc.scatter, world.bounds, sc.sigma0};
  double regret = 0.0;
  std::vector<StateVector> states_t(K);

  for (int t = 1; t <= T; ++t) {
    const SelectionContext ctx{t, predicted, estimated, world.true_means[t]};
    SuperArm arm = policy->select(ctx, sel_rng);
    if (!arm.is_feasible(sc.ms, sc.ns)) {
      throw Error("policy '" + spec.name + "' selected an infeasible arm at t=" + std::to_string(t));
    }

    for (int k = 0; k < K; ++k) states_t[k] = world.truth[k][t];
    const MeasurementBatch batch = observe(obs_model, arm, states_t, t,
                                             [&](int k, Channel c) { return world.draw(t, k, c); });
    const std::size_t per_target = arm.channels().size();

    std::vector<std::vector<ArmObservation>> observations(K);
    for (int k = 0; k < K; ++k) {
      std::vector<ChannelFilter> updated;
      updated.reserve(per_target);
      for (std::size_t i = 0; i < per_target; ++i) {
        const std::size_t idx = static_cast<std::size_t>(k) * per_target + i;
        const Measurement& z = batch.measurements[idx];
        observations[k].push_back({z.channel, batch.sinr_samples[idx]});

        ChannelFilter start = shared[k];
        start.channel = z.channel;
        const double sinr = world.true_means[t][k](z.channel.m, z.channel.n);
        const Mat2 cov =
            measurement_covariance(lambda_coeff(sinr, world.bounds[k].min, world.bounds[k].max), sc.sigma0);
        try {
          updated.push_back(imm_step(start, banks[k], z.vector(), cov, sc.layout));
        } catch (const FilterDivergenceError&) {
          ++trace.divergences;  // excluded from this step's fusion
        }
      }
      if (!updated.empty()) {
        fused[k] = fuse_channels(updated);
        shared[k] = feedback_filter(updated);
      } else {
        fused[k].state = predicted[k];
        fused[k].contributors = 0;
        shared[k] = ChannelFilter::initialize(predicted[k], shared[k].combined_covariance(), fused[k].model_prob, {}, k);
      }
      estimated[k] = fused[k].state;
      predicted[k] = predict_state(fused[k], banks[k]);

      const double dx = fused[k].state(0) - world.truth[k][t](0);
      const double dy = fused[k].state(2) - world.truth[k][t](2);
      trace.squared_error[k][t - 1] = dx * dx + dy * dy;
    }
    policy->update(arm, observations);

    if (debug) {
      for (std::size_t i = 0; i < batch.measurements.size(); ++i) {
        const Measurement& z = batch.measurements[i];
        debug->push_back({t, spec.name, z, batch.sinr_samples[i], world.truth[z.target][t](0),
                          world.truth[z.target][t](2), fused[z.target].state(0), fused[z.target].state(2)});
      }
    }

    const double reward = expected_reward(arm, world.true_means[t], sc.omega);
    regret += world.optimal[t - 1].value - reward;
    trace.arms.push_back(std::move(arm));
    trace.reward.push_back(reward);
    trace.cumulative_regret.push_back(regret);
  }
  return trace;
}

SelectionProblem make_problem(const Scenario& sc) {
  SelectionProblem p;
  p.layout = &sc.layout;
  p.scatter = &sc.scatter;
  p.ms = sc.ms;
  p.ns = sc.ns;
  p.omega = sc.omega;
  p.params = sc.policy_params;
  p.swarm = sc.swarm;
  p.feasible_arms = enumerate_super_arms(sc.layout.num_tx(), sc.layout.num_rx(), sc.ms, sc.ns);
  return p;
}

}  // namespace

TrialRecord run_trial(const Scenario& sc, std::span<const PolicySpec> policies, std::uint64_t master_seed,
                      int trial_index, std::vector<DebugRow>* debug) {
  const SelectionProblem problem = make_problem(sc);
  std::vector<ModelBank> banks;
  for (int k = 0; k < sc.num_targets(); ++k) banks.push_back(sc.model_bank(k));
  const TrialWorld world = build_world(sc, problem.feasible_arms, master_seed, trial_index);

  TrialRecord rec;
  rec.trial = trial_index;
  for (const ArmChoice& c : world.optimal) {
    rec.optimal_reward.push_back(c.value);
    rec.optimal_arms.push_back(c.arm);
  }
  for (const PolicySpec& spec : policies) {
    rec.policies.push_back(run_policy(sc, problem, banks, world, spec, master_seed, trial_index, debug));
  }
  return rec;
}

TrialRecord run_trial(const Scenario& scenario, const PolicySpec& policy, std::uint64_t master_seed,
                      int trial_index) {
  return run_trial(scenario, std::span(&policy, 1), master_seed, trial_index);
}

double selection_agreement(std::span<const SuperArm> a, std::span<const SuperArm> b) {
  if (a.size() != b.size()) throw std::invalid_argument("selection_agreement: sequences differ in length");
  if (a.empty()) return 0.0;
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += (a[i] == b[i]) ? 1 : 0;
  return static_cast<double>(same) / static_cast<double>(a.size());
}

const PolicySummary& RunSummary::policy(std::string_view name) const {
  for (const PolicySummary& p : policies) {
    if (p.name == name) return p;
  }
  throw std::out_of_range("no policy named '" + std::string(name) + "' in run summary");
}

namespace {

/// Running sums, merged strictly in trial order.
struct Accumulator {
  std::vector<double> optimal;
  struct PerPolicy {
    std::vector<double> reward;
    std::vector<double> regret;
    std::vector<std::vector<double>> sq_error;
    double agreement = 0.0;
    int divergences = 0;
  };
  std::vector<PerPolicy> policies;

  Accumulator(std::size_t count, int K, int T)
      : optimal(static_cast<std::size_t>(T), 0.0), policies(count) {
    for (auto& p : policies) {
      p.reward.assign(static_cast<std::size_t>(T), 0.0);
      p.regret.assign(static_cast<std::size_t>(T), 0.0);
      p.sq_error.assign(K, std::vector<double>(static_cast<std::size_t>(T), 0.0));
    }
  }

  void merge(const TrialRecord& rec) {
    for (std::size_t t = 0; t < optimal.size(); ++t) optimal[t] += rec.optimal_reward[t];
    for (std::size_t i = 0; i < policies.size(); ++i) {
      const PolicyTrace& tr = rec.policies[i];
      PerPolicy& acc = policies[i];
      for (std::size_t t = 0; t < optimal.size(); ++t) {
        acc.reward[t] += tr.reward[t];
        acc.regret[t] += tr.cumulative_regret[t];
      }
      for (std::size_t k = 0; k < acc.sq_error.size(); ++k) {
        for (std::size_t t = 0; t < optimal.size(); ++t) acc.sq_error[k][t] += tr.squared_error[k][t];
      }
      acc.agreement += selection_agreement(tr.arms, rec.optimal_arms);
      acc.divergences += tr.divergences;
    }
  }
};

}  // namespace

RunSummary run_experiment(const Scenario& sc, std::span<const PolicySpec> policies, const ExperimentOptions& options) {
  if (options.trials < 1) throw std::invalid_argument("run_experiment: at least one trial required");
  const auto started = std::chrono::steady_clock::now();
  const int K = sc.num_targets();
  const int T = sc.horizon;
  const int trials = options.trials;

  Accumulator acc(policies.size(), K, T);
  if (options.debug) options.debug->assign(static_cast<std::size_t>(std::min(options.debug_trials, trials)), {});

  std::mutex mu;
  std::map<int, TrialRecord> pending;
  int next_merge = 0;
  std::atomic<int> next_trial{0};
  std::exception_ptr failure;

  auto worker = [&] {
    while (true) {
      const int trial = next_trial.fetch_add(1);
      if (trial >= trials) return;
      {
        std::lock_guard lock(mu);
        if (failure) return;
      }
      try {
        std::vector<DebugRow>* sink =
            (options.debug && trial < options.debug_trials) ? &(*options.debug)[trial] : nullptr;
        TrialRecord rec = run_trial(sc, policies, options.seed, trial, sink);
        std::lock_guard lock(mu);
        pending.emplace(trial, std::move(rec));
        while (!pending.empty() && pending.begin()->first == next_merge) {
          acc.merge(pending.begin()->second);
          pending.erase(pending.begin());
          ++next_merge;
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const int workers = std::max(1, std::min(options.workers, trials));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  RunSummary out;
  out.scenario = sc.name;
  out.trials = trials;
  out.horizon = T;
  out.seed = options.seed;
  out.omega = sc.omega;
  const double mc = static_cast<double>(trials);
  for (double v : acc.optimal) out.mean_optimal_reward.push_back(v / mc);

  for (std::size_t i = 0; i < policies.size(); ++i) {
    const auto& a = acc.policies[i];
    PolicySummary ps;
    ps.name = policies[i].name;
    PolicyCurves& c = ps.curves;
    for (int t = 0; t < T; ++t) {
      c.mean_reward.push_back(a.reward[t] / mc);
      c.mean_cumulative_regret.push_back(a.regret[t] / mc);
    }
    c.rmse.assign(K, {});
    c.weighted_rmse.assign(static_cast<std::size_t>(T), 0.0);
    ps.armse.assign(K, 0.0);
    for (int k = 0; k < K; ++k) {
      for (int t = 0; t < T; ++t) {
        const double r = std::sqrt(a.sq_error[k][t] / mc);
        c.rmse[k].push_back(r);
        c.weighted_rmse[t] += sc.omega[k] * r;
        ps.armse[k] += r;
      }
      ps.armse[k] /= T;
      ps.armse_mean += ps.armse[k] / K;
    }
    for (double r : c.weighted_rmse) ps.armse_weighted += r;
    ps.armse_weighted /= T;
    ps.total_regret = c.mean_cumulative_regret.back();
    ps.asr = a.agreement / mc;
    ps.divergences = a.divergences;
    out.policies.push_back(std::move(ps));
  }
  out.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

}  // namespace mgcrb
