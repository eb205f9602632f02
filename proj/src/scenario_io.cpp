#include "mgcrb/scenario_io.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace mgcrb {

ModelBank Scenario::model_bank(int k) const {
  ModelBank bank;
  bank.models = {MotionModel::ncv(sample_interval), MotionModel::nct(turn_rate, sample_interval),
                 MotionModel::nct(-turn_rate, sample_interval)};
  bank.transition_prob = model_transition;
  bank.initial_prob = initial_model_prob;
  bank.process_noise = targets.at(k).process_noise;
  return bank;
}

void Scenario::validate() const {
  layout.validate();
  scatter.validate();
  const int K = num_targets();
  if (K < 1) throw ConfigError("scenario: at least one target required");
  if (scatter.num_tx() != layout.num_tx() || scatter.num_rx() != layout.num_rx() || scatter.num_targets() != K) {
    throw ConfigError("scenario: scatter model dimensions must be M x N x K");
  }
  if (horizon < 1) throw ConfigError("scenario: horizon must be >= 1");
  if (!(sample_interval > 0.0)) throw ConfigError("scenario: sample_interval must be > 0");
  if (ms < 1 || ms > layout.num_tx()) throw ConfigError("scenario: selected transmitters must lie in [1, M]");
  if (ns < 1 || ns > layout.num_rx()) throw ConfigError("scenario: selected receivers must lie in [1, N]");
  if (static_cast<int>(omega.size()) != K) throw ConfigError("scenario: one weight per target required");
  double total = 0.0;
  for (double w : omega) {
    if (!(w >= 0.0)) throw ConfigError("scenario: target weights must be >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("scenario: target weights must sum to 1");
  for (const TargetPlan& p : targets) {
    p.validate(horizon);
    if (p.sample_interval != sample_interval) throw ConfigError("scenario: target sample interval mismatch");
  }
  if (!(turn_rate != 0.0 && std::isfinite(turn_rate))) throw ConfigError("scenario: turn rate must be nonzero");
  for (int k = 0; k < K; ++k) model_bank(k).validate();
  if (!(sigma0(0, 0) > 0.0 && sigma0(1, 1) > 0.0)) throw ConfigError("scenario: base measurement variances must be > 0");
  policy_params.validate();
  swarm.validate();
  if (policies.empty()) throw ConfigError("scenario: at least one policy required");
  for (std::size_t i = 0; i < policies.size(); ++i) {
    const PolicySpec& p = policies[i];
    if (p.name.empty()) throw ConfigError("scenario: policy names must be non-empty");
    for (std::size_t j = 0; j < i; ++j) {
      if (policies[j].name == p.name) throw ConfigError("scenario: duplicate policy name '" + p.name + "'");
    }
    if (p.kind == PolicyKind::fixed) {
      if (!p.fixed_arm) throw ConfigError("policy '" + p.name + "': fixed policy needs transmitters and receivers");
      if (p.fixed_arm->num_tx() != layout.num_tx() || p.fixed_arm->num_rx() != layout.num_rx()) {
        throw ConfigError("policy '" + p.name + "': fixed arm dimensions differ from the layout");
      }
      if (!p.fixed_arm->is_feasible(ms, ns)) {
        throw ConfigError("policy '" + p.name + "': fixed arm must select exactly " + std::to_string(ms) +
                          " transmitters and " + std::to_string(ns) + " receivers");
      }
    }
  }
  if (monte_carlo < 1) throw ConfigError("scenario: monte_carlo must be >= 1");
}

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

[[noreturn]] void fail(const YAML::Node& node, const std::string& what) {
  const YAML::Mark mark = node.Mark();
  if (mark.is_null()) throw ConfigError(what);
  throw ConfigError("line " + std::to_string(mark.line + 1) + ", column " + std::to_string(mark.column + 1) + ": " +
                    what);
}

YAML::Node required(const YAML::Node& parent, const char* key) {
  YAML::Node n = parent[key];
  if (!n) fail(parent, std::string("missing required key '") + key + "'");
  return n;
}

template <typename T>
T as(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(n, "invalid value for '" + key + "'");
  }
}

template <typename T>
T get(const YAML::Node& parent, const char* key, T fallback) {
  YAML::Node n = parent[key];
  return n ? as<T>(n, key) : fallback;
}

std::vector<double> doubles(const YAML::Node& n, const std::string& key) { return as<std::vector<double>>(n, key); }

Position position_from(const YAML::Node& station) {
  return {as<double>(required(station, "x"), "x"), as<double>(required(station, "y"), "y")};
}

StateVector state_from(const YAML::Node& n, const std::string& key) {
  const auto v = doubles(n, key);
  if (v.size() != 4) fail(n, key + " must have 4 entries [x, vx, y, vy]");
  return StateVector(v[0], v[1], v[2], v[3]);
}

std::vector<int> one_based(const YAML::Node& n, const std::string& key) {
  std::vector<int> out;
  for (int v : as<std::vector<int>>(n, key)) out.push_back(v - 1);
  return out;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ": line " + std::to_string(e.mark.line + 1) + ", column " +
                      std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError(source + ": top level must be a mapping");

  try {
    Scenario sc;
    sc.name = get<std::string>(root, "name", "scenario");
    sc.horizon = get<int>(root, "horizon", 1000);
    sc.sample_interval = get<double>(root, "sample_interval", 1.0);
    sc.monte_carlo = get<int>(root, "monte_carlo", 50);
    sc.seed = get<std::uint64_t>(root, "seed", 1);
    sc.output_dir = get<std::string>(root, "output_dir", "out");

    if (YAML::Node sel = root["selection"]) {
      sc.ms = get<int>(sel, "transmitters", 2);
      sc.ns = get<int>(sel, "receivers", 3);
    }

    // radar layout
    const YAML::Node radar = required(root, "radar");
    RadarLayout& L = sc.layout;
    L.gain_constant = get<double>(radar, "gain_constant", 1.0);
    L.noise_power = get<double>(radar, "noise_power", 1e-26);
    const YAML::Node txs = required(radar, "transmitters");
    if (!txs.IsSequence()) fail(txs, "'transmitters' must be a list");
    for (const YAML::Node& tx : txs) {
      L.tx_positions.push_back(position_from(tx));
      L.tx_power.push_back(get<double>(tx, "power", 1000.0));
      L.effective_bandwidth.push_back(get<double>(tx, "bandwidth", 1e5));
    }
    const YAML::Node rxs = required(radar, "receivers");
    if (!rxs.IsSequence()) fail(rxs, "'receivers' must be a list");
    for (const YAML::Node& rx : rxs) {
      L.rx_positions.push_back(position_from(rx));
      L.beamwidth.push_back(get<double>(rx, "beamwidth_deg", 3.0) * kDeg);
      L.interference_power.push_back(get<double>(rx, "interference_power", 0.5e-21));
    }

    // targets
    const YAML::Node targets = required(root, "targets");
    if (!targets.IsSequence() || targets.size() == 0) fail(targets, "'targets' must be a non-empty list");
    for (const YAML::Node& tn : targets) {
      TargetPlan plan;
      plan.sample_interval = sc.sample_interval;
      plan.initial_state = state_from(required(tn, "initial_state"), "initial_state");
      const auto diag = YAML::Node(tn["initial_covariance_diag"])
                            ? doubles(tn["initial_covariance_diag"], "initial_covariance_diag")
                            : std::vector<double>{20.0, 20.0, 20.0, 20.0};
      if (diag.size() != 4) fail(tn, "initial_covariance_diag must have 4 entries");
      plan.initial_covariance = StateVector(diag[0], diag[1], diag[2], diag[3]).asDiagonal();
      plan.process_noise = get<double>(tn, "process_noise", 0.1);
      if (YAML::Node man = tn["maneuvers"]) {
        for (const YAML::Node& seg : man) {
          MotionSegment s;
          s.start_t = as<int>(required(seg, "start"), "start");
          s.end_t = as<int>(required(seg, "end"), "end");
          s.model = MotionModel::nct(as<double>(required(seg, "turn_rate_deg"), "turn_rate_deg") * kDeg,
                                     sc.sample_interval);
          plan.segments.push_back(s);
        }
      }
      sc.targets.push_back(plan);
      sc.omega.push_back(get<double>(tn, "weight", 1.0 / static_cast<double>(targets.size())));
    }
    const int K = sc.num_targets();

    // scattering
    sc.scatter = ScatterModel(L.num_tx(), L.num_rx(), K, 1.0);
    if (YAML::Node sn = radar["scatter"]) {
      if (sn.IsScalar()) {
        sc.scatter = ScatterModel(L.num_tx(), L.num_rx(), K, as<double>(sn, "scatter"));
      } else {
        const auto v = doubles(sn, "scatter");
        if (v.size() != sc.scatter.values().size()) fail(sn, "scatter list must have K*M*N entries");
        std::size_t i = 0;
        for (int k = 0; k < K; ++k) {
          for (int m = 0; m < L.num_tx(); ++m) {
            for (int n = 0; n < L.num_rx(); ++n) sc.scatter.at(m, n, k) = v[i++];
          }
        }
      }
    }

    // tracking
    const YAML::Node tracking = root["tracking"];
    sc.turn_rate = (tracking ? get<double>(tracking, "turn_rate_deg", 3.0) : 3.0) * kDeg;
    const double stay = tracking ? get<double>(tracking, "stay_probability", 0.8) : 0.8;
    sc.model_transition = Eigen::MatrixXd::Constant(3, 3, (1.0 - stay) / 2.0);
    sc.model_transition.diagonal().setConstant(stay);
    std::vector<double> u0{0.8, 0.1, 0.1};
    double range_var = 5.0;
    double azimuth_var = 0.002;
    if (tracking) {
      if (tracking["initial_model_prob"]) u0 = doubles(tracking["initial_model_prob"], "initial_model_prob");
      range_var = get<double>(tracking, "range_variance", range_var);
      azimuth_var = get<double>(tracking, "azimuth_variance", azimuth_var);
    }
    if (u0.size() != 3) fail(tracking, "initial_model_prob must have 3 entries (NCV, NCT+, NCT-)");
    sc.initial_model_prob = Eigen::Vector3d(u0[0], u0[1], u0[2]);
    sc.sigma0 = Mat2::Zero();
    sc.sigma0(0, 0) = range_var;
    sc.sigma0(1, 1) = azimuth_var;

    if (YAML::Node pp = root["policy_params"]) {
      PolicyParams& p = sc.policy_params;
      p.fusion_weight = get<double>(pp, "fusion_weight", p.fusion_weight);
      p.prediction_blend = get<double>(pp, "prediction_blend", p.prediction_blend);
      p.exploration = get<double>(pp, "exploration", p.exploration);
      p.epsilon = get<double>(pp, "epsilon", p.epsilon);
      p.baseline_smoothing = get<double>(pp, "baseline_smoothing", p.baseline_smoothing);
    }
    if (YAML::Node sw = root["swarm"]) {
      bpso::SwarmParams& s = sc.swarm;
      s.population = get<int>(sw, "population", s.population);
      s.max_iterations = get<int>(sw, "iterations", s.max_iterations);
      s.c1 = get<double>(sw, "c1", s.c1);
      s.c2 = get<double>(sw, "c2", s.c2);
      s.inertia_start = get<double>(sw, "inertia_start", s.inertia_start);
      s.inertia_end = get<double>(sw, "inertia_end", s.inertia_end);
      s.v_max = get<double>(sw, "v_max", s.v_max);
    }

    const YAML::Node policies = required(root, "policies");
    if (!policies.IsSequence()) fail(policies, "'policies' must be a list");
    for (const YAML::Node& pn : policies) {
      PolicySpec spec;
      spec.name = as<std::string>(required(pn, "name"), "name");
      const std::string kind = get<std::string>(pn, "kind", spec.name);
      try {
        spec.kind = parse_policy_kind(kind);
      } catch (const ConfigError& e) {
        fail(pn, e.what());
      }
      if (spec.kind == PolicyKind::fixed) {
        const auto tx = one_based(required(pn, "transmitters"), "transmitters");
        const auto rx = one_based(required(pn, "receivers"), "receivers");
        try {
          spec.fixed_arm = SuperArm::from_indices(L.num_tx(), L.num_rx(), tx, rx);
        } catch (const ContractError& e) {
          fail(pn, e.what());
        }
      }
      sc.policies.push_back(std::move(spec));
    }

    sc.validate();
    return sc;
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  } catch (const YAML::Exception& e) {
    throw ConfigError(source + ": line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

std::filesystem::path resolve_scenario_path(const std::string& name_or_path) {
  const std::filesystem::path direct(name_or_path);
  if (std::filesystem::exists(direct)) return direct;
  const std::filesystem::path bundled = std::filesystem::path(MGCRB_SCENARIO_DIR) / (name_or_path + ".yaml");
  if (std::filesystem::exists(bundled)) return bundled;
  throw ConfigError("scenario '" + name_or_path + "' is neither a file nor a bundled scenario");
}

std::string to_yaml(const Scenario& sc) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << sc.name;
  out << YAML::Key << "horizon" << YAML::Value << sc.horizon;
  out << YAML::Key << "sample_interval" << YAML::Value << sc.sample_interval;
  out << YAML::Key << "monte_carlo" << YAML::Value << sc.monte_carlo;
  out << YAML::Key << "seed" << YAML::Value << sc.seed;
  out << YAML::Key << "output_dir" << YAML::Value << sc.output_dir;
  out << YAML::Key << "selection" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "transmitters" << YAML::Value << sc.ms;
  out << YAML::Key << "receivers" << YAML::Value << sc.ns;
  out << YAML::EndMap;

  const RadarLayout& L = sc.layout;
  out << YAML::Key << "radar" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "gain_constant" << YAML::Value << L.gain_constant;
  out << YAML::Key << "noise_power" << YAML::Value << L.noise_power;
  if (sc.scatter.is_uniform()) {
    out << YAML::Key << "scatter" << YAML::Value << sc.scatter.values().front();
  } else {
    out << YAML::Key << "scatter" << YAML::Value << YAML::Flow << sc.scatter.values();
  }
  out << YAML::Key << "transmitters" << YAML::Value << YAML::BeginSeq;
  for (int m = 0; m < L.num_tx(); ++m) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "x" << YAML::Value << L.tx_positions[m].x << YAML::Key << "y"
        << YAML::Value << L.tx_positions[m].y << YAML::Key << "power" << YAML::Value << L.tx_power[m] << YAML::Key
        << "bandwidth" << YAML::Value << L.effective_bandwidth[m] << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "receivers" << YAML::Value << YAML::BeginSeq;
  for (int n = 0; n < L.num_rx(); ++n) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "x" << YAML::Value << L.rx_positions[n].x << YAML::Key << "y"
        << YAML::Value << L.rx_positions[n].y << YAML::Key << "beamwidth_deg" << YAML::Value
        << L.beamwidth[n] / kDeg << YAML::Key << "interference_power" << YAML::Value << L.interference_power[n]
        << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;

  out << YAML::Key << "targets" << YAML::Value << YAML::BeginSeq;
  for (int k = 0; k < sc.num_targets(); ++k) {
    const TargetPlan& p = sc.targets[k];
    out << YAML::BeginMap;
    out << YAML::Key << "weight" << YAML::Value << sc.omega[k];
    out << YAML::Key << "initial_state" << YAML::Value << YAML::Flow
        << std::vector<double>(p.initial_state.data(), p.initial_state.data() + 4);
    const StateVector d = p.initial_covariance.diagonal();
    out << YAML::Key << "initial_covariance_diag" << YAML::Value << YAML::Flow
        << std::vector<double>(d.data(), d.data() + 4);
    out << YAML::Key << "process_noise" << YAML::Value << p.process_noise;
    if (!p.segments.empty()) {
      out << YAML::Key << "maneuvers" << YAML::Value << YAML::BeginSeq;
      for (const MotionSegment& s : p.segments) {
        out << YAML::Flow << YAML::BeginMap << YAML::Key << "start" << YAML::Value << s.start_t << YAML::Key << "end"
            << YAML::Value << s.end_t << YAML::Key << "turn_rate_deg" << YAML::Value << s.model.turn_rate / kDeg
            << YAML::EndMap;
      }
      out << YAML::EndSeq;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "tracking" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "turn_rate_deg" << YAML::Value << sc.turn_rate / kDeg;
  out << YAML::Key << "stay_probability" << YAML::Value << sc.model_transition(0, 0);
  out << YAML::Key << "initial_model_prob" << YAML::Value << YAML::Flow
      << std::vector<double>(sc.initial_model_prob.data(), sc.initial_model_prob.data() + sc.initial_model_prob.size());
  out << YAML::Key << "range_variance" << YAML::Value << sc.sigma0(0, 0);
  out << YAML::Key << "azimuth_variance" << YAML::Value << sc.sigma0(1, 1);
  out << YAML::EndMap;

  const PolicyParams& pp = sc.policy_params;
  out << YAML::Key << "policy_params" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "fusion_weight" << YAML::Value << pp.fusion_weight;
  out << YAML::Key << "prediction_blend" << YAML::Value << pp.prediction_blend;
  out << YAML::Key << "exploration" << YAML::Value << pp.exploration;
  out << YAML::Key << "epsilon" << YAML::Value << pp.epsilon;
  out << YAML::Key << "baseline_smoothing" << YAML::Value << pp.baseline_smoothing;
  out << YAML::EndMap;

  const bpso::SwarmParams& sw = sc.swarm;
  out << YAML::Key << "swarm" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "population" << YAML::Value << sw.population;
  out << YAML::Key << "iterations" << YAML::Value << sw.max_iterations;
  out << YAML::Key << "c1" << YAML::Value << sw.c1;
  out << YAML::Key << "c2" << YAML::Value << sw.c2;
  out << YAML::Key << "inertia_start" << YAML::Value << sw.inertia_start;
  out << YAML::Key << "inertia_end" << YAML::Value << sw.inertia_end;
  out << YAML::Key << "v_max" << YAML::Value << sw.v_max;
  out << YAML::EndMap;

  out << YAML::Key << "policies" << YAML::Value << YAML::BeginSeq;
  for (const PolicySpec& p : sc.policies) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "name" << YAML::Value << p.name << YAML::Key << "kind"
        << YAML::Value << to_string(p.kind);
    if (p.fixed_arm) {
      std::vector<int> tx;
      std::vector<int> rx;
      for (int m : p.fixed_arm->tx_indices()) tx.push_back(m + 1);
      for (int n : p.fixed_arm->rx_indices()) rx.push_back(n + 1);
      out << YAML::Key << "transmitters" << YAML::Value << YAML::Flow << tx << YAML::Key << "receivers"
          << YAML::Value << YAML::Flow << rx;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace mgcrb
