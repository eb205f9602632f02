#include "mgcrb/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace mgcrb {

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

double to_db(double linear) {
  return linear > 0.0 ? 10.0 * std::log10(linear) : -std::numeric_limits<double>::infinity();
}

void write_steps_csv(std::ostream& out, const RunSummary& s) {
  const std::size_t K = s.omega.size();
  out << "t,optimal_reward,optimal_reward_db";
  for (const PolicySummary& p : s.policies) {
    out << ',' << p.name << "_reward," << p.name << "_reward_db," << p.name << "_regret," << p.name
        << "_regret_db," << p.name << "_rmse";
    for (std::size_t k = 0; k < K; ++k) out << ',' << p.name << "_rmse_t" << (k + 1);
  }
  out << '\n';
  for (int t = 0; t < s.horizon; ++t) {
    const double opt = s.mean_optimal_reward[t];
    out << (t + 1) << ',' << num(opt) << ',' << num(to_db(opt));
    for (const PolicySummary& p : s.policies) {
      const double r = p.curves.mean_reward[t];
      out << ',' << num(r) << ',' << num(to_db(r)) << ',' << num(p.curves.mean_cumulative_regret[t]) << ','
          << num(to_db(opt) - to_db(r)) << ',' << num(p.curves.weighted_rmse[t]);
      for (std::size_t k = 0; k < K; ++k) out << ',' << num(p.curves.rmse[k][t]);
    }
    out << '\n';
  }
}

nlohmann::ordered_json summary_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["scenario"] = s.scenario;
  j["trials"] = s.trials;
  j["horizon"] = s.horizon;
  j["seed"] = s.seed;
  j["target_weights"] = s.omega;
  nlohmann::ordered_json policies = nlohmann::ordered_json::object();
  for (const PolicySummary& p : s.policies) {
    nlohmann::ordered_json e;
    e["armse"] = p.armse_weighted;
    e["armse_per_target"] = p.armse;
    e["armse_unweighted_mean"] = p.armse_mean;
    e["total_regret"] = p.total_regret;
    e["asr"] = p.asr;
    e["filter_divergences"] = p.divergences;
    policies[p.name] = e;
  }
  j["policies"] = policies;
  return j;
}

void write_debug_csv(std::ostream& out, const std::vector<DebugRow>& rows) {
  out << "t,policy,target,tx,rx,range_sum,azimuth,sinr_sample,truth_x,truth_y,fused_x,fused_y\n";
  for (const DebugRow& r : rows) {
    const Measurement& z = r.measurement;
    out << r.t << ',' << r.policy << ',' << (z.target + 1) << ',' << (z.channel.m + 1) << ',' << (z.channel.n + 1)
        << ',' << num(z.range_sum) << ',' << num(z.azimuth) << ',' << num(r.sinr_sample) << ',' << num(r.truth_x)
        << ',' << num(r.truth_y) << ',' << num(r.fused_x) << ',' << num(r.fused_y) << '\n';
  }
}

std::string format_summary_table(const RunSummary& s) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %12s %16s %10s\n", "policy", "ARMSE (m)", "total regret", "ASR");
  os << line;
  for (const PolicySummary& p : s.policies) {
    std::snprintf(line, sizeof line, "%-12s %12.4f %16.4f %9.2f%%\n", p.name.c_str(), p.armse_weighted,
                  p.total_regret, 100.0 * p.asr);
    os << line;
  }
  if (s.omega.size() > 1) {
    os << "per-target ARMSE:\n";
    for (const PolicySummary& p : s.policies) {
      os << "  " << p.name << ':';
      for (double a : p.armse) os << ' ' << num(a);
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace mgcrb
