#pragma once

#include "mgcrb/harness.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace mgcrb {

/// Per-step aggregate CSV. Columns (per policy p, per target k):
///   t, optimal_reward, optimal_reward_db,
///   p_reward, p_reward_db, p_regret, p_regret_db, p_rmse, p_rmse_t<k>...
void write_steps_csv(std::ostream& out, const RunSummary& summary);

/// Run summary (ARMSE table, ASR table, total regret). Contains no timing data, so it is
/// byte-identical for a given seed.
nlohmann::ordered_json summary_json(const RunSummary& summary);

void write_debug_csv(std::ostream& out, const std::vector<DebugRow>& rows);

/// Fixed-width table for the terminal.
std::string format_summary_table(const RunSummary& summary);

/// 10 log10(x); -inf for x <= 0.
double to_db(double linear);

}  // namespace mgcrb
