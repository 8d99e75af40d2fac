#pragma once

#include <string>

#include "nsmab/engine.hpp"

namespace nsmab {

// Floats rendered with 9 significant digits, lines terminated with LF.
std::string format_double(double x);

// Schema: trial,t,arm,reward,cum_reward,avg_reward_per_round,delta_reg
// One row per (trial, round); trial indices are 0-based and match the seed
// derivation.
void write_rounds_csv(const AggregateResult& result, const std::string& path);

// Schema: t,mean_avg_reward,std_avg_reward,mean_delta_reg
void write_summary_csv(const AggregateResult& result, const std::string& path);

// Writes via a temporary file and renames, so a failure never leaves a
// partial output behind.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace nsmab
