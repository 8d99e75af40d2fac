#include "nsmab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace nsmab {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      out.close();
      std::remove(tmp.c_str());
      throw std::runtime_error("failed while writing '" + tmp + "'");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot move '" + tmp + "' to '" + path + "'");
  }
}

void write_rounds_csv(const AggregateResult& result, const std::string& path) {
  std::string out = "trial,t,arm,reward,cum_reward,avg_reward_per_round,delta_reg\n";
  for (std::size_t trial = 0; trial < result.trials.size(); ++trial) {
    for (const RoundRow& row : result.trials[trial].rows) {
      out += std::to_string(trial);
      out += ',';
      out += std::to_string(row.t);
      out += ',';
      out += std::to_string(row.arm);
      out += ',';
      out += format_double(row.reward);
      out += ',';
      out += format_double(row.cum_reward);
      out += ',';
      out += format_double(row.avg_reward_per_round);
      out += ',';
      out += format_double(row.delta_reg);
      out += '\n';
    }
  }
  write_file_atomic(path, out);
}

void write_summary_csv(const AggregateResult& result, const std::string& path) {
  std::string out = "t,mean_avg_reward,std_avg_reward,mean_delta_reg\n";
  for (const SummaryRow& row : result.summary) {
    out += std::to_string(row.t);
    out += ',';
    out += format_double(row.mean_avg_reward);
    out += ',';
    out += format_double(row.std_avg_reward);
    out += ',';
    out += format_double(row.mean_delta_reg);
    out += '\n';
  }
  write_file_atomic(path, out);
}

}  // namespace nsmab
