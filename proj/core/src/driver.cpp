#include "nsmab/driver.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "nsmab/csv.hpp"
#include "nsmab/errors.hpp"

namespace nsmab {
namespace {

AggregateResult run_from_config(const ExperimentConfig& cfg, int threads = 0) {
  return run_experiment(cfg.env, cfg.policy, cfg.env.horizon, cfg.trials, cfg.root_seed,
                        threads);
}

}  // namespace

int run_config_file(const std::string& path, std::ostream& log, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "cannot open config file '" << path << "'\n";
    return kExitConfigOrIo;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  const ParseOutcome parsed = parse_config(buffer.str());
  if (!parsed.ok()) {
    for (const ParseIssue& issue : parsed.issues) {
      err << path << ":" << issue.line << ": " << issue.message << "\n";
    }
    return kExitConfigOrIo;
  }

  const ExperimentConfig& cfg = *parsed.config;
  try {
    const AggregateResult result = run_from_config(cfg);
    write_rounds_csv(result, cfg.output_prefix + "_rounds.csv");
    write_summary_csv(result, cfg.output_prefix + "_summary.csv");
    const SummaryRow& last = result.summary.back();
    log << "T=" << last.t << " trials=" << cfg.trials
        << " mean_avg_reward=" << format_double(last.mean_avg_reward)
        << " mean_delta_reg=" << format_double(last.mean_delta_reg) << "\n";
    log << "wrote " << cfg.output_prefix << "_rounds.csv and " << cfg.output_prefix
        << "_summary.csv\n";
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitConfigOrIo;
  }
  return kExitOk;
}

const std::vector<std::string>& panel_names() {
  static const std::vector<std::string> names = {"iid",      "rarely_changing", "rotting",
                                                 "drifting", "known_trend",     "periodic"};
  return names;
}

EnvironmentSpec panel_environment(const std::string& name, int num_arms, long horizon) {
  EnvironmentSpec env;
  env.num_arms = num_arms;
  env.horizon = horizon;
  if (name == "iid") {
    env.family = Family::kIid;
  } else if (name == "rarely_changing") {
    env.family = Family::kRarelyChanging;
  } else if (name == "rotting") {
    env.family = Family::kRotting;
  } else if (name == "drifting") {
    env.family = Family::kDrifting;
  } else if (name == "known_trend") {
    env.family = Family::kKnownTrend;
  } else if (name == "periodic") {
    env.family = Family::kPeriodic;
    env.period_length = 50;
    env.periods = 3;
  } else {
    throw ConfigError("unknown panel '" + name + "'");
  }
  return env;
}

int run_panel(const std::string& name_or_all, const std::string& out_dir,
              const PanelParams& params, std::ostream& log, std::ostream& err) {
  std::vector<std::string> selected;
  if (name_or_all == "all") {
    selected = panel_names();
  } else {
    selected.push_back(name_or_all);
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    err << "cannot create output directory '" << out_dir << "': " << ec.message() << "\n";
    return kExitConfigOrIo;
  }

  for (const std::string& name : selected) {
    try {
      const EnvironmentSpec env = panel_environment(name, params.num_arms, params.horizon);

      PolicySpec weighted;
      weighted.kind = PolicyKind::kWeightedUcb;
      weighted.exploration_c = params.exploration_c;
      // The panel baseline is the classic horizon-tuned variant with
      // uniform exploration mixing.
      PolicySpec exp3;
      exp3.kind = PolicyKind::kExp3;
      exp3.exp3_mixing = Exp3Policy::classic_mixing(params.num_arms, params.horizon);

      const std::string prefix = out_dir + "/" + name;
      const AggregateResult main_result = run_experiment(
          env, weighted, params.horizon, params.trials, params.root_seed, params.threads);
      write_rounds_csv(main_result, prefix + "_rounds.csv");
      write_summary_csv(main_result, prefix + "_summary.csv");

      const AggregateResult baseline = run_experiment(
          env, exp3, params.horizon, params.trials, params.root_seed, params.threads);
      write_rounds_csv(baseline, prefix + "_exp3_rounds.csv");
      write_summary_csv(baseline, prefix + "_exp3_summary.csv");

      log << name << ": weighted_ucb avg reward "
          << format_double(main_result.summary.back().mean_avg_reward) << ", exp3 "
          << format_double(baseline.summary.back().mean_avg_reward) << "\n";
    } catch (const std::exception& e) {
      err << name << ": " << e.what() << "\n";
      return kExitConfigOrIo;
    }
  }
  return kExitOk;
}

int verify_concentration(std::ostream& log) {
  const ArmSpec arm = IidArmSpec{0.5};
  const WeightScheme scheme = WeightScheme::uniform();
  const long t = 100;
  const long replicates = 100000;
  bool ok = true;
  for (double delta : {0.5, 0.05, 0.01}) {
    const ConcentrationResult r = concentration_check(arm, scheme, t, delta, replicates, 97);
    const bool pass = r.upper_violation_rate <= delta && r.lower_violation_rate <= delta;
    ok = ok && pass;
    log << "delta=" << delta << " upper=" << r.upper_violation_rate
        << " lower=" << r.lower_violation_rate << " -> " << (pass ? "ok" : "VIOLATED") << "\n";
  }
  return ok ? kExitOk : kExitCheckFailed;
}

int verify_discrepancy_zero(std::ostream& log) {
  const double tol = 1e-12;
  const int reps = 100;
  bool ok = true;
  RandomStream param_rng(20240517);

  auto report = [&](const char* pairing, double worst) {
    const bool pass = worst <= tol;
    ok = ok && pass;
    log << pairing << ": max |D| = " << worst << " -> " << (pass ? "ok" : "VIOLATED") << "\n";
  };

  // iid arms under arbitrary weight distributions
  {
    double worst = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      const long n = param_rng.uniform_int(1, 1000);
      const TrialSeed seed{11, static_cast<std::uint64_t>(rep)};
      Environment env = make_mixed({IidArmSpec{param_rng.uniform01()}}, seed);
      ArmHistory h(0);
      for (long s = 1; s <= n; ++s) h.add(s, env.pull(0));
      std::vector<double> w(static_cast<std::size_t>(n));
      double total = 0.0;
      for (double& x : w) {
        x = param_rng.uniform01_open();
        total += x;
      }
      for (double& x : w) x /= total;
      const double d = env.discrepancy(0, WeightVector::from_weights(std::move(w)));
      worst = std::max(worst, std::fabs(d));
    }
    report("iid / any weights", worst);
  }

  // Markov chains under state-matched weights
  {
    double worst = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      const int states = static_cast<int>(param_rng.uniform_int(2, 4));
      EnvironmentSpec spec;
      spec.family = Family::kMarkov;
      spec.num_arms = 1;
      spec.markov_states = states;
      const TrialSeed seed{13, static_cast<std::uint64_t>(rep)};
      Environment env = build_environment(spec, seed);
      ArmHistory h(0);
      long n = param_rng.uniform_int(4, 1000);
      for (long s = 1; s <= n; ++s) h.add(s, env.pull(0));
      // Extend until the current state has been seen before; the chains
      // give every transition probability at least 0.05/states.
      for (;;) {
        try {
          const WeightVector q = state_matched_weights(h, h.last_reward());
          worst = std::max(worst, std::fabs(env.discrepancy(0, q)));
          break;
        } catch (const NoSupportError&) {
          ++n;
          h.add(n, env.pull(0));
        }
      }
    }
    report("markov / state matched", worst);
  }

  // rarely changing means under since-change weights
  {
    double worst = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      const TrialSeed seed{17, static_cast<std::uint64_t>(rep)};
      Environment env = make_rarely_changing(1, 1000, seed);
      const auto& arm = dynamic_cast<const RarelyChangingArm&>(env.arm(0));
      long n = param_rng.uniform_int(1, 1000);
      ArmHistory h(0);
      for (long s = 1; s <= n; ++s) h.add(s, env.pull(0));
      for (;;) {
        try {
          const WeightVector q = since_change_weights(h, arm.change_points());
          worst = std::max(worst, std::fabs(env.discrepancy(0, q)));
          break;
        } catch (const NoSupportError&) {
          // The upcoming pull opens a fresh segment; take one more pull so
          // the segment has support.
          ++n;
          h.add(n, env.pull(0));
        }
      }
    }
    report("rarely changing / since change", worst);
  }

  // periodic means under phase-matched weights
  {
    double worst = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      const long period = param_rng.uniform_int(2, 6);
      std::vector<double> means;
      for (long j = 0; j < period; ++j) means.push_back(param_rng.uniform(0.0, 10.0));
      const TrialSeed seed{19, static_cast<std::uint64_t>(rep)};
      Environment env = make_mixed({PeriodicArmSpec{1, means, 0.3}}, seed);
      const long n = param_rng.uniform_int(period, 1000);
      ArmHistory h(0);
      for (long s = 1; s <= n; ++s) h.add(s, env.pull(0));
      const WeightVector q = phase_matched_weights(h, period);
      worst = std::max(worst, std::fabs(env.discrepancy(0, q)));
    }
    report("periodic / phase matched", worst);
  }

  // known trend under trend-matched weights
  {
    double worst = 0.0;
    const std::vector<double> table = {0.1, 1.0, 3.0};
    for (int rep = 0; rep < reps; ++rep) {
      const double mu = param_rng.uniform(0.1, 6.0);
      const TrialSeed seed{23, static_cast<std::uint64_t>(rep)};
      Environment env = make_mixed({KnownTrendArmSpec{mu, table, 0.3}}, seed);
      const long n = param_rng.uniform_int(static_cast<long>(table.size()), 1000);
      ArmHistory h(0);
      for (long s = 1; s <= n; ++s) h.add(s, env.pull(0));
      const WeightVector q = trend_matched_weights(h, table);
      worst = std::max(worst, std::fabs(env.discrepancy(0, q)));
    }
    report("known trend / trend matched", worst);
  }

  return ok ? kExitOk : kExitCheckFailed;
}

int verify_log_growth(std::ostream& log) {
  const int num_arms = 10;
  const int trials = 50;
  const double threshold = 1.6;
  const std::uint64_t seed = 71;
  bool ok = true;

  const std::vector<std::pair<std::string, Family>> families = {
      {"iid", Family::kIid},           {"rotting", Family::kRotting},
      {"periodic", Family::kPeriodic}, {"rarely_changing", Family::kRarelyChanging},
      {"known_trend", Family::kKnownTrend}, {"markov", Family::kMarkov},
  };

  auto mean_delta_at = [](const AggregateResult& agg, long t) {
    return agg.summary[static_cast<std::size_t>(t - 1)].mean_delta_reg;
  };

  double weighted_iid_long_ratio = 0.0;
  for (const auto& [name, family] : families) {
    EnvironmentSpec env;
    env.family = family;
    env.num_arms = num_arms;
    env.horizon = 4000;
    PolicySpec weighted;
    weighted.kind = PolicyKind::kWeightedUcb;

    const AggregateResult agg = run_experiment(env, weighted, 4000, trials, seed);
    const double d1 = mean_delta_at(agg, 1000);
    const double d2 = mean_delta_at(agg, 2000);
    const double d4 = mean_delta_at(agg, 4000);
    const double r1 = d2 / d1;
    const double r2 = d4 / d2;
    const bool pass = r1 <= threshold && r2 <= threshold;
    ok = ok && pass;
    if (name == "iid") weighted_iid_long_ratio = d4 / d1;
    log << name << ": delta_reg(2000)/delta_reg(1000)=" << format_double(r1)
        << " delta_reg(4000)/delta_reg(2000)=" << format_double(r2) << " (limit " << threshold
        << ") -> " << (pass ? "ok" : "VIOLATED") << "\n";
  }

  // Square-root versus logarithmic growth separation on the iid panel.
  {
    EnvironmentSpec env;
    env.family = Family::kIid;
    env.num_arms = num_arms;
    env.horizon = 4000;
    PolicySpec exp3;
    exp3.kind = PolicyKind::kExp3;
    const AggregateResult agg = run_experiment(env, exp3, 4000, trials, seed);
    const double exp3_ratio = mean_delta_at(agg, 4000) / mean_delta_at(agg, 1000);
    const bool pass = exp3_ratio > weighted_iid_long_ratio;
    ok = ok && pass;
    log << "iid growth ratio t=4000/t=1000: exp3=" << format_double(exp3_ratio)
        << " weighted_ucb=" << format_double(weighted_iid_long_ratio) << " -> "
        << (pass ? "ok" : "VIOLATED") << "\n";
  }

  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace nsmab
