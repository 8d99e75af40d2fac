#include "nsmab/environment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nsmab/errors.hpp"
#include "nsmab/summation.hpp"

namespace nsmab {
namespace {

double clip01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

// Index of the last change point <= pull_index (change points start at 1).
std::size_t segment_index(const std::vector<long>& change_points, long pull_index) {
  std::size_t seg = 0;
  for (std::size_t j = 0; j < change_points.size(); ++j) {
    if (change_points[j] <= pull_index) seg = j;
  }
  return seg;
}

void check_change_points(const std::vector<long>& points, const char* who) {
  if (points.empty() || points.front() != 1) {
    throw ConfigError(std::string(who) + ": change points must start at 1");
  }
  for (std::size_t j = 1; j < points.size(); ++j) {
    if (points[j] <= points[j - 1]) {
      throw ConfigError(std::string(who) + ": change points must be strictly increasing");
    }
  }
}

}  // namespace

// --- IidArm ---------------------------------------------------------------

IidArm::IidArm(double mean, RandomStream rng) : ArmProcess(std::move(rng)), mean_(mean) {
  if (mean < 0.0 || mean > 1.0) throw ConfigError("IidArm: mean must be in [0,1]");
}

double IidArm::sample_and_advance(double mean) {
  return rng_.bernoulli(mean) ? 1.0 : 0.0;
}

// --- CompleteDependenceArm --------------------------------------------------

CompleteDependenceArm::CompleteDependenceArm(double mean, RandomStream rng)
    : ArmProcess(std::move(rng)), mean_(mean) {
  if (mean < 0.0 || mean > 1.0) throw ConfigError("CompleteDependenceArm: mean must be in [0,1]");
}

double CompleteDependenceArm::next_mean() const { return frozen_ ? first_value_ : mean_; }

double CompleteDependenceArm::sample_and_advance(double mean) {
  if (!frozen_) {
    first_value_ = rng_.bernoulli(mean) ? 1.0 : 0.0;
    frozen_ = true;
  }
  return first_value_;
}

// --- RottingArm -------------------------------------------------------------

RottingArm::RottingArm(double theta, double baseline, RandomStream rng)
    : ArmProcess(std::move(rng)), theta_(theta), baseline_(baseline) {
  if (!(theta > 0.0)) throw ConfigError("RottingArm: theta must be > 0");
}

double RottingArm::next_mean() const {
  return clip01(baseline_ + std::pow(static_cast<double>(next_pull_index()), -theta_));
}

double RottingArm::sample_and_advance(double mean) {
  return rng_.bernoulli(mean) ? 1.0 : 0.0;
}

// --- RottingJumpsArm ---------------------------------------------------------

RottingJumpsArm::RottingJumpsArm(std::vector<double> segment_means,
                                 std::vector<long> change_points, double theta,
                                 double sigma, RandomStream rng)
    : ArmProcess(std::move(rng)),
      segment_means_(std::move(segment_means)),
      change_points_(std::move(change_points)),
      theta_(theta),
      sigma_(sigma) {
  check_change_points(change_points_, "RottingJumpsArm");
  if (segment_means_.size() != change_points_.size()) {
    throw ConfigError("RottingJumpsArm: one mean per segment required");
  }
  if (!(theta > 0.0)) throw ConfigError("RottingJumpsArm: theta must be > 0");
}

double RottingJumpsArm::next_mean() const {
  const long s = next_pull_index();
  const std::size_t j = segment_index(change_points_, s);
  const double since = static_cast<double>(s - change_points_[j] + 1);
  return segment_means_[j] + std::pow(since, -theta_);
}

double RottingJumpsArm::sample_and_advance(double mean) {
  return rng_.normal(mean, sigma_);
}

std::pair<double, double> RottingJumpsArm::reward_bounds() const {
  const auto [lo, hi] = std::minmax_element(segment_means_.begin(), segment_means_.end());
  return {*lo - 5.0 * sigma_, *hi + 1.0 + 5.0 * sigma_};
}

// --- MarkovArm ---------------------------------------------------------------

MarkovArm::MarkovArm(std::vector<std::vector<double>> transition,
                     std::vector<double> state_rewards, int initial_state, RandomStream rng)
    : ArmProcess(std::move(rng)),
      transition_(std::move(transition)),
      state_rewards_(std::move(state_rewards)),
      state_(initial_state) {
  const std::size_t n = state_rewards_.size();
  if (n == 0) throw ConfigError("MarkovArm: empty state space");
  if (transition_.size() != n) throw ConfigError("MarkovArm: one transition row per state");
  for (const auto& row : transition_) {
    if (row.size() != n) throw ConfigError("MarkovArm: transition matrix must be square");
    double sum = 0.0;
    for (double p : row) {
      if (!(p >= 0.0)) throw ConfigError("MarkovArm: negative transition probability");
      sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-12) {
      throw ConfigError("MarkovArm: transition row sums to " + std::to_string(sum));
    }
  }
  for (double r : state_rewards_) {
    if (!std::isfinite(r)) throw ConfigError("MarkovArm: non-finite state reward");
  }
  // Emitted values identify states, so they must be pairwise distinct.
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (state_rewards_[a] == state_rewards_[b]) {
        throw ConfigError("MarkovArm: state rewards must be distinct");
      }
    }
  }
  if (initial_state < 0 || static_cast<std::size_t>(initial_state) >= n) {
    throw ConfigError("MarkovArm: initial state out of range");
  }
}

double MarkovArm::next_mean() const {
  const auto& row = transition_[static_cast<std::size_t>(state_)];
  double m = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) m += row[j] * state_rewards_[j];
  return m;
}

double MarkovArm::sample_and_advance(double /*mean*/) {
  const auto& row = transition_[static_cast<std::size_t>(state_)];
  const double u = rng_.uniform01();
  double acc = 0.0;
  std::size_t next = row.size() - 1;
  for (std::size_t j = 0; j < row.size(); ++j) {
    acc += row[j];
    if (u < acc) {
      next = j;
      break;
    }
  }
  state_ = static_cast<int>(next);
  return state_rewards_[next];
}

std::pair<double, double> MarkovArm::reward_bounds() const {
  const auto [lo, hi] = std::minmax_element(state_rewards_.begin(), state_rewards_.end());
  return {*lo, *hi};
}

// --- RarelyChangingArm --------------------------------------------------------

RarelyChangingArm::RarelyChangingArm(std::vector<double> segment_means,
                                     std::vector<long> change_points, double sigma,
                                     RandomStream rng)
    : ArmProcess(std::move(rng)),
      segment_means_(std::move(segment_means)),
      change_points_(std::move(change_points)),
      sigma_(sigma) {
  check_change_points(change_points_, "RarelyChangingArm");
  if (segment_means_.size() != change_points_.size()) {
    throw ConfigError("RarelyChangingArm: one mean per segment required");
  }
}

double RarelyChangingArm::next_mean() const {
  return segment_means_[segment_index(change_points_, next_pull_index())];
}

double RarelyChangingArm::sample_and_advance(double mean) {
  return rng_.normal(mean, sigma_);
}

std::pair<double, double> RarelyChangingArm::reward_bounds() const {
  const auto [lo, hi] = std::minmax_element(segment_means_.begin(), segment_means_.end());
  return {*lo - 5.0 * sigma_, *hi + 5.0 * sigma_};
}

// --- PeriodicArm ---------------------------------------------------------------

PeriodicArm::PeriodicArm(long block_length, std::vector<double> period_means, double sigma,
                         RandomStream rng)
    : ArmProcess(std::move(rng)),
      block_length_(block_length),
      period_means_(std::move(period_means)),
      sigma_(sigma) {
  if (block_length < 1) throw ConfigError("PeriodicArm: block length must be >= 1");
  if (period_means_.empty()) throw ConfigError("PeriodicArm: no period means given");
}

double PeriodicArm::next_mean() const {
  const long s = next_pull_index();
  const long phase = ((s - 1) / block_length_) % static_cast<long>(period_means_.size());
  return period_means_[static_cast<std::size_t>(phase)];
}

double PeriodicArm::sample_and_advance(double mean) { return rng_.normal(mean, sigma_); }

std::pair<double, double> PeriodicArm::reward_bounds() const {
  const auto [lo, hi] = std::minmax_element(period_means_.begin(), period_means_.end());
  return {*lo - 5.0 * sigma_, *hi + 5.0 * sigma_};
}

// --- KnownTrendArm ---------------------------------------------------------------

KnownTrendArm::KnownTrendArm(double base_mean, std::vector<double> trend_table, double sigma,
                             RandomStream rng)
    : ArmProcess(std::move(rng)),
      base_mean_(base_mean),
      trend_table_(std::move(trend_table)),
      sigma_(sigma) {
  if (trend_table_.empty()) throw ConfigError("KnownTrendArm: empty trend table");
}

double KnownTrendArm::next_mean() const {
  const long s = next_pull_index();
  const double r = trend_table_[static_cast<std::size_t>(
      s % static_cast<long>(trend_table_.size()))];
  return base_mean_ * r;
}

double KnownTrendArm::sample_and_advance(double /*mean*/) {
  const long s = static_cast<long>(pull_count()) + 1;
  const double r = trend_table_[static_cast<std::size_t>(
      s % static_cast<long>(trend_table_.size()))];
  return rng_.normal(base_mean_, sigma_) * r;
}

std::pair<double, double> KnownTrendArm::reward_bounds() const {
  const double lo_base = base_mean_ - 5.0 * sigma_;
  const double hi_base = base_mean_ + 5.0 * sigma_;
  double lo = lo_base * trend_table_.front();
  double hi = lo;
  for (double r : trend_table_) {
    for (double v : {lo_base * r, hi_base * r}) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return {lo, hi};
}

// --- DriftingArm ---------------------------------------------------------------

DriftingArm::DriftingArm(double initial_mean, double step, double window_gamma,
                         RandomStream rng)
    : ArmProcess(std::move(rng)),
      mean_(clip01(initial_mean)),
      step_(step),
      window_gamma_(window_gamma) {
  if (!(step >= 0.0)) throw ConfigError("DriftingArm: step must be >= 0");
}

double DriftingArm::sample_and_advance(double mean) {
  const double x = rng_.bernoulli(mean) ? 1.0 : 0.0;
  mean_ = clip01(mean_ + rng_.sign() * step_);
  return x;
}

// --- make_arm --------------------------------------------------------------------

std::unique_ptr<ArmProcess> make_arm(const ArmSpec& spec, RandomStream rng) {
  return std::visit(
      [&rng](const auto& s) -> std::unique_ptr<ArmProcess> {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, IidArmSpec>) {
          return std::make_unique<IidArm>(s.mean, std::move(rng));
        } else if constexpr (std::is_same_v<S, CompleteDependenceArmSpec>) {
          return std::make_unique<CompleteDependenceArm>(s.mean, std::move(rng));
        } else if constexpr (std::is_same_v<S, RottingArmSpec>) {
          return std::make_unique<RottingArm>(s.theta, s.baseline, std::move(rng));
        } else if constexpr (std::is_same_v<S, RottingJumpsArmSpec>) {
          return std::make_unique<RottingJumpsArm>(s.segment_means, s.change_points, s.theta,
                                                   s.sigma, std::move(rng));
        } else if constexpr (std::is_same_v<S, MarkovArmSpec>) {
          return std::make_unique<MarkovArm>(s.transition, s.state_rewards, s.initial_state,
                                             std::move(rng));
        } else if constexpr (std::is_same_v<S, RarelyChangingArmSpec>) {
          if (s.horizon < 1) throw ConfigError("RarelyChangingArmSpec: horizon must be >= 1");
          // Segment count uniform in 1..10, means uniform in (0,1), change
          // points evenly spaced at 1 + floor(j*T/N).
          const long n = rng.uniform_int(1, 10);
          std::vector<double> means;
          std::vector<long> points;
          for (long j = 0; j < n; ++j) {
            means.push_back(rng.uniform01());
            points.push_back(j == 0 ? 1 : 1 + (j * s.horizon) / n);
          }
          return std::make_unique<RarelyChangingArm>(std::move(means), std::move(points), 0.1,
                                                     std::move(rng));
        } else if constexpr (std::is_same_v<S, PeriodicArmSpec>) {
          return std::make_unique<PeriodicArm>(s.block_length, s.period_means, s.sigma,
                                               std::move(rng));
        } else if constexpr (std::is_same_v<S, KnownTrendArmSpec>) {
          return std::make_unique<KnownTrendArm>(s.base_mean, s.trend_table, s.sigma,
                                                 std::move(rng));
        } else {
          static_assert(std::is_same_v<S, DriftingArmSpec>);
          if (s.horizon < 1) throw ConfigError("DriftingArmSpec: horizon must be >= 1");
          const double t = static_cast<double>(s.horizon);
          const double half_width = 1.0 / std::sqrt(t);
          const double initial = rng.uniform(1.0 - half_width, 1.0 + half_width);
          const double step = std::pow(t, -2.0 / 3.0);
          return std::make_unique<DriftingArm>(initial, step, s.window_gamma, std::move(rng));
        }
      },
      spec);
}

// --- Environment -----------------------------------------------------------------

Environment::Environment(std::vector<std::unique_ptr<ArmProcess>> arms)
    : arms_(std::move(arms)) {
  if (arms_.empty()) throw ConfigError("Environment: need at least one arm");
}

void Environment::check_arm(int arm) const {
  if (arm < 0 || arm >= num_arms()) {
    throw ContractViolation("Environment: arm " + std::to_string(arm) + " out of range");
  }
}

double Environment::pull(int arm) {
  check_arm(arm);
  return arms_[static_cast<std::size_t>(arm)]->pull();
}

std::vector<double> Environment::next_means() const {
  std::vector<double> means;
  means.reserve(arms_.size());
  for (const auto& a : arms_) means.push_back(a->next_mean());
  return means;
}

double Environment::discrepancy(int arm, const WeightVector& q) const {
  check_arm(arm);
  const ArmProcess& a = *arms_[static_cast<std::size_t>(arm)];
  if (a.pull_count() == 0) {
    throw EmptyHistoryError("Environment::discrepancy: arm has no pulls");
  }
  if (q.size() != a.pull_count()) {
    throw ContractViolation("Environment::discrepancy: weight length mismatch");
  }
  CompensatedSum weighted_past;
  const auto& means = a.means_at_pulls();
  for (std::size_t s = 0; s < q.size(); ++s) weighted_past.add(q[s] * means[s]);
  return a.next_mean() - weighted_past.value();
}

WeightScheme Environment::matched_scheme(int arm) const {
  check_arm(arm);
  return arms_[static_cast<std::size_t>(arm)]->matched_scheme();
}

std::pair<double, double> Environment::reward_bounds() const {
  auto [lo, hi] = arms_.front()->reward_bounds();
  for (const auto& a : arms_) {
    const auto [alo, ahi] = a->reward_bounds();
    lo = std::min(lo, alo);
    hi = std::max(hi, ahi);
  }
  return {lo, hi};
}

// --- Factories ---------------------------------------------------------------------

Environment make_mixed(const std::vector<ArmSpec>& specs, const TrialSeed& seed) {
  if (specs.empty()) throw ConfigError("make_mixed: need at least one arm spec");
  std::vector<std::unique_ptr<ArmProcess>> arms;
  arms.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    arms.push_back(make_arm(specs[i], seed.arm_stream(static_cast<long>(i))));
  }
  return Environment(std::move(arms));
}

Environment make_iid(int num_arms, const TrialSeed& seed) {
  if (num_arms < 1) throw ConfigError("make_iid: need at least one arm");
  std::vector<ArmSpec> specs;
  for (int i = 0; i < num_arms; ++i) {
    specs.push_back(IidArmSpec{static_cast<double>(i + 1) / num_arms});
  }
  return make_mixed(specs, seed);
}

Environment make_rarely_changing(int num_arms, long horizon, const TrialSeed& seed) {
  if (num_arms < 1 || horizon < 1) {
    throw ConfigError("make_rarely_changing: need K >= 1 and T >= 1");
  }
  std::vector<ArmSpec> specs(static_cast<std::size_t>(num_arms),
                             RarelyChangingArmSpec{horizon});
  return make_mixed(specs, seed);
}

Environment make_rotting(int num_arms, const TrialSeed& seed) {
  if (num_arms < 1) throw ConfigError("make_rotting: need at least one arm");
  std::vector<ArmSpec> specs;
  for (int i = 0; i < num_arms; ++i) {
    specs.push_back(RottingArmSpec{0.1 + 10.0 * i / num_arms, 0.0});
  }
  return make_mixed(specs, seed);
}

Environment make_rotting_jumps(int num_arms, std::vector<double> segment_means,
                               std::vector<long> change_points, double theta,
                               const TrialSeed& seed, double sigma) {
  if (num_arms < 1) throw ConfigError("make_rotting_jumps: need at least one arm");
  std::vector<ArmSpec> specs(
      static_cast<std::size_t>(num_arms),
      RottingJumpsArmSpec{std::move(segment_means), std::move(change_points), theta, sigma});
  return make_mixed(specs, seed);
}

Environment make_markov(int num_arms, std::vector<std::vector<std::vector<double>>> transitions,
                        std::vector<std::vector<double>> state_rewards, const TrialSeed& seed,
                        int initial_state) {
  if (num_arms < 1) throw ConfigError("make_markov: need at least one arm");
  if (static_cast<int>(transitions.size()) != num_arms ||
      static_cast<int>(state_rewards.size()) != num_arms) {
    throw ConfigError("make_markov: need one chain per arm");
  }
  std::vector<ArmSpec> specs;
  for (int i = 0; i < num_arms; ++i) {
    specs.push_back(MarkovArmSpec{std::move(transitions[static_cast<std::size_t>(i)]),
                                  std::move(state_rewards[static_cast<std::size_t>(i)]),
                                  initial_state});
  }
  return make_mixed(specs, seed);
}

Environment make_periodic(int num_arms, long period_length,
                          std::vector<std::vector<double>> period_means,
                          const TrialSeed& seed, double sigma) {
  if (num_arms < 1) throw ConfigError("make_periodic: need at least one arm");
  if (static_cast<int>(period_means.size()) != num_arms) {
    throw ConfigError("make_periodic: need one period-mean list per arm");
  }
  std::vector<ArmSpec> specs;
  for (int i = 0; i < num_arms; ++i) {
    specs.push_back(PeriodicArmSpec{period_length,
                                    std::move(period_means[static_cast<std::size_t>(i)]),
                                    sigma});
  }
  return make_mixed(specs, seed);
}

Environment make_trend(int num_arms, std::vector<double> base_means,
                       std::vector<double> trend_table, const TrialSeed& seed, double sigma) {
  if (num_arms < 1) throw ConfigError("make_trend: need at least one arm");
  if (static_cast<int>(base_means.size()) != num_arms) {
    throw ConfigError("make_trend: need one base mean per arm");
  }
  std::vector<ArmSpec> specs;
  for (int i = 0; i < num_arms; ++i) {
    specs.push_back(KnownTrendArmSpec{base_means[static_cast<std::size_t>(i)], trend_table,
                                      sigma});
  }
  return make_mixed(specs, seed);
}

Environment make_drifting(int num_arms, long horizon, const TrialSeed& seed) {
  if (num_arms < 1 || horizon < 1) throw ConfigError("make_drifting: need K >= 1 and T >= 1");
  std::vector<ArmSpec> specs(static_cast<std::size_t>(num_arms),
                             DriftingArmSpec{horizon, 0.75});
  return make_mixed(specs, seed);
}

}  // namespace nsmab
