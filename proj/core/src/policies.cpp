#include "nsmab/policies.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nsmab/errors.hpp"

namespace nsmab {
namespace {

void require_all_pulled(const std::vector<ArmHistory>& histories) {
  for (const auto& h : histories) {
    if (h.empty()) {
      throw ContractViolation("index policy reached an unpulled arm; run the init rounds");
    }
  }
}

}  // namespace

int argmax_lowest_index(std::span<const double> values) {
  if (values.empty()) throw ContractViolation("argmax_lowest_index: empty input");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return static_cast<int>(best);
}

int round_robin_arm(long round, int num_arms) {
  if (round < 1 || round > num_arms) {
    throw ContractViolation("round_robin_arm: round " + std::to_string(round) +
                            " outside init phase");
  }
  return static_cast<int>(round - 1);
}

// --- WeightedUcbPolicy ------------------------------------------------------

WeightedUcbPolicy::WeightedUcbPolicy(double exploration_c, std::vector<WeightScheme> schemes)
    : exploration_c_(exploration_c), schemes_(std::move(schemes)) {
  if (exploration_c_ < 0.0) throw ConfigError("WeightedUcbPolicy: C must be >= 0");
  if (schemes_.empty()) throw ConfigError("WeightedUcbPolicy: need one scheme per arm");
}

std::vector<double> WeightedUcbPolicy::indices(double round,
                                               const std::vector<ArmHistory>& histories) {
  require_all_pulled(histories);
  const double width = std::sqrt(2.0 * std::log(round));
  std::vector<double> out;
  out.reserve(histories.size());
  for (std::size_t i = 0; i < histories.size(); ++i) {
    const WeightVector q = weights_for(schemes_[i], histories[i], &audit_);
    out.push_back(weighted_mean(histories[i], q) +
                  (exploration_c_ + 1.0) * q.norm2() * width);
  }
  return out;
}

int WeightedUcbPolicy::select(long round, const std::vector<ArmHistory>& histories) {
  const int k = static_cast<int>(histories.size());
  if (round <= k) return round_robin_arm(round, k);
  const auto idx = indices(static_cast<double>(round), histories);
  return argmax_lowest_index(idx);
}

// --- DiscUcbPolicy -----------------------------------------------------------

DiscUcbPolicy::DiscUcbPolicy(std::vector<WeightScheme> schemes, const Environment* oracle)
    : schemes_(std::move(schemes)), oracle_(oracle) {
  if (schemes_.empty()) throw ConfigError("DiscUcbPolicy: need one scheme per arm");
  if (oracle_ == nullptr) throw ConfigError("DiscUcbPolicy: no discrepancy oracle");
}

std::vector<double> DiscUcbPolicy::indices(double round,
                                           const std::vector<ArmHistory>& histories) {
  require_all_pulled(histories);
  const double width = std::sqrt(2.0 * std::log(round));
  std::vector<double> out;
  out.reserve(histories.size());
  for (std::size_t i = 0; i < histories.size(); ++i) {
    const WeightVector q = weights_for(schemes_[i], histories[i], &audit_);
    const double d = oracle_->discrepancy(static_cast<int>(i), q);
    out.push_back(weighted_mean(histories[i], q) + d + q.norm2() * width);
  }
  return out;
}

int DiscUcbPolicy::select(long round, const std::vector<ArmHistory>& histories) {
  const int k = static_cast<int>(histories.size());
  if (round <= k) return round_robin_arm(round, k);
  const auto idx = indices(static_cast<double>(round), histories);
  return argmax_lowest_index(idx);
}

// --- Ucb1Policy ----------------------------------------------------------------

Ucb1Policy::Ucb1Policy(int num_arms)
    : inner_(0.0, std::vector<WeightScheme>(static_cast<std::size_t>(num_arms),
                                            WeightScheme::uniform())) {}

// --- Exp3Policy ------------------------------------------------------------------

Exp3Policy::Exp3Policy(int num_arms, double eta, double mixing,
                       std::pair<double, double> reward_range, RandomStream rng)
    : eta_(eta),
      mixing_(mixing),
      range_(reward_range),
      scores_(static_cast<std::size_t>(num_arms), 0.0),
      rng_(std::move(rng)) {
  if (num_arms < 1) throw ConfigError("Exp3Policy: need at least one arm");
  if (!(eta > 0.0)) throw ConfigError("Exp3Policy: eta must be > 0");
  if (mixing < 0.0 || mixing > 1.0) throw ConfigError("Exp3Policy: mixing must be in [0,1]");
  if (!(range_.first < range_.second)) {
    throw ConfigError("Exp3Policy: reward range must satisfy lo < hi");
  }
}

double Exp3Policy::default_eta(int num_arms, long horizon) {
  const double eta = std::sqrt(2.0 * std::log(static_cast<double>(num_arms)) /
                               (static_cast<double>(horizon) * num_arms));
  // A single arm makes log K vanish; any positive rate is equivalent there.
  return eta > 0.0 ? eta : 1.0 / std::sqrt(static_cast<double>(horizon));
}

double Exp3Policy::classic_mixing(int num_arms, long horizon) {
  const double k = static_cast<double>(num_arms);
  const double g = std::sqrt(k * std::log(k) /
                             ((2.718281828459045 - 1.0) * static_cast<double>(horizon)));
  return g < 1.0 ? g : 1.0;
}

std::vector<double> Exp3Policy::probabilities() const {
  const double top = *std::max_element(scores_.begin(), scores_.end());
  std::vector<double> p(scores_.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    // Exponent clamped so no probability underflows to zero.
    const double e = std::max(eta_ * (scores_[i] - top), -700.0);
    p[i] = std::exp(e);
    sum += p[i];
  }
  const double uniform = mixing_ / static_cast<double>(p.size());
  for (double& v : p) v = (1.0 - mixing_) * (v / sum) + uniform;
  return p;
}

int Exp3Policy::select(long /*round*/, const std::vector<ArmHistory>& /*histories*/) {
  const auto p = probabilities();
  const double u = rng_.uniform01();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(p.size()) - 1;
}

void Exp3Policy::observe(int arm, double reward) {
  if (arm < 0 || static_cast<std::size_t>(arm) >= scores_.size()) {
    throw ContractViolation("Exp3Policy: arm out of range");
  }
  double unit = (reward - range_.first) / (range_.second - range_.first);
  if (unit < 0.0 || unit > 1.0) {
    ++clip_count_;
    unit = std::clamp(unit, 0.0, 1.0);
  }
  const double p_arm = probabilities()[static_cast<std::size_t>(arm)];
  scores_[static_cast<std::size_t>(arm)] += unit / p_arm;
}

// --- make_policy -------------------------------------------------------------------

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const Environment& env,
                                    long horizon, RandomStream policy_rng) {
  const int k = env.num_arms();
  const auto schemes = [&] {
    std::vector<WeightScheme> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      WeightScheme s = spec.scheme ? *spec.scheme : env.matched_scheme(i);
      if (s.kind == WeightKind::kPhaseMatched || s.kind == WeightKind::kTrendMatched) {
        s.match_next = spec.match_next;
      }
      out.push_back(std::move(s));
    }
    return out;
  };
  switch (spec.kind) {
    case PolicyKind::kWeightedUcb:
      return std::make_unique<WeightedUcbPolicy>(spec.exploration_c, schemes());
    case PolicyKind::kDiscUcb:
      return std::make_unique<DiscUcbPolicy>(schemes(), &env);
    case PolicyKind::kUcb1:
      return std::make_unique<Ucb1Policy>(k);
    case PolicyKind::kExp3: {
      const double mixing = spec.exp3_mixing ? *spec.exp3_mixing : 0.0;
      // With mixing the classic pairing is eta = gamma / K.
      const double eta = spec.eta       ? *spec.eta
                         : mixing > 0.0 ? mixing / k
                                        : Exp3Policy::default_eta(k, horizon);
      const auto range = spec.reward_range ? *spec.reward_range : env.reward_bounds();
      return std::make_unique<Exp3Policy>(k, eta, mixing, range, std::move(policy_rng));
    }
  }
  throw ConfigError("make_policy: unknown policy kind");
}

}  // namespace nsmab
