#include "nsmab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>

namespace nsmab {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

struct KeyValue {
  int line;
  std::string value;
};

std::optional<Family> family_from(const std::string& s) {
  if (s == "iid") return Family::kIid;
  if (s == "complete_dependence") return Family::kCompleteDependence;
  if (s == "rotting") return Family::kRotting;
  if (s == "rotting_jumps") return Family::kRottingJumps;
  if (s == "markov") return Family::kMarkov;
  if (s == "rarely_changing") return Family::kRarelyChanging;
  if (s == "periodic") return Family::kPeriodic;
  if (s == "known_trend") return Family::kKnownTrend;
  if (s == "drifting") return Family::kDrifting;
  return std::nullopt;
}

const char* kKnownKeys[] = {
    "family", "K",       "T",          "trials",        "seed",          "policy",
    "scheme", "C",       "eta",        "mixing",        "reward_lo",     "reward_hi",
    "gamma",  "output",  "periods",    "trend_table",   "markov_states", "jump_segments",
    "mix",    "period_length", "phase_period", "trend_match",
};

}  // namespace

ParseOutcome parse_config(std::string_view text) {
  ParseOutcome out;
  std::map<std::string, KeyValue> kv;

  // Pass 1: tokenize into key=value pairs.
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                          : eol - pos);
    ++line_no;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      out.issues.push_back({line_no, "expected key=value, got '" + line + "'"});
      continue;
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (std::find_if(std::begin(kKnownKeys), std::end(kKnownKeys),
                     [&](const char* k) { return key == k; }) == std::end(kKnownKeys)) {
      out.issues.push_back({line_no, "unknown key '" + key + "'"});
      continue;
    }
    if (kv.count(key)) {
      out.issues.push_back({line_no, "duplicate key '" + key + "'"});
      continue;
    }
    kv[key] = {line_no, value};
  }

  auto fail = [&](int line, std::string msg) { out.issues.push_back({line, std::move(msg)}); };

  auto get_long = [&](const char* key, std::optional<long> def) -> std::optional<long> {
    auto it = kv.find(key);
    if (it == kv.end()) return def;
    const std::string& v = it->second.value;
    long value = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
    if (ec != std::errc{} || p != v.data() + v.size()) {
      fail(it->second.line, std::string("value for ") + key + " is not an integer: '" + v + "'");
      return std::nullopt;
    }
    return value;
  };

  auto get_double = [&](const char* key, std::optional<double> def) -> std::optional<double> {
    auto it = kv.find(key);
    if (it == kv.end()) return def;
    const std::string& v = it->second.value;
    try {
      std::size_t used = 0;
      const double value = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return value;
    } catch (const std::exception&) {
      fail(it->second.line, std::string("value for ") + key + " is not a number: '" + v + "'");
      return std::nullopt;
    }
  };

  auto line_of = [&](const char* key) {
    auto it = kv.find(key);
    return it == kv.end() ? 0 : it->second.line;
  };

  ExperimentConfig cfg;

  // family
  std::optional<Family> family;
  if (auto it = kv.find("family"); it != kv.end()) {
    family = family_from(it->second.value);
    if (!family && it->second.value != "mixed") {
      fail(it->second.line, "unknown family '" + it->second.value + "'");
    }
  } else {
    fail(0, "missing key family");
  }
  const bool mixed = kv.count("family") && kv.at("family").value == "mixed";

  // core integers
  const auto num_arms = get_long("K", std::nullopt);
  const auto horizon = get_long("T", std::nullopt);
  if (!kv.count("K")) fail(0, "missing key K");
  if (!kv.count("T")) fail(0, "missing key T");
  if (num_arms && *num_arms < 1) fail(line_of("K"), "K must be >= 1");
  if (horizon && num_arms && *horizon < *num_arms) {
    fail(line_of("T"), "T=" + std::to_string(*horizon) +
                           " must be >= K=" + std::to_string(*num_arms));
  }
  const auto trials = get_long("trials", 1);
  if (trials && *trials < 1) fail(line_of("trials"), "trials must be >= 1");
  const auto seed = get_long("seed", 1);

  if (num_arms) cfg.env.num_arms = static_cast<int>(*num_arms);
  if (horizon) cfg.env.horizon = *horizon;
  if (trials) cfg.trials = static_cast<int>(*trials);
  if (seed) cfg.root_seed = static_cast<std::uint64_t>(*seed);
  if (family) cfg.env.family = *family;

  // policy
  if (auto it = kv.find("policy"); it != kv.end()) {
    const std::string& v = it->second.value;
    if (v == "weighted_ucb") {
      cfg.policy.kind = PolicyKind::kWeightedUcb;
    } else if (v == "disc_ucb") {
      cfg.policy.kind = PolicyKind::kDiscUcb;
    } else if (v == "exp3") {
      cfg.policy.kind = PolicyKind::kExp3;
    } else if (v == "ucb1") {
      cfg.policy.kind = PolicyKind::kUcb1;
    } else {
      fail(it->second.line, "unknown policy '" + v + "'");
    }
  }

  if (const auto c = get_double("C", 0.0)) {
    if (*c < 0.0) {
      fail(line_of("C"), "C must be >= 0");
    } else {
      cfg.policy.exploration_c = *c;
    }
  }
  if (kv.count("eta")) {
    if (const auto eta = get_double("eta", std::nullopt)) {
      if (*eta <= 0.0) {
        fail(line_of("eta"), "eta must be > 0");
      } else {
        cfg.policy.eta = *eta;
      }
    }
  }
  if (kv.count("mixing")) {
    if (const auto mixing = get_double("mixing", std::nullopt)) {
      if (*mixing < 0.0 || *mixing > 1.0) {
        fail(line_of("mixing"), "mixing must be in [0,1]");
      } else {
        cfg.policy.exp3_mixing = *mixing;
      }
    }
  }
  const bool has_lo = kv.count("reward_lo");
  const bool has_hi = kv.count("reward_hi");
  if (has_lo != has_hi) {
    fail(line_of(has_lo ? "reward_lo" : "reward_hi"),
         "reward_lo and reward_hi must be given together");
  } else if (has_lo) {
    const auto lo = get_double("reward_lo", std::nullopt);
    const auto hi = get_double("reward_hi", std::nullopt);
    if (lo && hi) {
      if (!(*lo < *hi)) {
        fail(line_of("reward_hi"), "reward_lo must be < reward_hi");
      } else {
        cfg.policy.reward_range = {*lo, *hi};
      }
    }
  }

  // weight scheme
  const auto gamma = get_double("gamma", 0.75);
  if (gamma) {
    if (*gamma <= 0.0) {
      fail(line_of("gamma"), "gamma must be > 0");
    } else {
      cfg.env.window_gamma = *gamma;
    }
  }
  std::vector<double> trend_table = {0.1, 1.0, 3.0};
  if (auto it = kv.find("trend_table"); it != kv.end()) {
    trend_table.clear();
    std::string v = it->second.value;
    std::replace(v.begin(), v.end(), ',', ' ');
    std::istringstream in(v);
    double x = 0.0;
    while (in >> x) trend_table.push_back(x);
    if (!in.eof() || trend_table.empty()) {
      fail(it->second.line, "trend_table must be a list of numbers");
      trend_table = {0.1, 1.0, 3.0};
    }
  }
  cfg.env.trend_table = trend_table;

  if (auto it = kv.find("trend_match"); it != kv.end()) {
    if (it->second.value == "next") {
      cfg.policy.match_next = true;
    } else if (it->second.value == "current") {
      cfg.policy.match_next = false;
    } else {
      fail(it->second.line, "trend_match must be 'next' or 'current'");
    }
  }

  if (auto it = kv.find("scheme"); it != kv.end()) {
    const std::string& v = it->second.value;
    if (v == "auto") {
      cfg.policy.scheme.reset();
    } else if (v == "uniform") {
      cfg.policy.scheme = WeightScheme::uniform();
    } else if (v == "state_matched") {
      cfg.policy.scheme = WeightScheme::state_matched();
    } else if (v == "phase_matched") {
      const auto period = get_long("phase_period", 1);
      if (period && *period >= 1) {
        cfg.policy.scheme = WeightScheme::phase_matched(*period);
      } else if (period) {
        fail(line_of("phase_period"), "phase_period must be >= 1");
      }
    } else if (v == "trend_matched") {
      cfg.policy.scheme = WeightScheme::trend_matched(trend_table);
    } else if (v == "recent_window") {
      cfg.policy.scheme = WeightScheme::recent_window(gamma.value_or(1.0));
    } else if (v == "since_change") {
      fail(it->second.line,
           "since_change derives its change points from the environment; use scheme=auto");
    } else {
      fail(it->second.line, "unknown scheme '" + v + "'");
    }
  }

  // family-specific keys
  if (family == Family::kPeriodic) {
    if (!kv.count("period_length")) {
      fail(0, "missing key period_length for family=periodic");
    } else if (const auto pl = get_long("period_length", std::nullopt)) {
      if (*pl < 1) {
        fail(line_of("period_length"), "period_length must be >= 1");
      } else {
        cfg.env.period_length = *pl;
      }
    }
    if (const auto p = get_long("periods", 3)) {
      if (*p != 3) {
        fail(line_of("periods"), "only periods=3 mean ladders are built in");
      }
    }
  }
  if (const auto ms = get_long("markov_states", 2)) {
    if (*ms < 2) {
      fail(line_of("markov_states"), "markov_states must be >= 2");
    } else {
      cfg.env.markov_states = static_cast<int>(*ms);
    }
  }
  if (const auto js = get_long("jump_segments", 5)) {
    if (*js < 1) {
      fail(line_of("jump_segments"), "jump_segments must be >= 1");
    } else {
      cfg.env.jump_segments = static_cast<int>(*js);
    }
  }

  // mixed composition
  if (mixed) {
    auto it = kv.find("mix");
    if (it == kv.end()) {
      fail(0, "missing key mix for family=mixed");
    } else {
      std::string v = it->second.value;
      std::replace(v.begin(), v.end(), ',', ' ');
      std::istringstream in(v);
      std::string token;
      int total = 0;
      bool bad = false;
      while (in >> token) {
        const std::size_t colon = token.find(':');
        if (colon == std::string::npos) {
          bad = true;
          break;
        }
        const auto fam = family_from(token.substr(0, colon));
        int count = 0;
        try {
          count = std::stoi(token.substr(colon + 1));
        } catch (const std::exception&) {
          bad = true;
          break;
        }
        if (!fam || count < 1) {
          bad = true;
          break;
        }
        cfg.env.mix.emplace_back(*fam, count);
        total += count;
      }
      if (bad) {
        fail(it->second.line, "mix must look like 'iid:5,rotting:5'");
      } else if (num_arms && total != *num_arms) {
        fail(it->second.line, "mix covers " + std::to_string(total) + " arms but K=" +
                                  std::to_string(*num_arms));
      }
      cfg.env.family = Family::kIid;  // unused when mix is set
    }
  } else if (kv.count("mix")) {
    fail(line_of("mix"), "mix is only valid with family=mixed");
  }

  if (auto it = kv.find("output"); it != kv.end()) cfg.output_prefix = it->second.value;

  if (out.issues.empty()) out.config = std::move(cfg);
  std::sort(out.issues.begin(), out.issues.end(),
            [](const ParseIssue& a, const ParseIssue& b) { return a.line < b.line; });
  return out;
}

}  // namespace nsmab
