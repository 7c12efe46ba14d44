#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "noisy/oracle.hpp"

namespace noisy {

using json = nlohmann::ordered_json;

inline std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::None: return "none";
    case NoiseKind::Adversarial: return "adversarial";
    case NoiseKind::Probabilistic: return "probabilistic";
  }
  return "none";
}

inline NoiseKind parse_noise_kind(const std::string& s) {
  if (s == "none") return NoiseKind::None;
  if (s == "adversarial") return NoiseKind::Adversarial;
  if (s == "probabilistic") return NoiseKind::Probabilistic;
  throw ValidationError("unknown noise kind '" + s + "'");
}

inline std::string to_string(AdversaryStrategy a) {
  return a == AdversaryStrategy::Pessimistic ? "pessimistic" : "random-in-band";
}

inline AdversaryStrategy parse_adversary(const std::string& s) {
  if (s == "pessimistic") return AdversaryStrategy::Pessimistic;
  if (s == "random-in-band") return AdversaryStrategy::RandomInBand;
  throw ValidationError("unknown adversary '" + s + "'");
}

/// mu for adversarial noise, p for probabilistic, 0 otherwise.
inline double noise_level(const NoiseParams& np) {
  switch (np.kind) {
    case NoiseKind::Adversarial: return np.mu;
    case NoiseKind::Probabilistic: return np.p;
    case NoiseKind::None: return 0.0;
  }
  return 0.0;
}

inline json noise_json(const NoiseParams& np) {
  return json{{"kind", to_string(np.kind)}, {"mu", np.mu},     {"p", np.p},
              {"delta", np.delta},          {"seed", np.seed}, {"adversary", to_string(np.adversary)}};
}

inline NoiseParams noise_from_json(const json& j) {
  NoiseParams np;
  np.kind = parse_noise_kind(j.at("kind").get<std::string>());
  np.mu = j.at("mu").get<double>();
  np.p = j.at("p").get<double>();
  np.delta = j.at("delta").get<double>();
  np.seed = j.at("seed").get<std::uint64_t>();
  np.adversary = parse_adversary(j.at("adversary").get<std::string>());
  return np;
}

/// Non-finite metrics are stored as null.
inline json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }
inline double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

/// One algorithm run on one instance. Metrics that do not apply to the task
/// are NaN (null in JSON, empty in CSV).
struct TrialReport {
  std::string algorithm;
  std::string task;
  NoiseParams noise;
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  json output = json::object();
  double ratio = std::numeric_limits<double>::quiet_NaN();
  double rank = std::numeric_limits<double>::quiet_NaN();
  double fscore = std::numeric_limits<double>::quiet_NaN();
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t queries = 0;
  double wall_time = 0.0;
  std::vector<std::string> warnings;
};

inline json to_json(const TrialReport& r) {
  return json{{"algorithm", r.algorithm},
              {"task", r.task},
              {"noise", noise_json(r.noise)},
              {"trial", r.trial},
              {"seed", r.seed},
              {"output", r.output},
              {"ratio", number_or_null(r.ratio)},
              {"rank", number_or_null(r.rank)},
              {"fscore", number_or_null(r.fscore)},
              {"objective", number_or_null(r.objective)},
              {"queries", r.queries},
              {"wall_time", r.wall_time},
              {"warnings", r.warnings}};
}

inline TrialReport trial_from_json(const json& j) {
  TrialReport r;
  r.algorithm = j.at("algorithm").get<std::string>();
  r.task = j.at("task").get<std::string>();
  r.noise = noise_from_json(j.at("noise"));
  r.trial = j.at("trial").get<std::uint64_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.output = j.at("output");
  r.ratio = number_from(j.at("ratio"));
  r.rank = number_from(j.at("rank"));
  r.fscore = number_from(j.at("fscore"));
  r.objective = number_from(j.at("objective"));
  r.queries = j.at("queries").get<std::uint64_t>();
  r.wall_time = j.at("wall_time").get<double>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

/// Frozen column order; plotting scripts depend on it.
inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{"algorithm", "noise_kind", "noise_level", "trial", "seed", "ratio",
                                             "rank",      "fscore",     "objective",   "queries", "wall_time"};
  return cols;
}

inline std::string csv_number(double x) {
  if (!std::isfinite(x)) return "";
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

inline void write_csv_header(std::ostream& out) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

inline void write_csv_row(std::ostream& out, const TrialReport& r) {
  out << r.algorithm << ',' << to_string(r.noise.kind) << ',' << csv_number(noise_level(r.noise)) << ','
      << r.trial << ',' << r.seed << ',' << csv_number(r.ratio) << ',' << csv_number(r.rank) << ','
      << csv_number(r.fscore) << ',' << csv_number(r.objective) << ',' << r.queries << ','
      << csv_number(r.wall_time) << '\n';
}

/// Copy of a report tree with every "wall_time" member removed, for
/// determinism comparisons.
inline json strip_wall_time(json j) {
  if (j.is_object()) {
    j.erase("wall_time");
    for (auto& [k, v] : j.items()) v = strip_wall_time(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_wall_time(v);
  }
  return j;
}

}  // namespace noisy
