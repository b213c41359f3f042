#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hulls/experiments.hpp"
#include "hulls/normalizers.hpp"
#include "hulls/sequences.hpp"

// Flat key-value experiment configs: one `key = value` per line, `#` starts a
// comment, no sections or includes. The full schema is documented in the
// project README.

namespace hulls {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error("config key '" + key + "': " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ParsedConfig {
  std::map<std::string, std::string> kv;
  std::string raw_text;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::vector<double> parse_reals(const std::string& key, const std::string& value) {
  std::string spaced = value;
  for (char& ch : spaced) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream is(spaced);
  std::vector<double> out;
  double v;
  while (is >> v) out.push_back(v);
  is.clear();
  std::string rest;
  is >> rest;
  if (!rest.empty()) throw ConfigError(key, "not a number: '" + rest + "'");
  if (out.empty()) throw ConfigError(key, "expected at least one number");
  return out;
}

// "x y ; x y ; ..." -> list of vectors
inline std::vector<std::vector<double>> parse_vector_list(const std::string& key,
                                                          const std::string& value) {
  std::vector<std::vector<double>> out;
  std::istringstream groups(value);
  std::string group;
  while (std::getline(groups, group, ';')) {
    group = trim(group);
    if (group.empty()) continue;
    out.push_back(parse_reals(key, group));
  }
  if (out.empty()) throw ConfigError(key, "expected at least one vector");
  return out;
}

}  // namespace detail

inline ParsedConfig parse_config_text(const std::string& text) {
  ParsedConfig cfg;
  cfg.raw_text = text;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line, "line " + std::to_string(lineno) + " is not 'key = value'");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "empty key on line " + std::to_string(lineno));
    if (cfg.kv.count(key)) throw ConfigError(key, "duplicate key");
    cfg.kv[key] = value;
  }
  return cfg;
}

inline ParsedConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

// Tracks which keys a builder consumed so leftovers can be reported by name.
class ConfigReader {
 public:
  explicit ConfigReader(const ParsedConfig& cfg) : cfg_(cfg) {}

  bool has(const std::string& key) const { return cfg_.kv.count(key) > 0; }

  std::string get(const std::string& key) {
    auto it = cfg_.kv.find(key);
    if (it == cfg_.kv.end()) throw ConfigError(key, "missing required key");
    used_.insert(key);
    return it->second;
  }
  std::string get_or(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    auto it = cfg_.kv.find(key);
    return it == cfg_.kv.end() ? fallback : it->second;
  }

  double get_real(const std::string& key) { return to_real(key, get(key)); }
  double get_real_or(const std::string& key, double fallback) {
    return has(key) ? get_real(key) : (used_.insert(key), fallback);
  }
  std::uint64_t get_uint(const std::string& key) { return to_uint(key, get(key)); }
  std::uint64_t get_uint_or(const std::string& key, std::uint64_t fallback) {
    return has(key) ? get_uint(key) : (used_.insert(key), fallback);
  }
  std::vector<double> get_reals(const std::string& key) {
    return detail::parse_reals(key, get(key));
  }
  std::vector<std::vector<double>> get_vectors(const std::string& key) {
    return detail::parse_vector_list(key, get(key));
  }

  void reject_unknown() const {
    for (const auto& [key, value] : cfg_.kv) {
      if (!used_.count(key)) throw ConfigError(key, "unknown key");
    }
  }

  double to_real(const std::string& key, const std::string& s) const {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(key, "not a number: '" + s + "'");
    }
  }
  std::uint64_t to_uint(const std::string& key, const std::string& s) const {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(key, "not a nonnegative integer: '" + s + "'");
    }
  }

 private:
  const ParsedConfig& cfg_;
  std::set<std::string> used_;
};

inline SequenceSpec read_sequence_spec(ConfigReader& r) {
  const std::string kind = r.get("kind");
  const int d = static_cast<int>(r.get_uint_or("d", 1));
  auto read_sigma = [&](const std::string& key) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d, d);
    if (r.has(key)) {
      const auto vals = r.get_reals(key);
      if (static_cast<int>(vals.size()) != d * d) {
        throw ConfigError(key, "expected " + std::to_string(d * d) + " entries (d*d, row-major)");
      }
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) m(i, j) = vals[i * d + j];
      }
    } else {
      r.get_or(key, "");  // mark as consumed; identity default
    }
    return m;
  };

  SequenceSpec spec;
  try {
    if (kind == "iid") {
      spec = SequenceSpec::iid(read_sigma("sigma"));
    } else if (kind == "scaled-iid") {
      SigmaSchedule sched{r.get_real_or("schedule_c", 1.0), r.get_real_or("schedule_q", 0.5)};
      spec = SequenceSpec::scaled_iid(read_sigma("sigma"), sched);
    } else if (kind == "ar1") {
      spec = SequenceSpec::ar1(r.get_real("phi"));
    } else if (kind == "normalized-walk" || kind == "walk") {
      spec = SequenceSpec::normalized_walk();
    } else if (kind == "polytope-lines") {
      auto vectors = r.get_vectors("lines");
      std::vector<double> probs;
      if (r.has("line_probs")) {
        probs = r.get_reals("line_probs");
      } else {
        r.get_or("line_probs", "");
        probs.assign(vectors.size(), 1.0 / static_cast<double>(vectors.size()));
      }
      spec = SequenceSpec::polytope_lines(std::move(vectors), std::move(probs));
    } else {
      throw ConfigError("kind", "unknown sequence kind '" + kind + "'");
    }
    if (spec.d != d && (spec.kind == SequenceKind::Ar1 ||
                        spec.kind == SequenceKind::NormalizedWalk)) {
      if (d != 1) throw ConfigError("d", "this kind is one-dimensional");
    } else if (spec.kind == SequenceKind::PolytopeLines && spec.d != d && r.has("d")) {
      throw ConfigError("d", "does not match dimension of 'lines'");
    }
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("kind", std::string("invalid sequence spec: ") + e.what());
  }
  return spec;
}

inline Target read_target(ConfigReader& r, int d) {
  const std::string target = r.get("target");
  try {
    if (target == "interval") {
      return Interval(r.get_real_or("target_lo", -1.0), r.get_real_or("target_hi", 1.0));
    }
    if (target == "ellipsoid") {
      const auto vals = r.get_reals("target_sigma");
      if (static_cast<int>(vals.size()) != d * d) {
        throw ConfigError("target_sigma",
                          "expected " + std::to_string(d * d) + " entries (d*d, row-major)");
      }
      Eigen::MatrixXd m(d, d);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) m(i, j) = vals[i * d + j];
      }
      return Ellipsoid(m);
    }
    if (target == "polytope") {
      return Polytope(r.get_vectors("target_vertices"));
    }
    if (target == "limit") {
      throw ConfigError("target", "'limit' is resolved by the caller");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("target", std::string("invalid target: ") + e.what());
  }
  throw ConfigError("target", "unknown target kind '" + target + "'");
}

inline Normalizer read_normalizer(ConfigReader& r) {
  const std::string kind = r.get("normalizer");
  try {
    if (kind == "b") return Normalizer::b();
    if (kind == "c") return Normalizer::c();
    if (kind == "constant") return Normalizer::constant(r.get_real_or("normalizer_value", 1.0));
    if (kind == "iterated-log") {
      return Normalizer::iterated_log(static_cast<int>(r.get_uint("normalizer_k")),
                                      r.get_real("normalizer_alpha"));
    }
    if (kind == "table") {
      // "t:g t:g ..."
      const std::string s = r.get("normalizer_table");
      std::vector<std::pair<double, double>> knots;
      std::istringstream is(s);
      std::string tok;
      while (is >> tok) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos) {
          throw ConfigError("normalizer_table", "expected 't:g' pairs");
        }
        knots.emplace_back(r.to_real("normalizer_table", tok.substr(0, colon)),
                           r.to_real("normalizer_table", tok.substr(colon + 1)));
      }
      return Normalizer::table(std::move(knots));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("normalizer", std::string("invalid normalizer: ") + e.what());
  }
  throw ConfigError("normalizer", "unknown normalizer kind '" + kind + "'");
}

// Full converge config. Optional seed/paths overrides come from the CLI.
inline ExperimentConfig build_experiment_config(const ParsedConfig& parsed) {
  ConfigReader r(parsed);
  ExperimentConfig cfg;
  cfg.spec = read_sequence_spec(r);
  const std::string target = r.get_or("target", "limit");
  if (target == "limit") {
    cfg.target = cfg.spec.limit_target();  // the sequence's own weak-limit body
  } else {
    cfg.target = read_target(r, cfg.spec.d);
  }
  cfg.normalizer = read_normalizer(r);
  const auto cps = r.get_reals("checkpoints");
  cfg.checkpoints.clear();
  for (double v : cps) {
    if (v < 1 || v != std::floor(v)) {
      throw ConfigError("checkpoints", "entries must be positive integers");
    }
    cfg.checkpoints.push_back(static_cast<std::uint64_t>(v));
  }
  cfg.paths = r.get_uint_or("paths", 1);
  cfg.master_seed = r.get_uint_or("seed", 0);
  cfg.grid_M = static_cast<int>(r.get_uint_or("grid_m", 512));
  r.reject_unknown();
  cfg.validate();  // messages name the offending key
  return cfg;
}

// Sequence-only config (rate / lemma1 subcommands).
inline SequenceSpec build_sequence_spec(const ParsedConfig& parsed) {
  ConfigReader r(parsed);
  SequenceSpec spec = read_sequence_spec(r);
  r.reject_unknown();
  return spec;
}

}  // namespace hulls
