#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hulls/rng.hpp"
#include "hulls/version.hpp"

// Run manifests: everything needed to reproduce a run bit-for-bit (tool
// version, effective parameters, master seed, the per-path seed derivation
// and, for path-based runs, the derived seeds themselves).

namespace hulls {

using Json = nlohmann::json;

inline std::string iso8601_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

class ManifestBuilder {
 public:
  ManifestBuilder(const std::string& subcommand, std::uint64_t master_seed) {
    j_["tool"] = "hull-limits";
    j_["version"] = HULLS_VERSION_STRING;
    j_["subcommand"] = subcommand;
    j_["master_seed"] = master_seed;
    j_["seed_derivation"] =
        "path_seed(i) = splitmix64_mix(master + (i+1) * 0x9E3779B97F4A7C15)";
    j_["started_utc"] = iso8601_utc_now();
    master_ = master_seed;
  }

  Json& json() { return j_; }

  void set_path_seeds(std::uint64_t paths, std::uint64_t cap = 10000) {
    j_["paths"] = paths;
    if (paths <= cap) {
      std::vector<std::uint64_t> seeds(paths);
      for (std::uint64_t p = 0; p < paths; ++p) seeds[p] = derive_path_seed(master_, p);
      j_["path_seeds"] = seeds;
    }
  }

  void write(const std::filesystem::path& path) {
    j_["finished_utc"] = iso8601_utc_now();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << j_.dump(2) << '\n';
  }

 private:
  Json j_;
  std::uint64_t master_ = 0;
};

}  // namespace hulls
