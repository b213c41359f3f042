#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hulls/geometry.hpp"
#include "hulls/normalizers.hpp"
#include "hulls/parallel.hpp"
#include "hulls/rng.hpp"
#include "hulls/sequences.hpp"
#include "hulls/stats.hpp"
#include "hulls/tracker.hpp"

// Multi-path experiment runner. Every run is a pure function of its config
// (master seed included): path p uses the seed stream derive_path_seed(master, p)
// and writes only its own result slot, so output is identical for any worker
// count.

namespace hulls {

namespace detail {
inline std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

inline std::string target_describe(const Target& t) {
  std::ostringstream os;
  if (const auto* iv = std::get_if<Interval>(&t)) {
    os << "interval[" << detail::fmt_full(iv->lo) << "," << detail::fmt_full(iv->hi) << "]";
  } else if (const auto* e = std::get_if<Ellipsoid>(&t)) {
    os << "ellipsoid[";
    const auto& s = e->sigma();
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      for (Eigen::Index j = 0; j < s.cols(); ++j) {
        if (i || j) os << ",";
        os << detail::fmt_full(s(i, j));
      }
    }
    os << "]";
  } else {
    const auto& p = std::get<Polytope>(t);
    os << "polytope[";
    for (std::size_t k = 0; k < p.vertices.size(); ++k) {
      if (k) os << "|";
      for (std::size_t i = 0; i < p.vertices[k].size(); ++i) {
        if (i) os << ",";
        os << detail::fmt_full(p.vertices[k][i]);
      }
    }
    os << "]";
  }
  return os.str();
}

struct ExperimentConfig {
  SequenceSpec spec;
  Target target = Interval(-1.0, 1.0);
  Normalizer normalizer = Normalizer::b();
  std::vector<std::uint64_t> checkpoints;
  std::uint64_t paths = 1;
  std::uint64_t master_seed = 0;
  int grid_M = 512;
  bool keep_hull2d = false;

  void validate() const {
    spec.validate();
    if (paths < 1) throw std::invalid_argument("config: paths must be >= 1");
    if (checkpoints.empty()) throw std::invalid_argument("config: no checkpoints");
    for (std::size_t i = 1; i < checkpoints.size(); ++i) {
      if (checkpoints[i] <= checkpoints[i - 1]) {
        throw std::invalid_argument("config: checkpoints must be strictly increasing");
      }
    }
    if (target_dim(target) != spec.d) {
      throw std::invalid_argument("config: target dimension does not match sequence");
    }
    if (spec.d > 1 && grid_M < 2) throw std::invalid_argument("config: grid_M must be >= 2");
    for (std::uint64_t n : checkpoints) {
      if (!normalizer.in_domain(static_cast<double>(n))) {
        std::ostringstream os;
        os << "config: checkpoint n=" << n << " outside normalizer domain";
        if (normalizer.kind() == NormalizerKind::B) os << " (b requires t > e)";
        if (normalizer.kind() == NormalizerKind::C) os << " (c requires t > e^e)";
        throw std::invalid_argument(os.str());
      }
    }
    // keeps the LIL normalizer comfortably in-domain
    if (normalizer.kind() == NormalizerKind::C && checkpoints.front() < 20) {
      throw std::invalid_argument("config: checkpoints must start at n >= 20 when c is used");
    }
  }

  std::string canonical_string() const {
    std::ostringstream os;
    os << "spec{" << spec.describe() << "};target{" << target_describe(target)
       << "};normalizer{" << normalizer.describe() << "};checkpoints{";
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
      if (i) os << ",";
      os << checkpoints[i];
    }
    os << "};paths{" << paths << "};seed{" << master_seed << "};gridM{"
       << (spec.d == 1 ? 2 : grid_M) << "}";
    return os.str();
  }

  std::uint64_t hash() const {
    const std::string s = canonical_string();
    return fnv1a(s.data(), s.size());
  }
};

struct ConvergenceCurve {
  std::vector<std::uint64_t> checkpoints;
  std::vector<std::vector<double>> per_path;  // [path][checkpoint] -> distance
  std::vector<double> q10, q50, q90;          // per checkpoint, across paths
  std::uint64_t config_hash = 0;
};

inline ConvergenceCurve run_convergence(const ExperimentConfig& config,
                                        unsigned threads = 0) {
  config.validate();
  const auto& spec = config.spec;
  const GridPtr grid = make_direction_grid(spec.d, spec.d == 1 ? 2 : config.grid_M);
  const SupportProfile target_prof = target_profile(config.target, grid);

  ConvergenceCurve curve;
  curve.checkpoints = config.checkpoints;
  curve.config_hash = config.hash();
  curve.per_path.assign(config.paths, std::vector<double>(config.checkpoints.size(), 0.0));

  parallel_for_index(config.paths, threads, [&](std::uint64_t p) {
    PathState state = spawn(spec, derive_path_seed(config.master_seed, p));
    HullTracker tracker(grid, config.keep_hull2d);
    for (std::size_t j = 0; j < config.checkpoints.size(); ++j) {
      const std::uint64_t n_j = config.checkpoints[j];
      if (spec.d == 1) {
        while (tracker.count() < n_j) tracker.update1(state.next1());
      } else {
        while (tracker.count() < n_j) tracker.update(state.next());
      }
      const HullSnapshot snap = tracker.snapshot(config.normalizer,
                                                 static_cast<double>(n_j));
      curve.per_path[p][j] = hausdorff_profiles(snap.profile, target_prof);
    }
  });

  const std::size_t ncp = config.checkpoints.size();
  curve.q10.resize(ncp);
  curve.q50.resize(ncp);
  curve.q90.resize(ncp);
  std::vector<double> column(config.paths);
  for (std::size_t j = 0; j < ncp; ++j) {
    for (std::uint64_t p = 0; p < config.paths; ++p) column[p] = curve.per_path[p][j];
    std::sort(column.begin(), column.end());
    curve.q10[j] = stats::quantile_sorted(column, 0.10);
    curve.q50[j] = stats::quantile_sorted(column, 0.50);
    curve.q90[j] = stats::quantile_sorted(column, 0.90);
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Maximal-inequality check: P(max_{k<=n} |S_k| >= x) <= 2 P(|S_n| >= x) for a
// standard normal random walk, tested empirically with Monte Carlo slack.

struct LevyRow {
  double x = 0.0;
  double lhs = 0.0;         // empirical P(max |S_k| >= x)
  double rhs = 0.0;         // empirical P(|S_n| >= x)
  double se_combined = 0.0;
  double bound = 0.0;       // 2*rhs + 3*se_combined
  double gauss_tail = 0.0;  // exact 2(1 - Phi(x/sqrt(n)))
  bool pass = false;
};

struct LevyReport {
  std::uint64_t n = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<LevyRow> rows;
  bool all_pass = true;
};

inline constexpr std::uint64_t kLevyMinTrials = 10000;

inline LevyReport levy_check(std::uint64_t n, std::span<const double> x_grid,
                             std::uint64_t trials, std::uint64_t seed,
                             unsigned threads = 0) {
  if (n < 1) throw std::invalid_argument("levy_check: n must be >= 1");
  if (trials < kLevyMinTrials) {
    throw std::invalid_argument("levy_check: minimum trials is 10000");
  }
  if (x_grid.empty()) throw std::invalid_argument("levy_check: empty x grid");
  for (double x : x_grid) {
    if (!(x >= 0.0)) throw std::invalid_argument("levy_check: x must be >= 0");
  }

  std::vector<double> max_abs(trials), final_abs(trials);
  parallel_for_index(trials, threads, [&](std::uint64_t t) {
    Engine eng = make_engine(derive_path_seed(seed, t));
    double s = 0.0, m = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) {
      s += std_normal(eng);
      m = std::max(m, std::abs(s));
    }
    max_abs[t] = m;
    final_abs[t] = std::abs(s);
  });

  LevyReport rep;
  rep.n = n;
  rep.trials = trials;
  rep.seed = seed;
  const double T = static_cast<double>(trials);
  for (double x : x_grid) {
    std::uint64_t lc = 0, rc = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      if (max_abs[t] >= x) ++lc;
      if (final_abs[t] >= x) ++rc;
    }
    LevyRow row;
    row.x = x;
    row.lhs = lc / T;
    row.rhs = rc / T;
    const double se_l = stats::binomial_se(row.lhs, trials);
    const double se_r = stats::binomial_se(row.rhs, trials);
    row.se_combined = std::sqrt(se_l * se_l + 4.0 * se_r * se_r);
    row.bound = 2.0 * row.rhs + 3.0 * row.se_combined;
    row.gauss_tail = normal_two_sided_tail(x / std::sqrt(static_cast<double>(n)));
    row.pass = row.lhs <= row.bound;
    rep.all_pass = rep.all_pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

// Default grid for the check: 10 points spanning [0, 3 sqrt(n)].
inline std::vector<double> default_levy_x_grid(std::uint64_t n, std::size_t count = 10) {
  std::vector<double> xs(count);
  const double hi = 3.0 * std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < count; ++i) {
    xs[i] = hi * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return xs;
}

// ---------------------------------------------------------------------------
// Single-point tail probe: empirical P{ d(X_n / b(n), E) > eps } and the
// product n * p_hat, for qualitative comparison with an o(1/n) rate.
// Exploratory: the table is reported, not gated.

struct RateRow {
  std::uint64_t n = 0;
  double p_hat = 0.0;
  double n_times_p = 0.0;
  double se = 0.0;
};

struct RateReport {
  double epsilon = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<RateRow> rows;
};

// Exact distance from a point to the weak-limit target; grid gap in d=2.
namespace detail {

class PointTargetDistance {
 public:
  PointTargetDistance(const Target& target, int d, int grid_M) : d_(d) {
    if (d == 1) {
      const auto& iv = std::get<Interval>(target);
      lo_ = iv.lo;
      hi_ = iv.hi;
    } else {
      grid_ = make_direction_grid(d, grid_M);
      prof_ = target_profile(target, grid_);
    }
  }

  double operator()(std::span<const double> x) const {
    if (d_ == 1) {
      return std::max({lo_ - x[0], x[0] - hi_, 0.0});
    }
    double gap = 0.0;
    for (std::size_t i = 0; i < grid_->size(); ++i) {
      gap = std::max(gap, grid_->dot_with(i, x) - prof_.values[i]);
    }
    return gap;
  }

 private:
  int d_;
  double lo_ = 0.0, hi_ = 0.0;
  GridPtr grid_;
  SupportProfile prof_;
};

// Draw from the marginal law of X_n (exact for every supported kind).
class MarginalSampler {
 public:
  explicit MarginalSampler(const SequenceSpec& spec) : spec_(spec) {
    spec.validate();
    if (spec.kind == SequenceKind::PolytopeLines) {
      throw std::invalid_argument("marginal sampler: sequence has no Gaussian weak limit");
    }
    if (spec.d > 8) throw std::invalid_argument("marginal sampler: d must be <= 8");
    if (spec.kind == SequenceKind::Iid || spec.kind == SequenceKind::ScaledIid) {
      const Eigen::MatrixXd a = Ellipsoid(spec.sigma).sqrt_factor();
      factor_.assign(a.data(), a.data() + a.size());
    }
  }

  void draw(std::uint64_t n, Engine& eng, std::span<double> out) const {
    const int d = spec_.d;
    switch (spec_.kind) {
      case SequenceKind::Iid:
      case SequenceKind::ScaledIid: {
        double z[8];
        for (int i = 0; i < d; ++i) z[i] = std_normal(eng);
        const double s =
            spec_.kind == SequenceKind::ScaledIid ? spec_.schedule(n) : 1.0;
        for (int i = 0; i < d; ++i) {
          double acc = 0.0;
          for (int j = 0; j < d; ++j) acc += factor_[j * d + i] * z[j];
          out[i] = s * acc;
        }
        break;
      }
      case SequenceKind::Ar1:
      case SequenceKind::NormalizedWalk:
        out[0] = std_normal(eng);  // marginal is N(0,1) at every index
        break;
      case SequenceKind::PolytopeLines:
        throw std::logic_error("unreachable");
    }
  }

 private:
  SequenceSpec spec_;
  std::vector<double> factor_;
};

}  // namespace detail

inline RateReport rate_probe(const SequenceSpec& spec, double epsilon,
                             std::span<const std::uint64_t> n_grid,
                             std::uint64_t trials, std::uint64_t seed,
                             int grid_M = 512, unsigned threads = 0) {
  spec.validate();
  if (spec.d > 2) throw std::invalid_argument("rate_probe: d must be 1 or 2");
  if (!(epsilon > 0.0)) throw std::invalid_argument("rate_probe: epsilon must be > 0");
  if (trials < 1) throw std::invalid_argument("rate_probe: trials must be >= 1");
  if (n_grid.empty()) throw std::invalid_argument("rate_probe: empty n grid");
  for (std::uint64_t n : n_grid) {
    if (!(static_cast<double>(n) > std::numbers::e)) {
      throw std::invalid_argument("rate_probe: n must exceed e (b normalizer domain)");
    }
  }

  const detail::MarginalSampler sampler(spec);
  const detail::PointTargetDistance dist(spec.limit_target(), spec.d, grid_M);

  RateReport rep;
  rep.epsilon = epsilon;
  rep.trials = trials;
  rep.seed = seed;
  rep.rows.resize(n_grid.size());

  for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
    const std::uint64_t n = n_grid[ni];
    const double bn = eval_b(static_cast<double>(n));
    std::vector<std::uint8_t> exceed(trials, 0);
    const std::uint64_t stream = derive_path_seed(seed, ni);
    parallel_for_index(trials, threads, [&](std::uint64_t t) {
      Engine eng = make_engine(derive_path_seed(stream, t));
      double x[8];
      sampler.draw(n, eng, {x, static_cast<std::size_t>(spec.d)});
      for (int i = 0; i < spec.d; ++i) x[i] /= bn;
      exceed[t] = dist({x, static_cast<std::size_t>(spec.d)}) > epsilon ? 1 : 0;
    });
    std::uint64_t count = 0;
    for (auto e : exceed) count += e;
    RateRow& row = rep.rows[ni];
    row.n = n;
    row.p_hat = static_cast<double>(count) / static_cast<double>(trials);
    row.n_times_p = static_cast<double>(n) * row.p_hat;
    row.se = stats::binomial_se(row.p_hat, trials);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Upper-quantile trajectory of max_{k<=n} Y_k / b(n) for a sequence with a
// uniform sub-Gaussian bound sigma; the trajectory should settle below sigma.

struct Lemma1Row {
  std::uint64_t n = 0;
  double q90 = 0.0;
};

struct Lemma1Report {
  double sigma_bound = 0.0;
  std::vector<Lemma1Row> rows;
  bool pass = false;  // q90 at the largest n <= 1.1 * sigma_bound
};

inline Lemma1Report lemma1_probe(const SequenceSpec& spec, double sigma_bound,
                                 std::span<const std::uint64_t> n_grid,
                                 std::uint64_t paths, std::uint64_t seed,
                                 unsigned threads = 0) {
  spec.validate();
  if (spec.d != 1) throw std::invalid_argument("lemma1_probe: d must be 1");
  if (!(sigma_bound > 0.0)) throw std::invalid_argument("lemma1_probe: sigma must be > 0");
  if (paths < 1) throw std::invalid_argument("lemma1_probe: paths must be >= 1");
  if (n_grid.empty()) throw std::invalid_argument("lemma1_probe: empty n grid");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (!(static_cast<double>(n_grid[i]) > std::numbers::e)) {
      throw std::invalid_argument("lemma1_probe: n must exceed e");
    }
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
      throw std::invalid_argument("lemma1_probe: n grid must be strictly increasing");
    }
  }

  std::vector<std::vector<double>> ratios(paths,
                                          std::vector<double>(n_grid.size(), 0.0));
  parallel_for_index(paths, threads, [&](std::uint64_t p) {
    PathState state = spawn(spec, derive_path_seed(seed, p));
    double running_max = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n_grid.size(); ++j) {
      while (state.count() < n_grid[j]) {
        running_max = std::max(running_max, state.next1());
      }
      ratios[p][j] = running_max / eval_b(static_cast<double>(n_grid[j]));
    }
  });

  Lemma1Report rep;
  rep.sigma_bound = sigma_bound;
  std::vector<double> column(paths);
  for (std::size_t j = 0; j < n_grid.size(); ++j) {
    for (std::uint64_t p = 0; p < paths; ++p) column[p] = ratios[p][j];
    std::sort(column.begin(), column.end());
    rep.rows.push_back({n_grid[j], stats::quantile_sorted(column, 0.90)});
  }
  rep.pass = rep.rows.back().q90 <= 1.1 * sigma_bound;
  return rep;
}

}  // namespace hulls
