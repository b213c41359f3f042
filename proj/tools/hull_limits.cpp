// hull-limits: simulation CLI for normalized convex hulls of Gaussian
// sequences. Subcommands: converge, levy, rate, lemma1, polytope-demo,
// grid-info. CSV outputs are deterministic for a fixed seed, independent of
// the worker count (--threads or HULL_LIMITS_THREADS).

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hulls/config.hpp"
#include "hulls/csv.hpp"
#include "hulls/experiments.hpp"
#include "hulls/manifest.hpp"
#include "hulls/svg.hpp"
#include "hulls/version.hpp"

namespace fs = std::filesystem;
using namespace hulls;

namespace {

std::vector<double> parse_real_list(const std::string& key, const std::string& s) {
  return hulls::detail::parse_reals(key, s);
}

std::vector<std::uint64_t> parse_uint_list(const std::string& key, const std::string& s) {
  std::vector<std::uint64_t> out;
  for (double v : parse_real_list(key, s)) {
    if (v < 0 || v != std::floor(v)) {
      throw ConfigError(key, "entries must be nonnegative integers");
    }
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

void write_curve_csv(const fs::path& path, const ConvergenceCurve& curve) {
  CsvWriter csv(path);
  csv.row({"n", "path_id", "distance", "q10", "q50", "q90"});
  for (std::size_t j = 0; j < curve.checkpoints.size(); ++j) {
    for (std::size_t p = 0; p < curve.per_path.size(); ++p) {
      csv.row({curve.checkpoints[j], std::to_string(p), curve.per_path[p][j], "", "", ""});
    }
  }
  for (std::size_t j = 0; j < curve.checkpoints.size(); ++j) {
    csv.row({curve.checkpoints[j], "AGG", "", curve.q10[j], curve.q50[j], curve.q90[j]});
  }
}

Json kv_echo(const ParsedConfig& parsed) {
  Json j = Json::object();
  for (const auto& [k, v] : parsed.kv) j[k] = v;
  return j;
}

struct CommonOut {
  std::string out_dir;
  unsigned threads = 0;

  fs::path prepare() const {
    fs::path dir(out_dir);
    fs::create_directories(dir);
    return dir;
  }
};

int cmd_converge(const std::string& config_path, const CommonOut& common,
                 std::int64_t seed_override, std::int64_t paths_override, bool svg) {
  ParsedConfig parsed = load_config_file(config_path);
  if (seed_override >= 0) parsed.kv["seed"] = std::to_string(seed_override);
  if (paths_override >= 0) parsed.kv["paths"] = std::to_string(paths_override);
  const ExperimentConfig cfg = build_experiment_config(parsed);

  const fs::path dir = common.prepare();
  ManifestBuilder manifest("converge", cfg.master_seed);
  manifest.json()["config_file"] = config_path;
  manifest.json()["config_text"] = parsed.raw_text;
  manifest.json()["config_effective"] = kv_echo(parsed);
  manifest.json()["config_canonical"] = cfg.canonical_string();
  manifest.json()["config_hash"] = hex64(cfg.hash());
  manifest.json()["grid"] = {{"d", cfg.spec.d},
                             {"M", cfg.spec.d == 1 ? 2 : cfg.grid_M},
                             {"kind", to_string(make_direction_grid(
                                          cfg.spec.d, cfg.spec.d == 1 ? 2 : cfg.grid_M)
                                          ->kind())}};
  manifest.set_path_seeds(cfg.paths);

  const ConvergenceCurve curve = run_convergence(cfg, common.threads);
  write_curve_csv(dir / "curve.csv", curve);
  manifest.json()["outputs"] = {"curve.csv"};
  if (svg) {
    svg::write_convergence_svg(dir / "plot.svg", curve,
                               "d_H(W_n / g(n), target), " + cfg.spec.describe());
    manifest.json()["outputs"].push_back("plot.svg");
  }
  manifest.write(dir / "manifest.json");

  std::cout << "converge: " << cfg.paths << " paths, " << curve.checkpoints.size()
            << " checkpoints; final q50 = " << csv_num(curve.q50.back()) << "\n"
            << "wrote " << (dir / "curve.csv").string() << "\n";
  return 0;
}

int cmd_levy(std::uint64_t n, std::uint64_t trials, const std::string& xgrid,
             std::uint64_t seed, const CommonOut& common) {
  const std::vector<double> xs =
      xgrid.empty() ? default_levy_x_grid(n) : parse_real_list("xgrid", xgrid);
  const LevyReport rep = levy_check(n, xs, trials, seed, common.threads);

  const fs::path dir = common.prepare();
  CsvWriter csv(dir / "levy.csv");
  csv.row({"x", "lhs", "rhs", "se_combined", "bound", "pass", "gauss_tail"});
  for (const auto& row : rep.rows) {
    csv.row({row.x, row.lhs, row.rhs, row.se_combined, row.bound, row.pass, row.gauss_tail});
  }
  csv.close();

  ManifestBuilder manifest("levy", seed);
  manifest.json()["args"] = {{"n", n}, {"trials", trials}};
  manifest.json()["x_grid"] = xs;
  manifest.json()["all_pass"] = rep.all_pass;
  manifest.json()["outputs"] = {"levy.csv"};
  manifest.write(dir / "manifest.json");

  std::cout << "levy: n=" << n << ", trials=" << trials
            << ", all pass = " << (rep.all_pass ? "true" : "false") << "\n"
            << "wrote " << (dir / "levy.csv").string() << "\n";
  return 0;
}

int cmd_rate(const std::string& config_path, double eps, const std::string& ngrid,
             std::uint64_t trials, std::uint64_t seed, int grid_m,
             const CommonOut& common) {
  SequenceSpec spec = config_path.empty()
                          ? SequenceSpec::iid1d(1.0)
                          : build_sequence_spec(load_config_file(config_path));
  const std::vector<std::uint64_t> ns = parse_uint_list("n-grid", ngrid);
  const RateReport rep = rate_probe(spec, eps, ns, trials, seed, grid_m, common.threads);

  const fs::path dir = common.prepare();
  CsvWriter csv(dir / "rate.csv");
  csv.row({"n", "p_hat", "n_times_p", "se"});
  for (const auto& row : rep.rows) csv.row({row.n, row.p_hat, row.n_times_p, row.se});
  csv.close();

  ManifestBuilder manifest("rate", seed);
  manifest.json()["args"] = {{"epsilon", eps},
                             {"trials", trials},
                             {"grid_m", grid_m},
                             {"spec", spec.describe()},
                             {"n_grid", ns}};
  manifest.json()["note"] = "exploratory probe: n*p_hat trend only, no pass/fail";
  manifest.json()["outputs"] = {"rate.csv"};
  manifest.write(dir / "manifest.json");

  std::cout << "rate: wrote " << (dir / "rate.csv").string() << "\n";
  return 0;
}

int cmd_lemma1(const std::string& config_path, double sigma, const std::string& ngrid,
               std::uint64_t paths, std::uint64_t seed, const CommonOut& common) {
  SequenceSpec spec = config_path.empty()
                          ? SequenceSpec::iid1d(1.0)
                          : build_sequence_spec(load_config_file(config_path));
  const std::vector<std::uint64_t> ns = parse_uint_list("n-grid", ngrid);
  const Lemma1Report rep = lemma1_probe(spec, sigma, ns, paths, seed, common.threads);

  const fs::path dir = common.prepare();
  CsvWriter csv(dir / "lemma1.csv");
  csv.row({"n", "q90_ratio"});
  for (const auto& row : rep.rows) csv.row({row.n, row.q90});
  csv.close();

  ManifestBuilder manifest("lemma1", seed);
  manifest.json()["args"] = {{"sigma_bound", sigma},
                             {"paths", paths},
                             {"spec", spec.describe()},
                             {"n_grid", ns}};
  manifest.json()["pass"] = rep.pass;
  manifest.json()["outputs"] = {"lemma1.csv"};
  manifest.set_path_seeds(paths);
  manifest.write(dir / "manifest.json");

  std::cout << "lemma1: q90 at n=" << rep.rows.back().n << " is "
            << csv_num(rep.rows.back().q90) << " (bound " << csv_num(1.1 * sigma)
            << "), pass = " << (rep.pass ? "true" : "false") << "\n"
            << "wrote " << (dir / "lemma1.csv").string() << "\n";
  return 0;
}

int cmd_polytope_demo(const std::string& a_list, const std::string& p_list,
                      std::uint64_t n, std::uint64_t seed, int grid_m,
                      const CommonOut& common) {
  const auto vectors = hulls::detail::parse_vector_list("a", a_list);
  std::vector<double> probs;
  if (p_list.empty()) {
    probs.assign(vectors.size(), 1.0 / static_cast<double>(vectors.size()));
  } else {
    probs = parse_real_list("p", p_list);
  }
  SequenceSpec spec = SequenceSpec::polytope_lines(vectors, probs);
  if (spec.d != 2) throw std::invalid_argument("polytope-demo: direction vectors must be 2-D");
  const Polytope target = Polytope::central_symmetric(vectors);
  if (n < 4) throw std::invalid_argument("polytope-demo: n must be >= 4 (b normalizer domain)");

  // geometric checkpoint ladder ending exactly at n
  std::vector<std::uint64_t> checkpoints;
  for (std::uint64_t cp = 100; cp < n; cp *= 2) checkpoints.push_back(cp);
  checkpoints.push_back(n);

  const Normalizer norm = Normalizer::b();
  const GridPtr grid = make_direction_grid(2, grid_m);
  const SupportProfile target_prof = target_profile(Target(target), grid);

  PathState state = spawn(spec, derive_path_seed(seed, 0));
  HullTracker tracker(grid, /*keep_hull2d=*/true);

  ConvergenceCurve curve;
  curve.checkpoints = checkpoints;
  curve.per_path.assign(1, std::vector<double>(checkpoints.size(), 0.0));
  HullSnapshot final_snap;
  for (std::size_t j = 0; j < checkpoints.size(); ++j) {
    while (tracker.count() < checkpoints[j]) tracker.update(state.next());
    final_snap = tracker.snapshot(norm, static_cast<double>(checkpoints[j]));
    curve.per_path[0][j] = hausdorff_profiles(final_snap.profile, target_prof);
  }
  curve.q10 = curve.q50 = curve.q90 = curve.per_path[0];

  const fs::path dir = common.prepare();
  write_curve_csv(dir / "curve.csv", curve);

  CsvWriter verts_csv(dir / "hull_vertices.csv");
  verts_csv.row({"x", "y"});
  for (const auto& v : *final_snap.vertices) verts_csv.row({v.x, v.y});
  verts_csv.close();

  // target polygon in CCW order for drawing
  std::vector<Point2> target_poly;
  for (const auto& v : target.vertices) target_poly.push_back(Point2{v[0], v[1]});
  target_poly = convex_hull_2d(std::move(target_poly));
  svg::write_overlay_svg(dir / "overlay.svg", *final_snap.vertices, target_poly,
                         "W_n / b(n) vs target polytope, n=" + std::to_string(n));
  svg::write_convergence_svg(dir / "plot.svg", curve, "d_H(W_n / b(n), V)");

  ManifestBuilder manifest("polytope-demo", seed);
  manifest.json()["args"] = {{"spec", spec.describe()},
                             {"n", n},
                             {"grid_m", grid_m},
                             {"target", target_describe(Target(target))}};
  manifest.json()["final_distance"] = curve.per_path[0].back();
  manifest.json()["hull_vertex_count"] = final_snap.vertices->size();
  manifest.json()["outputs"] = {"curve.csv", "hull_vertices.csv", "overlay.svg", "plot.svg"};
  manifest.set_path_seeds(1);
  manifest.write(dir / "manifest.json");

  std::cout << "polytope-demo: final distance = " << csv_num(curve.per_path[0].back())
            << " with " << final_snap.vertices->size() << " hull vertices\n"
            << "wrote " << (dir / "curve.csv").string() << "\n";
  return 0;
}

int cmd_grid_info(int d, int m, const std::string& out_dir) {
  const GridPtr grid = make_direction_grid(d, m);
  std::cout << "grid: kind=" << to_string(grid->kind()) << " d=" << grid->dim()
            << " M=" << grid->size() << "\n"
            << "support under-estimation bound for a body inside radius R: R*"
            << csv_num(grid->approximation_bound(1.0)) << "  (= R*(1-cos(pi/M)))\n";
  if (!out_dir.empty()) {
    fs::path dir(out_dir);
    fs::create_directories(dir);
    CsvWriter csv(dir / "grid.csv");
    std::string line = "i";
    for (int j = 0; j < d; ++j) line += ",c" + std::to_string(j);
    csv.row({line});
    for (std::size_t i = 0; i < grid->size(); ++i) {
      std::string row = std::to_string(i);
      for (double v : grid->coords(i)) row += "," + csv_num(v);
      csv.row({row});
    }
    csv.close();
    std::cout << "wrote " << (dir / "grid.csv").string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hull-limits: normalized convex hulls of Gaussian sequences"};
  app.set_version_flag("--version", HULLS_VERSION_STRING);
  app.require_subcommand(1);

  int exit_code = 0;
  auto guard = [&exit_code](auto&& fn) {
    try {
      exit_code = fn();
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      exit_code = 1;
    }
  };

  // converge
  {
    auto* sub = app.add_subcommand("converge", "run a convergence experiment from a config file");
    auto config = std::make_shared<std::string>();
    auto common = std::make_shared<CommonOut>();
    auto seed = std::make_shared<std::int64_t>(-1);
    auto paths = std::make_shared<std::int64_t>(-1);
    auto svg_flag = std::make_shared<bool>(false);
    sub->add_option("--config", *config, "experiment config file")->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", common->out_dir, "output directory")->required();
    sub->add_option("--seed", *seed, "override the config's master seed");
    sub->add_option("--paths", *paths, "override the config's path count");
    sub->add_option("--threads", common->threads, "worker threads (default: HULL_LIMITS_THREADS or all cores)");
    sub->add_flag("--svg", *svg_flag, "also emit plot.svg");
    sub->callback([=, &exit_code] {
      guard([&] { return cmd_converge(*config, *common, *seed, *paths, *svg_flag); });
    });
  }

  // levy
  {
    auto* sub = app.add_subcommand("levy", "empirical maximal-inequality check for a normal walk");
    auto n = std::make_shared<std::uint64_t>(1000);
    auto trials = std::make_shared<std::uint64_t>(100000);
    auto xgrid = std::make_shared<std::string>();
    auto seed = std::make_shared<std::uint64_t>(0);
    auto common = std::make_shared<CommonOut>();
    sub->add_option("--n", *n, "walk length");
    sub->add_option("--trials", *trials, "Monte Carlo trials (minimum 10000)");
    sub->add_option("--xgrid", *xgrid, "comma-separated thresholds (default: 10 points in [0, 3*sqrt(n)])");
    sub->add_option("--seed", *seed, "master seed");
    sub->add_option("--out", common->out_dir, "output directory")->required();
    sub->add_option("--threads", common->threads, "worker threads");
    sub->callback([=, &exit_code] {
      guard([&] { return cmd_levy(*n, *trials, *xgrid, *seed, *common); });
    });
  }

  // rate
  {
    auto* sub = app.add_subcommand("rate", "single-point tail probe (exploratory)");
    auto config = std::make_shared<std::string>();
    auto eps = std::make_shared<double>(0.5);
    auto ngrid = std::make_shared<std::string>("100,1000,10000");
    auto trials = std::make_shared<std::uint64_t>(100000);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto grid_m = std::make_shared<int>(512);
    auto common = std::make_shared<CommonOut>();
    sub->add_option("--config", *config, "sequence spec config (default: iid d=1)")
        ->check(CLI::ExistingFile);
    sub->add_option("--eps", *eps, "distance threshold epsilon");
    sub->add_option("--n-grid", *ngrid, "comma-separated n values");
    sub->add_option("--trials", *trials, "Monte Carlo trials per n");
    sub->add_option("--seed", *seed, "master seed");
    sub->add_option("--grid-m", *grid_m, "direction grid size for d=2");
    sub->add_option("--out", common->out_dir, "output directory")->required();
    sub->add_option("--threads", common->threads, "worker threads");
    sub->callback([=, &exit_code] {
      guard([&] { return cmd_rate(*config, *eps, *ngrid, *trials, *seed, *grid_m, *common); });
    });
  }

  // lemma1
  {
    auto* sub = app.add_subcommand("lemma1", "upper-quantile trajectory of max Y_k / b(n)");
    auto config = std::make_shared<std::string>();
    auto sigma = std::make_shared<double>(1.0);
    auto ngrid = std::make_shared<std::string>("1000,10000,100000,1000000");
    auto paths = std::make_shared<std::uint64_t>(200);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto common = std::make_shared<CommonOut>();
    sub->add_option("--config", *config, "sequence spec config (default: iid d=1)")
        ->check(CLI::ExistingFile);
    sub->add_option("--sigma", *sigma, "uniform sub-Gaussian bound");
    sub->add_option("--n-grid", *ngrid, "comma-separated n values");
    sub->add_option("--paths", *paths, "number of paths");
    sub->add_option("--seed", *seed, "master seed");
    sub->add_option("--out", common->out_dir, "output directory")->required();
    sub->add_option("--threads", common->threads, "worker threads");
    sub->callback([=, &exit_code] {
      guard([&] { return cmd_lemma1(*config, *sigma, *ngrid, *paths, *seed, *common); });
    });
  }

  // polytope-demo
  {
    auto* sub = app.add_subcommand("polytope-demo",
                                   "hull of line-concentrated Gaussians vs its target polytope");
    auto a = std::make_shared<std::string>();
    auto p = std::make_shared<std::string>();
    auto n = std::make_shared<std::uint64_t>(1000000);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto grid_m = std::make_shared<int>(512);
    auto common = std::make_shared<CommonOut>();
    sub->add_option("--a", *a, "direction vectors, e.g. \"1,0;0,1\"")->required();
    sub->add_option("--p", *p, "class probabilities (default: uniform)");
    sub->add_option("--n", *n, "number of points");
    sub->add_option("--seed", *seed, "master seed");
    sub->add_option("--grid-m", *grid_m, "direction grid size");
    sub->add_option("--out", common->out_dir, "output directory")->required();
    sub->add_option("--threads", common->threads, "worker threads");
    sub->callback([=, &exit_code] {
      guard([&] { return cmd_polytope_demo(*a, *p, *n, *seed, *grid_m, *common); });
    });
  }

  // grid-info
  {
    auto* sub = app.add_subcommand("grid-info", "describe a direction grid");
    auto d = std::make_shared<int>(2);
    auto m = std::make_shared<int>(512);
    auto out = std::make_shared<std::string>();
    sub->add_option("--d", *d, "dimension (1, 2 or 3)");
    sub->add_option("--m", *m, "grid size");
    sub->add_option("--out", *out, "optional output directory for grid.csv");
    sub->callback([=, &exit_code] {
      guard([&] { return cmd_grid_info(*d, *m, *out); });
    });
  }

  CLI11_PARSE(app, argc, argv);
  return exit_code;
}
