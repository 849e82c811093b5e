#include "hypbayes/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "hypbayes/error.hpp"
#include "hypbayes/experiments.hpp"
#include "hypbayes/format.hpp"
#include "hypbayes/problems.hpp"

namespace hypbayes::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config_path;
  std::string preset_name;
  std::optional<std::uint64_t> seed;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::string out = "out";
  bool timing = false;
  bool median = false;
};

void add_common(CLI::App* app, Common& c) {
  auto* cfg = app->add_option("--config", c.config_path, "JSON config file");
  app->add_option("--preset", c.preset_name, "Named preset")->check(CLI::IsMember({"exp1", "exp2", "exp3"}))->excludes(cfg);
  app->add_option("--seed", c.seed, "Base chain seed (overrides the config)");
  app->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--out", c.out, "Output directory");
}

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg = !c.config_path.empty()  ? load_config(c.config_path)
                         : !c.preset_name.empty() ? preset(parse_experiment_id(c.preset_name))
                                                  : preset(ExperimentId::exp1);
  if (c.seed) cfg.chain_seed = *c.seed;
  cfg.validate();
  return cfg;
}

RunOptions options(const Common& c, const fs::path& out) {
  RunOptions o;
  o.workers = c.workers;
  o.out = out;
  o.record_runtime = c.timing;
  o.use_median = c.median;
  return o;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write '" + path.string() + "'");
  os << text;
}

template <class Field>
std::string csv_of(const Field& f) {
  std::ostringstream os;
  write_csv(os, f);
  return os.str();
}

void do_solve(const Common& c, const std::vector<double>& params, std::optional<std::size_t> cells_opt) {
  const ExperimentConfig cfg = load(c);
  Vector u = cfg.ground_truth;
  if (!params.empty()) {
    if (params.size() != cfg.param_dim()) {
      throw ConfigError("--params: expected " + std::to_string(cfg.param_dim()) + " values");
    }
    u = Eigen::Map<const Vector>(params.data(), static_cast<Eigen::Index>(params.size()));
  }
  const std::size_t cells = cells_opt.value_or(cfg.cells);
  const fs::path out(c.out);
  fs::create_directories(out);
  const auto windows = make_windows(cfg.window_centers, cfg.window_half_width, cfg.window_weight);
  nlohmann::json info = {{"experiment", to_string(cfg.experiment)}, {"cells", cells}, {"T", cfg.T}};
  info["params"] = params.empty() ? std::vector<double>(u.data(), u.data() + u.size()) : params;
  Vector obs;
  switch (cfg.experiment) {
    case ExperimentId::exp1: {
      const CellField datum = project(exp1_datum(u), make_mesh(Grid1D(cfg.x_min, cfg.x_max, cells)));
      const CellField sol = solve_exp1(u, cfg, cells);
      write_file(out / "datum.csv", csv_of(datum));
      write_file(out / "solution.csv", csv_of(sol));
      obs = observe(sol, windows);
      break;
    }
    case ExperimentId::exp2: {
      const Exp2Setup s = exp2_setup(u, cfg, cells);
      double worst = 0.0;
      const CellField sol = solve_disc(s.datum, s.grid, s.spec, cfg.T, cfg.lambda, [&](const CellField& w, double) {
        worst = std::max(worst, interface_residual(w, s.grid, s.spec));
      });
      write_file(out / "datum.csv", csv_of(s.datum));
      write_file(out / "solution.csv", csv_of(sol));
      info["max_interface_residual"] = worst;
      obs = observe(sol, windows);
      break;
    }
    case ExperimentId::exp3: {
      const Exp3Datum d = exp3_datum(u);
      const EulerField datum =
          project_riemann(d.left, d.right, d.x0, make_mesh(Grid1D(cfg.x_min, cfg.x_max, cells)));
      const EulerField sol = solve_exp3(u, cfg, cells);
      write_file(out / "datum.csv", csv_of(datum));
      write_file(out / "solution.csv", csv_of(sol));
      obs = observe(sol, windows);
      break;
    }
  }
  info["observations"] = std::vector<double>(obs.data(), obs.data() + obs.size());
  write_file(out / "solve.json", info.dump(2) + "\n");
  std::cout << "wrote " << (out / "solution.csv").string() << "\n";
}

void print_study(const StudyResult& r, const ExperimentConfig& cfg) {
  for (std::size_t k = 0; k < r.slopes.size(); ++k) {
    std::printf("%s: slope %s, before saturation %s (saturation index %zu of %zu)\n", cfg.param_names[k].c_str(),
                r.slopes[k] ? fmt_g17(*r.slopes[k]).c_str() : "n/a",
                r.slopes_before_saturation[k] ? fmt_g17(*r.slopes_before_saturation[k]).c_str() : "n/a",
                r.saturation_index[k], r.points.size());
  }
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Bayesian inverse problems for 1-D conservation laws"};
  app.require_subcommand(1);

  Common common;
  std::vector<double> params;
  std::optional<std::size_t> solve_cells;
  auto* solve_cmd = app.add_subcommand("solve", "Solve the forward problem at a parameter vector");
  add_common(solve_cmd, common);
  solve_cmd->add_option("--params", params, "Parameter vector (default: ground truth)")->delimiter(',');
  solve_cmd->add_option("--cells", solve_cells, "Number of cells (default: config)");

  auto* run_cmd = app.add_subcommand("run", "Run an experiment");
  add_common(run_cmd, common);
  run_cmd->add_flag("--timing", common.timing, "Record wall time in summary.json");

  auto* chain_cmd = app.add_subcommand("study-chain", "Chain-length convergence study");
  add_common(chain_cmd, common);
  chain_cmd->add_flag("--median", common.median, "Use the median of per-chain errors");

  auto* dx_cmd = app.add_subcommand("study-dx", "Grid convergence study of the posterior");
  add_common(dx_cmd, common);
  dx_cmd->add_flag("--median", common.median, "Use the median of per-chain errors");

  auto* stab_cmd = app.add_subcommand("study-stability", "Posterior stability under data perturbations");
  add_common(stab_cmd, common);

  std::vector<std::size_t> rate_cells{16, 32, 64, 128, 256, 512};
  double rate_cfl = 0.5;
  auto* rate_cmd = app.add_subcommand("rate-check", "L1 convergence of the Burgers scheme on Riemann data");
  rate_cmd->add_option("--cells", rate_cells, "Cell counts")->delimiter(',');
  rate_cmd->add_option("--cfl", rate_cfl, "CFL number")->check(CLI::Range(0.0, 1.0));
  rate_cmd->add_option("--out", common.out, "Output directory");
  rate_cmd->add_option("--workers", common.workers, "Accepted for uniformity; unused");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*solve_cmd) {
      do_solve(common, params, solve_cells);
    } else if (*run_cmd) {
      const ExperimentConfig cfg = load(common);
      const ExperimentResult r = run_experiment(cfg, options(common, common.out));
      std::printf("posterior mean:");
      for (Eigen::Index i = 0; i < r.summary.mean.size(); ++i) std::printf(" %s", fmt_g17(r.summary.mean[i]).c_str());
      std::printf("\nacceptance rate: %s\n", fmt_g17(r.acceptance_rate).c_str());
    } else if (*chain_cmd) {
      const ExperimentConfig cfg = load(common);
      const StudyResult r = study_chain_length(cfg, options(common, common.out));
      write_study(r, cfg, common.out, "study_chain");
      print_study(r, cfg);
    } else if (*dx_cmd) {
      const ExperimentConfig cfg = load(common);
      const StudyResult r = study_dx(cfg, options(common, common.out));
      write_study(r, cfg, common.out, "study_dx");
      print_study(r, cfg);
    } else if (*stab_cmd) {
      const ExperimentConfig cfg = load(common);
      const auto rows = study_posterior_stability(cfg, options(common, common.out));
      write_stability(rows, cfg, common.out);
      for (const auto& row : rows) {
        std::printf("component %zu delta %s:", row.component, fmt_g17(row.delta).c_str());
        for (double q : row.ratio) std::printf(" %s", fmt_g17(q).c_str());
        std::printf("\n");
      }
    } else if (*rate_cmd) {
      SchemeConfig scheme;
      scheme.cfl_number = rate_cfl;
      std::vector<RateCheckResult> results;
      for (auto which : {RiemannCase::shock, RiemannCase::rarefaction, RiemannCase::constant}) {
        results.push_back(fv_rate_check(which, rate_cells, scheme));
        std::printf("%s: order %s\n", to_string(which),
                    results.back().order ? fmt_g17(*results.back().order).c_str() : "n/a");
      }
      write_rate_checks(results, common.out);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}

}  // namespace hypbayes::cli
