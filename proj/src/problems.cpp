#include "hypbayes/problems.hpp"

#include <algorithm>

#include "hypbayes/error.hpp"
#include "hypbayes/format.hpp"

namespace hypbayes {

DiscFluxSpec exp2_flux_spec(double transport_speed, double datum_min, double datum_max) {
  if (!(transport_speed > 0.0)) {
    throw ForwardError("exp2: transport speed a = " + fmt_g17(transport_speed) + " must be positive");
  }
  if (!(datum_min > 0.0)) {
    throw ForwardError("exp2: datum minimum " + fmt_g17(datum_min) + " must be positive");
  }
  DiscFluxSpec spec;
  spec.discontinuities = {0.0};
  spec.region_fluxes = {ScalarFlux::linear(transport_speed), ScalarFlux::burgers()};
  spec.alpha = std::min(transport_speed, datum_min);
  spec.c_f = std::max(transport_speed, datum_max);
  return spec;
}

Exp2Setup exp2_setup(const Vector& u, const ExperimentConfig& config, std::size_t cells) {
  const Exp2Datum d = exp2_datum(u);
  const auto [lo, hi] = std::minmax_element(d.datum.values.begin(), d.datum.values.end());
  DiscFluxSpec spec = exp2_flux_spec(d.transport_speed, *lo, *hi);
  AlignedGrid grid = align_grid(spec, config.x_min, config.x_max,
                                (config.x_max - config.x_min) / static_cast<double>(cells));
  CellField datum = project(d.datum, grid.mesh);
  return {std::move(spec), std::move(grid), std::move(datum)};
}

CellField solve_exp1(const Vector& u, const ExperimentConfig& config, std::size_t cells) {
  const CellField datum = project(exp1_datum(u), make_mesh(Grid1D(config.x_min, config.x_max, cells)));
  SchemeConfig scheme;
  scheme.cfl_number = config.cfl;
  scheme.numerical_flux = config.numerical_flux;
  return solve(datum, ScalarFlux::burgers(), config.T, scheme);
}

CellField solve_exp2(const Vector& u, const ExperimentConfig& config, std::size_t cells,
                     const StepObserver& observer) {
  const Exp2Setup s = exp2_setup(u, config, cells);
  return solve_disc(s.datum, s.grid, s.spec, config.T, config.lambda, observer);
}

EulerField solve_exp3(const Vector& u, const ExperimentConfig& config, std::size_t cells) {
  const Exp3Datum d = exp3_datum(u);
  const EulerField datum =
      project_riemann(d.left, d.right, d.x0, make_mesh(Grid1D(config.x_min, config.x_max, cells)));
  return euler_solve(datum, config.T, config.cfl);
}

ForwardMap make_forward(const ExperimentConfig& config, std::size_t cells) {
  const auto windows = make_windows(config.window_centers, config.window_half_width, config.window_weight);
  switch (config.experiment) {
    case ExperimentId::exp1:
      return [config, cells, windows](const Vector& u) { return observe(solve_exp1(u, config, cells), windows); };
    case ExperimentId::exp2:
      return [config, cells, windows](const Vector& u) { return observe(solve_exp2(u, config, cells), windows); };
    case ExperimentId::exp3:
      return [config, cells, windows](const Vector& u) { return observe(solve_exp3(u, config, cells), windows); };
  }
  throw ConfigError("make_forward: unknown experiment");
}

Vector synthesize(const ExperimentConfig& config) {
  const NoiseModel noise = NoiseModel::isotropic(config.observation_dim(), config.noise_gamma);
  return synthesize_data(make_forward(config, config.cells), noise, config.ground_truth, config.data_seed);
}

PosteriorModel make_posterior(const ExperimentConfig& config, std::size_t cells, Vector data) {
  return PosteriorModel(GaussianPrior::isotropic(config.prior_mean, config.prior_phi),
                        NoiseModel::isotropic(config.observation_dim(), config.noise_gamma),
                        make_forward(config, cells), std::move(data));
}

}  // namespace hypbayes
