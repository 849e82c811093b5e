#pragma once

#include <cstddef>

#include "hypbayes/bayes.hpp"
#include "hypbayes/config.hpp"
#include "hypbayes/discflux_fv.hpp"
#include "hypbayes/euler_fv.hpp"

namespace hypbayes {

/// Transport a w left of x = 0, Burgers right of it. alpha and c_f come from
/// the datum range; ForwardError when a <= 0 or the datum is not positive.
DiscFluxSpec exp2_flux_spec(double transport_speed, double datum_min, double datum_max);

struct Exp2Setup {
  DiscFluxSpec spec;
  AlignedGrid grid;
  CellField datum;
};

Exp2Setup exp2_setup(const Vector& u, const ExperimentConfig& config, std::size_t cells);

/// Forward solutions at time T on `cells` cells (interface-aligned for exp2).
CellField solve_exp1(const Vector& u, const ExperimentConfig& config, std::size_t cells);
CellField solve_exp2(const Vector& u, const ExperimentConfig& config, std::size_t cells,
                     const StepObserver& observer = {});
EulerField solve_exp3(const Vector& u, const ExperimentConfig& config, std::size_t cells);

/// u -> window observations of the solution at T.
ForwardMap make_forward(const ExperimentConfig& config, std::size_t cells);

/// Data from the ground truth at config.cells with config.data_seed.
Vector synthesize(const ExperimentConfig& config);

PosteriorModel make_posterior(const ExperimentConfig& config, std::size_t cells, Vector data);

}  // namespace hypbayes
