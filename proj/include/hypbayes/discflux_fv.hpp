#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "hypbayes/fields.hpp"
#include "hypbayes/scalar_fv.hpp"

namespace hypbayes {

/// Piecewise-constant coefficient with one monotone flux per region.
///
/// Region i is (xi_i, xi_{i+1}) with xi_0 = -inf and xi_{N+1} = +inf. Every
/// region flux must satisfy f'(w) >= alpha on the working range and f(0) = 0;
/// c_f bounds f' from above there.
struct DiscFluxSpec {
  std::vector<double> discontinuities;
  std::vector<ScalarFlux> region_fluxes;
  double alpha = 1.0;
  double c_f = 1.0;

  std::size_t region_count() const noexcept { return region_fluxes.size(); }

  /// Structural checks plus a sampled monotonicity check of every region
  /// flux over `working_range` (257 samples). Throws ConfigError.
  void validate(const Interval& working_range) const;
};

/// Working range implied by the L-infinity bound: +/-(|w|_inf C_f/alpha + 1).
Interval default_working_range(const DiscFluxSpec& spec, double datum_linf);

/// Grid whose cell edges include every flux discontinuity.
struct AlignedGrid {
  MeshPtr mesh;
  /// interface_cells[i-1] = P_i, the first cell of region i (i >= 1).
  std::vector<std::size_t> interface_cells;
  /// Largest cell width over all regions.
  double dx = 0.0;

  /// Region index of cell j.
  std::size_t region_of(std::size_t j) const;
};

AlignedGrid align_grid(const DiscFluxSpec& spec, double x_lo, double x_hi, double target_dx);

/// Solves f(w) = p inside `bracket` by safeguarded Newton/bisection.
/// Result satisfies |f(w) - p| <= 1e-12 max(1, |p|). Throws
/// FluxInversionError if p is not between f(bracket.lo) and f(bracket.hi).
double invert_flux(const ScalarFlux& flux, double p, Interval bracket);

/// Inverse of a region flux: the bracket starts from the alpha bound
/// |w| <= |p|/alpha and grows geometrically inside the flux's monotone domain.
double invert_region_flux(const ScalarFlux& flux, double p, double alpha);

/// One step of the interface-aligned upwind scheme with the discrete
/// Rankine-Hugoniot update in each interface cell.
CellField step_disc(const CellField& field, const AlignedGrid& grid, const DiscFluxSpec& spec,
                    double lambda);

CellField solve_disc(const CellField& datum, const AlignedGrid& grid, const DiscFluxSpec& spec,
                     double T, double lambda, const StepObserver& observer = {});

/// max_i |f^(i)(w_{P_i}) - f^(i-1)(w_{P_i - 1})| / max(1, |f^(i-1)(w_{P_i - 1})|).
double interface_residual(const CellField& field, const AlignedGrid& grid,
                          const DiscFluxSpec& spec);

}  // namespace hypbayes
