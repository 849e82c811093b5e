#include "hypbayes/discflux_fv.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hypbayes/error.hpp"
#include "hypbayes/format.hpp"

namespace hypbayes {

void DiscFluxSpec::validate(const Interval& working_range) const {
  if (region_fluxes.size() != discontinuities.size() + 1) {
    throw ConfigError("DiscFluxSpec: " + std::to_string(region_fluxes.size()) + " region fluxes for " +
                      std::to_string(discontinuities.size()) + " discontinuities");
  }
  for (std::size_t i = 1; i < discontinuities.size(); ++i) {
    if (!(discontinuities[i] > discontinuities[i - 1])) {
      throw ConfigError("DiscFluxSpec: discontinuities must be strictly increasing");
    }
  }
  if (!(alpha > 0.0) || !(c_f >= alpha)) {
    throw ConfigError("DiscFluxSpec: need 0 < alpha <= c_f, got alpha = " + fmt_g17(alpha) +
                      ", c_f = " + fmt_g17(c_f));
  }
  if (!(working_range.hi >= working_range.lo) || !std::isfinite(working_range.lo) ||
      !std::isfinite(working_range.hi)) {
    throw ConfigError("DiscFluxSpec: working range must be a finite interval");
  }
  constexpr int kSamples = 257;
  for (std::size_t r = 0; r < region_fluxes.size(); ++r) {
    const ScalarFlux& f = region_fluxes[r];
    if (std::abs(f(0.0)) > 1e-14) {
      throw ConfigError("DiscFluxSpec: region " + std::to_string(r) + " flux has f(0) = " +
                        fmt_g17(f(0.0)) + ", expected 0");
    }
    for (int k = 0; k < kSamples; ++k) {
      const double w = working_range.lo + (working_range.hi - working_range.lo) * k / (kSamples - 1);
      const double d = f.deriv(w);
      if (d < alpha * (1.0 - 1e-12) || d > c_f * (1.0 + 1e-12)) {
        throw ConfigError("DiscFluxSpec: region " + std::to_string(r) + " flux has f'(" + fmt_g17(w) +
                          ") = " + fmt_g17(d) + " outside [alpha, c_f] = [" + fmt_g17(alpha) + ", " +
                          fmt_g17(c_f) + "]");
      }
    }
  }
}

Interval default_working_range(const DiscFluxSpec& spec, double datum_linf) {
  const double r = datum_linf * spec.c_f / spec.alpha + 1.0;
  return {-r, r};
}

std::size_t AlignedGrid::region_of(std::size_t j) const {
  return static_cast<std::size_t>(
      std::upper_bound(interface_cells.begin(), interface_cells.end(), j) - interface_cells.begin());
}

AlignedGrid align_grid(const DiscFluxSpec& spec, double x_lo, double x_hi, double target_dx) {
  if (!(target_dx > 0.0)) throw ConfigError("align_grid: target_dx must be positive");
  if (!(x_hi > x_lo)) throw ConfigError("align_grid: empty domain");
  std::vector<double> cuts{x_lo};
  for (double xi : spec.discontinuities) {
    if (!(xi > x_lo && xi < x_hi)) {
      throw ConfigError("align_grid: discontinuity " + fmt_g17(xi) + " is not strictly inside (" +
                        fmt_g17(x_lo) + ", " + fmt_g17(x_hi) + ")");
    }
    if (!(xi > cuts.back())) throw ConfigError("align_grid: discontinuities must be strictly increasing");
    cuts.push_back(xi);
  }
  cuts.push_back(x_hi);

  std::vector<Grid1D> blocks;
  AlignedGrid out;
  std::size_t cells = 0;
  for (std::size_t r = 0; r + 1 < cuts.size(); ++r) {
    const double len = cuts[r + 1] - cuts[r];
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(len / target_dx * (1.0 - 1e-12))));
    blocks.emplace_back(cuts[r], cuts[r + 1], n);
    if (r > 0) out.interface_cells.push_back(cells);
    cells += n;
    out.dx = std::max(out.dx, blocks.back().dx());
  }
  out.mesh = std::make_shared<const Mesh1D>(Mesh1D::concatenate(blocks));
  return out;
}

double invert_flux(const ScalarFlux& flux, double p, Interval bracket) {
  const double tol = 1e-12 * std::max(1.0, std::abs(p));
  double lo = bracket.lo;
  double hi = bracket.hi;
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    throw ConfigError("invert_flux: bracket must be a finite interval");
  }
  const double flo = flux(lo);
  const double fhi = flux(hi);
  if (!(p >= flo - tol && p <= fhi + tol)) {
    throw FluxInversionError("invert_flux: target " + fmt_g17(p) + " outside achieved range [" +
                                 fmt_g17(flo) + ", " + fmt_g17(fhi) + "] on [" + fmt_g17(lo) + ", " +
                                 fmt_g17(hi) + "]",
                             flo, fhi);
  }
  if (std::abs(flo - p) <= tol) return lo;
  if (std::abs(fhi - p) <= tol) return hi;

  double w = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double r = flux(w) - p;
    if (std::abs(r) <= tol) return w;
    if (r < 0.0) {
      lo = w;
    } else {
      hi = w;
    }
    const double d = flux.deriv(w);
    double next = d > 0.0 ? w - r / d : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == w) break;
    w = next;
  }
  if (std::abs(flux(w) - p) <= tol) return w;
  throw FluxInversionError("invert_flux: no convergence for target " + fmt_g17(p) + " (residual " +
                               fmt_g17(flux(w) - p) + ")",
                           flux(bracket.lo), flux(bracket.hi));
}

double invert_region_flux(const ScalarFlux& flux, double p, double alpha) {
  const Interval& dom = flux.monotone_domain();
  double r = std::max(1.0, std::abs(p) / alpha);
  Interval bracket;
  for (int it = 0; it < 64; ++it, r *= 2.0) {
    bracket = {std::max(dom.lo, -r), std::min(dom.hi, r)};
    if (flux(bracket.lo) <= p && flux(bracket.hi) >= p) break;
  }
  return invert_flux(flux, p, bracket);
}

CellField step_disc(const CellField& field, const AlignedGrid& grid, const DiscFluxSpec& spec,
                    double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("step_disc: lambda must be positive");
  if (field.mesh_ptr() != grid.mesh && !(field.mesh() == *grid.mesh)) {
    throw GridMismatch("step_disc: field is not defined on the aligned grid");
  }
  if (grid.interface_cells.size() + 1 != spec.region_count()) {
    throw ConfigError("step_disc: grid has " + std::to_string(grid.interface_cells.size()) +
                      " interfaces but the flux spec has " + std::to_string(spec.region_count()) +
                      " regions");
  }
  const auto& w = field.values();
  const Mesh1D& mesh = field.mesh();
  const std::size_t n = w.size();
  const double dt = lambda * grid.dx;

  // CFL: lambda_j * f'(w) <= 1 with lambda_j = dt / dx_j on the current states.
  double worst = 0.0;
  std::size_t region = 0;
  for (std::size_t j = 0; j < n; ++j) {
    while (region < grid.interface_cells.size() && j >= grid.interface_cells[region]) ++region;
    const ScalarFlux& f = spec.region_fluxes[region];
    const Interval& dom = f.monotone_domain();
    if (w[j] < dom.lo || w[j] > dom.hi) {
      throw ForwardError("step_disc: state " + fmt_g17(w[j]) + " in cell " + std::to_string(j) +
                         " leaves the monotone domain of region " + std::to_string(region));
    }
    worst = std::max(worst, dt / mesh.width(j) * f.deriv(w[j]));
  }
  if (worst > 1.0 + 1e-12) {
    throw CflViolation("step_disc: lambda = " + fmt_g17(lambda) + " violates lambda max f' <= 1; "
                           "admissible lambda <= " + fmt_g17(lambda / worst),
                       lambda / worst);
  }

  std::vector<double> next(n);
  region = 0;
  for (std::size_t j = 0; j < n; ++j) {
    while (region < grid.interface_cells.size() && j >= grid.interface_cells[region]) ++region;
    if (j == 0) {
      next[j] = w[j];  // outflow ghost copy: zero flux difference
      continue;
    }
    const ScalarFlux& f = spec.region_fluxes[region];
    next[j] = w[j] - dt / mesh.width(j) * (f(w[j]) - f(w[j - 1]));
  }
  for (std::size_t i = 0; i < grid.interface_cells.size(); ++i) {
    const std::size_t p = grid.interface_cells[i];
    const double incoming = spec.region_fluxes[i](next[p - 1]);
    next[p] = invert_region_flux(spec.region_fluxes[i + 1], incoming, spec.alpha);
  }
  return field.with_values(std::move(next));
}

CellField solve_disc(const CellField& datum, const AlignedGrid& grid, const DiscFluxSpec& spec,
                     double T, double lambda, const StepObserver& observer) {
  if (!(T >= 0.0)) throw ConfigError("solve_disc: T must be nonnegative");
  if (!(lambda > 0.0)) throw ConfigError("solve_disc: lambda must be positive");
  const auto [lo, hi] = std::minmax_element(datum.values().begin(), datum.values().end());
  spec.validate(Interval{*lo, *hi});

  CellField w = datum;
  double t = 0.0;
  const double dt = lambda * grid.dx;
  while (t < T) {
    const bool last = dt >= T - t;
    const double lam = last ? (T - t) / grid.dx : lambda;
    w = step_disc(w, grid, spec, lam);
    t = last ? T : t + dt;
    if (observer) observer(w, t);
  }
  return w;
}

double interface_residual(const CellField& field, const AlignedGrid& grid,
                          const DiscFluxSpec& spec) {
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.interface_cells.size(); ++i) {
    const std::size_t p = grid.interface_cells[i];
    const double left = spec.region_fluxes[i](field[p - 1]);
    const double right = spec.region_fluxes[i + 1](field[p]);
    worst = std::max(worst, std::abs(right - left) / std::max(1.0, std::abs(left)));
  }
  return worst;
}

}  // namespace hypbayes
