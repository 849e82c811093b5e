#pragma once

#include <functional>
#include <limits>
#include <optional>

#include "hypbayes/fields.hpp"

namespace hypbayes {

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

/// Scalar flux f with derivative and a local Lipschitz bound.
///
/// `monotone_domain` is the state interval on which f is strictly increasing;
/// the discontinuous-flux scheme inverts f only there.
class ScalarFlux {
 public:
  using Fn = std::function<double(double)>;
  using LipFn = std::function<double(double, double)>;

  ScalarFlux(Fn eval, Fn deriv, LipFn lipschitz_on, Interval monotone_domain = {});

  /// f(w) = w^2/2, inverted on its positive branch.
  static ScalarFlux burgers();
  /// f(w) = a w.
  static ScalarFlux linear(double a);

  double operator()(double w) const { return eval_(w); }
  double deriv(double w) const { return deriv_(w); }
  /// Upper bound on |f'| over [lo, hi].
  double lipschitz_on(double lo, double hi) const { return lip_(lo, hi); }
  const Interval& monotone_domain() const noexcept { return domain_; }

 private:
  Fn eval_;
  Fn deriv_;
  LipFn lip_;
  Interval domain_;
};

enum class Boundary { outflow, periodic };
enum class NumericalFlux { rusanov, lax_friedrichs };

struct SchemeConfig {
  double cfl_number = 0.5;
  Boundary boundary = Boundary::outflow;
  NumericalFlux numerical_flux = NumericalFlux::rusanov;
  /// When set, dt = fixed_lambda * dx instead of the adaptive CFL step.
  std::optional<double> fixed_lambda;

  void validate() const;
};

/// Zero-speed states still get a finite step: dt = cfl * dx / kSpeedFloor.
inline constexpr double kSpeedFloor = 1e-12;

double rusanov_flux(double wl, double wr, const ScalarFlux& flux);
/// Global Lax-Friedrichs flux; `dx_over_dt` is 1/lambda.
double lax_friedrichs_flux(double wl, double wr, const ScalarFlux& flux, double dx_over_dt);

double stable_dt(const CellField& field, const ScalarFlux& flux, const SchemeConfig& config);

/// One explicit conservative update. Throws CflViolation if dt exceeds
/// stable_dt(field, flux, config).
CellField step(const CellField& field, const ScalarFlux& flux, double dt,
               const SchemeConfig& config);

/// Called after every step with the new field and the time it represents.
using StepObserver = std::function<void(const CellField&, double)>;

/// Numerical solution operator S_T; the last step is clipped to land on T.
CellField solve(const CellField& datum, const ScalarFlux& flux, double T,
                const SchemeConfig& config, const StepObserver& observer = {});

/// Entropy solution of the Burgers Riemann problem with jump at sigma0.
double exact_burgers_riemann(double ul, double ur, double sigma0, double x, double t);

/// Exact L1 distance between a cell field and the Burgers Riemann solution
/// at time t (piecewise-linear integrand integrated in closed form).
double riemann_l1_error(const CellField& field, double ul, double ur, double sigma0, double t);

}  // namespace hypbayes
