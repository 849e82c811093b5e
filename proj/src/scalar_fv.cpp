#include "hypbayes/scalar_fv.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hypbayes/error.hpp"
#include "hypbayes/format.hpp"

namespace hypbayes {

ScalarFlux::ScalarFlux(Fn eval, Fn deriv, LipFn lipschitz_on, Interval monotone_domain)
    : eval_(std::move(eval)),
      deriv_(std::move(deriv)),
      lip_(std::move(lipschitz_on)),
      domain_(monotone_domain) {
  if (!eval_ || !deriv_ || !lip_) throw ConfigError("ScalarFlux: all callables must be set");
}

ScalarFlux ScalarFlux::burgers() {
  return ScalarFlux([](double w) { return 0.5 * w * w; }, [](double w) { return w; },
                    [](double lo, double hi) { return std::max(std::abs(lo), std::abs(hi)); },
                    Interval{0.0, INFINITY});
}

ScalarFlux ScalarFlux::linear(double a) {
  Interval domain = a > 0.0 ? Interval{} : Interval{0.0, 0.0};
  return ScalarFlux([a](double w) { return a * w; }, [a](double) { return a; },
                    [a](double, double) { return std::abs(a); }, domain);
}

void SchemeConfig::validate() const {
  if (!(cfl_number > 0.0 && cfl_number <= 1.0)) {
    throw ConfigError("SchemeConfig: cfl_number must lie in (0, 1], got " + fmt_g17(cfl_number));
  }
  if (fixed_lambda && !(*fixed_lambda > 0.0)) {
    throw ConfigError("SchemeConfig: fixed_lambda must be positive");
  }
}

double rusanov_flux(double wl, double wr, const ScalarFlux& flux) {
  const double s = flux.lipschitz_on(std::min(wl, wr), std::max(wl, wr));
  return 0.5 * (flux(wl) + flux(wr)) - 0.5 * s * (wr - wl);
}

double lax_friedrichs_flux(double wl, double wr, const ScalarFlux& flux, double dx_over_dt) {
  return 0.5 * (flux(wl) + flux(wr)) - 0.5 * dx_over_dt * (wr - wl);
}

namespace {

double field_speed(const CellField& field, const ScalarFlux& flux) {
  const auto [lo, hi] = std::minmax_element(field.values().begin(), field.values().end());
  return flux.lipschitz_on(*lo, *hi);
}

}  // namespace

double stable_dt(const CellField& field, const ScalarFlux& flux, const SchemeConfig& config) {
  const double speed = std::max(field_speed(field, flux), kSpeedFloor);
  return config.cfl_number * field.mesh().min_width() / speed;
}

CellField step(const CellField& field, const ScalarFlux& flux, double dt,
               const SchemeConfig& config) {
  const double admissible = stable_dt(field, flux, config);
  if (!(dt > 0.0) || dt > admissible * (1.0 + 1e-12)) {
    throw CflViolation("step: dt = " + fmt_g17(dt) + " violates the CFL condition; admissible dt <= " +
                           fmt_g17(admissible),
                       admissible);
  }
  const auto& w = field.values();
  const std::size_t n = w.size();
  const Mesh1D& mesh = field.mesh();

  const double left_ghost = config.boundary == Boundary::periodic ? w[n - 1] : w[0];
  const double right_ghost = config.boundary == Boundary::periodic ? w[0] : w[n - 1];
  auto state = [&](std::ptrdiff_t j) {
    if (j < 0) return left_ghost;
    if (j >= static_cast<std::ptrdiff_t>(n)) return right_ghost;
    return w[static_cast<std::size_t>(j)];
  };

  // Lax-Friedrichs uses the coarsest 1/lambda so every cell stays monotone.
  const double dx_over_dt = mesh.min_width() / dt;
  std::vector<double> iface(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double wl = state(static_cast<std::ptrdiff_t>(k) - 1);
    const double wr = state(static_cast<std::ptrdiff_t>(k));
    iface[k] = config.numerical_flux == NumericalFlux::rusanov
                   ? rusanov_flux(wl, wr, flux)
                   : lax_friedrichs_flux(wl, wr, flux, dx_over_dt);
  }
  if (config.boundary == Boundary::periodic) iface[n] = iface[0];

  std::vector<double> next(n);
  for (std::size_t j = 0; j < n; ++j) {
    next[j] = w[j] - dt / mesh.width(j) * (iface[j + 1] - iface[j]);
  }
  return field.with_values(std::move(next));
}

CellField solve(const CellField& datum, const ScalarFlux& flux, double T,
                const SchemeConfig& config, const StepObserver& observer) {
  config.validate();
  if (!(T >= 0.0)) throw ConfigError("solve: T must be nonnegative, got " + fmt_g17(T));
  CellField w = datum;
  double t = 0.0;
  while (t < T) {
    double dt = config.fixed_lambda ? *config.fixed_lambda * datum.mesh().max_width()
                                    : stable_dt(w, flux, config);
    const bool last = dt >= T - t;
    if (last) dt = T - t;
    if (config.fixed_lambda) {
      // Fixed lambda is checked against lambda * max|f'| <= 1, not cfl_number.
      SchemeConfig unit = config;
      unit.cfl_number = 1.0;
      w = step(w, flux, dt, unit);
    } else {
      w = step(w, flux, dt, config);
    }
    t = last ? T : t + dt;
    if (observer) observer(w, t);
  }
  return w;
}

double exact_burgers_riemann(double ul, double ur, double sigma0, double x, double t) {
  if (t <= 0.0) return x < sigma0 ? ul : ur;
  if (ul > ur) {
    const double shock = sigma0 + 0.5 * (ul + ur) * t;
    return x < shock ? ul : ur;
  }
  const double xi = (x - sigma0) / t;
  if (xi <= ul) return ul;
  if (xi >= ur) return ur;
  return xi;
}

namespace {

/// Integral over [a, b] of |c - (alpha + beta x)|.
double abs_linear_integral(double c, double alpha, double beta, double a, double b) {
  const double ga = c - alpha - beta * a;
  const double gb = c - alpha - beta * b;
  if ((ga >= 0.0 && gb >= 0.0) || (ga <= 0.0 && gb <= 0.0)) {
    return 0.5 * std::abs(ga + gb) * (b - a);
  }
  const double root = a + (b - a) * ga / (ga - gb);
  return 0.5 * std::abs(ga) * (root - a) + 0.5 * std::abs(gb) * (b - root);
}

struct LinearPiece {
  double a, b, alpha, beta;
};

}  // namespace

double riemann_l1_error(const CellField& field, double ul, double ur, double sigma0, double t) {
  const double inf = INFINITY;
  std::vector<LinearPiece> pieces;
  if (t <= 0.0 || ul > ur) {
    const double jump = t <= 0.0 ? sigma0 : sigma0 + 0.5 * (ul + ur) * t;
    pieces = {{-inf, jump, ul, 0.0}, {jump, inf, ur, 0.0}};
  } else {
    const double fan_lo = sigma0 + ul * t;
    const double fan_hi = sigma0 + ur * t;
    pieces = {{-inf, fan_lo, ul, 0.0}, {fan_lo, fan_hi, -sigma0 / t, 1.0 / t}, {fan_hi, inf, ur, 0.0}};
  }
  const Mesh1D& mesh = field.mesh();
  double err = 0.0;
  for (std::size_t j = 0; j < field.size(); ++j) {
    for (const auto& p : pieces) {
      const double a = std::max(mesh.left(j), p.a);
      const double b = std::min(mesh.right(j), p.b);
      if (b > a) err += abs_linear_integral(field[j], p.alpha, p.beta, a, b);
    }
  }
  return err;
}

}  // namespace hypbayes
