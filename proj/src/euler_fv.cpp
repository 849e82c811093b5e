#include "hypbayes/euler_fv.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "hypbayes/error.hpp"
#include "hypbayes/format.hpp"

namespace hypbayes {

Primitive primitives(const EulerState& s) {
  if (!(s.rho > 0.0)) throw PositivityError("primitives: nonpositive density " + fmt_g17(s.rho));
  const double v = s.mom / s.rho;
  const double p = (kGamma - 1.0) * (s.ener - 0.5 * s.rho * v * v);
  if (!(p > 0.0)) throw PositivityError("primitives: nonpositive pressure " + fmt_g17(p));
  return {s.rho, v, p};
}

EulerState conserved(const Primitive& w) {
  if (!(w.rho > 0.0) || !(w.p > 0.0)) {
    throw PositivityError("conserved: need rho > 0 and p > 0, got rho = " + fmt_g17(w.rho) +
                          ", p = " + fmt_g17(w.p));
  }
  return {w.rho, w.rho * w.v, w.p / (kGamma - 1.0) + 0.5 * w.rho * w.v * w.v};
}

double sound_speed(const Primitive& w) { return std::sqrt(kGamma * w.p / w.rho); }

EulerFlux physical_flux(const EulerState& s) {
  const Primitive w = primitives(s);
  return {s.mom, s.mom * w.v + w.p, (s.ener + w.p) * w.v};
}

namespace {

EulerState star_state(const EulerState& s, const Primitive& w, double sk, double s_star) {
  const double factor = w.rho * (sk - w.v) / (sk - s_star);
  return {factor, factor * s_star,
          factor * (s.ener / w.rho + (s_star - w.v) * (s_star + w.p / (w.rho * (sk - w.v))))};
}

}  // namespace

EulerFlux hllc_flux(const EulerState& left, const EulerState& right) {
  const Primitive wl = primitives(left);
  const Primitive wr = primitives(right);
  const double cl = sound_speed(wl);
  const double cr = sound_speed(wr);
  const double sl = std::min(wl.v - cl, wr.v - cr);
  const double sr = std::max(wl.v + cl, wr.v + cr);

  if (sl >= 0.0) return physical_flux(left);
  if (sr <= 0.0) return physical_flux(right);

  const double s_star = (wr.p - wl.p + wl.rho * wl.v * (sl - wl.v) - wr.rho * wr.v * (sr - wr.v)) /
                        (wl.rho * (sl - wl.v) - wr.rho * (sr - wr.v));
  if (s_star >= 0.0) {
    const EulerFlux fl = physical_flux(left);
    const EulerState us = star_state(left, wl, sl, s_star);
    return {fl[0] + sl * (us.rho - left.rho), fl[1] + sl * (us.mom - left.mom),
            fl[2] + sl * (us.ener - left.ener)};
  }
  const EulerFlux fr = physical_flux(right);
  const EulerState us = star_state(right, wr, sr, s_star);
  return {fr[0] + sr * (us.rho - right.rho), fr[1] + sr * (us.mom - right.mom),
          fr[2] + sr * (us.ener - right.ener)};
}

EulerField::EulerField(MeshPtr mesh, std::vector<EulerState> states)
    : mesh_(std::move(mesh)), states_(std::move(states)) {
  if (!mesh_) throw ConfigError("EulerField: null mesh");
  if (states_.size() != mesh_->n_cells()) throw ConfigError("EulerField: state count != cell count");
  for (std::size_t j = 0; j < states_.size(); ++j) {
    try {
      primitives(states_[j]);
    } catch (const PositivityError& e) {
      throw PositivityError(std::string(e.what()) + " in cell " + std::to_string(j));
    }
  }
}

CellField EulerField::component(int k) const {
  std::vector<double> v(states_.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] = k == 0 ? states_[j].rho : (k == 1 ? states_[j].mom : states_[j].ener);
  }
  return CellField(mesh_, std::move(v));
}

EulerField project_riemann(const Primitive& left, const Primitive& right, double x0,
                           const MeshPtr& mesh) {
  const EulerState ul = conserved(left);
  const EulerState ur = conserved(right);
  std::vector<EulerState> states(mesh->n_cells());
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (mesh->right(j) <= x0) {
      states[j] = ul;
    } else if (mesh->left(j) >= x0) {
      states[j] = ur;
    } else {
      const double theta = (x0 - mesh->left(j)) / mesh->width(j);
      states[j] = {theta * ul.rho + (1 - theta) * ur.rho, theta * ul.mom + (1 - theta) * ur.mom,
                   theta * ul.ener + (1 - theta) * ur.ener};
    }
  }
  return EulerField(mesh, std::move(states));
}

EulerField euler_solve(const EulerField& datum, double T, double cfl, Boundary boundary,
                       const EulerObserver& observer) {
  if (!(T >= 0.0)) throw ConfigError("euler_solve: T must be nonnegative");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("euler_solve: cfl must lie in (0, 1]");
  const Mesh1D& mesh = datum.mesh();
  const std::size_t n = datum.size();
  std::vector<EulerState> u = datum.states();
  std::vector<EulerState> next(n);
  std::vector<EulerFlux> iface(n + 1);
  double t = 0.0;

  while (t < T) {
    double max_speed = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      Primitive w;
      try {
        w = primitives(u[j]);
      } catch (const PositivityError& e) {
        throw PositivityError(std::string(e.what()) + " in cell " + std::to_string(j) +
                              " (x_mid = " + fmt_g17(mesh.midpoint(j)) + ") at t = " + fmt_g17(t));
      }
      max_speed = std::max(max_speed, std::abs(w.v) + sound_speed(w));
    }
    double dt = cfl * mesh.min_width() / max_speed;
    const bool last = dt >= T - t;
    if (last) dt = T - t;

    for (std::size_t k = 0; k <= n; ++k) {
      const EulerState& l = k == 0 ? (boundary == Boundary::periodic ? u[n - 1] : u[0]) : u[k - 1];
      const EulerState& r = k == n ? (boundary == Boundary::periodic ? u[0] : u[n - 1]) : u[k];
      iface[k] = hllc_flux(l, r);
    }
    if (boundary == Boundary::periodic) iface[n] = iface[0];
    for (std::size_t j = 0; j < n; ++j) {
      const double lam = dt / mesh.width(j);
      next[j] = {u[j].rho - lam * (iface[j + 1][0] - iface[j][0]),
                 u[j].mom - lam * (iface[j + 1][1] - iface[j][1]),
                 u[j].ener - lam * (iface[j + 1][2] - iface[j][2])};
    }
    u.swap(next);
    t = last ? T : t + dt;
    if (observer) {
      observer(EulerField(datum.mesh_ptr(), u), t);
    }
  }
  try {
    return EulerField(datum.mesh_ptr(), std::move(u));
  } catch (const PositivityError& e) {
    throw PositivityError(std::string(e.what()) + " at t = " + fmt_g17(t));
  }
}

void write_csv(std::ostream& os, const EulerField& field) {
  os << "x_mid,rho,v,p\n";
  for (std::size_t j = 0; j < field.size(); ++j) {
    const Primitive w = primitives(field[j]);
    os << fmt_g17(field.mesh().midpoint(j)) << ',' << fmt_g17(w.rho) << ',' << fmt_g17(w.v) << ','
       << fmt_g17(w.p) << '\n';
  }
}

}  // namespace hypbayes
