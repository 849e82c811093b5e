#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

#include "hypbayes/fields.hpp"
#include "hypbayes/scalar_fv.hpp"

namespace hypbayes {

inline constexpr double kGamma = 1.4;

/// Conserved Euler state (rho, rho v, E).
struct EulerState {
  double rho = 1.0;
  double mom = 0.0;
  double ener = 1.0 / (kGamma - 1.0);
};

struct Primitive {
  double rho = 1.0;
  double v = 0.0;
  double p = 1.0;
};

using EulerFlux = std::array<double, 3>;

/// Throws PositivityError if rho <= 0 or p <= 0.
Primitive primitives(const EulerState& s);
EulerState conserved(const Primitive& w);
EulerFlux physical_flux(const EulerState& s);
double sound_speed(const Primitive& w);

/// HLLC flux with Davis wave-speed estimates.
EulerFlux hllc_flux(const EulerState& left, const EulerState& right);

class EulerField {
 public:
  EulerField(MeshPtr mesh, std::vector<EulerState> states);

  const Mesh1D& mesh() const noexcept { return *mesh_; }
  const MeshPtr& mesh_ptr() const noexcept { return mesh_; }
  const std::vector<EulerState>& states() const noexcept { return states_; }
  std::size_t size() const noexcept { return states_.size(); }
  const EulerState& operator[](std::size_t j) const noexcept { return states_[j]; }

  /// Component k (0 = rho, 1 = mom, 2 = ener) as a scalar CellField.
  CellField component(int k) const;

 private:
  MeshPtr mesh_;
  std::vector<EulerState> states_;
};

/// Riemann datum: `left` for x < x0, `right` for x >= x0, exact cell averages.
EulerField project_riemann(const Primitive& left, const Primitive& right, double x0,
                           const MeshPtr& mesh);

using EulerObserver = std::function<void(const EulerField&, double)>;

/// First-order HLLC scheme with forward Euler in time, dt = cfl dx / max(|v|+c),
/// last step clipped to T. Throws PositivityError naming the failing cell and time.
EulerField euler_solve(const EulerField& datum, double T, double cfl,
                       Boundary boundary = Boundary::outflow, const EulerObserver& observer = {});

/// CSV with header `x_mid,rho,v,p`.
void write_csv(std::ostream& os, const EulerField& field);

}  // namespace hypbayes
