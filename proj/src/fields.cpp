#include "hypbayes/fields.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "hypbayes/error.hpp"
#include "hypbayes/format.hpp"

namespace hypbayes {

Grid1D::Grid1D(double lo, double hi, std::size_t n) : x_min(lo), x_max(hi), n_cells(n) {
  if (n == 0) throw ConfigError("Grid1D: n_cells must be positive");
  if (!(hi > lo)) {
    throw ConfigError("Grid1D: x_max (" + fmt_g17(hi) + ") must exceed x_min (" + fmt_g17(lo) + ")");
  }
}

Mesh1D::Mesh1D(const Grid1D& grid) {
  if (grid.n_cells == 0 || !(grid.x_max > grid.x_min)) throw ConfigError("Mesh1D: invalid grid");
  edges_.resize(grid.n_cells + 1);
  const double dx = grid.dx();
  for (std::size_t j = 0; j < grid.n_cells; ++j) edges_[j] = grid.x_min + static_cast<double>(j) * dx;
  edges_.back() = grid.x_max;
  finish();
}

Mesh1D::Mesh1D(std::vector<double> edges) : edges_(std::move(edges)) {
  if (edges_.size() < 2) throw ConfigError("Mesh1D: need at least two edges");
  finish();
}

void Mesh1D::finish() {
  max_width_ = 0.0;
  min_width_ = INFINITY;
  for (std::size_t j = 0; j + 1 < edges_.size(); ++j) {
    const double w = edges_[j + 1] - edges_[j];
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw ConfigError("Mesh1D: edges must be finite and strictly increasing (cell " +
                        std::to_string(j) + ")");
    }
    max_width_ = std::max(max_width_, w);
    min_width_ = std::min(min_width_, w);
  }
}

Mesh1D Mesh1D::concatenate(std::span<const Grid1D> blocks) {
  if (blocks.empty()) throw ConfigError("Mesh1D::concatenate: no blocks");
  std::vector<double> edges{blocks.front().x_min};
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Grid1D& g = blocks[b];
    if (g.x_min != edges.back()) {
      throw ConfigError("Mesh1D::concatenate: block " + std::to_string(b) + " starts at " +
                        fmt_g17(g.x_min) + " but previous block ends at " + fmt_g17(edges.back()));
    }
    const double dx = g.dx();
    for (std::size_t j = 1; j < g.n_cells; ++j) edges.push_back(g.x_min + static_cast<double>(j) * dx);
    edges.push_back(g.x_max);
  }
  return Mesh1D(std::move(edges));
}

std::size_t Mesh1D::locate(double x) const noexcept {
  if (x < edges_.front()) return 0;
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  const auto idx = static_cast<std::size_t>(it - edges_.begin());
  return std::min(idx == 0 ? 0 : idx - 1, n_cells() - 1);
}

MeshPtr make_mesh(const Grid1D& grid) { return std::make_shared<const Mesh1D>(grid); }

CellField::CellField(MeshPtr mesh, std::vector<double> values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
  if (!mesh_) throw ConfigError("CellField: null mesh");
  if (values_.size() != mesh_->n_cells()) {
    throw ConfigError("CellField: " + std::to_string(values_.size()) + " values for " +
                      std::to_string(mesh_->n_cells()) + " cells");
  }
  for (std::size_t j = 0; j < values_.size(); ++j) {
    if (!std::isfinite(values_[j])) {
      throw NonFiniteValue("CellField: non-finite value " + fmt_g17(values_[j]) + " in cell " +
                           std::to_string(j) + " (x_mid = " + fmt_g17(mesh_->midpoint(j)) + ")");
    }
  }
}

double StepFunction::operator()(double x) const {
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  return values[static_cast<std::size_t>(it - breakpoints.begin())];
}

CellField project(const PointwiseFunction& datum, const MeshPtr& mesh,
                  std::size_t quadrature_points) {
  if (quadrature_points == 0) throw ConfigError("project: quadrature_points must be >= 1");
  const auto q = static_cast<double>(quadrature_points);
  std::vector<double> values(mesh->n_cells());
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double h = mesh->width(j) / q;
    double sum = 0.0;
    for (std::size_t k = 0; k < quadrature_points; ++k) {
      const double x = mesh->left(j) + (static_cast<double>(k) + 0.5) * h;
      const double v = datum(x);
      if (!std::isfinite(v)) {
        throw NonFiniteValue("project: datum returned " + fmt_g17(v) + " at x = " + fmt_g17(x) +
                             " (cell " + std::to_string(j) + ")");
      }
      sum += v;
    }
    values[j] = sum / q;
  }
  return CellField(mesh, std::move(values));
}

CellField project(const StepFunction& datum, const MeshPtr& mesh) {
  if (datum.values.size() != datum.breakpoints.size() + 1) {
    throw ConfigError("project: step function needs one more value than breakpoints");
  }
  if (!std::is_sorted(datum.breakpoints.begin(), datum.breakpoints.end())) {
    throw ConfigError("project: step function breakpoints must be sorted");
  }
  for (double v : datum.values) {
    if (!std::isfinite(v)) throw NonFiniteValue("project: non-finite step value " + fmt_g17(v));
  }
  std::vector<double> values(mesh->n_cells());
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double a = mesh->left(j);
    const double b = mesh->right(j);
    // Pieces overlapping [a, b).
    const auto first = static_cast<std::size_t>(
        std::upper_bound(datum.breakpoints.begin(), datum.breakpoints.end(), a) -
        datum.breakpoints.begin());
    std::size_t k = first;
    double lo = a;
    double integral = 0.0;
    while (lo < b) {
      const double hi = k < datum.breakpoints.size() ? std::min(b, datum.breakpoints[k]) : b;
      integral += datum.values[k] * (hi - lo);
      lo = hi;
      ++k;
    }
    // A single piece is copied, not divided, so constants stay bitwise exact.
    values[j] = (k == first + 1) ? datum.values[first] : integral / (b - a);
  }
  return CellField(mesh, std::move(values));
}

Norms norms(const CellField& field) {
  Norms n;
  const auto& w = field.values();
  for (std::size_t j = 0; j < w.size(); ++j) {
    n.l1 += std::abs(w[j]) * field.mesh().width(j);
    n.linf = std::max(n.linf, std::abs(w[j]));
    if (j + 1 < w.size()) n.tv += std::abs(w[j + 1] - w[j]);
  }
  return n;
}

double l1_distance(const CellField& a, const CellField& b) {
  if (a.mesh_ptr() != b.mesh_ptr() && !(a.mesh() == b.mesh())) {
    throw GridMismatch("l1_distance: meshes differ ([" + fmt_g17(a.mesh().x_min()) + ", " +
                       fmt_g17(a.mesh().x_max()) + "] with " + std::to_string(a.size()) +
                       " cells vs [" + fmt_g17(b.mesh().x_min()) + ", " +
                       fmt_g17(b.mesh().x_max()) + "] with " + std::to_string(b.size()) +
                       " cells)");
  }
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d += std::abs(a[j] - b[j]) * a.mesh().width(j);
  return d;
}

void write_csv(std::ostream& os, const CellField& field) {
  os << "x_mid,value\n";
  for (std::size_t j = 0; j < field.size(); ++j) {
    os << fmt_g17(field.mesh().midpoint(j)) << ',' << fmt_g17(field[j]) << '\n';
  }
}

}  // namespace hypbayes
