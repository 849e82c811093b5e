#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace hypbayes {

/// Uniform 1-D grid. Cell j covers [x_min + j*dx, x_min + (j+1)*dx).
struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t n_cells = 1;

  Grid1D() = default;
  Grid1D(double lo, double hi, std::size_t n);

  double dx() const noexcept { return (x_max - x_min) / static_cast<double>(n_cells); }
  double midpoint(std::size_t j) const noexcept {
    return x_min + (static_cast<double>(j) + 0.5) * dx();
  }
};

/// Cell partition of an interval given by its edges. Uniform grids and the
/// piecewise-uniform interface-aligned grids both live here.
class Mesh1D {
 public:
  explicit Mesh1D(const Grid1D& grid);
  explicit Mesh1D(std::vector<double> edges);

  /// Concatenates uniform blocks; block k must start where block k-1 ends.
  static Mesh1D concatenate(std::span<const Grid1D> blocks);

  std::size_t n_cells() const noexcept { return edges_.size() - 1; }
  double x_min() const noexcept { return edges_.front(); }
  double x_max() const noexcept { return edges_.back(); }
  double left(std::size_t j) const noexcept { return edges_[j]; }
  double right(std::size_t j) const noexcept { return edges_[j + 1]; }
  double width(std::size_t j) const noexcept { return edges_[j + 1] - edges_[j]; }
  double midpoint(std::size_t j) const noexcept { return 0.5 * (edges_[j] + edges_[j + 1]); }
  double max_width() const noexcept { return max_width_; }
  double min_width() const noexcept { return min_width_; }
  const std::vector<double>& edges() const noexcept { return edges_; }

  /// Index of the half-open cell containing x; clamps to the boundary cells.
  std::size_t locate(double x) const noexcept;

  bool operator==(const Mesh1D& other) const noexcept { return edges_ == other.edges_; }

 private:
  void finish();

  std::vector<double> edges_;
  double max_width_ = 0.0;
  double min_width_ = 0.0;
};

using MeshPtr = std::shared_ptr<const Mesh1D>;

MeshPtr make_mesh(const Grid1D& grid);

/// Piecewise-constant grid function w_j.
class CellField {
 public:
  CellField(MeshPtr mesh, std::vector<double> values);

  const Mesh1D& mesh() const noexcept { return *mesh_; }
  const MeshPtr& mesh_ptr() const noexcept { return mesh_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t j) const noexcept { return values_[j]; }

  /// Field on the same mesh with new values.
  CellField with_values(std::vector<double> values) const {
    return CellField(mesh_, std::move(values));
  }

 private:
  MeshPtr mesh_;
  std::vector<double> values_;
};

/// Step function: values[k] on [breakpoints[k-1], breakpoints[k]), with the
/// outer pieces extending to infinity. values.size() == breakpoints.size()+1.
struct StepFunction {
  std::vector<double> breakpoints;
  std::vector<double> values;

  double operator()(double x) const;
};

using PointwiseFunction = std::function<double(double)>;

/// Cell averages by composite midpoint quadrature with `quadrature_points`
/// nodes per cell. Throws NonFiniteValue on a non-finite datum sample.
CellField project(const PointwiseFunction& datum, const MeshPtr& mesh,
                  std::size_t quadrature_points = 8);

/// Exact cell averages of a step function.
CellField project(const StepFunction& datum, const MeshPtr& mesh);

struct Norms {
  double l1 = 0.0;
  double linf = 0.0;
  double tv = 0.0;
};

Norms norms(const CellField& field);

/// Discrete L1 distance sum |a_j - b_j| dx_j. Throws GridMismatch.
double l1_distance(const CellField& a, const CellField& b);

/// CSV with header `x_mid,value`.
void write_csv(std::ostream& os, const CellField& field);

}  // namespace hypbayes
