#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace varfrac {

/// Uniform mesh a = t_0 < t_1 < ... < t_N = b.
struct Mesh {
  double a = 0.0;
  double b = 1.0;
  std::size_t points = 0;

  Mesh() = default;
  /// Throws DomainError unless a < b (both finite) and points >= 5.
  Mesh(double a, double b, std::size_t points);

  std::size_t intervals() const noexcept { return points - 1; }
  double step() const noexcept { return (b - a) / static_cast<double>(intervals()); }
  /// Node i; the last node is exactly b.
  double node(std::size_t i) const noexcept {
    return i == intervals() ? b : a + static_cast<double>(i) * step();
  }
  std::vector<double> nodes() const;

  /// Index of the cell [t_j, t_{j+1}] containing t (clamped to the mesh).
  std::size_t cell_of(double t) const noexcept;

  bool operator==(const Mesh&) const = default;
};

/// Five-point stencil for the first derivative at node i: the derivative is
/// sum_k weights[k] * f[first + k] / h. Fourth-order central in the interior,
/// fourth-order one-sided at the two nodes next to each end.
struct DerivativeStencil {
  std::size_t first;
  std::array<double, 5> weights;
};

/// Requires points >= 5.
DerivativeStencil derivative_stencil(std::size_t i, std::size_t points) noexcept;

/// Applies the derivative stencils to raw samples with spacing h.
std::vector<double> differentiate_samples(std::span<const double> values, double h);

/// Weights of a cubic Hermite interpolant on one cell: the value at a point is
/// value_lo * f_j + slope_lo * m_j + value_hi * f_{j+1} + slope_hi * m_{j+1},
/// where m are the nodal slopes.
struct HermiteWeights {
  std::size_t cell;
  double value_lo;
  double slope_lo;
  double value_hi;
  double slope_hi;
};

HermiteWeights hermite_weights(const Mesh& mesh, double t) noexcept;

/// A function sampled on a uniform mesh, interpolated between nodes by a C^1
/// cubic Hermite spline whose nodal slopes come from the fourth-order
/// derivative stencils. The interpolant reproduces cubics exactly and is
/// linear in the samples.
class GridFunction {
 public:
  /// Throws DomainError unless a < b, values.size() >= 5 and all values are finite.
  GridFunction(double a, double b, std::vector<double> values);
  GridFunction(const Mesh& mesh, std::vector<double> values);

  static GridFunction sample(const Mesh& mesh, const std::function<double(double)>& fn);

  const Mesh& mesh() const noexcept { return mesh_; }
  double a() const noexcept { return mesh_.a; }
  double b() const noexcept { return mesh_.b; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> slopes() const noexcept { return slopes_; }

  /// Interpolated value; t outside [a, b] is clamped.
  double operator()(double t) const noexcept;

 private:
  Mesh mesh_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

}  // namespace varfrac
