#include "varfrac/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "varfrac/errors.hpp"

namespace varfrac {

Mesh::Mesh(double a_, double b_, std::size_t points_) : a(a_), b(b_), points(points_) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw DomainError("mesh: need finite a < b, got [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  if (points < 5) {
    throw DomainError("mesh: at least 5 points required, got " + std::to_string(points));
  }
}

std::vector<double> Mesh::nodes() const {
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i) out[i] = node(i);
  return out;
}

std::size_t Mesh::cell_of(double t) const noexcept {
  const double s = (t - a) / step();
  if (!(s > 0.0)) return 0;
  const auto j = static_cast<std::size_t>(s);
  return std::min(j, intervals() - 1);
}

DerivativeStencil derivative_stencil(std::size_t i, std::size_t points) noexcept {
  constexpr double k = 1.0 / 12.0;
  const std::size_t n = points - 1;
  if (i == 0) return {0, {-25 * k, 48 * k, -36 * k, 16 * k, -3 * k}};
  if (i == 1) return {0, {-3 * k, -10 * k, 18 * k, -6 * k, 1 * k}};
  if (i == n) return {n - 4, {3 * k, -16 * k, 36 * k, -48 * k, 25 * k}};
  if (i == n - 1) return {n - 4, {-1 * k, 6 * k, -18 * k, 10 * k, 3 * k}};
  return {i - 2, {1 * k, -8 * k, 0.0, 8 * k, -1 * k}};
}

std::vector<double> differentiate_samples(std::span<const double> values, double h) {
  if (values.size() < 5) {
    throw DomainError("differentiate: at least 5 samples required, got " + std::to_string(values.size()));
  }
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const DerivativeStencil st = derivative_stencil(i, values.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < 5; ++k) acc += st.weights[k] * values[st.first + k];
    out[i] = acc / h;
  }
  return out;
}

HermiteWeights hermite_weights(const Mesh& mesh, double t) noexcept {
  const std::size_t j = mesh.cell_of(t);
  const double h = mesh.step();
  double s = (t - mesh.node(j)) / h;
  s = std::clamp(s, 0.0, 1.0);
  const double s2 = s * s;
  const double s3 = s2 * s;
  return {j, 2 * s3 - 3 * s2 + 1, h * (s3 - 2 * s2 + s), -2 * s3 + 3 * s2, h * (s3 - s2)};
}

GridFunction::GridFunction(double a, double b, std::vector<double> values)
    : GridFunction(Mesh(a, b, values.size()), std::move(values)) {}

GridFunction::GridFunction(const Mesh& mesh, std::vector<double> values)
    : mesh_(mesh), values_(std::move(values)) {
  if (values_.size() != mesh_.points) {
    throw DomainError("grid function: " + std::to_string(values_.size()) + " samples for a mesh of " +
                      std::to_string(mesh_.points) + " points");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DomainError("grid function: non-finite sample at node " + std::to_string(i));
    }
  }
  slopes_ = differentiate_samples(values_, mesh_.step());
}

GridFunction GridFunction::sample(const Mesh& mesh, const std::function<double(double)>& fn) {
  std::vector<double> v(mesh.points);
  for (std::size_t i = 0; i < mesh.points; ++i) v[i] = fn(mesh.node(i));
  return GridFunction(mesh, std::move(v));
}

double GridFunction::operator()(double t) const noexcept {
  const HermiteWeights w = hermite_weights(mesh_, t);
  const std::size_t j = w.cell;
  return w.value_lo * values_[j] + w.slope_lo * slopes_[j] + w.value_hi * values_[j + 1] +
         w.slope_hi * slopes_[j + 1];
}

}  // namespace varfrac
