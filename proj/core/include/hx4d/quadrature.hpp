#pragma once

#include <array>
#include <vector>

namespace hx4d {

/// Rule on the reference 4-simplex in barycentric coordinates. Weights sum to
/// the reference volume 1/24.
struct QuadratureRule {
  int degree = 0;
  std::vector<std::array<double, 5>> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

/// Grundmann-Moeller rule exact for polynomials of total degree <= d,
/// d in 1..7. Even degrees use the next odd rule.
QuadratureRule gm_quadrature(int d);

}  // namespace hx4d
