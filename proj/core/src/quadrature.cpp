#include "hx4d/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hx4d {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Calls fn(beta) for every beta in N^5 with |beta| == total, in lexicographic order.
template <class Fn>
void for_each_composition(int total, Fn&& fn) {
  std::array<int, 5> beta{};
  auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
    if (pos == 4) {
      beta[4] = left;
      fn(beta);
      return;
    }
    for (int b = left; b >= 0; --b) {
      beta[pos] = b;
      self(self, pos + 1, left - b);
    }
  };
  rec(rec, 0, total);
}

}  // namespace

QuadratureRule gm_quadrature(int d) {
  if (d < 1 || d > 7) {
    throw std::invalid_argument("gm_quadrature: degree " + std::to_string(d) + " outside [1, 7]");
  }
  constexpr int n = 4;
  const int s = d / 2;  // rule of odd degree 2s+1 >= d
  const int deg = 2 * s + 1;
  QuadratureRule rule;
  rule.degree = deg;
  for (int i = 0; i <= s; ++i) {
    const double denom = deg + n - 2 * i;
    double w = std::pow(2.0, -2 * s) * std::pow(denom, deg) / (factorial(i) * factorial(deg + n - i));
    if (i % 2 == 1) w = -w;
    for_each_composition(s - i, [&](const std::array<int, 5>& beta) {
      std::array<double, 5> p{};
      for (std::size_t j = 0; j < 5; ++j) p[j] = (2.0 * beta[j] + 1.0) / denom;
      rule.points.push_back(p);
      rule.weights.push_back(w);
    });
  }
  return rule;
}

}  // namespace hx4d
