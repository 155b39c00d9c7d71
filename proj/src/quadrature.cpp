#include "ptfe/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "ptfe/scalar_basis.hpp"

namespace ptfe {

void gauss_legendre_01(int n, std::vector<double>& points, std::vector<double>& weights) {
  points.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev initial guess on [-1,1], then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const auto [p, dp] = legendre(n, x);
    (void)p;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    points[i] = 0.5 * (x + 1.0);
    weights[i] = 0.5 * w;
  }
}

QuadratureRule quadrature_rule(int dim, int degree) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("dim must be 2 or 3");
  if (degree < 0 || degree > 40) throw std::invalid_argument("unsupported quadrature degree");
  QuadratureRule rule;
  rule.dim = dim;
  rule.degree = degree;
  // The Duffy collapse multiplies the degree in the radial direction by the
  // Jacobian factor (1-u)^(dim-1), covered by one extra node.
  const int n = (degree + dim + 1) / 2 + 1;
  std::vector<double> gp, gw;
  gauss_legendre_01(n, gp, gw);
  if (dim == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double u = gp[i], v = gp[j];
        Vec p(2);
        p << u, v * (1.0 - u);
        rule.points.push_back(p);
        rule.weights.push_back(gw[i] * gw[j] * (1.0 - u));
      }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double u = gp[i], v = gp[j], w = gp[k];
          Vec p(3);
          p << u, v * (1.0 - u), w * (1.0 - u) * (1.0 - v);
          rule.points.push_back(p);
          rule.weights.push_back(gw[i] * gw[j] * gw[k] * (1.0 - u) * (1.0 - u) * (1.0 - v));
        }
  }
  return rule;
}

}  // namespace ptfe
