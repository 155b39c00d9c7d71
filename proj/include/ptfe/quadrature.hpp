#pragma once

#include <vector>

#include "ptfe/refsimplex.hpp"

namespace ptfe {

struct QuadratureRule {
  int dim = 0;
  int degree = 0;  ///< degree of polynomial exactness
  std::vector<Vec> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

/// Collapsed Gauss-Legendre rule on the reference triangle or tetrahedron,
/// exact for polynomials up to `degree`.
QuadratureRule quadrature_rule(int dim, int degree);

/// Gauss-Legendre nodes and weights on [0,1].
void gauss_legendre_01(int n, std::vector<double>& points, std::vector<double>& weights);

}  // namespace ptfe
