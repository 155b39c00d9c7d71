#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "ptfe/mesh.hpp"
#include "ptfe/quadrature.hpp"

namespace ptfe {

/// Plane-stress plate materials. D is the bending stiffness operator on
/// Sym(2), A = 12 D^-1 its compliance; ks_mu the weighted shear modulus.
struct MaterialTensors {
  double E = 1.0;
  double nu = 0.0;
  double ks = 5.0 / 6.0;
  double thickness = 1.0;

  double mu() const { return E / (2.0 * (1.0 + nu)); }
  double ks_mu() const { return ks * mu(); }

  Mat apply_D(const Mat& M) const {
    const int d = static_cast<int>(M.rows());
    return E / (1.0 - nu * nu) * (nu * M.trace() * Mat::Identity(d, d) + (1.0 - nu) * M);
  }
  Mat apply_A(const Mat& M) const {
    const int d = static_cast<int>(M.rows());
    return 12.0 / E * ((1.0 + nu) * M - nu * M.trace() * Mat::Identity(d, d));
  }
};

struct SparseSystem {
  Eigen::SparseMatrix<double> A;
  Vec rhs;
  std::vector<int> constrained;  ///< global dof ids with prescribed values
  Vec constrained_values;
};

/// Direct sparse solve with essential constraints imposed by elimination.
/// Returns the full-length solution (constrained entries at their values);
/// throws if the factorization fails or the residual exceeds 1e-8 |b|.
Vec solve_linear(const SparseSystem& system);

/// Element-level Schur complement: eliminates the masked (cell) dofs from
/// K x = f and keeps the data needed to recover them afterwards.
struct CondensationRecord {
  std::vector<int> retained;  ///< local indices kept
  std::vector<int> interior;  ///< local indices eliminated
  Mat K_cc_inv;
  Mat K_cr;
  Vec f_c;

  /// Interior values from the retained solution slice.
  Vec recover(const Vec& retained_values) const;
};

CondensationRecord static_condense(Mat& K, Vec& f, const std::vector<bool>& cell_mask);

/// Quadrature degree policy: 2p+2 on affine elements, 2p+4 on curved ones.
int quadrature_degree(int order, bool curved);

}  // namespace ptfe
