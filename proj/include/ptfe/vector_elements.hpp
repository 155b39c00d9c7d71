#pragma once

#include <vector>

#include "ptfe/scalar_basis.hpp"
#include "ptfe/templates.hpp"

namespace ptfe {

enum class VectorKind { n2, bdm, rt, dg_scalar, dg_vector, cg };

const char* vector_kind_name(VectorKind k);

/// Supporting vector- and scalar-valued spaces: the tangential-continuous
/// full-order template space (second-kind Nedelec), normal-continuous BDM,
/// classical Raviart-Thomas, discontinuous monomial spaces and continuous CG.
class VectorElementSpace {
 public:
  VectorElementSpace(VectorKind kind, int dim, int order);

  VectorKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(dofs_.size()); }
  /// 1 for scalar kinds, dim for vector kinds.
  int value_size() const;

  const std::vector<DofRecord>& dof_records() const { return dofs_; }

  /// Reference values; one column per function, value_size rows.
  Mat eval(const Vec& point) const;
  /// Divergence of each function (rt / template vector kinds).
  Vec eval_divergence(const Vec& point) const;
  /// Gradients for scalar kinds: dim x n.
  Mat eval_gradients(const Vec& point) const;

  const ScalarBasis* scalar() const { return scalar_ ? &*scalar_ : nullptr; }
  /// Template vector of function i (n2/bdm).
  const Vec& template_vector(int i) const { return vectors_[i]; }

 private:
  VectorKind kind_;
  int dim_;
  int order_;
  std::vector<DofRecord> dofs_;
  std::optional<ScalarBasis> scalar_;  // n2, bdm, cg
  std::vector<Vec> vectors_;           // n2, bdm
  Mat rt_coeffs_;                      // rt: raw-to-nodal coefficients
  std::vector<std::array<int, 2>> monomials_;  // dg and rt raw exponents

  void build_template_kind(Continuity continuity);
  void build_rt();
  void build_dg();
  void build_cg();
  Mat eval_rt_raw(const Vec& point) const;
  Vec eval_rt_raw_div(const Vec& point) const;
};

}  // namespace ptfe
