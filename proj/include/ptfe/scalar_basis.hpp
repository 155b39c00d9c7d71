#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ptfe/refsimplex.hpp"

namespace ptfe {

struct ScalarFunctionId {
  PolytopeId owner;
  int local = 0;
  friend bool operator==(const ScalarFunctionId&, const ScalarFunctionId&) = default;
};

/// Hierarchical H1-conforming basis of P^p on the reference simplex. Vertex
/// functions are the barycentric coordinates; edge/face/cell groups carry
/// integrated-Legendre-type kernels over barycentric products and vanish on
/// all polytopes they are not associated with.
class ScalarBasis {
 public:
  ScalarBasis(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  int total() const { return static_cast<int>(functions_.size()); }

  const std::vector<ScalarFunctionId>& functions() const { return functions_; }
  const ScalarFunctionId& function(int i) const { return functions_[i]; }

  /// Flat index of a function id; throws on unknown ids.
  int index_of(const ScalarFunctionId& fid) const;

  /// Number of functions owned by each polytope.
  std::map<PolytopeId, int> polytope_counts() const;
  int count(const PolytopeId& p) const;

  /// Value and gradient at a reference point.
  std::pair<double, Vec> eval(const ScalarFunctionId& fid, const Vec& point) const;

  /// All values and gradients at once; grads has one column per function.
  void eval_all(const Vec& point, Vec& values, Mat& grads) const;

  static int dimension(int dim, int order);

 private:
  int dim_;
  int order_;
  ReferenceSimplex rs_;
  std::vector<ScalarFunctionId> functions_;

  void eval_one(const ScalarFunctionId& fid, const Vec& lambda, double& value,
                Vec& grad_lambda) const;
};

/// Legendre polynomial P_n and its derivative at x.
std::pair<double, double> legendre(int n, double x);

}  // namespace ptfe
