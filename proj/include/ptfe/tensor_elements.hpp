#pragma once

#include <map>
#include <variant>
#include <vector>

#include "ptfe/scalar_basis.hpp"
#include "ptfe/templates.hpp"

namespace ptfe {

/// One tensor-valued basis function: scalar shape function times a constant
/// template tensor, owned by the scalar function's polytope and contributing
/// to the shared degrees of freedom of its connectivity polytope.
struct BasisFunction {
  ScalarFunctionId scalar;
  Mat tensor;
  PolytopeId owner;
  PolytopeId connectivity;
  MappingRule rule;
  int template_slot = 0;  ///< index within the owner's template set
  PolytopeId key_a;       ///< constituent-vector targets, see TensorTemplateSet
  PolytopeId key_b;
  bool slot_is_canonical = false;
};

struct ElementSpace {
  Family family;
  int dim = 0;
  int order = 0;
  ScalarBasis scalar;
  std::vector<BasisFunction> functions;

  int size() const { return static_cast<int>(functions.size()); }

  /// Functions per connectivity kind (vertex/edge/face/cell).
  std::map<PolytopeKind, int> connectivity_counts() const;
};

ElementSpace build_element(Family family, int dim, int order);

/// Dof records of the element's functions, for mesh-level dof numbering.
std::vector<DofRecord> dof_records(const ElementSpace& space);

/// Closed-form dimension of the family's element space.
int element_dim(Family family, int dim, int order);

/// Reference-element values of all basis functions at a point.
std::vector<Mat> eval_element_basis(const ElementSpace& space, const Vec& point);

enum class TraceKind { tt, nn, n, tn };

TraceKind family_trace_kind(Family f);

/// Interface trace of a tensor value against an edge or face frame. Scalar
/// traces come back as a 1-vector; tr_n and the 3D face tr_tn are vectors.
Vec trace(TraceKind kind, const Mat& value, const EdgeFrame& frame);
Vec trace(TraceKind kind, const Mat& value, const FaceFrame& frame);

}  // namespace ptfe
