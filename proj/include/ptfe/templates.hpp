#pragma once

#include <vector>

#include "ptfe/refsimplex.hpp"

namespace ptfe {

enum class Family { regge, hhj, ps, hz, hms, gls };

enum class MappingRule {
  double_covariant,
  double_contravariant,
  mixed_cov_contra,
  hz_rule,
  hms_rule,
};

const char* family_name(Family f);
Family family_from_name(const std::string& name);
MappingRule family_mapping_rule(Family f);
bool family_valid(Family f, int dim);

/// Uniform per-function dof description shared by all element spaces; the
/// mesh-level DofMap matches functions across elements by connectivity target
/// plus the canonical key fields.
struct DofRecord {
  PolytopeId owner;
  PolytopeId connectivity;
  int scalar_local = 0;
  int slot = 0;
  PolytopeId key_a;
  PolytopeId key_b;
  bool slot_is_canonical = true;
};

/// Constant template vectors attached to one polytope, with the connectivity
/// target of each vector.
struct VectorTemplateSet {
  PolytopeId owner;
  std::vector<Vec> vectors;
  std::vector<PolytopeId> targets;
};

/// The tangential or normal template superset of the reference simplex. One
/// set per polytope, in the order vertices, edges, faces, cell.
std::vector<VectorTemplateSet> vector_templates(int dim, Continuity continuity);

/// Constant template tensors attached to one polytope; connectivity names the
/// polytope whose shared degrees of freedom the tensor's basis functions join.
/// For dyad-built families, key_a/key_b record the association targets of the
/// constituent vectors; they identify matching functions across elements
/// sharing a polytope. Frame-built sets (hz, hms, Cartesian) are canonical by
/// slot position instead and carry (owner, owner).
struct TensorTemplateSet {
  PolytopeId owner;
  Family family;
  std::vector<Mat> tensors;
  std::vector<PolytopeId> connectivity;
  std::vector<PolytopeId> key_a;
  std::vector<PolytopeId> key_b;
  bool slot_is_canonical = false;
};

/// Tensorial template sets of one element family: symmetrized dyads of the
/// vector sets (regge/hhj/ps), Cartesian plus frame-adapted bases (hz/hms), or
/// deviatoric tangential-normal products (gls).
std::vector<TensorTemplateSet> tensor_templates(Family family, int dim);

}  // namespace ptfe
