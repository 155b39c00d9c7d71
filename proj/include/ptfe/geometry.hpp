#pragma once

#include <optional>
#include <vector>

#include "ptfe/refsimplex.hpp"
#include "ptfe/templates.hpp"

namespace ptfe {

/// Reference-to-physical coordinate map of one simplex: affine (order 1) or
/// quadratic isoparametric (order 2 with one control point per edge).
class GeometricMap {
 public:
  /// Affine map from the d+1 physical vertices (ascending global order).
  GeometricMap(std::vector<Vec> vertices);

  /// Quadratic map; edge control points follow the lexicographic local edge
  /// order and default to the straight midpoints when empty.
  GeometricMap(std::vector<Vec> vertices, std::vector<Vec> edge_points);

  int dim() const { return dim_; }
  int geometry_order() const { return order_; }
  bool affine() const { return order_ == 1; }
  const std::vector<Vec>& vertices() const { return vertices_; }

  Vec apply(const Vec& refpoint) const;
  Mat jacobian_matrix(const Vec& refpoint) const;
  /// dJ/dxi_k for each reference direction k; zero for affine maps, constant
  /// for quadratic ones.
  std::vector<Mat> jacobian_derivative(const Vec& refpoint) const;

 private:
  int dim_;
  int order_;
  std::vector<Vec> vertices_;
  std::vector<Vec> edge_points_;
  Mat affine_jacobian_;
};

struct JacobianData {
  Mat J;
  double det = 0.0;
  Mat cof;    ///< det(J) * J^-T
  Mat Jinv;
  Mat JinvT;
  Vec refpoint;
};

JacobianData jacobian(const GeometricMap& map, const Vec& refpoint);

/// Frame-to-frame transformation tensors of one element, built from the
/// physical vertex positions with the same conventions as the reference
/// frames (edges from sorted vertex differences, 2D normals n = R t, 3D edge
/// triplets {t, d1, d2} and face triplets {n, t1, t2}).
struct ElementTransforms {
  std::vector<Mat> edge;  ///< T_j per local edge, lexicographic order
  std::vector<Mat> face;  ///< T_k per local face (3D)
};

ElementTransforms element_transforms(int dim, const std::vector<Vec>& physical_vertices);

/// Physical edge frame of a (sorted) vertex pair.
EdgeFrame physical_edge_frame(const Vec& a, const Vec& b);
/// Physical face frame of a (sorted) vertex triple.
FaceFrame physical_face_frame(const Vec& a, const Vec& b, const Vec& c);

/// Push-forward of a reference tensor under the family's mapping rule. The
/// owner polytope and element transforms are consulted only by the Hu-Zhang
/// and Hu-Ma-Sun rules; `slot` identifies the template tensor within its set.
Mat push_forward(MappingRule rule, const JacobianData& jd, const Mat& ref_value,
                 const PolytopeId& owner, const ElementTransforms& transforms, int slot = 0);

/// Divergence scaling of contravariantly mapped vector fields:
/// div_x = (1/det J) div_xi.
double push_divergence(const JacobianData& jd, double ref_div);

}  // namespace ptfe
