#pragma once

#include <array>
#include <compare>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ptfe {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class PolytopeKind : int { vertex = 0, edge = 1, face = 2, cell = 3 };

enum class Continuity { tangential, normal };

/// A vertex, edge, face or cell of the reference simplex, identified by the
/// ascending tuple of its vertex indices.
struct PolytopeId {
  PolytopeKind kind;
  std::array<int, 4> idx{-1, -1, -1, -1};
  int nidx = 0;

  static PolytopeId vertex(int i) { return {PolytopeKind::vertex, {i, -1, -1, -1}, 1}; }
  static PolytopeId edge(int i, int j) { return {PolytopeKind::edge, {i, j, -1, -1}, 2}; }
  static PolytopeId face(int i, int j, int k) { return {PolytopeKind::face, {i, j, k, -1}, 3}; }
  static PolytopeId cell2d() { return {PolytopeKind::cell, {0, 1, 2, -1}, 3}; }
  static PolytopeId cell3d() { return {PolytopeKind::cell, {0, 1, 2, 3}, 4}; }

  bool contains(int v) const {
    for (int i = 0; i < nidx; ++i)
      if (idx[i] == v) return true;
    return false;
  }
  bool contains(const PolytopeId& sub) const {
    for (int i = 0; i < sub.nidx; ++i)
      if (!contains(sub.idx[i])) return false;
    return true;
  }

  friend bool operator==(const PolytopeId& a, const PolytopeId& b) {
    return a.kind == b.kind && a.nidx == b.nidx && a.idx == b.idx;
  }
  friend auto operator<=>(const PolytopeId& a, const PolytopeId& b) {
    if (a.kind != b.kind) return static_cast<int>(a.kind) <=> static_cast<int>(b.kind);
    return a.idx <=> b.idx;
  }

  std::string to_string() const;
};

/// Unnormalized tangent (and, in 2D, normal) of a reference edge. The tangent
/// runs from the lower to the higher vertex index; the 2D normal is R*tangent
/// with R = e1 (x) e2 - e2 (x) e1.
struct EdgeFrame {
  Vec tangent;
  Vec normal;  // empty in 3D
};

/// Face frame {normal, tangent1, tangent2} with normal = t_ij x t_ik (sorted
/// indices, left-hand rule), tangent2 = orth(normal), tangent1 = normal x tangent2.
struct FaceFrame {
  Vec normal;
  Vec tangent1;
  Vec tangent2;
};

struct ReferenceSimplex {
  int dim = 0;
  std::vector<Vec> vertices;  ///< reference coordinates, vertex i
  std::vector<PolytopeId> vertex_ids;
  std::vector<PolytopeId> edges;
  std::vector<PolytopeId> faces;  ///< empty in 2D
  PolytopeId cell;

  /// All polytopes as one list: vertices, edges, faces, cell.
  std::vector<PolytopeId> all() const;

  int num_vertices() const { return static_cast<int>(vertices.size()); }

  /// Position of an edge/face in the lexicographically ordered list.
  int edge_index(const PolytopeId& e) const;
  int face_index(const PolytopeId& f) const;
};

ReferenceSimplex enumerate_polytopes(int dim);

/// The ordered connectivity targets of a polytope's template set, exactly as
/// in the association tables: e.g. a vertex maps to its incident edges
/// (tangential) or incident faces (normal, 3D), an edge to itself plus its
/// incident faces (tangential, 3D), and so on.
std::vector<PolytopeId> association(const PolytopeId& p, Continuity continuity, int dim);

/// Barycentric coordinates; throws if the point lies outside the closed
/// reference simplex by more than 1e-12.
Vec barycentric(int dim, const Vec& point);

EdgeFrame edge_frame(const PolytopeId& e, int dim);
FaceFrame face_frame(const PolytopeId& f);

/// 90-degree rotation in 2D: R = e1 (x) e2 - e2 (x) e1, i.e. R(a,b) = (b,-a).
Eigen::Matrix2d rotation2d();

/// The unique orthogonal complement vector of the Hu-Ma-Sun construction,
/// with sgn(0) = 1. Satisfies |v| <= |orth(v)| <= sqrt(2)|v|.
Eigen::Vector3d orth(const Eigen::Vector3d& v);

}  // namespace ptfe
