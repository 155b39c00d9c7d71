#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ptfe/geometry.hpp"
#include "ptfe/vector_elements.hpp"

namespace ptfe {

/// Simplicial mesh with ascending-vertex elements, derived edge/face
/// connectivity and single-incidence boundary detection.
struct Mesh {
  int dim = 2;
  std::vector<Vec> vertices;
  std::vector<std::array<int, 4>> elements;  ///< ascending; [3] = -1 in 2D
  std::vector<int> regions;                  ///< per element, default 0
  std::map<std::array<int, 2>, Vec> curved;  ///< edge (sorted pair) -> P2 control point

  // derived connectivity
  std::vector<std::array<int, 2>> edges;  ///< sorted pairs, lexicographic
  std::vector<std::array<int, 3>> faces;  ///< 3D only
  std::vector<std::vector<int>> element_edges;
  std::vector<std::vector<int>> element_faces;
  std::vector<int> edge_incidence;
  std::vector<int> face_incidence;
  std::vector<bool> vertex_on_boundary;
  std::vector<bool> edge_on_boundary;
  std::vector<bool> face_on_boundary;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }

  /// Sorts element tuples, derives edges/faces/boundary, validates manifoldness.
  void derive();

  std::vector<Vec> element_vertices(int e) const;
  bool element_is_curved(int e) const;
  GeometricMap element_map(int e) const;
  double element_diameter(int e) const;
};

Mesh load_mesh(std::istream& in);
Mesh load_mesh_file(const std::string& path);
void save_mesh(const Mesh& mesh, std::ostream& out);
void save_mesh_file(const Mesh& mesh, const std::string& path);

/// Two-material strip [-5,5]x[-1,1] with a vertex line at x = 0; level 0 has
/// 36 elements on 31 vertices, each level quadruples the element count.
/// Region 0 is x < 0, region 1 is x > 0.
Mesh gen_strip_mesh(int level);

/// Curved L-shape: three-quarter unit disk with the re-entrant corner at the
/// origin; boundary arc edges carry quadratic control points on the circle.
Mesh gen_lshape_mesh(int level);

/// Uniform red refinement (straight meshes only).
Mesh refine_uniform(const Mesh& mesh);

/// Global degree-of-freedom numbering for one element space over a mesh.
/// Ids are assigned polytope-major: vertices, then edges, then faces, then
/// element-private cell dofs.
struct DofMap {
  int total = 0;
  int connected = 0;  ///< total minus cell-connectivity dofs
  std::map<PolytopeKind, int> per_class;
  std::vector<std::vector<int>> element_dofs;
  std::vector<PolytopeKind> dof_class;
};

DofMap build_dofmap(const Mesh& mesh, const std::vector<DofRecord>& records);

enum class BoundarySelector { deflection, moment_trace, all };

/// Global ids of dofs whose connectivity target lies on the domain boundary.
/// For Hu-Zhang moment traces this includes every component at boundary
/// vertices; for HHJ only the boundary edge dofs exist.
std::vector<int> boundary_dofs(const Mesh& mesh, const std::vector<DofRecord>& records,
                               const DofMap& dofmap, BoundarySelector selector);

}  // namespace ptfe
