#include "ptfe/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ptfe {

void Mesh::derive() {
  if (dim != 2 && dim != 3) throw std::invalid_argument("mesh dim must be 2 or 3");
  const int nv_elem = dim + 1;
  if (regions.empty()) regions.assign(elements.size(), 0);
  if (regions.size() != elements.size())
    throw std::invalid_argument("one region tag per element required");

  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
      if ((vertices[i] - vertices[j]).norm() < 1e-12)
        throw std::invalid_argument("duplicate vertices");

  for (auto& el : elements) {
    std::sort(el.begin(), el.begin() + nv_elem);
    for (int k = 0; k < nv_elem; ++k)
      if (el[k] < 0 || el[k] >= num_vertices()) throw std::invalid_argument("vertex index range");
    for (int k = 0; k + 1 < nv_elem; ++k)
      if (el[k] == el[k + 1]) throw std::invalid_argument("repeated vertex in element");
  }

  std::map<std::array<int, 2>, int> edge_ids;
  std::map<std::array<int, 3>, int> face_ids;
  for (const auto& el : elements) {
    for (int a = 0; a < nv_elem; ++a)
      for (int b = a + 1; b < nv_elem; ++b) edge_ids.emplace(std::array<int, 2>{el[a], el[b]}, 0);
    if (dim == 3)
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
          for (int c = b + 1; c < 4; ++c)
            face_ids.emplace(std::array<int, 3>{el[a], el[b], el[c]}, 0);
  }
  edges.clear();
  for (auto& [key, id] : edge_ids) {
    id = static_cast<int>(edges.size());
    edges.push_back(key);
  }
  faces.clear();
  for (auto& [key, id] : face_ids) {
    id = static_cast<int>(faces.size());
    faces.push_back(key);
  }

  element_edges.assign(elements.size(), {});
  element_faces.assign(elements.size(), {});
  edge_incidence.assign(edges.size(), 0);
  face_incidence.assign(faces.size(), 0);
  for (std::size_t e = 0; e < elements.size(); ++e) {
    const auto& el = elements[e];
    for (int a = 0; a < nv_elem; ++a)
      for (int b = a + 1; b < nv_elem; ++b) {
        const int id = edge_ids.at({el[a], el[b]});
        element_edges[e].push_back(id);
        edge_incidence[id] += 1;
      }
    if (dim == 3)
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
          for (int c = b + 1; c < 4; ++c) {
            const int id = face_ids.at({el[a], el[b], el[c]});
            element_faces[e].push_back(id);
            face_incidence[id] += 1;
          }
  }

  vertex_on_boundary.assign(vertices.size(), false);
  edge_on_boundary.assign(edges.size(), false);
  face_on_boundary.assign(faces.size(), false);
  if (dim == 2) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (edge_incidence[i] > 2) throw std::invalid_argument("non-manifold edge");
      if (edge_incidence[i] == 1) {
        edge_on_boundary[i] = true;
        vertex_on_boundary[edges[i][0]] = true;
        vertex_on_boundary[edges[i][1]] = true;
      }
    }
  } else {
    for (std::size_t i = 0; i < faces.size(); ++i) {
      if (face_incidence[i] > 2) throw std::invalid_argument("non-manifold face");
      if (face_incidence[i] == 1) {
        face_on_boundary[i] = true;
        for (int k = 0; k < 3; ++k) vertex_on_boundary[faces[i][k]] = true;
      }
    }
    for (std::size_t i = 0; i < edges.size(); ++i)
      for (std::size_t f = 0; f < faces.size(); ++f)
        if (face_on_boundary[f] && std::includes(faces[f].begin(), faces[f].end(),
                                                 edges[i].begin(), edges[i].end()))
          edge_on_boundary[i] = true;
  }

  for (const auto& [key, pt] : curved) {
    if (edge_ids.find(key) == edge_ids.end())
      throw std::invalid_argument("curved control point on unknown edge");
    if (pt.size() != dim) throw std::invalid_argument("curved control point dimension");
  }
}

std::vector<Vec> Mesh::element_vertices(int e) const {
  std::vector<Vec> out;
  for (int k = 0; k <= dim; ++k) out.push_back(vertices[elements[e][k]]);
  return out;
}

bool Mesh::element_is_curved(int e) const {
  if (curved.empty()) return false;
  const auto& el = elements[e];
  for (int a = 0; a <= dim; ++a)
    for (int b = a + 1; b <= dim; ++b)
      if (curved.count({el[a], el[b]})) return true;
  return false;
}

GeometricMap Mesh::element_map(int e) const {
  auto pv = element_vertices(e);
  if (!element_is_curved(e)) return GeometricMap(pv);
  const auto& el = elements[e];
  std::vector<Vec> ctrl;
  for (int a = 0; a <= dim; ++a)
    for (int b = a + 1; b <= dim; ++b) {
      auto it = curved.find({el[a], el[b]});
      ctrl.push_back(it != curved.end() ? it->second : Vec(0.5 * (vertices[el[a]] + vertices[el[b]])));
    }
  return GeometricMap(pv, ctrl);
}

double Mesh::element_diameter(int e) const {
  const auto pv = element_vertices(e);
  double d = 0.0;
  for (std::size_t a = 0; a < pv.size(); ++a)
    for (std::size_t b = a + 1; b < pv.size(); ++b) d = std::max(d, (pv[a] - pv[b]).norm());
  return d;
}

Mesh load_mesh(std::istream& in) {
  Mesh mesh;
  std::string line, section;
  bool have_dim = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;  // blank line
    if (head == "dim") {
      if (!(ls >> mesh.dim)) throw std::invalid_argument("malformed dim line");
      have_dim = true;
      continue;
    }
    if (head == "vertices" || head == "elements" || head == "regions" || head == "curved") {
      section = head;
      continue;
    }
    if (!have_dim) throw std::invalid_argument("mesh file must start with a dim line");
    // data row: first token already read
    if (section == "vertices") {
      Vec v(mesh.dim);
      v(0) = std::stod(head);
      for (int k = 1; k < mesh.dim; ++k)
        if (!(ls >> v(k))) throw std::invalid_argument("malformed vertex row");
      mesh.vertices.push_back(v);
    } else if (section == "elements") {
      std::array<int, 4> el{-1, -1, -1, -1};
      el[0] = std::stoi(head);
      for (int k = 1; k <= mesh.dim; ++k)
        if (!(ls >> el[k])) throw std::invalid_argument("malformed element row");
      mesh.elements.push_back(el);
    } else if (section == "regions") {
      mesh.regions.push_back(std::stoi(head));
    } else if (section == "curved") {
      std::array<int, 2> key{std::stoi(head), 0};
      if (!(ls >> key[1])) throw std::invalid_argument("malformed curved row");
      if (key[0] > key[1]) std::swap(key[0], key[1]);
      Vec c(mesh.dim);
      for (int k = 0; k < mesh.dim; ++k)
        if (!(ls >> c(k))) throw std::invalid_argument("malformed curved row");
      mesh.curved[key] = c;
    } else {
      throw std::invalid_argument("unknown mesh file section: " + head);
    }
  }
  mesh.derive();
  return mesh;
}

Mesh load_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);
  return load_mesh(in);
}

void save_mesh(const Mesh& mesh, std::ostream& out) {
  char buf[128];
  out << "dim " << mesh.dim << "\n";
  out << "vertices\n";
  for (const auto& v : mesh.vertices) {
    for (int k = 0; k < mesh.dim; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", v(k));
      out << (k ? " " : "") << buf;
    }
    out << "\n";
  }
  out << "elements\n";
  for (const auto& el : mesh.elements) {
    for (int k = 0; k <= mesh.dim; ++k) out << (k ? " " : "") << el[k];
    out << "\n";
  }
  if (!mesh.regions.empty() &&
      std::any_of(mesh.regions.begin(), mesh.regions.end(), [](int r) { return r != 0; })) {
    out << "regions\n";
    for (int r : mesh.regions) out << r << "\n";
  }
  if (!mesh.curved.empty()) {
    out << "curved\n";
    for (const auto& [key, c] : mesh.curved) {
      out << key[0] << " " << key[1];
      for (int k = 0; k < mesh.dim; ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", c(k));
        out << " " << buf;
      }
      out << "\n";
    }
  }
}

void save_mesh_file(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file: " + path);
  save_mesh(mesh, out);
}

namespace {

// Level-0 strip triangulation: 31 vertices, 36 elements, vertex line at x = 0.
constexpr double kStripPts[][2] = {
    {-5, -1},   {-3.75, -1}, {-2.5, -1}, {-1.25, -1}, {0, -1},    {-5, 1},    {-3.75, 1},
    {-2.5, 1},  {-1.25, 1},  {0, 1},     {-5, -0.5},  {-5, 0},    {-5, 0.5},  {0, -0.5},
    {0, 0},     {0, 0.5},    {-3.1, 0.18}, {-1.55, -0.24}, {5, -1}, {3.75, -1}, {2.5, -1},
    {1.25, -1}, {5, 1},      {3.75, 1},  {2.5, 1},    {1.25, 1},  {5, -0.5},  {5, 0},
    {5, 0.5},   {3.1, 0.18}, {1.55, -0.24},
};
constexpr int kStripTris[][3] = {
    {1, 11, 16},  {6, 11, 16},  {0, 1, 10},   {1, 10, 11},  {5, 6, 12},   {6, 11, 12},
    {8, 14, 17},  {1, 2, 16},   {2, 16, 17},  {2, 3, 17},   {7, 16, 17},  {7, 8, 17},
    {6, 7, 16},   {8, 9, 15},   {8, 14, 15},  {13, 14, 17}, {3, 13, 17},  {3, 4, 13},
    {19, 27, 29}, {23, 27, 29}, {18, 19, 26}, {19, 26, 27}, {22, 23, 28}, {23, 27, 28},
    {14, 25, 30}, {19, 20, 29}, {20, 29, 30}, {20, 21, 30}, {24, 29, 30}, {24, 25, 30},
    {23, 24, 29}, {9, 15, 25},  {14, 15, 25}, {13, 14, 30}, {13, 21, 30}, {4, 13, 21},
};

void assign_strip_regions(Mesh& mesh) {
  mesh.regions.resize(mesh.elements.size());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    Vec c = Vec::Zero(2);
    for (int k = 0; k < 3; ++k) c += mesh.vertices[mesh.elements[e][k]];
    mesh.regions[e] = c(0) / 3.0 < 0.0 ? 0 : 1;
  }
}

}  // namespace

Mesh gen_strip_mesh(int level) {
  if (level < 0) throw std::invalid_argument("level must be >= 0");
  Mesh mesh;
  mesh.dim = 2;
  for (const auto& p : kStripPts) mesh.vertices.push_back(Eigen::Vector2d(p[0], p[1]));
  for (const auto& t : kStripTris) mesh.elements.push_back({t[0], t[1], t[2], -1});
  assign_strip_regions(mesh);
  mesh.derive();
  for (int l = 0; l < level; ++l) {
    mesh = refine_uniform(mesh);
    assign_strip_regions(mesh);
  }
  return mesh;
}

Mesh gen_lshape_mesh(int level) {
  if (level < 0) throw std::invalid_argument("level must be >= 0");
  const int nr = 2 << level;        // radial layers
  const int nth = 6 << level;       // angular segments over 270 degrees
  Mesh mesh;
  mesh.dim = 2;
  mesh.vertices.push_back(Eigen::Vector2d(0, 0));
  auto ring_vertex = [&](int ring, int i) { return 1 + (ring - 1) * (nth + 1) + i; };
  for (int ring = 1; ring <= nr; ++ring) {
    const double r = static_cast<double>(ring) / nr;
    for (int i = 0; i <= nth; ++i) {
      const double theta = M_PI / 2 + (3 * M_PI / 2) * i / nth;
      mesh.vertices.push_back(Eigen::Vector2d(r * std::cos(theta), r * std::sin(theta)));
    }
  }
  for (int i = 0; i < nth; ++i)
    mesh.elements.push_back({0, ring_vertex(1, i), ring_vertex(1, i + 1), -1});
  for (int ring = 1; ring < nr; ++ring)
    for (int i = 0; i < nth; ++i) {
      const int a = ring_vertex(ring, i), b = ring_vertex(ring, i + 1);
      const int c = ring_vertex(ring + 1, i), d = ring_vertex(ring + 1, i + 1);
      mesh.elements.push_back({a, b, c, -1});
      mesh.elements.push_back({b, c, d, -1});
    }
  mesh.derive();
  // Snap quadratic control points of the outer-arc edges onto the unit circle.
  for (int i = 0; i < mesh.num_edges(); ++i) {
    if (!mesh.edge_on_boundary[i]) continue;
    const Vec& a = mesh.vertices[mesh.edges[i][0]];
    const Vec& b = mesh.vertices[mesh.edges[i][1]];
    if (std::abs(a.norm() - 1.0) < 1e-12 && std::abs(b.norm() - 1.0) < 1e-12) {
      Vec mid = 0.5 * (a + b);
      mesh.curved[mesh.edges[i]] = Vec(mid / mid.norm());
    }
  }
  return mesh;
}

Mesh refine_uniform(const Mesh& mesh) {
  if (!mesh.curved.empty()) throw std::invalid_argument("refinement of curved meshes not supported");
  if (mesh.dim != 2) throw std::invalid_argument("refinement implemented for dim 2");
  Mesh fine;
  fine.dim = 2;
  fine.vertices = mesh.vertices;
  std::vector<int> edge_mid(mesh.num_edges());
  for (int i = 0; i < mesh.num_edges(); ++i) {
    edge_mid[i] = fine.num_vertices();
    fine.vertices.push_back(0.5 * (mesh.vertices[mesh.edges[i][0]] + mesh.vertices[mesh.edges[i][1]]));
  }
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.elements[e];
    // local edges in lexicographic order: (0,1), (0,2), (1,2)
    const int m01 = edge_mid[mesh.element_edges[e][0]];
    const int m02 = edge_mid[mesh.element_edges[e][1]];
    const int m12 = edge_mid[mesh.element_edges[e][2]];
    const int r = mesh.regions[e];
    for (const auto& t : {std::array<int, 3>{el[0], m01, m02}, std::array<int, 3>{el[1], m01, m12},
                          std::array<int, 3>{el[2], m02, m12}, std::array<int, 3>{m01, m02, m12}}) {
      fine.elements.push_back({t[0], t[1], t[2], -1});
      fine.regions.push_back(r);
    }
  }
  fine.derive();
  return fine;
}

namespace {

/// Canonical cross-element identity of one non-cell dof.
struct DofKey {
  std::array<int, 14> data{};
  friend auto operator<=>(const DofKey&, const DofKey&) = default;
};

std::array<int, 4> globalize(const PolytopeId& p, const std::array<int, 4>& elem) {
  std::array<int, 4> g{-1, -1, -1, -1};
  for (int k = 0; k < p.nidx; ++k) g[k] = elem[p.idx[k]];
  return g;
}

DofKey make_key(const DofRecord& r, const std::array<int, 4>& elem) {
  DofKey key;
  const auto og = globalize(r.owner, elem);
  const auto ag = globalize(r.key_a, elem);
  const auto bg = globalize(r.key_b, elem);
  int i = 0;
  key.data[i++] = static_cast<int>(r.owner.kind);
  for (int k = 0; k < 4; ++k) key.data[i++] = og[k];
  key.data[i++] = r.scalar_local;
  key.data[i++] = r.slot_is_canonical ? r.slot : -1;
  for (int k = 0; k < 3; ++k) key.data[i++] = ag[k];
  for (int k = 0; k < 3; ++k) key.data[i++] = bg[k];
  return key;
}

}  // namespace

DofMap build_dofmap(const Mesh& mesh, const std::vector<DofRecord>& records) {
  DofMap dm;
  const int nloc = static_cast<int>(records.size());

  // target key -> (polytope-global id used for ordering) -> set of dof keys
  std::map<std::array<int, 2>, std::set<DofKey>> shared;  // {kind, global id} -> keys
  auto target_id = [&](const DofRecord& r, int e) -> std::array<int, 2> {
    const auto& el = mesh.elements[e];
    switch (r.connectivity.kind) {
      case PolytopeKind::vertex:
        return {0, el[r.connectivity.idx[0]]};
      case PolytopeKind::edge: {
        const auto rs = enumerate_polytopes(mesh.dim);
        return {1, mesh.element_edges[e][rs.edge_index(r.connectivity)]};
      }
      case PolytopeKind::face: {
        const auto rs = enumerate_polytopes(3);
        return {2, mesh.element_faces[e][rs.face_index(r.connectivity)]};
      }
      case PolytopeKind::cell:
        return {3, e};
    }
    throw std::logic_error("unreachable");
  };

  for (int e = 0; e < mesh.num_elements(); ++e)
    for (const auto& r : records)
      if (r.connectivity.kind != PolytopeKind::cell)
        shared[target_id(r, e)].insert(make_key(r, mesh.elements[e]));

  // Polytope-major numbering: vertices, edges, faces, then per-element cells.
  std::map<std::array<int, 2>, std::map<DofKey, int>> numbering;
  int next = 0;
  dm.per_class = {{PolytopeKind::vertex, 0},
                  {PolytopeKind::edge, 0},
                  {PolytopeKind::face, 0},
                  {PolytopeKind::cell, 0}};
  for (const auto& [tid, keys] : shared) {  // map order = (kind, id) ascending
    for (const auto& key : keys) {
      numbering[tid][key] = next++;
      dm.dof_class.push_back(static_cast<PolytopeKind>(tid[0]));
      dm.per_class[static_cast<PolytopeKind>(tid[0])] += 1;
    }
  }
  dm.connected = next;

  dm.element_dofs.assign(mesh.num_elements(), std::vector<int>(nloc, -1));
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int i = 0; i < nloc; ++i) {
      const auto& r = records[i];
      if (r.connectivity.kind == PolytopeKind::cell) {
        dm.element_dofs[e][i] = next++;
        dm.dof_class.push_back(PolytopeKind::cell);
        dm.per_class[PolytopeKind::cell] += 1;
      } else {
        dm.element_dofs[e][i] = numbering.at(target_id(r, e)).at(make_key(r, mesh.elements[e]));
      }
    }
  dm.total = next;
  return dm;
}

std::vector<int> boundary_dofs(const Mesh& mesh, const std::vector<DofRecord>& records,
                               const DofMap& dofmap, BoundarySelector selector) {
  (void)selector;  // all selectors resolve to boundary-targeted dofs for their space
  bool has_boundary = false;
  for (bool b : mesh.dim == 2 ? mesh.edge_on_boundary : mesh.face_on_boundary) has_boundary |= b;
  if (!has_boundary) throw std::invalid_argument("mesh has no boundary");

  std::set<int> out;
  const auto rs = enumerate_polytopes(mesh.dim);
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& c = records[i].connectivity;
      bool on_boundary = false;
      switch (c.kind) {
        case PolytopeKind::vertex:
          on_boundary = mesh.vertex_on_boundary[mesh.elements[e][c.idx[0]]];
          break;
        case PolytopeKind::edge:
          on_boundary = mesh.edge_on_boundary[mesh.element_edges[e][rs.edge_index(c)]];
          break;
        case PolytopeKind::face:
          on_boundary = mesh.face_on_boundary[mesh.element_faces[e][rs.face_index(c)]];
          break;
        case PolytopeKind::cell:
          break;
      }
      if (on_boundary) out.insert(dofmap.element_dofs[e][i]);
    }
  return {out.begin(), out.end()};
}

}  // namespace ptfe
