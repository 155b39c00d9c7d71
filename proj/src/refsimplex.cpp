#include "ptfe/refsimplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ptfe {

std::string PolytopeId::to_string() const {
  static const char* names[] = {"v", "e", "f", "c"};
  std::string s = names[static_cast<int>(kind)];
  for (int i = 0; i < nidx; ++i) s += std::to_string(idx[i]);
  return s;
}

std::vector<PolytopeId> ReferenceSimplex::all() const {
  std::vector<PolytopeId> out = vertex_ids;
  out.insert(out.end(), edges.begin(), edges.end());
  out.insert(out.end(), faces.begin(), faces.end());
  out.push_back(cell);
  return out;
}

int ReferenceSimplex::edge_index(const PolytopeId& e) const {
  auto it = std::find(edges.begin(), edges.end(), e);
  if (it == edges.end()) throw std::invalid_argument("unknown edge " + e.to_string());
  return static_cast<int>(it - edges.begin());
}

int ReferenceSimplex::face_index(const PolytopeId& f) const {
  auto it = std::find(faces.begin(), faces.end(), f);
  if (it == faces.end()) throw std::invalid_argument("unknown face " + f.to_string());
  return static_cast<int>(it - faces.begin());
}

ReferenceSimplex enumerate_polytopes(int dim) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("dim must be 2 or 3");
  ReferenceSimplex rs;
  rs.dim = dim;
  if (dim == 2) {
    // Vertices chosen so that the barycentric coordinates read
    // lambda_0 = 1-xi-eta, lambda_1 = eta, lambda_2 = xi.
    rs.vertices = {Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 0)};
    for (int i = 0; i < 3; ++i) rs.vertex_ids.push_back(PolytopeId::vertex(i));
    rs.edges = {PolytopeId::edge(0, 1), PolytopeId::edge(0, 2), PolytopeId::edge(1, 2)};
    rs.cell = PolytopeId::cell2d();
  } else {
    // lambda_0 = 1-xi-eta-zeta, lambda_1 = zeta, lambda_2 = eta, lambda_3 = xi.
    rs.vertices = {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(0, 1, 0),
                   Eigen::Vector3d(1, 0, 0)};
    for (int i = 0; i < 4; ++i) rs.vertex_ids.push_back(PolytopeId::vertex(i));
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) rs.edges.push_back(PolytopeId::edge(i, j));
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        for (int k = j + 1; k < 4; ++k) rs.faces.push_back(PolytopeId::face(i, j, k));
    rs.cell = PolytopeId::cell3d();
  }
  return rs;
}

namespace {

std::vector<PolytopeId> incident(const std::vector<PolytopeId>& candidates, const PolytopeId& p) {
  std::vector<PolytopeId> out;
  for (const auto& c : candidates)
    if (c.contains(p)) out.push_back(c);
  return out;
}

}  // namespace

std::vector<PolytopeId> association(const PolytopeId& p, Continuity continuity, int dim) {
  const ReferenceSimplex rs = enumerate_polytopes(dim);
  std::vector<PolytopeId> out;
  switch (p.kind) {
    case PolytopeKind::vertex:
      if (dim == 2 || continuity == Continuity::tangential)
        out = incident(rs.edges, p);  // ordered by increasing edge multi-index
      else
        out = incident(rs.faces, p);
      break;
    case PolytopeKind::edge:
      if (dim == 2) {
        out = {p, rs.cell};
      } else if (continuity == Continuity::tangential) {
        out = {p};
        auto f = incident(rs.faces, p);
        out.insert(out.end(), f.begin(), f.end());
      } else {
        out = incident(rs.faces, p);
        out.push_back(rs.cell);
      }
      break;
    case PolytopeKind::face:
      if (dim != 3) throw std::invalid_argument("faces only exist in 3D");
      if (continuity == Continuity::tangential)
        out = {p, p, rs.cell};
      else
        out = {p, rs.cell, rs.cell};
      break;
    case PolytopeKind::cell:
      out.assign(static_cast<std::size_t>(dim), rs.cell);
      break;
  }
  return out;
}

Vec barycentric(int dim, const Vec& point) {
  if (point.size() != dim) throw std::invalid_argument("point dimension mismatch");
  constexpr double tol = 1e-12;
  Vec lambda(dim + 1);
  if (dim == 2) {
    lambda << 1.0 - point(0) - point(1), point(1), point(0);
  } else if (dim == 3) {
    lambda << 1.0 - point(0) - point(1) - point(2), point(2), point(1), point(0);
  } else {
    throw std::invalid_argument("dim must be 2 or 3");
  }
  for (int i = 0; i <= dim; ++i)
    if (lambda(i) < -tol) throw std::domain_error("point outside reference simplex");
  return lambda;
}

Eigen::Matrix2d rotation2d() {
  Eigen::Matrix2d R;
  R << 0, 1, -1, 0;
  return R;
}

EdgeFrame edge_frame(const PolytopeId& e, int dim) {
  if (e.kind != PolytopeKind::edge) throw std::invalid_argument("not an edge: " + e.to_string());
  const ReferenceSimplex rs = enumerate_polytopes(dim);
  EdgeFrame fr;
  fr.tangent = rs.vertices[e.idx[1]] - rs.vertices[e.idx[0]];
  if (dim == 2) fr.normal = rotation2d() * fr.tangent;
  return fr;
}

FaceFrame face_frame(const PolytopeId& f) {
  if (f.kind != PolytopeKind::face) throw std::invalid_argument("not a face: " + f.to_string());
  const ReferenceSimplex rs = enumerate_polytopes(3);
  const Eigen::Vector3d t01 = rs.vertices[f.idx[1]] - rs.vertices[f.idx[0]];
  const Eigen::Vector3d t02 = rs.vertices[f.idx[2]] - rs.vertices[f.idx[0]];
  FaceFrame fr;
  const Eigen::Vector3d n = t01.cross(t02);
  const Eigen::Vector3d t2 = orth(n);
  const Eigen::Vector3d t1 = n.cross(t2);
  fr.normal = n;
  fr.tangent2 = t2;
  fr.tangent1 = t1;
  return fr;
}

Eigen::Vector3d orth(const Eigen::Vector3d& v) {
  if (v.norm() == 0.0) throw std::invalid_argument("orth of zero vector");
  auto sgn = [](double t) { return t >= 0.0 ? 1.0 : -1.0; };
  Eigen::Vector3d d;
  d << sgn(v(0)) * std::abs(v(2)),  //
      sgn(v(1)) * std::abs(v(2)),   //
      -sgn(v(2)) * std::abs(v(0)) - sgn(v(2)) * std::abs(v(1));
  return d;
}

}  // namespace ptfe
