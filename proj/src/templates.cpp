#include "ptfe/templates.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ptfe {

const char* family_name(Family f) {
  switch (f) {
    case Family::regge: return "regge";
    case Family::hhj: return "hhj";
    case Family::ps: return "ps";
    case Family::hz: return "hz";
    case Family::hms: return "hms";
    case Family::gls: return "gls";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  for (Family f : {Family::regge, Family::hhj, Family::ps, Family::hz, Family::hms, Family::gls})
    if (name == family_name(f)) return f;
  throw std::invalid_argument("unknown family: " + name);
}

MappingRule family_mapping_rule(Family f) {
  switch (f) {
    case Family::regge: return MappingRule::double_covariant;
    case Family::hhj:
    case Family::ps: return MappingRule::double_contravariant;
    case Family::hz: return MappingRule::hz_rule;
    case Family::hms: return MappingRule::hms_rule;
    case Family::gls: return MappingRule::mixed_cov_contra;
  }
  throw std::logic_error("unreachable");
}

bool family_valid(Family f, int dim) {
  switch (f) {
    case Family::regge:
    case Family::gls: return dim == 2 || dim == 3;
    case Family::hhj:
    case Family::hz: return dim == 2;
    case Family::ps:
    case Family::hms: return dim == 3;
  }
  return false;
}

namespace {

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

Vec v3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

std::vector<VectorTemplateSet> tangential_2d() {
  const Vec e1 = v2(1, 0), e2 = v2(0, 1);
  const Vec i1 = e1 + e2;            // iota_1^tau
  const Vec i2 = 0.5 * (e1 - e2);    // iota_2^tau
  std::vector<std::vector<Vec>> sets = {
      {e2, e1}, {i1, e1}, {i1, -e2},   // vertices
      {e2, -e1}, {e1, e2}, {i2, i1},   // edges 01, 02, 12
      {e1, e2},                        // cell
  };
  std::vector<VectorTemplateSet> out;
  const auto rs = enumerate_polytopes(2);
  const auto polys = rs.all();
  for (std::size_t i = 0; i < polys.size(); ++i)
    out.push_back({polys[i], sets[i], association(polys[i], Continuity::tangential, 2)});
  return out;
}

std::vector<VectorTemplateSet> normal_2d() {
  const Vec e1 = v2(1, 0), e2 = v2(0, 1);
  const Vec i1 = e1 - e2;            // iota_1^nu
  const Vec i2 = -0.5 * (e1 + e2);   // iota_2^nu
  std::vector<std::vector<Vec>> sets = {
      {e1, -e2}, {i1, -e2}, {i1, -e1},  //
      {e1, e2},  {-e2, e1}, {i2, i1},   //
      {e1, e2},
  };
  std::vector<VectorTemplateSet> out;
  const auto rs = enumerate_polytopes(2);
  const auto polys = rs.all();
  for (std::size_t i = 0; i < polys.size(); ++i)
    out.push_back({polys[i], sets[i], association(polys[i], Continuity::normal, 2)});
  return out;
}

std::vector<VectorTemplateSet> tangential_3d() {
  const Vec e1 = v3(1, 0, 0), e2 = v3(0, 1, 0), e3 = v3(0, 0, 1);
  const Vec i1 = e1 + e2 + e3;  // iota_1^tau
  std::vector<std::vector<Vec>> sets = {
      {e3, e2, e1}, {i1, e2, e1}, {i1, -e3, e1}, {i1, -e3, -e2},    // vertices 0..3
      {e3, -e2, -e1}, {e2, e3, -e1}, {e1, e3, e2},                  // edges 01 02 03
      {e2, i1, -e1},  {e1, i1, e2},  {e1, i1, -e3},                 // edges 12 13 23
      {e3, e2, -e1},  {e3, e1, e2},  {e2, e1, -e3}, {e2, e1, i1},   // faces 012 013 023 123
      {e3, e2, e1},                                                 // cell
  };
  std::vector<VectorTemplateSet> out;
  const auto rs = enumerate_polytopes(3);
  const auto polys = rs.all();
  for (std::size_t i = 0; i < polys.size(); ++i)
    out.push_back({polys[i], sets[i], association(polys[i], Continuity::tangential, 3)});
  return out;
}

std::vector<VectorTemplateSet> normal_3d() {
  const Vec e1 = v3(1, 0, 0), e2 = v3(0, 1, 0), e3 = v3(0, 0, 1);
  const Vec i1 = e3 - e1;  // iota_1^nu
  const Vec i2 = e2 - e3;  // iota_2^nu
  const Vec i3 = e2 - e1;  // iota_3^nu
  std::vector<std::vector<Vec>> sets = {
      {-e1, e2, -e3}, {i1, i2, -e3}, {i3, i2, -e2}, {i3, -i1, -e1},  // vertices
      {-e1, e2, e3},  {-e1, -e3, e2}, {e2, -e3, e1},                 // edges 01 02 03
      {i1, -e3, i2},  {i2, -e3, -i1}, {i2, -e2, -i3},                // edges 12 13 23
      {-e1, e3, e2},  {e2, e3, e1},   {-e3, e2, e1}, {-e3, i2, -i1}, // faces
      {e3, e2, e1},                                                  // cell
  };
  std::vector<VectorTemplateSet> out;
  const auto rs = enumerate_polytopes(3);
  const auto polys = rs.all();
  for (std::size_t i = 0; i < polys.size(); ++i)
    out.push_back({polys[i], sets[i], association(polys[i], Continuity::normal, 3)});
  return out;
}

Mat sym_dyad(const Vec& a, const Vec& b) {
  Mat m = a * b.transpose();
  return 0.5 * (m + m.transpose());
}

Mat deviatoric(const Mat& m) {
  const int d = static_cast<int>(m.rows());
  return m - (m.trace() / d) * Mat::Identity(d, d);
}

/// Smallest polytope containing both arguments (union of vertex indices).
PolytopeId join(const PolytopeId& a, const PolytopeId& b, int dim) {
  std::vector<int> v;
  for (int i = 0; i < a.nidx; ++i) v.push_back(a.idx[i]);
  for (int i = 0; i < b.nidx; ++i) v.push_back(b.idx[i]);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  switch (v.size()) {
    case 1: return PolytopeId::vertex(v[0]);
    case 2: return PolytopeId::edge(v[0], v[1]);
    case 3:
      if (dim == 2) return PolytopeId::cell2d();
      return PolytopeId::face(v[0], v[1], v[2]);
    default: return PolytopeId::cell3d();
  }
}

/// Symmetrized dyads of one vector set: squares first, then the mixed terms.
TensorTemplateSet sym_family_set(const VectorTemplateSet& vs, Family family, int dim) {
  TensorTemplateSet ts;
  ts.owner = vs.owner;
  ts.family = family;
  const int n = static_cast<int>(vs.vectors.size());
  for (int i = 0; i < n; ++i) {
    ts.tensors.push_back(vs.vectors[i] * vs.vectors[i].transpose());
    ts.connectivity.push_back(vs.targets[i]);
    ts.key_a.push_back(vs.targets[i]);
    ts.key_b.push_back(vs.targets[i]);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      ts.tensors.push_back(sym_dyad(vs.vectors[i], vs.vectors[j]));
      ts.connectivity.push_back(join(vs.targets[i], vs.targets[j], dim));
      ts.key_a.push_back(vs.targets[i]);
      ts.key_b.push_back(vs.targets[j]);
    }
  return ts;
}

std::vector<Mat> cartesian_sym(int dim) {
  std::vector<Mat> out;
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      Vec a = Vec::Zero(dim), b = Vec::Zero(dim);
      a(i) = 1;
      b(j) = 1;
      out.push_back(i == j ? Mat(a * a.transpose()) : sym_dyad(a, b));
    }
  return out;
}

std::vector<Mat> cartesian_sl(int dim) {
  std::vector<Mat> out;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      if (i == j) continue;
      Mat m = Mat::Zero(dim, dim);
      m(i, j) = 1;
      out.push_back(m);
    }
  for (int i = 0; i + 1 < dim; ++i) {
    Mat m = Mat::Zero(dim, dim);
    m(i, i) = 1;
    m(i + 1, i + 1) = -1;
    out.push_back(m);
  }
  return out;
}

/// Scalar tangential-normal trace of a tensor on an edge (2D).
double trace_tn_edge(const Mat& t, const EdgeFrame& fr) {
  return fr.tangent.dot(t * fr.normal);
}

/// Tangential-normal trace vector on a face (3D), unit-normal convention.
Vec trace_tn_face(const Mat& t, const FaceFrame& fr) {
  const Vec n = fr.normal / fr.normal.norm();
  const Mat P = Mat::Identity(3, 3) - n * n.transpose();
  return P * (t * n);
}

/// Connectivity of a GLS template tensor by its tangential-normal trace on the
/// owner's incident interface polytopes: active on exactly one of them or none
/// (then cell-type).
PolytopeId gls_connectivity(const Mat& t, const PolytopeId& owner, int dim) {
  const ReferenceSimplex rs = enumerate_polytopes(dim);
  std::vector<PolytopeId> candidates;
  if (dim == 2) {
    for (const auto& e : rs.edges)
      if (e.contains(owner) || e == owner) candidates.push_back(e);
    if (owner.kind == PolytopeKind::edge) candidates = {owner};
  } else {
    for (const auto& f : rs.faces)
      if (f.contains(owner) || f == owner) candidates.push_back(f);
    if (owner.kind == PolytopeKind::face) candidates = {owner};
  }
  PolytopeId active = dim == 2 ? PolytopeId::cell2d() : PolytopeId::cell3d();
  int n_active = 0;
  for (const auto& c : candidates) {
    double mag = 0.0;
    if (dim == 2)
      mag = std::abs(trace_tn_edge(t, edge_frame(c, 2)));
    else
      mag = trace_tn_face(t, face_frame(c)).norm();
    if (mag > 1e-9) {
      active = c;
      ++n_active;
    }
  }
  if (n_active > 1) throw std::logic_error("gls template active on more than one interface");
  return active;
}

TensorTemplateSet gls_set(const VectorTemplateSet& tan, const VectorTemplateSet& nor, int dim) {
  TensorTemplateSet ts;
  ts.owner = tan.owner;
  ts.family = Family::gls;
  if (tan.owner.kind == PolytopeKind::cell) {
    ts.tensors = cartesian_sl(dim);
    ts.connectivity.assign(ts.tensors.size(), tan.owner);
    ts.key_a.assign(ts.tensors.size(), tan.owner);
    ts.key_b.assign(ts.tensors.size(), tan.owner);
    ts.slot_is_canonical = true;
    return ts;
  }
  // Orthogonal tangential/normal pairs give traceless dyads directly; the
  // remaining pairs are chained into deviatoric combinations.
  std::vector<Mat> leftovers;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const Vec& a = tan.vectors[i];
      const Vec& b = nor.vectors[j];
      const Mat dyad = a * b.transpose();
      if (std::abs(a.dot(b)) < 1e-12 * a.norm() * b.norm()) {
        ts.tensors.push_back(dyad);
        ts.connectivity.push_back(gls_connectivity(dyad, ts.owner, dim));
        ts.key_a.push_back(tan.targets[i]);
        ts.key_b.push_back(nor.targets[j]);
      } else {
        leftovers.push_back(dyad);
      }
    }
  for (std::size_t m = 0; m + 1 < leftovers.size(); ++m) {
    Mat c = deviatoric(leftovers[m] - leftovers[m + 1]);
    if (c.norm() < 1e-12 * (leftovers[m].norm() + leftovers[m + 1].norm()))
      c = deviatoric(leftovers[m] + leftovers[m + 1]);
    ts.tensors.push_back(c);
    ts.connectivity.push_back(dim == 2 ? PolytopeId::cell2d() : PolytopeId::cell3d());
    ts.key_a.push_back(ts.owner);
    ts.key_b.push_back(ts.owner);
  }
  const int want = dim * dim - 1;
  if (static_cast<int>(ts.tensors.size()) != want)
    throw std::logic_error("gls template set has wrong size");
  Mat stack(want, dim * dim);
  for (int i = 0; i < want; ++i)
    stack.row(i) = Eigen::Map<const Eigen::RowVectorXd>(ts.tensors[i].data(), dim * dim);
  if (Eigen::JacobiSVD<Mat>(stack).rank() != want)
    throw std::logic_error("gls template set is rank deficient");
  return ts;
}

TensorTemplateSet hz_set(const PolytopeId& owner) {
  TensorTemplateSet ts;
  ts.owner = owner;
  ts.family = Family::hz;
  ts.slot_is_canonical = true;
  if (owner.kind == PolytopeKind::vertex || owner.kind == PolytopeKind::cell) {
    ts.tensors = cartesian_sym(2);
    ts.connectivity.assign(3, owner);
    ts.key_a.assign(3, owner);
    ts.key_b.assign(3, owner);
    return ts;
  }
  // Edge basis (tau x tau, sym(tau x nu), nu x nu): the tangential-tangential
  // dyad has no normal trace and is cell type, the other two are edge type.
  const EdgeFrame fr = edge_frame(owner, 2);
  ts.tensors = {Mat(fr.tangent * fr.tangent.transpose()), sym_dyad(fr.tangent, fr.normal),
                Mat(fr.normal * fr.normal.transpose())};
  ts.connectivity = {PolytopeId::cell2d(), owner, owner};
  ts.key_a.assign(3, owner);
  ts.key_b.assign(3, owner);
  return ts;
}

TensorTemplateSet hms_set(const PolytopeId& owner, const std::vector<VectorTemplateSet>& nor) {
  TensorTemplateSet ts;
  ts.owner = owner;
  ts.family = Family::hms;
  ts.slot_is_canonical = true;
  const PolytopeId cell = PolytopeId::cell3d();
  switch (owner.kind) {
    case PolytopeKind::vertex:
    case PolytopeKind::cell:
      ts.tensors = cartesian_sym(3);
      ts.connectivity.assign(6, owner);
      ts.key_a.assign(6, owner);
      ts.key_b.assign(6, owner);
      return ts;
    case PolytopeKind::edge: {
      const EdgeFrame fr = edge_frame(owner, 3);
      const Eigen::Vector3d tau = fr.tangent;
      const Eigen::Vector3d d2 = orth(tau);
      const Eigen::Vector3d d1 = d2.cross(tau);
      const VectorTemplateSet* es = nullptr;
      for (const auto& s : nor)
        if (s.owner == owner) es = &s;
      const Vec psi1 = es->vectors[0];  // edge-face template vectors
      const Vec psi2 = es->vectors[1];
      ts.tensors = {Mat(d1 * d1.transpose()), sym_dyad(d1, d2), Mat(d2 * d2.transpose()),
                    sym_dyad(tau, psi1), sym_dyad(tau, psi2), Mat(tau * tau.transpose())};
      ts.connectivity = {owner, owner, owner, es->targets[0], es->targets[1], cell};
      ts.key_a.assign(6, owner);
      ts.key_b.assign(6, owner);
      return ts;
    }
    case PolytopeKind::face: {
      const FaceFrame fr = face_frame(owner);
      const Vec nu = fr.normal, t1 = fr.tangent1, t2 = fr.tangent2;
      ts.tensors = {Mat(nu * nu.transpose()), sym_dyad(nu, t1), sym_dyad(nu, t2),
                    Mat(t1 * t1.transpose()), sym_dyad(t1, t2), Mat(t2 * t2.transpose())};
      ts.connectivity = {owner, owner, owner, cell, cell, cell};
      ts.key_a.assign(6, owner);
      ts.key_b.assign(6, owner);
      return ts;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

std::vector<VectorTemplateSet> vector_templates(int dim, Continuity continuity) {
  if (dim == 2)
    return continuity == Continuity::tangential ? tangential_2d() : normal_2d();
  if (dim == 3)
    return continuity == Continuity::tangential ? tangential_3d() : normal_3d();
  throw std::invalid_argument("dim must be 2 or 3");
}

std::vector<TensorTemplateSet> tensor_templates(Family family, int dim) {
  if (!family_valid(family, dim))
    throw std::invalid_argument(std::string(family_name(family)) + " is not defined in " +
                                std::to_string(dim) + "D");
  std::vector<TensorTemplateSet> out;
  switch (family) {
    case Family::regge:
      for (const auto& vs : vector_templates(dim, Continuity::tangential))
        out.push_back(sym_family_set(vs, family, dim));
      return out;
    case Family::hhj:
    case Family::ps:
      for (const auto& vs : vector_templates(dim, Continuity::normal))
        out.push_back(sym_family_set(vs, family, dim));
      return out;
    case Family::hz:
      for (const auto& p : enumerate_polytopes(2).all()) out.push_back(hz_set(p));
      return out;
    case Family::hms: {
      const auto nor = vector_templates(3, Continuity::normal);
      for (const auto& p : enumerate_polytopes(3).all()) out.push_back(hms_set(p, nor));
      return out;
    }
    case Family::gls: {
      const auto tan = vector_templates(dim, Continuity::tangential);
      const auto nor = vector_templates(dim, Continuity::normal);
      for (std::size_t i = 0; i < tan.size(); ++i) out.push_back(gls_set(tan[i], nor[i], dim));
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace ptfe
