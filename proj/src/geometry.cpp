#include "ptfe/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace ptfe {

namespace {

Mat affine_jacobian_from(const std::vector<Vec>& v) {
  const int dim = static_cast<int>(v[0].size());
  Mat J(dim, dim);
  if (dim == 2) {
    J.col(0) = v[2] - v[0];  // d/dxi   (lambda_2 = xi)
    J.col(1) = v[1] - v[0];  // d/deta  (lambda_1 = eta)
  } else {
    J.col(0) = v[3] - v[0];
    J.col(1) = v[2] - v[0];
    J.col(2) = v[1] - v[0];
  }
  return J;
}

double simplex_scale(const std::vector<Vec>& v) {
  double s = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) s = std::max(s, (v[i] - v[0]).norm());
  return s;
}

}  // namespace

GeometricMap::GeometricMap(std::vector<Vec> vertices)
    : dim_(static_cast<int>(vertices[0].size())), order_(1), vertices_(std::move(vertices)) {
  if (static_cast<int>(vertices_.size()) != dim_ + 1)
    throw std::invalid_argument("affine map needs dim+1 vertices");
  affine_jacobian_ = affine_jacobian_from(vertices_);
  const double scale = simplex_scale(vertices_);
  if (std::abs(affine_jacobian_.determinant()) < 1e-14 * std::pow(scale, dim_))
    throw std::invalid_argument("degenerate simplex");
}

GeometricMap::GeometricMap(std::vector<Vec> vertices, std::vector<Vec> edge_points)
    : dim_(static_cast<int>(vertices[0].size())),
      order_(2),
      vertices_(std::move(vertices)),
      edge_points_(std::move(edge_points)) {
  if (static_cast<int>(vertices_.size()) != dim_ + 1)
    throw std::invalid_argument("quadratic map needs dim+1 vertices");
  const auto rs = enumerate_polytopes(dim_);
  if (edge_points_.empty())
    for (const auto& e : rs.edges)
      edge_points_.push_back(0.5 * (vertices_[e.idx[0]] + vertices_[e.idx[1]]));
  if (edge_points_.size() != rs.edges.size())
    throw std::invalid_argument("one control point per edge required");
  affine_jacobian_ = affine_jacobian_from(vertices_);
}

Vec GeometricMap::apply(const Vec& refpoint) const {
  if (order_ == 1) {
    const Vec lambda = barycentric(dim_, refpoint);
    Vec x = Vec::Zero(dim_);
    for (int i = 0; i <= dim_; ++i) x += lambda(i) * vertices_[i];
    return x;
  }
  const Vec lambda = barycentric(dim_, refpoint);
  Vec x = Vec::Zero(dim_);
  for (int i = 0; i <= dim_; ++i) x += lambda(i) * (2 * lambda(i) - 1) * vertices_[i];
  const auto rs = enumerate_polytopes(dim_);
  for (std::size_t e = 0; e < rs.edges.size(); ++e) {
    const auto& id = rs.edges[e];
    x += 4 * lambda(id.idx[0]) * lambda(id.idx[1]) * edge_points_[e];
  }
  return x;
}

Mat GeometricMap::jacobian_matrix(const Vec& refpoint) const {
  if (order_ == 1) return affine_jacobian_;
  // dlambda/dxi rows: lambda_0 = 1 - sum, lambda_{d+1-k} = xi_k.
  const Vec lambda = barycentric(dim_, refpoint);
  Mat dl(dim_ + 1, dim_);  // dl(i, k) = d lambda_i / d xi_k
  dl.setZero();
  dl.row(0).setConstant(-1.0);
  for (int k = 0; k < dim_; ++k) dl(dim_ - k, k) = 1.0;
  Mat J = Mat::Zero(dim_, dim_);
  for (int i = 0; i <= dim_; ++i)
    J += vertices_[i] * ((4 * lambda(i) - 1) * dl.row(i));
  const auto rs = enumerate_polytopes(dim_);
  for (std::size_t e = 0; e < rs.edges.size(); ++e) {
    const int a = rs.edges[e].idx[0], b = rs.edges[e].idx[1];
    J += edge_points_[e] * (4.0 * (lambda(a) * dl.row(b) + lambda(b) * dl.row(a)));
  }
  return J;
}

std::vector<Mat> GeometricMap::jacobian_derivative(const Vec& refpoint) const {
  std::vector<Mat> H(dim_, Mat::Zero(dim_, dim_));
  if (order_ == 1) return H;
  (void)refpoint;  // constant for quadratic maps
  Mat dl(dim_ + 1, dim_);
  dl.setZero();
  dl.row(0).setConstant(-1.0);
  for (int k = 0; k < dim_; ++k) dl(dim_ - k, k) = 1.0;
  const auto rs = enumerate_polytopes(dim_);
  for (int k = 0; k < dim_; ++k) {
    for (int i = 0; i <= dim_; ++i)
      H[k] += vertices_[i] * (4.0 * dl(i, k) * dl.row(i));
    for (std::size_t e = 0; e < rs.edges.size(); ++e) {
      const int a = rs.edges[e].idx[0], b = rs.edges[e].idx[1];
      H[k] += edge_points_[e] * (4.0 * (dl(a, k) * dl.row(b) + dl(b, k) * dl.row(a)));
    }
  }
  return H;
}

JacobianData jacobian(const GeometricMap& map, const Vec& refpoint) {
  JacobianData jd;
  jd.refpoint = refpoint;
  jd.J = map.jacobian_matrix(refpoint);
  jd.det = jd.J.determinant();
  if (jd.det == 0.0) throw std::domain_error("singular jacobian");
  jd.Jinv = jd.J.inverse();
  jd.JinvT = jd.Jinv.transpose();
  jd.cof = jd.det * jd.JinvT;
  return jd;
}

EdgeFrame physical_edge_frame(const Vec& a, const Vec& b) {
  EdgeFrame fr;
  fr.tangent = b - a;
  if (a.size() == 2) fr.normal = rotation2d() * fr.tangent;
  return fr;
}

FaceFrame physical_face_frame(const Vec& a, const Vec& b, const Vec& c) {
  FaceFrame fr;
  const Eigen::Vector3d t01 = b - a, t02 = c - a;
  const Eigen::Vector3d n = t01.cross(t02);
  const Eigen::Vector3d t2 = orth(n);
  fr.normal = n;
  fr.tangent2 = t2;
  fr.tangent1 = n.cross(t2);
  return fr;
}

ElementTransforms element_transforms(int dim, const std::vector<Vec>& pv) {
  const auto rs = enumerate_polytopes(dim);
  ElementTransforms tr;
  for (const auto& e : rs.edges) {
    const EdgeFrame ref = edge_frame(e, dim);
    const EdgeFrame phys = physical_edge_frame(pv[e.idx[0]], pv[e.idx[1]]);
    Mat T;
    if (dim == 2) {
      T = (phys.tangent * ref.tangent.transpose() + phys.normal * ref.normal.transpose()) /
          ref.tangent.squaredNorm();
    } else {
      const Eigen::Vector3d tau = ref.tangent;
      const Eigen::Vector3d delta2 = orth(tau);
      const Eigen::Vector3d delta1 = delta2.cross(tau);
      const Eigen::Vector3d t = phys.tangent;
      const Eigen::Vector3d d2 = orth(t);
      const Eigen::Vector3d d1 = d2.cross(t);
      T = t * tau.transpose() / tau.squaredNorm() + d1 * delta1.transpose() / delta1.squaredNorm() +
          d2 * delta2.transpose() / delta2.squaredNorm();
    }
    tr.edge.push_back(T);
  }
  for (const auto& f : rs.faces) {
    const FaceFrame ref = face_frame(f);
    const FaceFrame phys = physical_face_frame(pv[f.idx[0]], pv[f.idx[1]], pv[f.idx[2]]);
    Mat T = phys.normal * ref.normal.transpose() / ref.normal.squaredNorm() +
            phys.tangent1 * ref.tangent1.transpose() / ref.tangent1.squaredNorm() +
            phys.tangent2 * ref.tangent2.transpose() / ref.tangent2.squaredNorm();
    tr.face.push_back(T);
  }
  return tr;
}

Mat push_forward(MappingRule rule, const JacobianData& jd, const Mat& ref_value,
                 const PolytopeId& owner, const ElementTransforms& transforms, int slot) {
  switch (rule) {
    case MappingRule::double_covariant:
      return jd.JinvT * ref_value * jd.Jinv;
    case MappingRule::double_contravariant:
      return (jd.J * ref_value * jd.J.transpose()) / (jd.det * jd.det);
    case MappingRule::mixed_cov_contra:
      return (jd.JinvT * ref_value * jd.J.transpose()) / jd.det;
    case MappingRule::hz_rule: {
      if (owner.kind != PolytopeKind::edge) return ref_value;
      const auto rs = enumerate_polytopes(2);
      const Mat& T = transforms.edge[rs.edge_index(owner)];
      return T * ref_value * T.transpose();
    }
    case MappingRule::hms_rule: {
      if (owner.kind == PolytopeKind::vertex || owner.kind == PolytopeKind::cell) return ref_value;
      const auto rs = enumerate_polytopes(3);
      if (owner.kind == PolytopeKind::edge) {
        // Dyads of the orthogonal triplet {tau, d1, d2} map with T_j; the
        // mixed sym(tau x psi) tensors with (1/det J) J Y J^T.
        if (slot == 3 || slot == 4) return (jd.J * ref_value * jd.J.transpose()) / jd.det;
        const Mat& T = transforms.edge[rs.edge_index(owner)];
        return T * ref_value * T.transpose();
      }
      const Mat& T = transforms.face[rs.face_index(owner)];
      return T * ref_value * T.transpose();
    }
  }
  throw std::logic_error("unreachable");
}

double push_divergence(const JacobianData& jd, double ref_div) { return ref_div / jd.det; }

}  // namespace ptfe
