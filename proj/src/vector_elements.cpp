#include "ptfe/vector_elements.hpp"

#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

#include "ptfe/quadrature.hpp"

namespace ptfe {

const char* vector_kind_name(VectorKind k) {
  switch (k) {
    case VectorKind::n2: return "n2";
    case VectorKind::bdm: return "bdm";
    case VectorKind::rt: return "rt";
    case VectorKind::dg_scalar: return "dg_scalar";
    case VectorKind::dg_vector: return "dg_vector";
    case VectorKind::cg: return "cg";
  }
  return "?";
}

VectorElementSpace::VectorElementSpace(VectorKind kind, int dim, int order)
    : kind_(kind), dim_(dim), order_(order) {
  if (dim != 2) throw std::invalid_argument("vector element spaces are built for dim 2");
  switch (kind) {
    case VectorKind::n2:
      if (order < 1) throw std::invalid_argument("n2 requires order >= 1");
      build_template_kind(Continuity::tangential);
      break;
    case VectorKind::bdm:
      if (order < 1) throw std::invalid_argument("bdm requires order >= 1");
      build_template_kind(Continuity::normal);
      break;
    case VectorKind::rt:
      if (order < 0) throw std::invalid_argument("rt requires order >= 0");
      build_rt();
      break;
    case VectorKind::dg_scalar:
    case VectorKind::dg_vector:
      if (order < 0) throw std::invalid_argument("dg requires order >= 0");
      build_dg();
      break;
    case VectorKind::cg:
      if (order < 1) throw std::invalid_argument("cg requires order >= 1");
      build_cg();
      break;
  }
}

int VectorElementSpace::value_size() const {
  return (kind_ == VectorKind::dg_scalar || kind_ == VectorKind::cg) ? 1 : dim_;
}

void VectorElementSpace::build_template_kind(Continuity continuity) {
  scalar_.emplace(dim_, order_);
  const auto sets = vector_templates(dim_, continuity);
  for (const auto& set : sets) {
    for (const auto& sf : scalar_->functions()) {
      if (!(sf.owner == set.owner)) continue;
      for (std::size_t q = 0; q < set.vectors.size(); ++q) {
        vectors_.push_back(set.vectors[q]);
        dofs_.push_back({set.owner, set.targets[q], sf.local, static_cast<int>(q), set.targets[q],
                         set.targets[q], false});
      }
    }
  }
}

void VectorElementSpace::build_dg() {
  for (int deg = 0; deg <= order_; ++deg)
    for (int a = deg; a >= 0; --a) monomials_.push_back({a, deg - a});
  const PolytopeId cell = PolytopeId::cell2d();
  const int ncomp = kind_ == VectorKind::dg_scalar ? 1 : dim_;
  for (std::size_t m = 0; m < monomials_.size(); ++m)
    for (int c = 0; c < ncomp; ++c)
      dofs_.push_back({cell, cell, static_cast<int>(m), c, cell, cell, true});
}

void VectorElementSpace::build_cg() {
  scalar_.emplace(dim_, order_);
  for (const auto& sf : scalar_->functions())
    dofs_.push_back({sf.owner, sf.owner, sf.local, 0, sf.owner, sf.owner, true});
}

Mat VectorElementSpace::eval_rt_raw(const Vec& point) const {
  const int k = order_;
  const int nmono = static_cast<int>(monomials_.size());
  const int nraw = 2 * nmono + (k + 1);
  Mat vals = Mat::Zero(2, nraw);
  for (int m = 0; m < nmono; ++m) {
    const double v = std::pow(point(0), monomials_[m][0]) * std::pow(point(1), monomials_[m][1]);
    vals(0, 2 * m) = v;
    vals(1, 2 * m + 1) = v;
  }
  for (int a = 0; a <= k; ++a) {
    const double h = std::pow(point(0), a) * std::pow(point(1), k - a);
    vals(0, 2 * nmono + a) = point(0) * h;
    vals(1, 2 * nmono + a) = point(1) * h;
  }
  return vals;
}

Vec VectorElementSpace::eval_rt_raw_div(const Vec& point) const {
  const int k = order_;
  const int nmono = static_cast<int>(monomials_.size());
  const int nraw = 2 * nmono + (k + 1);
  auto dmono = [&](int a, int b, int wrt) {
    const int e = wrt == 0 ? a : b;
    if (e == 0) return 0.0;
    return e * std::pow(point(0), wrt == 0 ? a - 1 : a) * std::pow(point(1), wrt == 0 ? b : b - 1);
  };
  Vec divs = Vec::Zero(nraw);
  for (int m = 0; m < nmono; ++m) {
    divs(2 * m) = dmono(monomials_[m][0], monomials_[m][1], 0);
    divs(2 * m + 1) = dmono(monomials_[m][0], monomials_[m][1], 1);
  }
  for (int a = 0; a <= k; ++a)
    divs(2 * nmono + a) = (k + 2) * std::pow(point(0), a) * std::pow(point(1), k - a);
  return divs;
}

void VectorElementSpace::build_rt() {
  const int k = order_;
  for (int deg = 0; deg <= k; ++deg)
    for (int a = deg; a >= 0; --a) monomials_.push_back({a, deg - a});
  const int nmono = static_cast<int>(monomials_.size());
  const int n = (k + 1) * (k + 3);
  const int nraw = 2 * nmono + (k + 1);
  if (nraw != n) throw std::logic_error("rt raw space dimension mismatch");

  const auto rs = enumerate_polytopes(2);
  Mat V = Mat::Zero(n, n);  // V(f, j) = functional f applied to raw function j
  int row = 0;
  std::vector<double> gp, gw;
  gauss_legendre_01(k + 2, gp, gw);
  for (const auto& e : rs.edges) {
    const EdgeFrame fr = edge_frame(e, 2);
    const Vec a = rs.vertices[e.idx[0]];
    for (int m = 0; m <= k; ++m, ++row) {
      for (std::size_t q = 0; q < gp.size(); ++q) {
        const Vec p = a + gp[q] * fr.tangent;
        const auto [Pm, dPm] = legendre(m, 2 * gp[q] - 1);
        V.row(row) += gw[q] * Pm * (fr.normal.transpose() * eval_rt_raw(p));
      }
    }
  }
  const QuadratureRule qr = quadrature_rule(2, 2 * k + 2);
  for (int m = 0; m < nmono && monomials_[m][0] + monomials_[m][1] <= k - 1; ++m)
    for (int c = 0; c < 2; ++c, ++row)
      for (int q = 0; q < qr.size(); ++q) {
        const double mv = std::pow(qr.points[q](0), monomials_[m][0]) *
                          std::pow(qr.points[q](1), monomials_[m][1]);
        V.row(row) += qr.weights[q] * mv * eval_rt_raw(qr.points[q]).row(c);
      }
  if (row != n) throw std::logic_error("rt functional count mismatch");
  Eigen::FullPivLU<Mat> lu(V);
  if (!lu.isInvertible()) throw std::logic_error("rt moment matrix singular");
  rt_coeffs_ = lu.inverse();  // nodal_i = sum_j rt_coeffs_(j, i) raw_j

  const PolytopeId cell = PolytopeId::cell2d();
  for (const auto& e : rs.edges)
    for (int m = 0; m <= k; ++m) dofs_.push_back({e, e, m, 0, e, e, true});
  for (int m = 0; m < nmono && monomials_[m][0] + monomials_[m][1] <= k - 1; ++m)
    for (int c = 0; c < 2; ++c) dofs_.push_back({cell, cell, m, c, cell, cell, true});
}

Mat VectorElementSpace::eval(const Vec& point) const {
  switch (kind_) {
    case VectorKind::n2:
    case VectorKind::bdm: {
      Mat out(dim_, size());
      for (int i = 0; i < size(); ++i) {
        const auto [v, g] = scalar_->eval({dofs_[i].owner, dofs_[i].scalar_local}, point);
        out.col(i) = v * vectors_[i];
      }
      return out;
    }
    case VectorKind::rt:
      return eval_rt_raw(point) * rt_coeffs_;
    case VectorKind::dg_scalar: {
      Mat out(1, size());
      for (int i = 0; i < size(); ++i)
        out(0, i) = std::pow(point(0), monomials_[dofs_[i].scalar_local][0]) *
                    std::pow(point(1), monomials_[dofs_[i].scalar_local][1]);
      return out;
    }
    case VectorKind::dg_vector: {
      Mat out = Mat::Zero(dim_, size());
      for (int i = 0; i < size(); ++i)
        out(dofs_[i].slot, i) = std::pow(point(0), monomials_[dofs_[i].scalar_local][0]) *
                                std::pow(point(1), monomials_[dofs_[i].scalar_local][1]);
      return out;
    }
    case VectorKind::cg: {
      Mat out(1, size());
      for (int i = 0; i < size(); ++i) {
        const auto [v, g] = scalar_->eval({dofs_[i].owner, dofs_[i].scalar_local}, point);
        out(0, i) = v;
      }
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

Vec VectorElementSpace::eval_divergence(const Vec& point) const {
  switch (kind_) {
    case VectorKind::rt:
      return (eval_rt_raw_div(point).transpose() * rt_coeffs_).transpose();
    case VectorKind::n2:
    case VectorKind::bdm: {
      Vec out(size());
      for (int i = 0; i < size(); ++i) {
        const auto [v, g] = scalar_->eval({dofs_[i].owner, dofs_[i].scalar_local}, point);
        out(i) = g.dot(vectors_[i]);
      }
      return out;
    }
    default:
      throw std::logic_error("divergence not defined for this kind");
  }
}

Mat VectorElementSpace::eval_gradients(const Vec& point) const {
  if (value_size() != 1) throw std::logic_error("gradients only for scalar kinds");
  if (kind_ == VectorKind::cg) {
    Mat out(dim_, size());
    for (int i = 0; i < size(); ++i) {
      const auto [v, g] = scalar_->eval({dofs_[i].owner, dofs_[i].scalar_local}, point);
      out.col(i) = g;
    }
    return out;
  }
  Mat out(dim_, size());
  for (int i = 0; i < size(); ++i) {
    const auto& mo = monomials_[dofs_[i].scalar_local];
    const double dx =
        mo[0] == 0 ? 0.0 : mo[0] * std::pow(point(0), mo[0] - 1) * std::pow(point(1), mo[1]);
    const double dy =
        mo[1] == 0 ? 0.0 : mo[1] * std::pow(point(0), mo[0]) * std::pow(point(1), mo[1] - 1);
    out(0, i) = dx;
    out(1, i) = dy;
  }
  return out;
}

}  // namespace ptfe
