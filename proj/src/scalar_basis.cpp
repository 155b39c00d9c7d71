#include "ptfe/scalar_basis.hpp"

#include <cmath>
#include <stdexcept>

namespace ptfe {

std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, d0 = 0.0;
  if (n == 0) return {p0, d0};
  double p1 = x, d1 = 1.0;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    const double d2 = d0 + (2 * k - 1) * p1;
    p0 = p1;
    d0 = d1;
    p1 = p2;
    d1 = d2;
  }
  return {p1, d1};
}

int ScalarBasis::dimension(int dim, int order) {
  return dim == 2 ? (order + 2) * (order + 1) / 2 : (order + 3) * (order + 2) * (order + 1) / 6;
}

ScalarBasis::ScalarBasis(int dim, int order) : dim_(dim), order_(order), rs_(enumerate_polytopes(dim)) {
  if (order < 1) throw std::invalid_argument("scalar basis requires order >= 1");
  const int p = order;
  for (const auto& v : rs_.vertex_ids) functions_.push_back({v, 0});
  for (const auto& e : rs_.edges)
    for (int k = 0; k < p - 1; ++k) functions_.push_back({e, k});
  for (const auto& f : rs_.faces) {
    int k = 0;
    for (int a = 0; a <= p - 3; ++a)
      for (int b = 0; a + b <= p - 3; ++b) functions_.push_back({f, k++});
  }
  {
    int k = 0;
    if (dim == 2) {
      for (int a = 0; a <= p - 3; ++a)
        for (int b = 0; a + b <= p - 3; ++b) functions_.push_back({rs_.cell, k++});
    } else {
      for (int a = 0; a <= p - 4; ++a)
        for (int b = 0; a + b <= p - 4; ++b)
          for (int c = 0; a + b + c <= p - 4; ++c) functions_.push_back({rs_.cell, k++});
    }
  }
  if (total() != dimension(dim, order)) throw std::logic_error("scalar basis count mismatch");
}

int ScalarBasis::index_of(const ScalarFunctionId& fid) const {
  for (int i = 0; i < total(); ++i)
    if (functions_[i] == fid) return i;
  throw std::invalid_argument("unknown scalar function id");
}

std::map<PolytopeId, int> ScalarBasis::polytope_counts() const {
  std::map<PolytopeId, int> counts;
  for (const auto& p : rs_.all()) counts[p] = 0;
  for (const auto& f : functions_) counts[f.owner] += 1;
  return counts;
}

int ScalarBasis::count(const PolytopeId& p) const {
  int n = 0;
  for (const auto& f : functions_)
    if (f.owner == p) ++n;
  return n;
}

namespace {

/// Decomposes a flat kernel index into the (a,b[,c]) Legendre degrees used by
/// face and cell bubbles.
std::array<int, 3> kernel_degrees(int local, int budget, int nvars) {
  int k = 0;
  if (nvars == 2) {
    for (int a = 0; a <= budget; ++a)
      for (int b = 0; a + b <= budget; ++b)
        if (k++ == local) return {a, b, 0};
  } else {
    for (int a = 0; a <= budget; ++a)
      for (int b = 0; a + b <= budget; ++b)
        for (int c = 0; a + b + c <= budget; ++c)
          if (k++ == local) return {a, b, c};
  }
  throw std::logic_error("kernel index out of range");
}

}  // namespace

void ScalarBasis::eval_one(const ScalarFunctionId& fid, const Vec& lambda, double& value,
                           Vec& grad_lambda) const {
  const int p = order_;
  grad_lambda.setZero(lambda.size());
  switch (fid.owner.kind) {
    case PolytopeKind::vertex: {
      const int i = fid.owner.idx[0];
      value = lambda(i);
      grad_lambda(i) = 1.0;
      return;
    }
    case PolytopeKind::edge: {
      const int i = fid.owner.idx[0], j = fid.owner.idx[1];
      const auto [P, dP] = legendre(fid.local, lambda(j) - lambda(i));
      value = lambda(i) * lambda(j) * P;
      grad_lambda(i) = lambda(j) * P - lambda(i) * lambda(j) * dP;
      grad_lambda(j) = lambda(i) * P + lambda(i) * lambda(j) * dP;
      return;
    }
    case PolytopeKind::face:
    case PolytopeKind::cell: {
      if (fid.owner.kind == PolytopeKind::cell && dim_ == 3) {
        const auto [a, b, c] = kernel_degrees(fid.local, p - 4, 3);
        const auto [Pa, dPa] = legendre(a, lambda(1) - lambda(0));
        const auto [Pb, dPb] = legendre(b, 2 * lambda(2) - 1);
        const auto [Pc, dPc] = legendre(c, 2 * lambda(3) - 1);
        const double bubble = lambda(0) * lambda(1) * lambda(2) * lambda(3);
        value = bubble * Pa * Pb * Pc;
        grad_lambda(0) = lambda(1) * lambda(2) * lambda(3) * Pa * Pb * Pc - bubble * dPa * Pb * Pc;
        grad_lambda(1) = lambda(0) * lambda(2) * lambda(3) * Pa * Pb * Pc + bubble * dPa * Pb * Pc;
        grad_lambda(2) = lambda(0) * lambda(1) * lambda(3) * Pa * Pb * Pc + bubble * Pa * 2 * dPb * Pc;
        grad_lambda(3) = lambda(0) * lambda(1) * lambda(2) * Pa * Pb * Pc + bubble * Pa * Pb * 2 * dPc;
        return;
      }
      const int i = fid.owner.idx[0], j = fid.owner.idx[1], k = fid.owner.idx[2];
      const auto [a, b, c0] = kernel_degrees(fid.local, p - 3, 2);
      (void)c0;
      const auto [Pa, dPa] = legendre(a, lambda(j) - lambda(i));
      const auto [Pb, dPb] = legendre(b, 2 * lambda(k) - 1);
      const double bubble = lambda(i) * lambda(j) * lambda(k);
      value = bubble * Pa * Pb;
      grad_lambda(i) = lambda(j) * lambda(k) * Pa * Pb - bubble * dPa * Pb;
      grad_lambda(j) = lambda(i) * lambda(k) * Pa * Pb + bubble * dPa * Pb;
      grad_lambda(k) = lambda(i) * lambda(j) * Pa * Pb + bubble * Pa * 2 * dPb;
      return;
    }
  }
  throw std::logic_error("unreachable");
}

std::pair<double, Vec> ScalarBasis::eval(const ScalarFunctionId& fid, const Vec& point) const {
  const Vec lambda = barycentric(dim_, point);
  double value = 0.0;
  Vec gl;
  eval_one(fid, lambda, value, gl);
  // d lambda / d xi is constant: rows are grad xi of each barycentric.
  Vec grad = Vec::Zero(dim_);
  if (dim_ == 2) {
    grad(0) = -gl(0) + gl(2);
    grad(1) = -gl(0) + gl(1);
  } else {
    grad(0) = -gl(0) + gl(3);
    grad(1) = -gl(0) + gl(2);
    grad(2) = -gl(0) + gl(1);
  }
  return {value, grad};
}

void ScalarBasis::eval_all(const Vec& point, Vec& values, Mat& grads) const {
  const int n = total();
  values.resize(n);
  grads.resize(dim_, n);
  for (int i = 0; i < n; ++i) {
    auto [v, g] = eval(functions_[i], point);
    values(i) = v;
    grads.col(i) = g;
  }
}

}  // namespace ptfe
