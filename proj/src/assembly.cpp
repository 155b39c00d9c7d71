#include "ptfe/assembly.hpp"

#include <Eigen/SparseLU>
#include <stdexcept>

namespace ptfe {

int quadrature_degree(int order, bool curved) { return 2 * order + 2 + (curved ? 2 : 0); }

Vec solve_linear(const SparseSystem& system) {
  const int n = static_cast<int>(system.A.rows());
  std::vector<char> is_constrained(n, 0);
  Vec full = Vec::Zero(n);
  for (std::size_t i = 0; i < system.constrained.size(); ++i) {
    is_constrained[system.constrained[i]] = 1;
    full(system.constrained[i]) = system.constrained_values(i);
  }
  std::vector<int> reduced_of(n, -1);
  std::vector<int> full_of;
  for (int i = 0; i < n; ++i)
    if (!is_constrained[i]) {
      reduced_of[i] = static_cast<int>(full_of.size());
      full_of.push_back(i);
    }
  const int m = static_cast<int>(full_of.size());
  Vec b = Vec::Zero(m);
  for (int i = 0; i < m; ++i) b(i) = system.rhs(full_of[i]);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(system.A.nonZeros());
  for (int k = 0; k < system.A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.A, k); it; ++it) {
      const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
      if (is_constrained[r]) continue;
      if (is_constrained[c])
        b(reduced_of[r]) -= it.value() * full(c);
      else
        trips.emplace_back(reduced_of[r], reduced_of[c], it.value());
    }
  Eigen::SparseMatrix<double> A(m, m);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
  if (lu.info() != Eigen::Success) throw std::runtime_error("sparse factorization failed");
  const Vec x = lu.solve(b);
  const double resid = (A * x - b).norm();
  if (!(resid <= 1e-8 * std::max(1.0, b.norm())))
    throw std::runtime_error("linear solve residual too large: " + std::to_string(resid));
  for (int i = 0; i < m; ++i) full(full_of[i]) = x(i);
  return full;
}

Vec CondensationRecord::recover(const Vec& retained_values) const {
  if (interior.empty()) return Vec();
  return K_cc_inv * (f_c - K_cr * retained_values);
}

CondensationRecord static_condense(Mat& K, Vec& f, const std::vector<bool>& cell_mask) {
  CondensationRecord rec;
  const int n = static_cast<int>(K.rows());
  for (int i = 0; i < n; ++i) (cell_mask[i] ? rec.interior : rec.retained).push_back(i);
  if (rec.interior.empty()) return rec;
  const int nr = static_cast<int>(rec.retained.size());
  const int nc = static_cast<int>(rec.interior.size());
  Mat K_rr(nr, nr), K_rc(nr, nc), K_cc(nc, nc);
  Vec f_r(nr), f_c(nc);
  for (int i = 0; i < nr; ++i) {
    f_r(i) = f(rec.retained[i]);
    for (int j = 0; j < nr; ++j) K_rr(i, j) = K(rec.retained[i], rec.retained[j]);
    for (int j = 0; j < nc; ++j) K_rc(i, j) = K(rec.retained[i], rec.interior[j]);
  }
  for (int i = 0; i < nc; ++i) {
    f_c(i) = f(rec.interior[i]);
    for (int j = 0; j < nc; ++j) K_cc(i, j) = K(rec.interior[i], rec.interior[j]);
  }
  Eigen::FullPivLU<Mat> lu(K_cc);
  if (!lu.isInvertible()) throw std::runtime_error("singular interior block in static condensation");
  rec.K_cc_inv = lu.inverse();
  rec.K_cr = K_rc.transpose();
  rec.f_c = f_c;
  K = K_rr - K_rc * rec.K_cc_inv * K_rc.transpose();
  f = f_r - K_rc * rec.K_cc_inv * f_c;
  return rec;
}

}  // namespace ptfe
