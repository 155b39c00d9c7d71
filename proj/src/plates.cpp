#include "ptfe/plates.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "ptfe/vector_elements.hpp"

namespace ptfe {

const char* formulation_name(Formulation f) {
  switch (f) {
    case Formulation::prm: return "prm";
    case Formulation::ffsrm: return "ffsrm";
    case Formulation::tdnns: return "tdnns";
  }
  return "?";
}

Formulation formulation_from_name(const std::string& name) {
  for (Formulation f : {Formulation::prm, Formulation::ffsrm, Formulation::tdnns})
    if (name == formulation_name(f)) return f;
  throw std::invalid_argument("unknown formulation: " + name);
}

namespace {

Eigen::Matrix2d sym2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  Eigen::Matrix2d m = a * b.transpose();
  return 0.5 * (m + m.transpose());
}

/// Combined multi-field dof space over one mesh.
struct CombinedSpace {
  struct Field {
    std::vector<DofRecord> records;
    DofMap dm;
    int offset = 0;
    int local_offset = 0;
  };
  std::vector<Field> fields;
  int total = 0;
  int nlocal = 0;

  int add(std::vector<DofRecord> recs, const Mesh& mesh) {
    Field f;
    f.records = std::move(recs);
    f.dm = build_dofmap(mesh, f.records);
    f.offset = total;
    f.local_offset = nlocal;
    total += f.dm.total;
    nlocal += static_cast<int>(f.records.size());
    fields.push_back(std::move(f));
    return static_cast<int>(fields.size()) - 1;
  }

  std::vector<int> element_globals(int e) const {
    std::vector<int> out(nlocal);
    for (const auto& f : fields)
      for (std::size_t i = 0; i < f.records.size(); ++i)
        out[f.local_offset + i] = f.offset + f.dm.element_dofs[e][i];
    return out;
  }

  std::vector<bool> cell_mask() const {
    std::vector<bool> mask(nlocal, false);
    for (const auto& f : fields)
      for (std::size_t i = 0; i < f.records.size(); ++i)
        mask[f.local_offset + i] = f.records[i].connectivity.kind == PolytopeKind::cell;
    return mask;
  }

  DofStats stats() const {
    DofStats s;
    for (const auto& f : fields) {
      s.total += f.dm.total;
      s.connected += f.dm.connected;
    }
    return s;
  }
};

/// Outward reference normals of the local edges (0,1), (0,2), (1,2).
Vec reference_outward_normal(int local_edge) {
  Vec n(2);
  if (local_edge == 0)
    n << -1, 0;
  else if (local_edge == 1)
    n << 0, -1;
  else
    n << 1, 1;
  return n;
}

struct EdgePoint {
  Vec ref;          // reference coordinates
  Vec x;            // physical coordinates
  double weight;    // arc measure times gauss weight
  Vec unit_normal;  // outward
};

std::vector<EdgePoint> edge_quadrature(const GeometricMap& map, int local_edge, int npts) {
  const auto rs = enumerate_polytopes(2);
  const auto& e = rs.edges[local_edge];
  const Vec a = rs.vertices[e.idx[0]];
  const Vec tau = rs.vertices[e.idx[1]] - rs.vertices[e.idx[0]];
  std::vector<double> gp, gw;
  gauss_legendre_01(npts, gp, gw);
  std::vector<EdgePoint> out;
  for (int q = 0; q < npts; ++q) {
    EdgePoint ep;
    ep.ref = a + gp[q] * tau;
    const JacobianData jd = jacobian(map, ep.ref);
    ep.x = map.apply(ep.ref);
    const Vec dxds = jd.J * tau;
    ep.weight = gw[q] * dxds.norm();
    Vec n = (jd.det > 0 ? 1.0 : -1.0) * (jd.cof * reference_outward_normal(local_edge));
    ep.unit_normal = n / n.norm();
    out.push_back(ep);
  }
  return out;
}

/// Pushed template tensors of every basis function at one jacobian.
std::vector<Mat> pushed_tensors(const ElementSpace& sp, const JacobianData& jd,
                                const ElementTransforms& tr) {
  std::vector<Mat> out;
  out.reserve(sp.functions.size());
  for (const auto& f : sp.functions)
    out.push_back(push_forward(f.rule, jd, f.tensor, f.owner, tr, f.template_slot));
  return out;
}

/// Covariantly mapped values and physical gradients of a template vector
/// space (rotations). dJ carries the jacobian derivative for curved elements.
void covariant_values_gradients(const VectorElementSpace& sp, const JacobianData& jd,
                                const std::vector<Mat>& dJ, const Vec& refpt, Mat& values,
                                std::vector<Mat>& grads) {
  const int n = sp.size();
  values.resize(2, n);
  grads.assign(n, Mat::Zero(2, 2));
  const ScalarBasis& sb = *sp.scalar();
  for (int i = 0; i < n; ++i) {
    const auto& rec = sp.dof_records()[i];
    const auto [nv, ng] = sb.eval({rec.owner, rec.scalar_local}, refpt);
    const Vec psi = sp.template_vector(i);
    const Vec phi = jd.JinvT * psi;
    values.col(i) = nv * phi;
    Mat cols(2, 2);
    for (int k = 0; k < 2; ++k) {
      Vec col = phi * ng(k);
      if (dJ[k].cwiseAbs().maxCoeff() > 0)
        col += (-jd.JinvT * dJ[k].transpose() * jd.JinvT) * psi * nv;
      cols.col(k) = col;
    }
    grads[i] = cols * jd.Jinv;
  }
}

struct BoundaryConditions {
  std::function<double(const Vec&)> exact_w;  // nullptr means homogeneous
  std::function<Mat(const Vec&)> exact_moment;
};

/// Values of the constrained deflection dofs of a CG field: vertex values plus
/// per-edge L2 projections of the residual trace onto the edge kernels.
void cg_boundary_values(const Mesh& mesh, const VectorElementSpace& cg, const DofMap& dm,
                        const std::function<double(const Vec&)>& w_exact,
                        std::vector<int>& dofs_out, Vec& values_out) {
  const auto recs = cg.dof_records();
  const auto dofs = boundary_dofs(mesh, recs, dm, BoundarySelector::deflection);
  Vec values = Vec::Zero(dofs.size());
  if (w_exact) {
    std::map<int, int> pos;
    for (std::size_t i = 0; i < dofs.size(); ++i) pos[dofs[i]] = static_cast<int>(i);
    const int p = cg.order();
    const auto rs = enumerate_polytopes(2);
    std::vector<double> gp, gw;
    gauss_legendre_01(p + 2, gp, gw);
    for (int e = 0; e < mesh.num_elements(); ++e) {
      for (std::size_t i = 0; i < recs.size(); ++i) {
        if (recs[i].owner.kind != PolytopeKind::vertex) continue;
        const int gd = dm.element_dofs[e][i];
        auto it = pos.find(gd);
        if (it == pos.end()) continue;
        values(it->second) = w_exact(mesh.vertices[mesh.elements[e][recs[i].owner.idx[0]]]);
      }
      // per boundary edge: project the non-linear part of w onto the kernels
      for (int le = 0; le < 3; ++le) {
        const int ge = mesh.element_edges[e][le];
        if (!mesh.edge_on_boundary[ge]) continue;
        const Vec xa = mesh.vertices[mesh.edges[ge][0]];
        const Vec xb = mesh.vertices[mesh.edges[ge][1]];
        const int nk = p - 1;
        if (nk == 0) continue;
        Mat G = Mat::Zero(nk, nk);
        Vec rhs = Vec::Zero(nk);
        for (std::size_t q = 0; q < gp.size(); ++q) {
          const double s = gp[q];
          const Vec x = (1 - s) * xa + s * xb;
          const double resid = w_exact(x) - ((1 - s) * w_exact(xa) + s * w_exact(xb));
          Vec ker(nk);
          for (int k = 0; k < nk; ++k) ker(k) = s * (1 - s) * legendre(k, 2 * s - 1).first;
          G += gw[q] * ker * ker.transpose();
          rhs += gw[q] * resid * ker;
        }
        const Vec kc = G.ldlt().solve(rhs);
        for (std::size_t i = 0; i < recs.size(); ++i) {
          if (recs[i].owner.kind != PolytopeKind::edge) continue;
          if (rs.edge_index(recs[i].owner) != le) continue;
          auto it = pos.find(dm.element_dofs[e][i]);
          if (it != pos.end()) values(it->second) = kc(recs[i].scalar_local);
        }
      }
    }
  }
  dofs_out = dofs;
  values_out = values;
}

/// Constrained moment-trace dofs of a tensor field. Supports homogeneous data
/// and constant exact moments (vertex components / edge nn-traces).
void moment_boundary_values(const Mesh& mesh, const ElementSpace& sp, const DofMap& dm,
                            const std::function<Mat(const Vec&)>& m_exact,
                            std::vector<int>& dofs_out, Vec& values_out) {
  const auto recs = dof_records(sp);
  const auto dofs = boundary_dofs(mesh, recs, dm, BoundarySelector::moment_trace);
  Vec values = Vec::Zero(dofs.size());
  if (m_exact) {
    std::map<int, int> pos;
    for (std::size_t i = 0; i < dofs.size(); ++i) pos[dofs[i]] = static_cast<int>(i);
    for (int e = 0; e < mesh.num_elements(); ++e)
      for (std::size_t i = 0; i < recs.size(); ++i) {
        auto it = pos.find(dm.element_dofs[e][i]);
        if (it == pos.end()) continue;
        const auto& r = recs[i];
        if (r.connectivity.kind == PolytopeKind::vertex) {
          // Hu-Zhang vertex dofs carry the Cartesian components directly.
          const Vec xv = mesh.vertices[mesh.elements[e][r.connectivity.idx[0]]];
          const Mat M = m_exact(xv);
          const double comps[3] = {M(0, 0), 2.0 * M(0, 1), M(1, 1)};
          values(it->second) = comps[r.slot];
        } else if (r.connectivity.kind == PolytopeKind::edge) {
          if (r.scalar_local > 0 && r.owner.kind == PolytopeKind::edge) {
            values(it->second) = 0.0;  // constant data: higher kernels vanish
            continue;
          }
          const auto& ge = mesh.edges[mesh.element_edges[e][enumerate_polytopes(2).edge_index(
              r.connectivity)]];
          const Vec xa = mesh.vertices[ge[0]], xb = mesh.vertices[ge[1]];
          const Vec n = rotation2d() * Vec(xb - xa);
          const Mat M = m_exact(0.5 * (xa + xb));
          if (sp.family == Family::hhj) {
            values(it->second) = n.dot(M * n);  // unnormalized frame trace
          } else {
            // Hu-Zhang edge dofs: slot 1 = sym(t x n), slot 2 = n x n.
            const Vec t = xb - xa;
            if (r.slot == 2)
              values(it->second) = n.dot(M * n) / n.squaredNorm();
            else
              values(it->second) = t.dot(M * n) / n.squaredNorm();
          }
        }
      }
  }
  dofs_out = dofs;
  values_out = values;
}

}  // namespace

struct PlateSolution::Impl {
  PlateProblem prob;
  std::vector<MaterialTensors> mats;
  std::unique_ptr<ElementSpace> msp;
  std::unique_ptr<VectorElementSpace> cg, rt, dgs, dgv, n2;
  CombinedSpace combined;
  Vec solution;  // combined coefficients

  MaterialTensors material(int element) const { return mats[prob.mesh.regions[element]]; }

  Vec field_coeffs(int field, int e) const {
    const auto& f = combined.fields[field];
    Vec c(f.records.size());
    for (std::size_t i = 0; i < f.records.size(); ++i)
      c(i) = solution(f.offset + f.dm.element_dofs[e][i]);
    return c;
  }
};

double PlateSolution::deflection(int element, const Vec& refpoint) const {
  const auto& im = *impl;
  switch (formulation) {
    case Formulation::prm: {
      const Mat vals = im.cg->eval(refpoint);
      return (vals * im.field_coeffs(0, element))(0, 0);
    }
    case Formulation::ffsrm: {
      const Mat vals = im.dgs->eval(refpoint);
      return (vals * im.field_coeffs(2, element))(0, 0);
    }
    case Formulation::tdnns: {
      const Mat vals = im.cg->eval(refpoint);
      return (vals * im.field_coeffs(1, element))(0, 0);
    }
  }
  throw std::logic_error("unreachable");
}

Eigen::Vector2d PlateSolution::rotation(int element, const Vec& refpoint) const {
  const auto& im = *impl;
  switch (formulation) {
    case Formulation::prm: {
      const Mat vals = im.cg->eval(refpoint);
      return Eigen::Vector2d((vals * im.field_coeffs(1, element))(0, 0),
                             (vals * im.field_coeffs(2, element))(0, 0));
    }
    case Formulation::ffsrm: {
      const Mat vals = im.dgv->eval(refpoint);
      return vals * im.field_coeffs(3, element);
    }
    case Formulation::tdnns: {
      const GeometricMap map = im.prob.mesh.element_map(element);
      const JacobianData jd = jacobian(map, refpoint);
      const auto dJ = map.jacobian_derivative(refpoint);
      Mat values;
      std::vector<Mat> grads;
      covariant_values_gradients(*im.n2, jd, dJ, refpoint, values, grads);
      return values * im.field_coeffs(2, element);
    }
  }
  throw std::logic_error("unreachable");
}

Mat PlateSolution::moment(int element, const Vec& refpoint) const {
  const auto& im = *impl;
  const GeometricMap map = im.prob.mesh.element_map(element);
  const JacobianData jd = jacobian(map, refpoint);
  switch (formulation) {
    case Formulation::prm: {
      const Mat grads = jd.JinvT * im.cg->eval_gradients(refpoint);
      const Vec cx = im.field_coeffs(1, element), cy = im.field_coeffs(2, element);
      const Eigen::Vector2d gx = grads * cx, gy = grads * cy;
      Mat D(2, 2);
      D.row(0) = gx.transpose();
      D.row(1) = gy.transpose();
      const Mat S = 0.5 * (D + D.transpose());
      return im.material(element).apply_D(S) / 12.0;
    }
    case Formulation::ffsrm:
    case Formulation::tdnns: {
      const ElementTransforms tr =
          element_transforms(2, im.prob.mesh.element_vertices(element));
      const auto pushed = pushed_tensors(*im.msp, jd, tr);
      const Vec c = im.field_coeffs(0, element);
      Mat M = Mat::Zero(2, 2);
      for (int i = 0; i < im.msp->size(); ++i) {
        const auto [v, g] = im.msp->scalar.eval(im.msp->functions[i].scalar, refpoint);
        M += c(i) * v * pushed[i];
      }
      return M;
    }
  }
  throw std::logic_error("unreachable");
}

Mat PlateSolution::moment_at_vertex(int vertex) const {
  const auto& m = impl->prob.mesh;
  for (int e = 0; e < m.num_elements(); ++e)
    for (int k = 0; k <= m.dim; ++k)
      if (m.elements[e][k] == vertex) {
        const auto rs = enumerate_polytopes(m.dim);
        return moment(e, rs.vertices[k]);
      }
  throw std::invalid_argument("vertex not part of any element");
}

namespace {

PlateSolution solve_plate_impl(const PlateProblem& problem, const BoundaryConditions& bc) {
  const Mesh& mesh = problem.mesh;
  const int p = problem.order;
  if (mesh.dim != 2) throw std::invalid_argument("plate problems are two-dimensional");
  if (p < 1) throw std::invalid_argument("order must be >= 1");
  if (problem.formulation == Formulation::tdnns && p < 2)
    throw std::invalid_argument("tdnns requires order >= 2 (HHJ of order p-1)");

  auto impl = std::make_shared<PlateSolution::Impl>();
  impl->prob = problem;
  for (const auto& rm : problem.materials)
    impl->mats.push_back({rm.E, rm.nu, problem.ks, problem.thickness});
  for (int r : mesh.regions)
    if (r < 0 || r >= static_cast<int>(impl->mats.size()))
      throw std::invalid_argument("element region without material");

  const double t = problem.thickness;
  const double g = problem.load;
  bool any_curved = false;
  for (int e = 0; e < mesh.num_elements(); ++e) any_curved |= mesh.element_is_curved(e);
  const QuadratureRule qr = quadrature_rule(2, quadrature_degree(p, any_curved));

  CombinedSpace& cs = impl->combined;
  std::vector<Eigen::Triplet<double>> trips;
  Vec rhs;
  std::vector<CondensationRecord> recs_per_elem;
  const bool condense = problem.formulation != Formulation::prm;

  // --- build spaces and dof maps ---
  if (problem.formulation == Formulation::prm) {
    impl->cg = std::make_unique<VectorElementSpace>(VectorKind::cg, 2, p);
    for (int f = 0; f < 3; ++f) cs.add(impl->cg->dof_records(), mesh);
  } else if (problem.formulation == Formulation::ffsrm) {
    impl->msp = std::make_unique<ElementSpace>(build_element(Family::hz, 2, p));
    impl->rt = std::make_unique<VectorElementSpace>(VectorKind::rt, 2, p - 1);
    impl->dgs = std::make_unique<VectorElementSpace>(VectorKind::dg_scalar, 2, p - 1);
    impl->dgv = std::make_unique<VectorElementSpace>(VectorKind::dg_vector, 2, p - 1);
    cs.add(dof_records(*impl->msp), mesh);
    cs.add(impl->rt->dof_records(), mesh);
    cs.add(impl->dgs->dof_records(), mesh);
    cs.add(impl->dgv->dof_records(), mesh);
  } else {
    impl->msp = std::make_unique<ElementSpace>(build_element(Family::hhj, 2, p - 1));
    impl->cg = std::make_unique<VectorElementSpace>(VectorKind::cg, 2, p);
    impl->n2 = std::make_unique<VectorElementSpace>(VectorKind::n2, 2, p - 1);
    cs.add(dof_records(*impl->msp), mesh);
    cs.add(impl->cg->dof_records(), mesh);
    cs.add(impl->n2->dof_records(), mesh);
  }

  rhs = Vec::Zero(cs.total);
  recs_per_elem.resize(mesh.num_elements());
  const std::vector<bool> mask = cs.cell_mask();

  // --- element loop ---
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const GeometricMap map = mesh.element_map(e);
    const MaterialTensors mat = impl->material(e);
    Mat K = Mat::Zero(cs.nlocal, cs.nlocal);
    Vec f = Vec::Zero(cs.nlocal);

    if (problem.formulation == Formulation::prm) {
      const int nw = impl->cg->size();
      for (int q = 0; q < qr.size(); ++q) {
        const JacobianData jd = jacobian(map, qr.points[q]);
        const double w = qr.weights[q] * std::abs(jd.det);
        const Mat vals = impl->cg->eval(qr.points[q]);
        const Mat grads = jd.JinvT * impl->cg->eval_gradients(qr.points[q]);
        // shear vectors: V(w dof) = grad n, V(phi dof) = -n e_c
        // bending: sym(e_c x grad n) per rotation dof
        std::vector<Eigen::Matrix2d> S(2 * nw);
        for (int c = 0; c < 2; ++c)
          for (int i = 0; i < nw; ++i)
            S[c * nw + i] = sym2(Eigen::Vector2d::Unit(c), grads.col(i));
        std::vector<Eigen::Matrix2d> DS(2 * nw);
        for (std::size_t i = 0; i < S.size(); ++i) DS[i] = mat.apply_D(S[i]);
        const double bend = w * t * t * t / 12.0;
        for (std::size_t a = 0; a < S.size(); ++a)
          for (std::size_t b = 0; b < S.size(); ++b)
            K(nw + a, nw + b) += bend * DS[b].cwiseProduct(S[a]).sum();
        const double shear = w * mat.ks_mu() * t;
        for (int a = 0; a < nw; ++a) {
          for (int b = 0; b < nw; ++b)
            K(a, b) += shear * grads.col(a).dot(grads.col(b));
          for (int c = 0; c < 2; ++c)
            for (int b = 0; b < nw; ++b) {
              const double v = shear * (-vals(0, b)) * grads(c, a);
              K(a, nw + c * nw + b) += v;
              K(nw + c * nw + b, a) += v;
            }
        }
        for (int c = 0; c < 2; ++c)
          for (int a = 0; a < nw; ++a)
            for (int b = 0; b < nw; ++b)
              K(nw + c * nw + a, nw + c * nw + b) += shear * vals(0, a) * vals(0, b);
        for (int i = 0; i < nw; ++i) f(i) += w * t * t * t * g * vals(0, i);
      }
    } else if (problem.formulation == Formulation::ffsrm) {
      const int nM = impl->msp->size(), nq = impl->rt->size(), nw = impl->dgs->size(),
                nphi = impl->dgv->size();
      const int oM = 0, oq = nM, ow = nM + nq, ophi = nM + nq + nw;
      const ElementTransforms tr = element_transforms(2, mesh.element_vertices(e));
      for (int q = 0; q < qr.size(); ++q) {
        const JacobianData jd = jacobian(map, qr.points[q]);
        const double w = qr.weights[q] * std::abs(jd.det);
        const auto pushed = pushed_tensors(*impl->msp, jd, tr);
        Vec sval;
        Mat sgrad;
        impl->msp->scalar.eval_all(qr.points[q], sval, sgrad);
        const Mat pgrad = jd.JinvT * sgrad;
        std::vector<Mat> Y(nM);
        std::vector<Eigen::Vector2d> divY(nM);
        for (int i = 0; i < nM; ++i) {
          const int si = impl->msp->scalar.index_of(impl->msp->functions[i].scalar);
          Y[i] = sval(si) * pushed[i];
          divY[i] = pushed[i] * pgrad.col(si);
        }
        const Mat qvals = (jd.J / jd.det) * impl->rt->eval(qr.points[q]);
        const Vec qdivs = impl->rt->eval_divergence(qr.points[q]) / jd.det;
        const Mat wvals = impl->dgs->eval(qr.points[q]);
        const Mat phivals = impl->dgv->eval(qr.points[q]);
        for (int a = 0; a < nM; ++a) {
          const Mat AM = mat.apply_A(Y[a]);
          for (int b = 0; b < nM; ++b)
            K(oM + a, oM + b) += w * AM.cwiseProduct(Y[b]).sum();
          for (int b = 0; b < nphi; ++b) {
            const double v = w * divY[a].dot(phivals.col(b));
            K(oM + a, ophi + b) += v;
            K(ophi + b, oM + a) += v;
          }
        }
        const double qfac = w * t * t / mat.ks_mu();
        for (int a = 0; a < nq; ++a) {
          for (int b = 0; b < nq; ++b)
            K(oq + a, oq + b) += qfac * qvals.col(a).dot(qvals.col(b));
          for (int b = 0; b < nw; ++b) {
            const double v = -w * qdivs(a) * wvals(0, b);
            K(oq + a, ow + b) += v;
            K(ow + b, oq + a) += v;
          }
          for (int b = 0; b < nphi; ++b) {
            const double v = -w * qvals.col(a).dot(phivals.col(b));
            K(oq + a, ophi + b) += v;
            K(ophi + b, oq + a) += v;
          }
        }
        for (int b = 0; b < nw; ++b) f(ow + b) += -w * g * wvals(0, b);
      }
      if (bc.exact_w) {
        // natural deflection datum: rhs_q -= Int (dq.n) w on boundary edges
        for (int le = 0; le < 3; ++le) {
          if (!mesh.edge_on_boundary[mesh.element_edges[e][le]]) continue;
          for (const auto& ep : edge_quadrature(map, le, p + 2)) {
            const JacobianData jd = jacobian(map, ep.ref);
            const Mat qvals = (jd.J / jd.det) * impl->rt->eval(ep.ref);
            for (int a = 0; a < nq; ++a)
              f(oq + a) -= ep.weight * qvals.col(a).dot(ep.unit_normal) * bc.exact_w(ep.x);
          }
        }
      }
    } else {  // tdnns
      const int nM = impl->msp->size(), nw = impl->cg->size(), nphi = impl->n2->size();
      const int oM = 0, ow = nM, ophi = nM + nw;
      const ElementTransforms tr = element_transforms(2, mesh.element_vertices(e));
      for (int q = 0; q < qr.size(); ++q) {
        const JacobianData jd = jacobian(map, qr.points[q]);
        const auto dJ = map.jacobian_derivative(qr.points[q]);
        const double w = qr.weights[q] * std::abs(jd.det);
        const auto pushed = pushed_tensors(*impl->msp, jd, tr);
        std::vector<Mat> Y(nM);
        for (int i = 0; i < nM; ++i) {
          const auto [v, gr] = impl->msp->scalar.eval(impl->msp->functions[i].scalar, qr.points[q]);
          Y[i] = v * pushed[i];
        }
        Mat phivals;
        std::vector<Mat> phigrads;
        covariant_values_gradients(*impl->n2, jd, dJ, qr.points[q], phivals, phigrads);
        const Mat wgrads = jd.JinvT * impl->cg->eval_gradients(qr.points[q]);
        for (int a = 0; a < nM; ++a) {
          const Mat AM = mat.apply_A(Y[a]);
          for (int b = 0; b < nM; ++b)
            K(oM + a, oM + b) += w * AM.cwiseProduct(Y[b]).sum();
          for (int b = 0; b < nphi; ++b) {
            const Mat symD = 0.5 * (phigrads[b] + phigrads[b].transpose());
            const double v = -w * Y[a].cwiseProduct(symD).sum();
            K(oM + a, ophi + b) += v;
            K(ophi + b, oM + a) += v;
          }
        }
        const double shear = w * mat.ks_mu() / (t * t);
        for (int a = 0; a < nw; ++a) {
          for (int b = 0; b < nw; ++b)
            K(ow + a, ow + b) += -shear * wgrads.col(a).dot(wgrads.col(b));
          for (int b = 0; b < nphi; ++b) {
            const double v = -shear * wgrads.col(a).dot(Vec(-phivals.col(b)));
            K(ow + a, ophi + b) += v;
            K(ophi + b, ow + a) += v;
          }
        }
        for (int a = 0; a < nphi; ++a)
          for (int b = 0; b < nphi; ++b)
            K(ophi + a, ophi + b) += -shear * phivals.col(a).dot(phivals.col(b));
        const Mat wvals = impl->cg->eval(qr.points[q]);
        for (int i = 0; i < nw; ++i) f(ow + i) += -w * g * wvals(0, i);
      }
      // element-boundary pairing term: + (n.M.n)(phi.n) on every edge
      for (int le = 0; le < 3; ++le) {
        const ElementTransforms tre = element_transforms(2, mesh.element_vertices(e));
        for (const auto& ep : edge_quadrature(map, le, p + 3)) {
          const JacobianData jd = jacobian(map, ep.ref);
          const auto dJ = map.jacobian_derivative(ep.ref);
          const auto pushed = pushed_tensors(*impl->msp, jd, tre);
          Mat phivals;
          std::vector<Mat> phigrads;
          covariant_values_gradients(*impl->n2, jd, dJ, ep.ref, phivals, phigrads);
          for (int a = 0; a < nM; ++a) {
            const auto [v, gr] = impl->msp->scalar.eval(impl->msp->functions[a].scalar, ep.ref);
            const double Mnn = ep.unit_normal.dot((v * pushed[a]) * ep.unit_normal);
            for (int b = 0; b < nphi; ++b) {
              const double val = ep.weight * Mnn * phivals.col(b).dot(ep.unit_normal);
              K(oM + a, ophi + b) += val;
              K(ophi + b, oM + a) += val;
            }
          }
        }
      }
    }

    // condense cell dofs and scatter
    const std::vector<int> globals = cs.element_globals(e);
    if (condense) {
      CondensationRecord rec = static_condense(K, f, mask);
      recs_per_elem[e] = rec;
      for (std::size_t a = 0; a < rec.retained.size(); ++a) {
        rhs(globals[rec.retained[a]]) += f(a);
        for (std::size_t b = 0; b < rec.retained.size(); ++b)
          trips.emplace_back(globals[rec.retained[a]], globals[rec.retained[b]], K(a, b));
      }
    } else {
      for (int a = 0; a < cs.nlocal; ++a) {
        rhs(globals[a]) += f(a);
        for (int b = 0; b < cs.nlocal; ++b) trips.emplace_back(globals[a], globals[b], K(a, b));
      }
    }
  }

  // --- boundary conditions ---
  SparseSystem sys;
  sys.A.resize(cs.total, cs.total);
  sys.A.setFromTriplets(trips.begin(), trips.end());
  sys.rhs = rhs;
  std::vector<int> cdofs;
  std::vector<double> cvals;
  auto add_constraints = [&](const std::vector<int>& dofs, const Vec& values, int offset) {
    for (std::size_t i = 0; i < dofs.size(); ++i) {
      cdofs.push_back(offset + dofs[i]);
      cvals.push_back(values(i));
    }
  };
  if (problem.formulation == Formulation::prm) {
    std::vector<int> dofs;
    Vec values;
    cg_boundary_values(mesh, *impl->cg, cs.fields[0].dm, bc.exact_w, dofs, values);
    add_constraints(dofs, values, cs.fields[0].offset);
  } else if (problem.formulation == Formulation::ffsrm) {
    std::vector<int> dofs;
    Vec values;
    moment_boundary_values(mesh, *impl->msp, cs.fields[0].dm, bc.exact_moment, dofs, values);
    add_constraints(dofs, values, cs.fields[0].offset);
  } else {
    std::vector<int> dofs;
    Vec values;
    moment_boundary_values(mesh, *impl->msp, cs.fields[0].dm, bc.exact_moment, dofs, values);
    add_constraints(dofs, values, cs.fields[0].offset);
    cg_boundary_values(mesh, *impl->cg, cs.fields[1].dm, bc.exact_w, dofs, values);
    add_constraints(dofs, values, cs.fields[1].offset);
  }
  if (condense) {
    // condensed interior dofs are recovered after the solve
    for (const auto& fld : cs.fields)
      for (int i = fld.dm.connected; i < fld.dm.total; ++i) {
        cdofs.push_back(fld.offset + i);
        cvals.push_back(0.0);
      }
  }
  sys.constrained = cdofs;
  sys.constrained_values = Eigen::Map<Vec>(cvals.data(), cvals.size());

  Vec x = solve_linear(sys);

  if (condense) {
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const auto& rec = recs_per_elem[e];
      const std::vector<int> globals = cs.element_globals(e);
      Vec xr(rec.retained.size());
      for (std::size_t i = 0; i < rec.retained.size(); ++i) xr(i) = x(globals[rec.retained[i]]);
      const Vec xc = rec.recover(xr);
      for (std::size_t i = 0; i < rec.interior.size(); ++i) x(globals[rec.interior[i]]) = xc(i);
    }
  }

  PlateSolution sol;
  sol.formulation = problem.formulation;
  sol.order = p;
  sol.mesh = mesh;
  sol.stats = cs.stats();
  impl->solution = x;
  sol.impl = impl;
  return sol;
}

}  // namespace

PlateSolution solve_plate(const PlateProblem& problem) {
  return solve_plate_impl(problem, BoundaryConditions{});
}

MomentReport postprocess_moments(const PlateSolution& solution) {
  MomentReport rep;
  rep.stats = solution.stats;
  const Mesh& mesh = solution.impl->prob.mesh;
  const QuadratureRule qr = quadrature_rule(2, 2 * solution.order + 2);
  double myy = -std::numeric_limits<double>::infinity();
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const GeometricMap map = mesh.element_map(e);
    for (int q = 0; q < qr.size(); ++q) {
      const Mat M = solution.moment(e, qr.points[q]);
      rep.points.push_back(map.apply(qr.points[q]));
      rep.moments.push_back(M);
      rep.sample_element.push_back(e);
      myy = std::max(myy, M(1, 1));
      rep.max_abs[0] = std::max(rep.max_abs[0], std::abs(M(0, 0)));
      rep.max_abs[1] = std::max(rep.max_abs[1], std::abs(M(0, 1)));
      rep.max_abs[2] = std::max(rep.max_abs[2], std::abs(M(1, 1)));
      const double nrm = M.norm();
      if (nrm > rep.norm_max) {
        rep.norm_max = nrm;
        rep.norm_max_location = rep.points.back();
      }
    }
  }
  rep.myy_max = myy;
  return rep;
}

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string run_example(int id, Formulation formulation, int order, int level) {
  std::ostringstream out;
  if (id == 1) {
    out << "elements,total_dofs,connected_dofs,myy_max\n";
    for (int l = 0; l <= level; ++l) {
      PlateProblem prob;
      prob.mesh = gen_strip_mesh(l);
      prob.order = order;
      prob.formulation = formulation;
      prob.materials = {{300.0, 0.5}, {150.0, 0.5}};
      prob.thickness = 0.1;
      prob.load = -100.0;
      const PlateSolution sol = solve_plate(prob);
      const MomentReport rep = postprocess_moments(sol);
      out << prob.mesh.num_elements() << "," << rep.stats.total << "," << rep.stats.connected
          << "," << fmt17(rep.myy_max) << "\n";
    }
  } else if (id == 2) {
    PlateProblem prob;
    prob.mesh = gen_lshape_mesh(level);
    prob.order = order;
    prob.formulation = formulation;
    prob.materials = {{240.0, 0.3}};
    prob.thickness = 1e-3;
    prob.load = -1000.0;
    const PlateSolution sol = solve_plate(prob);
    const MomentReport rep = postprocess_moments(sol);
    out << "x,y,norm_M\n";
    for (std::size_t i = 0; i < rep.points.size(); ++i)
      out << fmt17(rep.points[i](0)) << "," << fmt17(rep.points[i](1)) << ","
          << fmt17(rep.moments[i].norm()) << "\n";
    // corner vertex is the mesh origin
    int corner = -1;
    for (int v = 0; v < prob.mesh.num_vertices(); ++v)
      if (prob.mesh.vertices[v].norm() < 1e-12) corner = v;
    const Mat Mc = sol.moment_at_vertex(corner);
    out << "summary," << fmt17(rep.norm_max_location(0)) << "," << fmt17(rep.norm_max_location(1))
        << "," << fmt17(rep.norm_max) << "," << fmt17(Mc.norm()) << "\n";
  } else {
    throw std::invalid_argument("example id must be 1 or 2");
  }
  return out.str();
}

namespace detail {
PlateSolution solve_plate_manufactured(const PlateProblem& problem,
                                       std::function<double(const Vec&)> exact_w,
                                       std::function<Mat(const Vec&)> exact_moment) {
  BoundaryConditions bc;
  bc.exact_w = std::move(exact_w);
  bc.exact_moment = std::move(exact_moment);
  return solve_plate_impl(problem, bc);
}
}  // namespace detail

}  // namespace ptfe
