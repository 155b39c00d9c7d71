#include "ptfe/tensor_elements.hpp"

#include <stdexcept>

namespace ptfe {

std::map<PolytopeKind, int> ElementSpace::connectivity_counts() const {
  std::map<PolytopeKind, int> counts{{PolytopeKind::vertex, 0},
                                     {PolytopeKind::edge, 0},
                                     {PolytopeKind::face, 0},
                                     {PolytopeKind::cell, 0}};
  for (const auto& f : functions) counts[f.connectivity.kind] += 1;
  return counts;
}

ElementSpace build_element(Family family, int dim, int order) {
  if (!family_valid(family, dim))
    throw std::invalid_argument(std::string(family_name(family)) + " is not defined in " +
                                std::to_string(dim) + "D");
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  ElementSpace space{family, dim, order, ScalarBasis(dim, order), {}};
  const auto sets = tensor_templates(family, dim);
  const MappingRule rule = family_mapping_rule(family);
  for (const auto& set : sets) {
    for (const auto& sf : space.scalar.functions()) {
      if (!(sf.owner == set.owner)) continue;
      for (std::size_t q = 0; q < set.tensors.size(); ++q)
        space.functions.push_back({sf, set.tensors[q], set.owner, set.connectivity[q], rule,
                                   static_cast<int>(q), set.key_a[q], set.key_b[q],
                                   set.slot_is_canonical});
    }
  }
  if (space.size() != element_dim(family, dim, order))
    throw std::logic_error("element dimension mismatch");
  return space;
}

int element_dim(Family family, int dim, int order) {
  const int p = order;
  if (dim == 2) return 3 * (p + 2) * (p + 1) / 2;
  if (family == Family::gls) return 8 * (p + 3) * (p + 2) * (p + 1) / 6;
  return (p + 3) * (p + 2) * (p + 1);
}

std::vector<DofRecord> dof_records(const ElementSpace& space) {
  std::vector<DofRecord> out;
  out.reserve(space.functions.size());
  for (const auto& f : space.functions)
    out.push_back({f.owner, f.connectivity, f.scalar.local, f.template_slot, f.key_a, f.key_b,
                   f.slot_is_canonical});
  return out;
}

std::vector<Mat> eval_element_basis(const ElementSpace& space, const Vec& point) {
  std::vector<Mat> out;
  out.reserve(space.functions.size());
  for (const auto& f : space.functions) {
    const auto [v, g] = space.scalar.eval(f.scalar, point);
    out.push_back(v * f.tensor);
  }
  return out;
}

TraceKind family_trace_kind(Family f) {
  switch (f) {
    case Family::regge: return TraceKind::tt;
    case Family::hhj:
    case Family::ps: return TraceKind::nn;
    case Family::hz:
    case Family::hms: return TraceKind::n;
    case Family::gls: return TraceKind::tn;
  }
  throw std::logic_error("unreachable");
}

namespace {

Vec scalar1(double v) {
  Vec out(1);
  out(0) = v;
  return out;
}

}  // namespace

Vec trace(TraceKind kind, const Mat& value, const EdgeFrame& frame) {
  switch (kind) {
    case TraceKind::tt: return scalar1(frame.tangent.dot(value * frame.tangent));
    case TraceKind::nn: return scalar1(frame.normal.dot(value * frame.normal));
    case TraceKind::n: return value * frame.normal;
    case TraceKind::tn: return scalar1(frame.tangent.dot(value * frame.normal));
  }
  throw std::logic_error("unreachable");
}

Vec trace(TraceKind kind, const Mat& value, const FaceFrame& frame) {
  const Vec n = frame.normal / frame.normal.norm();
  const Mat P = Mat::Identity(3, 3) - n * n.transpose();
  switch (kind) {
    case TraceKind::tt: {
      const Mat proj = P * value * P;
      return Eigen::Map<const Vec>(proj.data(), proj.size());
    }
    case TraceKind::nn: return scalar1(frame.normal.dot(value * frame.normal));
    case TraceKind::n: return value * frame.normal;
    case TraceKind::tn: return P * (value * n);
  }
  throw std::logic_error("unreachable");
}

}  // namespace ptfe
