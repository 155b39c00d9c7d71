#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ptfe/mesh.hpp"
#include "ptfe/tensor_elements.hpp"

namespace ptfe {

enum class GeometryKind { affine, curved };

struct JumpTrial {
  uint64_t seed = 0;
  double jump = 0.0;
};

struct JumpReport {
  Family family;
  int order = 0;
  GeometryKind geometry = GeometryKind::affine;
  int trials = 0;
  double max_jump = 0.0;
  std::vector<JumpTrial> details;

  std::string table() const;
};

/// Interface-continuity measurement: random two-element meshes sharing an
/// edge (2D) or face (3D), random shared coefficients, family trace evaluated
/// from both sides at 10 interface points; reports the largest jump relative
/// to the trace magnitude.
JumpReport interface_jump(Family family, int dim, int order, int trials, GeometryKind geometry,
                          uint64_t seed);

/// Same harness with one template tensor perturbed; the jump must become
/// large (sensitivity control).
double perturbed_interface_jump(Family family, int dim, int order, uint64_t seed);

/// L2-projection residual of the constant Sym(d) (or sl(d) for gls) tensors
/// onto the mapped element space on one random physical element.
double constants_residual(Family family, int dim, int order, GeometryKind geometry,
                          uint64_t seed);

/// Smallest eigenvalue of the reference-element L2 Gram matrix.
double gram_min_eig(Family family, int dim, int order);

/// Largest |tr Y| over the mapped basis of a gls element on a random map.
double mapped_trace_magnitude(Family family, int dim, int order, uint64_t seed);

/// Tangential (n2) or normal (bdm) trace jump of the vector-valued spaces on
/// random affine two-element meshes.
double vector_interface_jump(VectorKind kind, int order, int trials, uint64_t seed);

/// Deterministic uniform double in [0,1) from a seeded generator.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  uint64_t state_;
};

}  // namespace ptfe
