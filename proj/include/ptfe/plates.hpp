#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "ptfe/assembly.hpp"
#include "ptfe/tensor_elements.hpp"

namespace ptfe {

enum class Formulation { prm, ffsrm, tdnns };

const char* formulation_name(Formulation f);
Formulation formulation_from_name(const std::string& name);

struct PlateRegionMaterial {
  double E = 1.0;
  double nu = 0.0;
};

/// Reissner-Mindlin plate problem with clamped deflection (w = 0) and, for
/// the mixed formulations, zero bending-moment trace on the whole boundary.
/// The load g is the thickness-scaled force (primal f = t^2 g).
struct PlateProblem {
  Mesh mesh;
  int order = 3;
  Formulation formulation = Formulation::tdnns;
  std::vector<PlateRegionMaterial> materials{{1.0, 0.0}};
  double thickness = 0.1;
  double ks = 5.0 / 6.0;
  double load = 0.0;
};

struct DofStats {
  int total = 0;
  int connected = 0;
};

/// Solved plate fields. Moments are reported in the thickness-scaled
/// convention of the mixed formulations (physical moment / t^3); the primal
/// moment is post-processed as (1/12) D sym(grad phi) to match.
class PlateSolution {
 public:
  Formulation formulation;
  int order = 0;
  Mesh mesh;
  DofStats stats;

  double deflection(int element, const Vec& refpoint) const;
  Eigen::Vector2d rotation(int element, const Vec& refpoint) const;
  Mat moment(int element, const Vec& refpoint) const;

  /// Evaluate at the mesh vertex (from the first incident element).
  Mat moment_at_vertex(int vertex) const;

  // internal state, filled by solve_plate
  struct Impl;
  std::shared_ptr<Impl> impl;
};

PlateSolution solve_plate(const PlateProblem& problem);

enum class MomentQuery { field_samples, max_abs_component, norm_field, dof_stats };

struct MomentReport {
  // sample lattice (quadrature points of degree 2p+2 in every element)
  std::vector<Vec> points;
  std::vector<Mat> moments;
  std::vector<int> sample_element;
  double myy_max = 0.0;            ///< max over samples of M_yy
  double max_abs[3] = {0, 0, 0};   ///< max |M_xx|, |M_xy|, |M_yy|
  double norm_max = 0.0;           ///< max Frobenius norm
  Vec norm_max_location;
  DofStats stats;
};

MomentReport postprocess_moments(const PlateSolution& solution);

/// Experiment drivers; emit the CSV text described in the docs.
std::string run_example(int id, Formulation formulation, int order, int level);

namespace detail {
/// Plate solve with manufactured essential data (patch tests): exact_w feeds
/// the deflection constraints (and the natural datum for the mixed w field),
/// exact_moment the moment-trace constraints. Constant moments only.
PlateSolution solve_plate_manufactured(const PlateProblem& problem,
                                       std::function<double(const Vec&)> exact_w,
                                       std::function<Mat(const Vec&)> exact_moment);
}  // namespace detail

}  // namespace ptfe
