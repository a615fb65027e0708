#pragma once

#include "dualorlicz/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace dualorlicz {

struct DiscreteMeasure {
  int dim = 0;
  Directions atoms;  // n x m, unit columns
  Vector weights;    // m, strictly positive
  bool even = false;

  int size() const { return static_cast<int>(weights.size()); }
  double total() const { return weights.sum(); }

  /// Normalizes atoms and checks positivity, distinctness and (if even) antipodal pairing.
  static DiscreteMeasure make(const std::vector<Vector>& atoms, const std::vector<double>& weights,
                              bool even = false);
  void validate() const;
};

/// Uniform density on a spherical cap {u : angle(u, center) <= angle_deg}; 180 degrees is the whole sphere.
struct SphericalCap {
  Vector center;
  double angle_deg = 180.0;
  double mass = 1.0;
};

struct DensityMeasure {
  int dim = 0;
  std::vector<SphericalCap> caps;
  bool even = false;

  double total_mass() const;
  double density(const Vector& u) const;
  void validate() const;

  static DensityMeasure uniform(int dim, double mass);
};

struct HemisphereReport {
  bool admissible = false;
  Vector witness;          // set when concentrated: <u_i, witness> <= 0 for every atom
  double delta = 0.0;      // min over v of sum lambda_i <u_i, v>_+ / mu(S)
  Vector delta_direction;  // minimizing v
};

/// Decides whether the atoms lie in a closed hemisphere via 2n small linear programs.
bool concentrated_on_hemisphere(const Directions& atoms, Vector* witness = nullptr);

HemisphereReport hemisphere_check(const DiscreteMeasure& mu);

/// min over v in S^{n-1} of sum_i lambda_i <u_i, v>_+ / mu(S), and the minimizer.
double hemisphere_delta(const DiscreteMeasure& mu, Vector* argmin = nullptr);

/// (mu + mu o -id) / 2; atoms whose antipodes are present within 1e-9 are paired exactly.
DiscreteMeasure symmetrize(const DiscreteMeasure& mu);

/// Cell partition: 2^(level+1) equal arcs (n=2) or the 20*4^level icosphere faces (n=3).
/// One atom per cell with positive mass, placed at the cell's mass-centroid direction.
DiscreteMeasure discretize(const DensityMeasure& nu, int level);

/// Bounded-Lipschitz test function: sup|f| + Lip(f) <= 1 in the geodesic metric.
struct TestFunction {
  std::function<double(const Vector&)> f;
  std::string label;
};

/// Fixed dictionary of 200 test functions (smoothed cap indicators and low-order harmonics).
const std::vector<TestFunction>& weak_dictionary(int dim);

double integrate(const DiscreteMeasure& mu, const std::function<double(const Vector&)>& f);

/// max over the dictionary of |int f dmu - int f dnu|.
double weak_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

}  // namespace dualorlicz
