#pragma once

#include "dualorlicz/types.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace dualorlicz {

struct Facet {
  int index = -1;          // normal index i
  std::vector<int> loop;   // vertex indices; counter-clockwise seen from outside (n=3), tangent order (n=2)
  double h = 0.0;          // h_P(u_i)
  double area = 0.0;       // (n-1)-dimensional measure
  bool active = false;
};

struct PolytopeMesh {
  int dim = 0;
  Directions normals;      // n x m
  Vector z;                // support numbers as given
  std::vector<Vector> vertices;
  std::vector<Facet> facets;  // facets[i] belongs to normals.col(i)
  double volume = 0.0;
  bool full_dimensional = false;
  double tol = kGeomTol;   // absolute tolerance after rescaling back to input units

  int size() const { return static_cast<int>(facets.size()); }
  Vector support_numbers() const;
  bool origin_interior() const;
  /// Tangent basis of the hyperplane of facet i, n x (n-1); for n=3 the basis (e1, e2) satisfies e1 x e2 = u_i.
  Matrix facet_frame(int i) const;
};

/// Planar description of a facet: coordinates in facet_frame relative to the foot point h_i u_i.
struct FacetRegion {
  int index = -1;
  Vector foot;
  Matrix basis;     // n x (n-1)
  Matrix points;    // (n-1) x k, boundary loop in plane coordinates
  std::vector<std::array<int, 3>> triangles;  // fan triangulation (n=3 only)

  double triangle_area(size_t t) const;
  double area() const;
};

/// Normalizes columns; throws DegenerateInput on zero columns or duplicates within 1e-9.
Directions make_directions(const std::vector<Vector>& dirs);
Directions make_directions(const std::vector<UnitVector>& dirs);

/// For each column the index of its antipodal column within tol, or -1.
std::vector<int> antipodes(const Directions& normals, double tol = kGeomTol);

/// P(z) = {x : <x, u_i> <= z_i}. Vertices are the feasible intersections of n-subsets of the
/// bounding hyperplanes, deduplicated within 1e-9 after rescaling so that max z_i = 1.
PolytopeMesh build_polytope(const Directions& normals, const Vector& z);

/// Origin-symmetric P_e(z): requires z_i = z_{antipode(i)} for every pair. Vertices come in exact
/// pairs (v, -v) and the facet of -u_i is the exact mirror of the facet of u_i.
PolytopeMesh build_symmetric_polytope(const Directions& normals, const Vector& z);

FacetRegion facet_region(const PolytopeMesh& mesh, int i);

/// min over <u,u_i> > 0 of z_i / <u,u_i>; +infinity if no normal has <u,u_i> > 0.
double radial_function(const Directions& normals, const Vector& z, const Vector& u);

struct RadialHit {
  int index = -1;
  double rho = 0.0;
  bool tie = false;  // another normal attains the minimum within 1e-12 relative
};

/// Radial Gauss map: the facet hit by the ray through u. Ties resolved to the smallest index.
RadialHit alpha(const Directions& normals, const Vector& z, const Vector& u);

double support_function(const PolytopeMesh& mesh, const Vector& u);

struct HausdorffEstimate {
  double value = 0.0;
  int samples = 0;
  std::string note;
};

/// Sup of |h_P - h_Q| over a direction sample; a lower bound for the true distance.
HausdorffEstimate hausdorff_distance(const PolytopeMesh& P, const PolytopeMesh& Q, int level = 4);

/// Deterministic direction sample: icosphere vertices (n=3) or 2^(level+6) equispaced angles (n=2).
std::vector<Vector> sphere_sample(int dim, int level);

/// ASCII OFF: vertices, then one face per active facet (n=3) or one polygon (n=2, z=0 plane).
void write_off(std::ostream& os, const PolytopeMesh& mesh);

}  // namespace dualorlicz
