#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace dualorlicz::detail {

struct Icosphere {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;  // counter-clockwise seen from outside
};

/// Geodesic icosphere: level 0 is the icosahedron, each level splits every face in four.
/// The vertex set is symmetric under x -> -x at every level.
Icosphere make_icosphere(int level);

/// Solid angle of the spherical triangle with unit corners a, b, c.
double spherical_triangle_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                               const Eigen::Vector3d& c);

/// Fibonacci lattice on S^2 with `count` points.
std::vector<Eigen::Vector3d> fibonacci_sphere(int count);

}  // namespace dualorlicz::detail
