#pragma once

#include <array>
#include <cmath>

// Reference-element kernels: quadrature rules, P2 Lagrange shape functions
// and the RT0 basis. All meshes are affine, so a degree-4 triangle rule and
// a 3-point Gauss rule on segments integrate every assembled form exactly.

namespace stokesdarcy::fe {

struct TriQuadPoint {
  double l0, l1, l2; // barycentric coordinates
  double w;          // weight, sum over points = 1
};

// Dunavant degree-4 rule, 6 points.
inline constexpr std::array<TriQuadPoint, 6> tri_quad_deg4 = {{
    {1 - 2 * 0.445948490915965, 0.445948490915965, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 1 - 2 * 0.445948490915965, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.445948490915965, 1 - 2 * 0.445948490915965, 0.223381589678011},
    {1 - 2 * 0.091576213509771, 0.091576213509771, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 1 - 2 * 0.091576213509771, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.091576213509771, 1 - 2 * 0.091576213509771, 0.109951743655322},
}};

struct GaussPoint {
  double t, w; // on [0,1], weights sum to 1
};

// 3-point Gauss-Legendre, exact through degree 5.
inline const std::array<GaussPoint, 3> gauss3 = {{
    {0.5 * (1.0 - std::sqrt(3.0 / 5.0)), 5.0 / 18.0},
    {0.5, 8.0 / 18.0},
    {0.5 * (1.0 + std::sqrt(3.0 / 5.0)), 5.0 / 18.0},
}};

// P2 shape functions on the reference triangle in the node order
// (v0, v1, v2, m01, m12, m20).
inline std::array<double, 6> p2_values(double l0, double l1, double l2) {
  return {l0 * (2 * l0 - 1), l1 * (2 * l1 - 1), l2 * (2 * l2 - 1),
          4 * l0 * l1,       4 * l1 * l2,       4 * l2 * l0};
}

// Gradients with respect to the reference coordinates (ξ, η) where
// l0 = 1-ξ-η, l1 = ξ, l2 = η.
inline std::array<std::array<double, 2>, 6> p2_ref_gradients(double l0, double l1, double l2) {
  return {{{1 - 4 * l0, 1 - 4 * l0},
           {4 * l1 - 1, 0},
           {0, 4 * l2 - 1},
           {4 * (l0 - l1), -4 * l1},
           {4 * l2, 4 * l1},
           {-4 * l2, 4 * (l0 - l2)}}};
}

// 1D P2 shape functions on [0,1] in the node order (left, mid, right).
inline std::array<double, 3> p2_line_values(double t) {
  return {(1 - t) * (1 - 2 * t), 4 * t * (1 - t), t * (2 * t - 1)};
}

inline std::array<double, 3> p2_line_derivs(double t) {
  return {4 * t - 3, 4 - 8 * t, 4 * t - 1};
}

// Local 1D P2 mass matrix on a segment of length h, order (left, mid, right).
inline std::array<std::array<double, 3>, 3> p2_line_mass(double h) {
  const double c = h / 30.0;
  return {{{4 * c, 2 * c, -c}, {2 * c, 16 * c, 2 * c}, {-c, 2 * c, 4 * c}}};
}

// Local 1D P2 stiffness matrix on a segment of length h.
inline std::array<std::array<double, 3>, 3> p2_line_stiffness(double h) {
  const double c = 1.0 / (3.0 * h);
  return {{{7 * c, -8 * c, c}, {-8 * c, 16 * c, -8 * c}, {c, -8 * c, 7 * c}}};
}

} // namespace stokesdarcy::fe
