#pragma once

// Independent reference computations used by the tests. Nothing in this file
// calls the angle or Lobachevsky code paths under test: angles come from the
// law of cosines, the Lobachevsky function from its Fourier series and from a
// frozen high-precision table, and the radial vortex profile from an ODE
// shooting method.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "dcv/geometry.hpp"

namespace dcvtest {

/// Truncated Fourier series (1/2) sum_{n=1}^{10^6} sin(2nx)/n^2, evaluated
/// with two interleaved phase-rotation streams and Kahan accumulation, with
/// exact re-anchoring every 65536 terms to stop phase drift. Worst-case error
/// against arbitrary precision is about 2.5e-13 / |sin x|, dominated by the
/// series truncation tail.
inline double lobachevsky_fourier(double x) {
  constexpr int kTerms = 1'000'000;
  static const std::vector<double> inv_n2 = [] {
    std::vector<double> t(kTerms + 2, 0.0);
    for (std::size_t n = 1; n < t.size(); ++n)
      t[n] = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    return t;
  }();

  const double cs = std::cos(4.0 * x), ss = std::sin(4.0 * x);
  double s1 = std::sin(2.0 * x), c1 = std::cos(2.0 * x);   // phase 2nx, odd n
  double s2 = std::sin(4.0 * x), c2 = std::cos(4.0 * x);   // phase 2(n+1)x
  double sum_a = 0, comp_a = 0, sum_b = 0, comp_b = 0;
  for (int n = 1; n <= kTerms; n += 2) {
    double term_a = s1 * inv_n2[n] - comp_a;
    double t_a = sum_a + term_a;
    comp_a = (t_a - sum_a) - term_a;
    sum_a = t_a;

    double term_b = s2 * inv_n2[n + 1] - comp_b;
    double t_b = sum_b + term_b;
    comp_b = (t_b - sum_b) - term_b;
    sum_b = t_b;

    double s1n = s1 * cs + c1 * ss, c1n = c1 * cs - s1 * ss;
    double s2n = s2 * cs + c2 * ss, c2n = c2 * cs - s2 * ss;
    s1 = s1n;
    c1 = c1n;
    s2 = s2n;
    c2 = c2n;
    if ((n & 65535) == 65535) {
      s1 = std::sin(2.0 * x * (n + 2));
      c1 = std::cos(2.0 * x * (n + 2));
      s2 = std::sin(2.0 * x * (n + 3));
      c2 = std::cos(2.0 * x * (n + 3));
    }
  }
  return 0.5 * (sum_a + sum_b);
}

/// Frozen references computed with mpmath (40 digits) via the Clausen
/// function, evaluated at the exact binary64 value of each literal.
struct LobReference {
  double x;
  double value;
};

inline const std::vector<LobReference>& lobachevsky_table() {
  static const std::vector<LobReference> table = {
      {0.003, 0.0183479889292625164733},
      {0.3, 0.454750398208409006267},
      {0.5, 0.506979566180384252147},
      {1.0, 0.363573025431639623715},
      {2.0, -0.284071972214934890400},
      {3.0, -0.320391332850861604796},
      {5.0, -0.195358238043401055217},
      {10.0, 0.505250724070643912631},
      {-7.25, -0.380485166280279026058},
      {28.1, -0.358312832509676761775},
      {31.4159, -0.000287751692761840531830},
      {3.141, -0.00458580729046064051530},
      {100.25, -0.444141153172481503317},
      {-0.6, -0.502694906882428297038},
      {0.5235987755982988, 0.507470803204826812511},   // pi/6
      {0.7853981633974483, 0.457982797088609518138},   // pi/4
      {1.0471975511965976, 0.338313868803217938087},   // pi/3
      {1.5707963267948966, 4.24430238005374745067e-17},
      {2.0943951023931953, -0.338313868803217748846},
      {3.141592653589793, -4.52452640404419334137e-15},
      {6.283185307179586, -8.87928071288623678471e-15},
      {9.42477796076938, -1.31699556052861754686e-14},
      {3.141592653589, -2.23458776647568745585e-11},
      {1e-8, 1.87275335633924205392e-7},
      {0.04, 0.141032701441671809783},
  };
  return table;
}

/// Interior angles from the law of cosines, one per corner; lengths[m] is the
/// side opposite corner m.
inline std::array<double, 3> law_of_cosines_angles(dcv::Geometry geometry,
                                                   const std::array<double, 3>& l) {
  std::array<double, 3> out{};
  for (int m = 0; m < 3; ++m) {
    double a = l[m], b = l[(m + 1) % 3], c = l[(m + 2) % 3];
    double cosv = 0;
    switch (geometry) {
      case dcv::Geometry::Euclidean:
        cosv = (b * b + c * c - a * a) / (2.0 * b * c);
        break;
      case dcv::Geometry::Hyperbolic:
        cosv = (std::cosh(b) * std::cosh(c) - std::cosh(a)) / (std::sinh(b) * std::sinh(c));
        break;
      case dcv::Geometry::Spherical:
        cosv = (std::cos(a) - std::cos(b) * std::cos(c)) / (std::sin(b) * std::sin(c));
        break;
    }
    out[m] = std::acos(std::clamp(cosv, -1.0, 1.0));
  }
  return out;
}

/// Euclidean area through (1/2) b c sin(alpha), with alpha from the law of
/// cosines; a different evaluation path than Heron's formula.
inline double euclidean_area_oracle(const std::array<double, 3>& l) {
  auto ang = law_of_cosines_angles(dcv::Geometry::Euclidean, l);
  return 0.5 * l[1] * l[2] * std::sin(ang[0]);
}

/// Random side lengths admissible for the given geometry, with all interior
/// angles at least 0.05 rad so finite-difference checks stay well conditioned.
inline std::array<double, 3> random_triangle(dcv::Geometry geometry, std::mt19937_64& rng) {
  const bool sph = geometry == dcv::Geometry::Spherical;
  std::uniform_real_distribution<double> side(sph ? 0.3 : 0.5, sph ? 1.2 : 2.0);
  std::uniform_real_distribution<double> frac(0.15, 0.85);
  for (;;) {
    double a = side(rng), b = side(rng);
    double lo = std::abs(a - b), hi = a + b;
    std::array<double, 3> l{a, b, lo + frac(rng) * (hi - lo)};
    if (!dcv::triangle_admissible(geometry, l)) continue;
    auto ang = law_of_cosines_angles(geometry, l);
    if (std::min({ang[0], ang[1], ang[2]}) < 0.05) continue;
    return l;
  }
}

/// Central finite-difference gradient of a scalar function of a vector.
template <class F>
inline std::vector<double> fd_gradient(F&& f, const std::vector<double>& u0, double h = 1e-6) {
  std::vector<double> g(u0.size());
  std::vector<double> u = u0;
  for (std::size_t i = 0; i < u0.size(); ++i) {
    u[i] = u0[i] + h;
    double fp = f(u);
    u[i] = u0[i] - h;
    double fm = f(u);
    u[i] = u0[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// Radial profile of the hyperbolic-constants vortex equation on a flat disk:
///   u'' + u'/r = e^{2u} - 1   on (0, R],  u(r) ~ log(r) + b  near 0,
///   u(R) = 0,
/// which is the rotationally symmetric single-vortex problem the lattice
/// models approximate. Solved by shooting on b from a series start at
/// r0 = 1e-3, integrating with an order-8 controlled Runge-Kutta scheme.
struct RadialVortexProfile {
  double b;                // regularized value at the center
  std::vector<double> u;   // aligned with the requested radii
};

namespace ode_detail {

using State = std::array<double, 2>;  // (u, u')

struct Rhs {
  void operator()(const State& y, State& dy, double r) const {
    dy[0] = y[1];
    dy[1] = std::exp(2.0 * y[0]) - 1.0 - y[1] / r;
  }
};

inline State series_start(double b, double r0) {
  double e2b = std::exp(2.0 * b);
  return {std::log(r0) + b - r0 * r0 / 4.0 + e2b * r0 * r0 * r0 * r0 / 16.0,
          1.0 / r0 - r0 / 2.0 + e2b * r0 * r0 * r0 / 4.0};
}

inline double shoot(double b, double r0, double radius) {
  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_fehlberg78<State>());
  State y = series_start(b, r0);
  odeint::integrate_adaptive(stepper, Rhs{}, y, r0, radius, 1e-4);
  return y[0];
}

}  // namespace ode_detail

inline RadialVortexProfile radial_vortex_profile(const std::vector<double>& radii,
                                                 double boundary_radius = 4.0) {
  const double r0 = 1e-3;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] <= r0 * 10 || radii[i] > boundary_radius + 1e-12)
      throw std::invalid_argument("radial_vortex_profile: radius out of range");
    if (i > 0 && radii[i] <= radii[i - 1])
      throw std::invalid_argument("radial_vortex_profile: radii must be strictly increasing");
  }

  double lo = -1.0, hi = 0.5;
  if (ode_detail::shoot(lo, r0, boundary_radius) >= 0.0 ||
      ode_detail::shoot(hi, r0, boundary_radius) <= 0.0)
    throw std::logic_error("radial_vortex_profile: shooting bracket failed");
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    (ode_detail::shoot(mid, r0, boundary_radius) < 0.0 ? lo : hi) = mid;
  }
  const double b = 0.5 * (lo + hi);

  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_fehlberg78<ode_detail::State>());
  ode_detail::State y = ode_detail::series_start(b, r0);
  RadialVortexProfile out{b, {}};
  out.u.reserve(radii.size());
  double r = r0;
  for (double target : radii) {
    odeint::integrate_adaptive(stepper, ode_detail::Rhs{}, y, r, target, 1e-4);
    r = target;
    out.u.push_back(y[0]);
  }
  return out;
}

/// Spot checks for the ODE oracle itself, frozen from an independent run.
struct RadialReference {
  double r;
  double u;
};

inline const std::vector<RadialReference>& radial_vortex_table() {
  static const std::vector<RadialReference> table = {
      {0.5, -0.911582064465465}, {1.0, -0.371275288734}, {1.5, -0.160315406717},
      {2.0, -0.070649976629},    {2.5, -0.031348035350}, {3.0, -0.013584560421},
      {3.5, -0.005007149479},
  };
  return table;
}

inline constexpr double kRadialCenterValue = -0.1586301915235663;  // b for R = 4

}  // namespace dcvtest
