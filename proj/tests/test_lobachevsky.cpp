#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "dcv/lobachevsky.hpp"
#include "oracles.hpp"

using dcv::lobachevsky;
using std::numbers::pi;

TEST_CASE("frozen high-precision references") {
  // Covers generic arguments, arguments many periods out, and arguments
  // within one ulp of k*pi where the log singularity amplifies any reduction
  // error; references were evaluated at the exact binary64 inputs.
  for (const auto& ref : dcvtest::lobachevsky_table()) {
    INFO("x = " << ref.x);
    double got = lobachevsky(ref.x);
    REQUIRE(std::abs(got - ref.value) <= 1e-15 + 1e-13 * std::abs(ref.value));
  }
}

TEST_CASE("structural identities") {
  REQUIRE(lobachevsky(0.0) == 0.0);

  std::mt19937_64 rng(40923);
  std::uniform_real_distribution<double> pick(0.05, 1.5);
  for (int i = 0; i < 200; ++i) {
    double x = pick(rng);

    // Odd function.
    REQUIRE(lobachevsky(-x) == Catch::Approx(-lobachevsky(x)).margin(1e-16));

    // Periodic with period pi (argument rounding costs a few ulp).
    REQUIRE(lobachevsky(x + pi) == Catch::Approx(lobachevsky(x)).margin(5e-15));
    REQUIRE(lobachevsky(x - 3 * pi) == Catch::Approx(lobachevsky(x)).margin(5e-15));

    // Duplication: Lob(2x) = 2 Lob(x) + 2 Lob(x + pi/2).
    double lhs = lobachevsky(2 * x);
    double rhs = 2 * lobachevsky(x) + 2 * lobachevsky(x + pi / 2);
    REQUIRE(lhs == Catch::Approx(rhs).margin(2e-14));
  }
}

TEST_CASE("derivative matches -log|2 sin x|") {
  const double h = 1e-5;
  for (double x : {0.2, 0.45, 0.8, 1.1, 1.4, 2.0, 2.6}) {
    double fd = (lobachevsky(x + h) - lobachevsky(x - h)) / (2 * h);
    REQUIRE(fd == Catch::Approx(-std::log(std::abs(2 * std::sin(x)))).margin(1e-8));
  }
}

TEST_CASE("maximum sits at pi/6") {
  double peak = lobachevsky(pi / 6);
  for (double d : {1e-3, 1e-2, 0.1, 0.3}) {
    REQUIRE(lobachevsky(pi / 6 + d) < peak);
    REQUIRE(lobachevsky(pi / 6 - d) < peak);
  }
  REQUIRE(peak == Catch::Approx(0.5074708032048268).epsilon(1e-14));
}

TEST_CASE("agrees with the Fourier series oracle") {
  // The truncated series carries an O(1e-13)/|sin x| tail, so compare only
  // where sin is comfortably away from zero.
  for (double x : {0.7, 1.2, 1.9, 2.4, -1.0, 4.2}) {
    REQUIRE(std::abs(std::sin(x)) >= 0.5);
    REQUIRE(lobachevsky(x) == Catch::Approx(dcvtest::lobachevsky_fourier(x)).margin(1.5e-12));
  }
}
