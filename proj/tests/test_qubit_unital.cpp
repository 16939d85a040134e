#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "chanent/channel.hpp"
#include "chanent/entropy.hpp"
#include "chanent/errors.hpp"
#include "chanent/qubit_unital.hpp"
#include "test_support.hpp"

using namespace chanent;

namespace {

constexpr double kLog2 = 0.69314718055994531;

// A spread of unital qubit channels for the property checks.
std::vector<Channel> unital_examples() {
  std::vector<Channel> out;
  out.push_back(identity_channel(2));
  out.push_back(depolarizing_channel(2));
  out.push_back(pauli_mixture_channel(0.4, 0.3, 0.2, 0.1));
  out.push_back(pauli_mixture_channel(0.7, 0.0, 0.3, 0.0));
  out.push_back(random_unitary_mixture_channel(2, 2, {0.6, 0.4}, 808));
  out.push_back(random_unitary_mixture_channel(2, 3, {}, 809));
  return out;
}

}  // namespace

TEST_CASE("f matches the general objective at diagonal Schmidt inputs") {
  const Channel phi = pauli_mixture_channel(0.4, 0.3, 0.2, 0.1);
  for (const double p : {0.1, 0.37, 0.5, 0.81}) {
    RealVector lam(2);
    lam << p, 1.0 - p;
    const double general = relative_entropy_objective(
        phi, SchmidtSpectrum(lam), ComplexMatrix::Identity(2, 2));
    CHECK(f_of_p(phi, p) == doctest::Approx(general).epsilon(1e-13));
  }
}

TEST_CASE("f at 1/2 equals 2 log 2 - H_map") {
  for (const Channel& phi : unital_examples()) {
    const double expected = 2.0 * kLog2 - map_entropy(phi);
    CHECK(std::abs(f_of_p(phi, 0.5) - expected) < 1e-10);
  }
}

TEST_CASE("f rejects out-of-range p") {
  const Channel phi = depolarizing_channel(2);
  CHECK_THROWS_AS(f_of_p(phi, 0.0), POutOfRange);
  CHECK_THROWS_AS(f_of_p(phi, 1.0), POutOfRange);
  CHECK_THROWS_AS(f_of_p(phi, -0.2), POutOfRange);
  CHECK_NOTHROW(f_of_p(phi, 2e-9));
}

TEST_CASE("f rejects non-qubit, non-CPTP and non-unital channels") {
  CHECK_THROWS_AS(f_of_p(depolarizing_channel(3), 0.5), NotQubit);
  CHECK_THROWS_AS(f_of_p(amplitude_damping_channel(0.3), 0.5), NotUnital);
  std::vector<ComplexMatrix> half{0.5 * ComplexMatrix::Identity(2, 2)};
  CHECK_THROWS_AS(f_of_p(channel_from_kraus(std::move(half)), 0.5), NotCptp);
}

TEST_CASE("f_grid evaluates k/(n+1) and matches pointwise f") {
  const Channel phi = pauli_mixture_channel(0.5, 0.2, 0.2, 0.1);
  const PGrid grid = f_grid(phi, 9);
  REQUIRE(grid.points.size() == 9);
  for (int k = 0; k < 9; ++k) {
    CHECK(grid.points(k) == doctest::Approx((k + 1) / 10.0).epsilon(1e-15));
    CHECK(grid.values(k) ==
          doctest::Approx(f_of_p(phi, grid.points(k))).epsilon(1e-14));
  }
}

TEST_CASE("f is symmetric about 1/2 on the default grid") {
  for (const Channel& phi : unital_examples()) {
    const PGrid grid = f_grid(phi);
    CHECK(verify_symmetry(phi, grid) < 1e-12);
  }
}

TEST_CASE("f is concave: second differences stay nonpositive") {
  for (const Channel& phi : unital_examples()) {
    const PGrid grid = f_grid(phi);
    CHECK(verify_concavity(phi, grid) <= 1e-9);
  }
}

TEST_CASE("identity channel second difference at 1/2 is about -4") {
  // f(p) = log 2 + h(p) for the identity, so f'' at 1/2 is -4.
  const Channel phi = identity_channel(2);
  RealVector pts(1), vals(1);
  pts << 0.5;
  vals << f_of_p(phi, 0.5);
  const double second = verify_concavity(phi, PGrid{pts, vals}, 1e-2);
  CHECK(second == doctest::Approx(-4.0).epsilon(0.01));
}

TEST_CASE("verify_concavity rejects a grid with no admissible points") {
  const Channel phi = identity_channel(2);
  RealVector pts(1), vals(1);
  pts << 0.5;
  vals << f_of_p(phi, 0.5);
  CHECK_THROWS_AS(verify_concavity(phi, PGrid{pts, vals}, 0.7), InvalidParameter);
}

TEST_CASE("maximize_f lands on 1/2 with the grid-consistent value") {
  for (const Channel& phi : unital_examples()) {
    const MaximizeResult res = maximize_f(phi);
    CHECK(std::abs(res.p_star - 0.5) < 1e-6);
    CHECK(res.value == doctest::Approx(f_of_p(phi, res.p_star)).epsilon(1e-12));
    CHECK(res.value >= f_of_p(phi, 0.3) - 1e-12);
  }
}

TEST_CASE("maximize_f tie-break returns exactly 1/2 on flat objectives") {
  // Depolarizing: f is constant, every p is a maximizer.
  const MaximizeResult res = maximize_f(depolarizing_channel(2));
  CHECK(res.p_star == 0.5);
}

TEST_CASE("saturation holds along both routes for unital qubit channels") {
  for (const Channel& phi : unital_examples()) {
    const SaturationReport rep = verify_saturation(phi);
    CHECK(std::abs(rep.rhs - (map_entropy(phi) - kLog2)) < 1e-13);
    CHECK(std::abs(rep.delta_fast) <= 1e-10);
    CHECK(std::abs(rep.delta_general) <= 1e-6);
    CHECK(std::abs(rep.lhs_general - rep.rhs - rep.delta_general) < 1e-14);
    CHECK(std::abs(rep.lhs_fast - rep.rhs - rep.delta_fast) < 1e-14);
  }
}

TEST_CASE("saturation checker rejects non-unital input") {
  CHECK_THROWS_AS(verify_saturation(amplitude_damping_channel(0.2)), NotUnital);
}
