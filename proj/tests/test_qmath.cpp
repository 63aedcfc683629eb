#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>

#include "doctest.h"
#include "qreset/qmath.hpp"
#include "qreset/sampling.hpp"

using namespace qreset;

namespace {

const double kLn2 = std::log(2.0);

QubitState random_state(RngStream& rng, SamplingMode mode = SamplingMode::Ball) {
  return bloch_to_density(sample_initial_state(rng, mode));
}

double max_abs_diff(const Mat2& a, const Mat2& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("bloch_to_density on the canonical points") {
  CHECK(max_abs_diff(bloch_to_density({0, 0, 0}).matrix(), 0.5 * kIdentity) < 1e-15);
  CHECK(max_abs_diff(bloch_to_density({0, 0, 1}).matrix(), Mat2{1, 0, 0, 0}) < 1e-15);
  CHECK(max_abs_diff(bloch_to_density({1, 0, 0}).matrix(), 0.5 * (kIdentity + kSigmaX)) < 1e-15);
  CHECK_THROWS_AS(bloch_to_density({1.1, 0, 0}), InvalidState);
  // Norm within tolerance above 1 is accepted as pure.
  CHECK(bloch_to_density({1.0 + 5e-10, 0, 0}).bloch().norm() == doctest::Approx(1.0));
}

TEST_CASE("density_to_bloch on the canonical points") {
  CHECK(bloch_distance(density_to_bloch(QubitState(0.5 * kIdentity)), {0, 0, 0}) < 1e-15);
  CHECK(bloch_distance(density_to_bloch(QubitState(Mat2{0, 0, 0, 1})), {0, 0, -1}) < 1e-15);
  CHECK(bloch_distance(density_to_bloch(QubitState(hermitize(0.5 * (kIdentity + kSigmaY)))),
                       {0, 1, 0}) < 1e-15);
}

TEST_CASE("bloch round trip over random states") {
  RngStream rng(11, 0);
  for (int i = 0; i < 200; ++i) {
    BlochVector a = sample_initial_state(rng, i % 2 ? SamplingMode::Ball : SamplingMode::Sphere);
    CHECK(bloch_distance(density_to_bloch(bloch_to_density(a)), a) < 1e-12);
  }
}

TEST_CASE("QubitState rejects invalid matrices") {
  CHECK_THROWS_AS(QubitState(Mat2{1, 0, 0, 1}), InvalidState);                  // trace 2
  CHECK_THROWS_AS(QubitState(Mat2{0.5, Complex(0, 1), Complex(0, 1), 0.5}), InvalidState);
  CHECK_THROWS_AS(QubitState(Mat2{1.2, 0, 0, -0.2}), InvalidState);             // negative eig
}

TEST_CASE("eig_hermitian closed form") {
  Spectrum2 s = eig_hermitian(kSigmaZ);
  CHECK(s.values[0] == doctest::Approx(1.0));
  CHECK(s.values[1] == doctest::Approx(-1.0));

  s = eig_hermitian(kIdentity);
  CHECK(s.values[0] == doctest::Approx(1.0));
  CHECK(s.values[1] == doctest::Approx(1.0));

  s = eig_hermitian(0.5 * (kIdentity + kSigmaX));
  CHECK(s.values[0] == doctest::Approx(1.0));
  CHECK(s.values[1] == doctest::Approx(0.0));
  // top eigenvector is (|0> + |1>)/sqrt(2) up to phase
  CHECK(std::abs(std::abs(s.vectors[0][0]) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(std::abs(s.vectors[0][1]) - 1.0 / std::sqrt(2.0)) < 1e-12);

  CHECK_THROWS_AS(eig_hermitian(Mat2{0, 1, 2, 0}), InvalidState);
}

TEST_CASE("eig_hermitian reconstruction and orthonormality over random matrices") {
  RngStream rng(17, 0);
  for (int i = 0; i < 500; ++i) {
    const double a = 4.0 * rng.next_double() - 2.0;
    const double d = 4.0 * rng.next_double() - 2.0;
    const Complex b(2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0);
    const Mat2 m{Complex(a, 0), b, std::conj(b), Complex(d, 0)};
    const Spectrum2 s = eig_hermitian(m);

    CHECK(s.values[0] >= s.values[1]);
    Mat2 rec{};
    for (int k = 0; k < 2; ++k) {
      const Vec2& v = s.vectors[k];
      rec += s.values[k] * Mat2{v[0] * std::conj(v[0]), v[0] * std::conj(v[1]),
                                v[1] * std::conj(v[0]), v[1] * std::conj(v[1])};
    }
    CHECK(max_abs_diff(rec, m) < 1e-10);

    const Complex dot01 = std::conj(s.vectors[0][0]) * s.vectors[1][0] +
                          std::conj(s.vectors[0][1]) * s.vectors[1][1];
    CHECK(std::abs(dot01) < 1e-10);
    for (int k = 0; k < 2; ++k) {
      const double n = std::norm(s.vectors[k][0]) + std::norm(s.vectors[k][1]);
      CHECK(std::abs(n - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy(bloch_to_density({0, 0, 0})) == doctest::Approx(kLn2));
  CHECK(von_neumann_entropy(bloch_to_density({0, 0, 1})) == doctest::Approx(0.0));
  CHECK(von_neumann_entropy(bloch_to_density({1, 0, 0})) == doctest::Approx(0.0));

  // a = 0.5, evaluated from the binary-entropy form directly.
  const double expected = -(0.75 * std::log(0.75) + 0.25 * std::log(0.25));
  CHECK(expected == doctest::Approx(0.562335).epsilon(1e-6));
  CHECK(von_neumann_entropy(bloch_to_density({0.5, 0, 0})) == doctest::Approx(expected));
  CHECK(von_neumann_entropy(bloch_to_density({0.3, 0, -0.4})) == doctest::Approx(expected));
}

TEST_CASE("entropy from eigenvalues agrees with the Bloch-norm form") {
  RngStream rng(23, 0);
  for (int i = 0; i < 1000; ++i) {
    const BlochVector a = sample_initial_state(rng, SamplingMode::Ball);
    const double s1 = von_neumann_entropy(bloch_to_density(a));
    const double s2 = entropy_of_bloch_norm(a.norm());
    CHECK(std::abs(s1 - s2) <= 1e-12);
  }
}

TEST_CASE("relative entropy basics") {
  RngStream rng(29, 0);
  for (int i = 0; i < 50; ++i) {
    const QubitState rho = random_state(rng);
    CHECK(std::abs(relative_entropy(rho, rho)) < 1e-12);
  }

  // D[|1><1| || gamma] for a Gibbs qubit at beta*Eb = 1 equals -ln g1.
  const QubitState excited = bloch_to_density({0, 0, -1});
  const QubitState gibbs = bloch_to_density({0, 0, std::tanh(1.0)});
  const double g1 = std::exp(-1.0) / (std::exp(1.0) + std::exp(-1.0));
  const double expected = -std::log(g1);
  CHECK(expected == doctest::Approx(2.126928).epsilon(1e-6));
  CHECK(relative_entropy(excited, gibbs) == doctest::Approx(expected).epsilon(1e-12));

  // Support violation diverges.
  const QubitState ground = bloch_to_density({0, 0, 1});
  CHECK(std::isinf(relative_entropy(excited, ground)));
  CHECK(std::isinf(relative_entropy(bloch_to_density({0, 0, 0}), ground)));
  // But D[pure || itself] stays zero.
  CHECK(std::abs(relative_entropy(ground, ground)) < 1e-12);
}

TEST_CASE("relative entropy is non-negative, zero only at equal states") {
  RngStream rng(31, 0);
  for (int i = 0; i < 1000; ++i) {
    const QubitState rho = random_state(rng);
    const QubitState sigma = random_state(rng);
    const double d = relative_entropy(rho, sigma);
    CHECK(d >= -1e-12);
    const bool d_zero = d <= 1e-10;
    const bool same = trace_distance(rho, sigma) <= 1e-10;
    CHECK(d_zero == same);
  }
}

TEST_CASE("heat identity: D[rho||I/2] + S(rho) = ln 2") {
  const QubitState mixed = bloch_to_density({0, 0, 0});
  RngStream rng(37, 0);
  for (int i = 0; i < 1000; ++i) {
    const QubitState rho = random_state(rng, i % 3 ? SamplingMode::Ball : SamplingMode::Sphere);
    CHECK(std::abs(relative_entropy(rho, mixed) + von_neumann_entropy(rho) - kLn2) <= 1e-12);
  }
}

TEST_CASE("trace distance") {
  const QubitState g = bloch_to_density({0, 0, 1});
  const QubitState e = bloch_to_density({0, 0, -1});
  const QubitState mixed = bloch_to_density({0, 0, 0});
  CHECK(trace_distance(g, g) == doctest::Approx(0.0));
  CHECK(trace_distance(g, e) == doctest::Approx(1.0));
  CHECK(trace_distance(mixed, g) == doctest::Approx(0.5));

  // Qubit specialization: half the Euclidean Bloch distance; symmetric.
  RngStream rng(41, 0);
  for (int i = 0; i < 300; ++i) {
    const BlochVector a = sample_initial_state(rng, SamplingMode::Ball);
    const BlochVector b = sample_initial_state(rng, SamplingMode::Ball);
    const double t = trace_distance(bloch_to_density(a), bloch_to_density(b));
    CHECK(std::abs(t - 0.5 * bloch_distance(a, b)) < 1e-12);
    CHECK(std::abs(t - trace_distance(bloch_to_density(b), bloch_to_density(a))) < 1e-14);
  }
}

TEST_CASE("coherence decomposition") {
  RngStream rng(43, 0);

  SUBCASE("rho0 = alpha0 gives (0,0)") {
    for (int i = 0; i < 20; ++i) {
      const QubitState rho = random_state(rng);
      const CoherenceSplit cs = coherence_decomposition(rho, rho);
      CHECK(std::abs(cs.kl) < 1e-10);
      CHECK(std::abs(cs.coherence) < 1e-10);
    }
  }

  SUBCASE("diagonal in alpha0's eigenbasis means zero coherence") {
    const QubitState alpha = bloch_to_density({0, 0, 0.5});
    const QubitState rho = bloch_to_density({0, 0, -0.3});
    const CoherenceSplit cs = coherence_decomposition(rho, alpha);
    CHECK(std::abs(cs.coherence) < 1e-12);
    CHECK(cs.kl == doctest::Approx(relative_entropy(rho, alpha)).epsilon(1e-12));
  }

  SUBCASE("degenerate alpha0 = I/2 uses the z-basis") {
    const QubitState alpha = bloch_to_density({0, 0, 0});
    const QubitState rho = bloch_to_density({1, 0, 0});
    const CoherenceSplit cs = coherence_decomposition(rho, alpha);
    CHECK(std::abs(cs.kl) < 1e-12);
    CHECK(cs.coherence == doctest::Approx(kLn2));
  }

  SUBCASE("split reproduces D, both parts in range, pinching bound") {
    for (int i = 0; i < 1000; ++i) {
      const QubitState rho = random_state(rng);
      const QubitState alpha = bloch_to_density(0.98 * sample_initial_state(rng, SamplingMode::Ball));
      const double d = relative_entropy(rho, alpha);
      const CoherenceSplit cs = coherence_decomposition(rho, alpha);
      CHECK(std::abs(cs.kl + cs.coherence - d) <= 1e-10);
      CHECK(cs.kl >= -1e-12);
      CHECK(cs.coherence >= -1e-12);
      CHECK(cs.coherence <= kLn2 + 1e-12);
      CHECK(cs.kl <= d + 1e-10);  // pinching monotonicity
    }
  }
}
