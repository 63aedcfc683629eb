#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "qreset/dynamics.hpp"
#include "qreset/sampling.hpp"

using namespace qreset;

namespace {

Mat2 projector(const Vec2& v) {
  return Mat2{v[0] * std::conj(v[0]), v[0] * std::conj(v[1]), v[1] * std::conj(v[0]),
              v[1] * std::conj(v[1])};
}

// Thermal state of the instantaneous Hamiltonian, built from its spectrum.
QubitState gibbs_of(const ControlParams& p, double beta = 1.0) {
  const Spectrum2 s = eig_hermitian(hamiltonian(p));
  const double w0 = std::exp(-beta * s.values[0]);
  const double w1 = std::exp(-beta * s.values[1]);
  Mat2 rho = (w0 / (w0 + w1)) * projector(s.vectors[0]) + (w1 / (w0 + w1)) * projector(s.vectors[1]);
  return QubitState(hermitize(rho));
}

LindbladConfig default_config() { return LindbladConfig{0.2, 50.0, 1.0 / 500.0, 1.0}; }

}  // namespace

TEST_CASE("hamiltonian control map") {
  CHECK((hamiltonian({2.0, 0.0}) - kSigmaZ).max_abs() < 1e-15);
  CHECK((hamiltonian({2.0, M_PI}) + kSigmaZ).max_abs() < 1e-12);
  CHECK((hamiltonian({2.0, M_PI / 2}) - kSigmaX).max_abs() < 1e-12);

  RngStream rng(3, 0);
  for (int i = 0; i < 50; ++i) {
    const ControlParams p{0.1 + 10.0 * rng.next_double(), 2.0 * M_PI * rng.next_double()};
    const Mat2 h = hamiltonian(p);
    CHECK(std::abs(h.trace()) < 1e-14);
    const Spectrum2 s = eig_hermitian(h);
    CHECK(s.values[0] == doctest::Approx(0.5 * p.energy));
    CHECK(s.values[1] == doctest::Approx(-0.5 * p.energy));
  }
}

TEST_CASE("lowering operator: examples, detailed balance, nilpotency") {
  CHECK((lowering_operator(0.0) - Mat2{0, 0, 1, 0}).max_abs() < 1e-15);
  // theta = pi: (1/2)[-sigma_x - i sigma_y] = [[0,-1],[0,0]]
  CHECK((lowering_operator(M_PI) - Mat2{0, -1, 0, 0}).max_abs() < 1e-12);

  RngStream rng(5, 0);
  for (int i = 0; i < 100; ++i) {
    const double theta = 4.0 * M_PI * (rng.next_double() - 0.5);
    const double e = 0.05 + 12.0 * rng.next_double();
    const Mat2 l = lowering_operator(theta);
    const Mat2 h = hamiltonian({e, theta});
    CHECK((commutator(l, h) - e * l).max_abs() < 1e-12);
    CHECK((l * l).max_abs() < 1e-14);
  }
}

TEST_CASE("dissipator") {
  const Mat2 lower = lowering_operator(0.0);  // |1><0|
  const QubitState ground = bloch_to_density({0, 0, 1});
  const QubitState excited = bloch_to_density({0, 0, -1});

  // Hand evaluation: L|0><0|L^dag = |1><1|, {L^dag L, |0><0|}/2 = |0><0|.
  CHECK((dissipator(lower, ground.matrix()) - Mat2{-1, 0, 0, 1}).max_abs() < 1e-15);
  CHECK(dissipator(lower, excited.matrix()).max_abs() < 1e-15);

  RngStream rng(7, 0);
  for (int i = 0; i < 100; ++i) {
    const Mat2 l = lowering_operator(7.0 * rng.next_double());
    const Mat2 rho = bloch_to_density(sample_initial_state(rng, SamplingMode::Ball)).matrix();
    const Mat2 d = dissipator(l, rho);
    CHECK(std::abs(d.trace()) < 1e-12);
    CHECK((d - d.adjoint()).max_abs() < 1e-12);  // Hermiticity preserved
  }
}

TEST_CASE("lindblad_rhs: Gibbs state is the fixed point at fixed controls") {
  RngStream rng(9, 0);
  for (int i = 0; i < 25; ++i) {
    const ControlParams p{0.2 + 10.0 * rng.next_double(), 2.0 * M_PI * rng.next_double()};
    const QubitState eq = gibbs_of(p);
    CHECK(lindblad_rhs(eq.matrix(), p, 0.2, 1.0).max_abs() < 1e-10);
  }
}

TEST_CASE("lindblad_rhs: traceless, Hermiticity-preserving, drives toward the ground state") {
  RngStream rng(11, 0);
  for (int i = 0; i < 100; ++i) {
    const ControlParams p{0.1 + 10.0 * rng.next_double(), 2.0 * M_PI * rng.next_double()};
    const Mat2 rho = bloch_to_density(sample_initial_state(rng, SamplingMode::Ball)).matrix();
    const Mat2 k = lindblad_rhs(rho, p, 0.2, 1.0);
    CHECK(std::abs(k.trace()) < 1e-12);
    CHECK((k - k.adjoint()).max_abs() < 1e-12);
  }

  // From I/2 at theta = 0 the ground state is |1>, so the (N+1) > N
  // imbalance must push rho_11 up.
  const Mat2 k = lindblad_rhs((0.5 * kIdentity), {2.0, 0.0}, 0.2, 1.0);
  CHECK(k(1, 1).real() > 0.0);
  CHECK(k(0, 0).real() < 0.0);

  CHECK_THROWS_AS(lindblad_rhs(0.5 * kIdentity, {-1.0, 0.0}, 0.2, 1.0), std::invalid_argument);
}

TEST_CASE("dissipative_part: equilibrium kernel and rhs decomposition") {
  RngStream rng(13, 0);
  for (int i = 0; i < 25; ++i) {
    const ControlParams p{0.2 + 8.0 * rng.next_double(), 2.0 * M_PI * rng.next_double()};
    CHECK(dissipative_part(gibbs_of(p).matrix(), p, 0.2, 1.0).max_abs() < 1e-10);

    const Mat2 rho = bloch_to_density(sample_initial_state(rng, SamplingMode::Ball)).matrix();
    const Mat2 unitary = Complex(0, 1) * commutator(rho, hamiltonian(p));
    const Mat2 sum = unitary + dissipative_part(rho, p, 0.2, 1.0);
    CHECK((sum - lindblad_rhs(rho, p, 0.2, 1.0)).max_abs() < 1e-14);
  }
}

TEST_CASE("evolve: equilibrium stays put with no heat or work") {
  const ControlParams p{3.0, 1.1};
  const auto sched = ProtocolSchedule::custom([p](double) { return p; }, 5.0);
  const LindbladConfig cfg{0.2, 5.0, 0.01, 1.0};
  const QubitState eq = gibbs_of(p);
  const Trajectory traj = evolve(eq, sched, cfg);
  CHECK(std::abs(traj.final_heat()) < 1e-8);
  CHECK(std::abs(traj.final_work()) < 1e-8);
  CHECK(trace_distance(traj.final_state(), eq) < 1e-9);
  CHECK(traj.heat.front() == 0.0);
  CHECK(traj.work.front() == 0.0);
}

TEST_CASE("evolve: relaxation protocol reaches the Gibbs state of the final Hamiltonian") {
  const auto sched = ProtocolSchedule::relaxation(10.0, 50.0);
  const Trajectory traj = evolve(bloch_to_density({0, 0, 0}), sched, default_config());
  // H = -5 sigma_z in k_B T units: a_z -> tanh(5).
  const double expected = std::tanh(5.0);
  CHECK(expected == doctest::Approx(0.999909).epsilon(1e-6));
  CHECK(traj.final_state().bloch().z == doctest::Approx(expected).epsilon(1e-8));
  CHECK(std::abs(traj.final_state().bloch().x) < 1e-10);
  CHECK(std::abs(traj.final_work()) < 1e-12);  // constant Hamiltonian
}

TEST_CASE("evolve: conservation diagnostics on the built-in protocols") {
  const LindbladConfig cfg = default_config();
  const ProtocolSchedule protocols[] = {
      ProtocolSchedule::rotating_gap(0.2, 10.0, 50.0),
      ProtocolSchedule::fixed_angle_gap(0.2, 10.0, 50.0),
      ProtocolSchedule::relaxation(10.0, 50.0),
  };
  RngStream rng(15, 0);
  for (const auto& sched : protocols) {
    for (int i = 0; i < 3; ++i) {
      const BlochVector a = sample_initial_state(rng, i == 0 ? SamplingMode::Sphere
                                                             : SamplingMode::Ball);
      const Trajectory traj = evolve(bloch_to_density(a), sched, cfg);
      CHECK(std::abs(traj.first_law_residual) <= 1e-8);
      CHECK(traj.max_trace_error <= 1e-10);
      CHECK(traj.min_eigenvalue >= -1e-8);
      CHECK(traj.times.size() == 501);  // every 50 steps plus endpoints
    }
  }
}

TEST_CASE("evolve: heat converges at fourth order in dt") {
  const QubitState rho0 = bloch_to_density({1, 0, 0});
  auto heat_at = [&](double dt) {
    const LindbladConfig cfg{0.2, 50.0, dt, 1.0};
    return evolve(rho0, ProtocolSchedule::rotating_gap(0.2, 10.0, 50.0), cfg).final_heat();
  };
  // Order measured where the discretization error is visible.
  const double q1 = heat_at(0.05);
  const double q2 = heat_at(0.025);
  const double q3 = heat_at(0.0125);
  const double ratio = std::abs(q1 - q2) / std::abs(q2 - q3);
  CHECK(ratio > 8.0);
  CHECK(ratio < 32.0);
  // At the working step the heat is already converged below 1e-12.
  CHECK(std::abs(heat_at(1.0 / 500.0) - heat_at(1.0 / 1000.0)) <= 1e-12);
}

TEST_CASE("evolve: coarse dt fails loudly") {
  const LindbladConfig cfg{0.2, 50.0, 0.5, 1.0};
  CHECK_THROWS_AS(
      evolve(bloch_to_density({1, 0, 0}), ProtocolSchedule::relaxation(10.0, 50.0), cfg),
      IntegrationError);
}

TEST_CASE("evolve: config validation") {
  const auto sched = ProtocolSchedule::relaxation(10.0, 50.0);
  CHECK_THROWS_AS(evolve(bloch_to_density({0, 0, 0}), sched, LindbladConfig{0.2, 50.0, -0.1, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(evolve(bloch_to_density({0, 0, 0}), sched, LindbladConfig{0.2, 50.0, 0.3, 1.0}),
                  std::invalid_argument);  // tau/dt not an integer
  CHECK_THROWS_AS(evolve(bloch_to_density({0, 0, 0}), sched, LindbladConfig{-0.2, 50.0, 0.1, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("reliability of the relaxation protocol") {
  const auto sched = ProtocolSchedule::relaxation(10.0, 50.0);
  const LindbladConfig cfg = default_config();
  const QubitState target = bloch_to_density({0, 0, 1});

  const double eps7 = reliability(sched, cfg, target, 0, 1);
  CHECK(eps7 <= 1e-2);

  // Monotone non-decreasing in the sample count (max over supersets).
  const double eps12 = reliability(sched, cfg, target, 5, 1);
  CHECK(eps12 >= eps7);
}

TEST_CASE("reliability of a near-identity one-step schedule") {
  // One dt of barely-coupled evolution moves nothing; against the image of
  // I/2 the canonical probe set alone determines epsilon ~ max Bloch radius/2.
  const double dt = 1.0 / 500.0;
  const auto sched = ProtocolSchedule::custom([](double) { return ControlParams{12.0, 0.3}; }, dt);
  const LindbladConfig cfg{1e-9, dt, dt, 1.0};
  const QubitState image_of_mixed =
      evolve(bloch_to_density({0, 0, 0}), sched, cfg).final_state();
  const double eps = reliability(sched, cfg, image_of_mixed, 0, 1);
  CHECK(eps == doctest::Approx(0.5).epsilon(1e-6));  // pure probes stay pure
}
