#include "qreset/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "qreset/sampling.hpp"

namespace qreset {

namespace {

constexpr int kStoreEvery = 50;

// Compensated (Kahan) accumulator. Heat and work are sums of ~1e5 small
// increments; plain summation would leave roundoff near the tolerance of the
// first-law check.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double min_eigenvalue_of(const Mat2& rho) {
  const double h = 0.5 * (rho(0, 0).real() + rho(1, 1).real());
  const double r = std::hypot(0.5 * (rho(0, 0).real() - rho(1, 1).real()), std::abs(rho(0, 1)));
  return h - r;
}

struct StageRates {
  Mat2 k;      // drho/dt
  double qdot;  // heat into bath
  double wdot;  // drive power
};

StageRates stage_rates(const Mat2& rho, double t, const ProtocolSchedule& schedule,
                       const LindbladConfig& cfg, double fd_step) {
  const ControlParams p = schedule.at(t);
  const Mat2 h = hamiltonian(p);
  const Mat2 diss = dissipative_part(rho, p, cfg.coupling, cfg.beta);

  StageRates out;
  out.k = Complex(0.0, 1.0) * commutator(rho, h) + diss;
  out.qdot = -(h * diss).trace().real();
  const Mat2 hdot = (1.0 / (2.0 * fd_step)) *
                    (hamiltonian(schedule.at(t + fd_step)) - hamiltonian(schedule.at(t - fd_step)));
  out.wdot = (rho * hdot).trace().real();
  return out;
}

}  // namespace

// ------------------------------------------------------ ProtocolSchedule ---

ProtocolSchedule::ProtocolSchedule(Kind k, double e0, double e_tau, double tau,
                                   std::function<ControlParams(double)> fn)
    : kind_(k), e0_(e0), e_tau_(e_tau), tau_(tau), fn_(std::move(fn)) {
  if (tau_ <= 0.0) throw std::invalid_argument("schedule duration must be positive");
}

ProtocolSchedule ProtocolSchedule::rotating_gap(double e0, double e_tau, double tau) {
  return ProtocolSchedule(Kind::RotatingGap, e0, e_tau, tau, nullptr);
}

ProtocolSchedule ProtocolSchedule::fixed_angle_gap(double e0, double e_tau, double tau) {
  return ProtocolSchedule(Kind::FixedAngleGap, e0, e_tau, tau, nullptr);
}

ProtocolSchedule ProtocolSchedule::relaxation(double e, double tau) {
  return ProtocolSchedule(Kind::Relaxation, e, e, tau, nullptr);
}

ProtocolSchedule ProtocolSchedule::custom(std::function<ControlParams(double)> fn, double tau) {
  if (!fn) throw std::invalid_argument("custom schedule requires a control function");
  return ProtocolSchedule(Kind::Custom, 0.0, 0.0, tau, std::move(fn));
}

ControlParams ProtocolSchedule::at(double t) const {
  switch (kind_) {
    case Kind::RotatingGap: {
      const double s = std::sin(M_PI * t / (2.0 * tau_));
      return ControlParams{e0_ + (e_tau_ - e0_) * s * s, M_PI * t / tau_};
    }
    case Kind::FixedAngleGap: {
      const double s = std::sin(M_PI * t / (2.0 * tau_));
      return ControlParams{e0_ + (e_tau_ - e0_) * s * s, M_PI};
    }
    case Kind::Relaxation:
      return ControlParams{e_tau_, M_PI};
    case Kind::Custom:
      return fn_(t);
  }
  throw std::logic_error("unreachable");
}

// -------------------------------------------------------- LindbladConfig ---

void LindbladConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (!(coupling > 0.0)) throw std::invalid_argument("coupling must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const double n = tau / dt;
  if (n < 1.0 - 1e-9 || std::abs(n - std::llround(n)) > 1e-9)
    throw std::invalid_argument("tau/dt must be an integer number of steps >= 1");
}

long LindbladConfig::steps() const { return std::llround(tau / dt); }

// ------------------------------------------------------------- operators ---

Mat2 hamiltonian(const ControlParams& p) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  return Mat2{Complex(0.5 * p.energy * c, 0.0), Complex(0.5 * p.energy * s, 0.0),
              Complex(0.5 * p.energy * s, 0.0), Complex(-0.5 * p.energy * c, 0.0)};
}

Mat2 lowering_operator(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  // (1/2)[cos(theta) sigma_x - i sigma_y - sin(theta) sigma_z]
  return Mat2{Complex(-0.5 * s, 0.0), Complex(0.5 * (c - 1.0), 0.0),
              Complex(0.5 * (c + 1.0), 0.0), Complex(0.5 * s, 0.0)};
}

Mat2 dissipator(const Mat2& l, const Mat2& rho) {
  const Mat2 ld = l.adjoint();
  return l * rho * ld - 0.5 * anticommutator(ld * l, rho);
}

Mat2 dissipative_part(const Mat2& rho, const ControlParams& p, double coupling, double beta) {
  if (!(p.energy > 0.0))
    throw std::invalid_argument("energy gap must be positive (thermal occupation undefined)");
  const double occupation = 1.0 / std::expm1(beta * p.energy);
  const Mat2 l = lowering_operator(p.theta);
  const double rate = coupling * p.energy;
  return rate * (occupation + 1.0) * dissipator(l, rho) +
         rate * occupation * dissipator(l.adjoint(), rho);
}

Mat2 lindblad_rhs(const Mat2& rho, const ControlParams& p, double coupling, double beta) {
  return Complex(0.0, 1.0) * commutator(rho, hamiltonian(p)) +
         dissipative_part(rho, p, coupling, beta);
}

// ----------------------------------------------------------------- evolve ---

Trajectory evolve(const QubitState& rho0, const ProtocolSchedule& schedule,
                  const LindbladConfig& cfg) {
  cfg.validate();
  if (std::abs(schedule.duration() - cfg.tau) > 1e-9)
    throw std::invalid_argument("schedule duration and cfg.tau disagree");

  const long n_steps = cfg.steps();
  const double dt = cfg.dt;
  const double fd_step = dt / 10.0;

  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(n_steps / kStoreEvery) + 2);

  Mat2 rho = rho0.matrix();
  KahanSum q;
  KahanSum w;

  auto store = [&](long step) {
    const double t = step * dt;
    const double trace_err = std::abs(rho.trace() - Complex(1.0, 0.0));
    const double min_eig = min_eigenvalue_of(rho);
    traj.max_trace_error = std::max(traj.max_trace_error, trace_err);
    traj.min_eigenvalue = std::min(traj.min_eigenvalue, min_eig);
    if (min_eig < -1e-8 || trace_err > 1e-10)
      throw IntegrationError("state invariants violated at t = " + std::to_string(t) +
                             " (min eig " + std::to_string(min_eig) + ", trace error " +
                             std::to_string(trace_err) + "); try a smaller dt");
    QubitState state = [&] {
      try {
        return QubitState(rho);
      } catch (const InvalidState& e) {
        throw IntegrationError(std::string("stored state invalid at t = ") + std::to_string(t) +
                               " (" + e.what() + "); try a smaller dt");
      }
    }();
    traj.times.push_back(t);
    traj.entropy.push_back(von_neumann_entropy(state));
    traj.states.push_back(std::move(state));
    traj.heat.push_back(q.sum);
    traj.work.push_back(w.sum);
  };

  store(0);

  for (long step = 0; step < n_steps; ++step) {
    const double t = step * dt;

    const StageRates s1 = stage_rates(rho, t, schedule, cfg, fd_step);
    const StageRates s2 =
        stage_rates(rho + (0.5 * dt) * s1.k, t + 0.5 * dt, schedule, cfg, fd_step);
    const StageRates s3 =
        stage_rates(rho + (0.5 * dt) * s2.k, t + 0.5 * dt, schedule, cfg, fd_step);
    const StageRates s4 = stage_rates(rho + dt * s3.k, t + dt, schedule, cfg, fd_step);

    rho += (dt / 6.0) * (s1.k + 2.0 * s2.k + 2.0 * s3.k + s4.k);
    rho = hermitize(rho);  // suppress roundoff drift
    q.add((dt / 6.0) * (s1.qdot + 2.0 * s2.qdot + 2.0 * s3.qdot + s4.qdot));
    w.add((dt / 6.0) * (s1.wdot + 2.0 * s2.wdot + 2.0 * s3.wdot + s4.wdot));

    if ((step + 1) % kStoreEvery == 0 || step + 1 == n_steps) store(step + 1);
  }

  const double u0 = (rho0.matrix() * hamiltonian(schedule.at(0.0))).trace().real();
  const double u_tau =
      (traj.final_state().matrix() * hamiltonian(schedule.at(cfg.tau))).trace().real();
  traj.first_law_residual = (u_tau - u0) - (traj.final_work() - traj.final_heat());
  return traj;
}

double reliability(const ProtocolSchedule& schedule, const LindbladConfig& cfg,
                   const QubitState& target, int extra_samples, std::uint64_t seed) {
  if (extra_samples < 0) throw std::invalid_argument("sample count must be non-negative");
  std::vector<BlochVector> probes = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                     {0, -1, 0}, {0, 0, 1},  {0, 0, -1}, {0, 0, 0}};
  for (int i = 0; i < extra_samples; ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    probes.push_back(sample_initial_state(rng, SamplingMode::Ball));
  }
  double eps = 0.0;
  for (const BlochVector& a : probes) {
    const Trajectory traj = evolve(bloch_to_density(a), schedule, cfg);
    eps = std::max(eps, trace_distance(traj.final_state(), target));
  }
  return eps;
}

}  // namespace qreset
