#pragma once
// Time-dependent Lindblad evolution of a driven qubit weakly coupled to a
// single thermal bath, with heat/work/entropy bookkeeping, plus the three
// named erasure protocols (rotating gap, fixed-angle gap, pure relaxation).
//
// The Hamiltonian is H = (E/2)[cos(theta) sigma_z + sin(theta) sigma_x] and
// the jump operator L = (1/2)[cos(theta) sigma_x - i sigma_y - sin(theta)
// sigma_z] lowers along the instantaneous energy eigenbasis, satisfying the
// detailed-balance condition [L, H] = E L.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "qreset/qmath.hpp"

namespace qreset {

/// Raised when the integrator detects an invariant violation mid-run
/// (positivity or trace drift beyond tolerance). Usually means dt is too
/// coarse for the requested drive.
struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Instantaneous control point x_t = (E_t, theta_t). E in units of k_B T,
/// theta in radians. E must stay positive: the thermal occupation
/// N = 1/(e^{beta E} - 1) is undefined otherwise.
struct ControlParams {
  double energy;
  double theta;
};

/// Map t in [0, tau] -> ControlParams for the named protocols or a custom
/// control function. The named gap schedule is
/// E_t = E0 + (Etau - E0) sin^2(pi t / 2 tau).
class ProtocolSchedule {
 public:
  enum class Kind { RotatingGap, FixedAngleGap, Relaxation, Custom };

  /// theta_t = pi t / tau: the energy eigenbasis rotates during the ramp.
  static ProtocolSchedule rotating_gap(double e0, double e_tau, double tau);
  /// theta_t = pi: fixed eigenbasis, gap ramp only.
  static ProtocolSchedule fixed_angle_gap(double e0, double e_tau, double tau);
  /// Constant (E, pi) for 0 < t <= tau: relaxation toward equilibrium. The
  /// control jumps to this value immediately after t = 0; no work is
  /// assigned to the initial quench.
  static ProtocolSchedule relaxation(double e, double tau);
  /// Caller-supplied control map. fn must be evaluable slightly outside
  /// [0, tau] (one dt each side) for finite-difference work rates.
  static ProtocolSchedule custom(std::function<ControlParams(double)> fn, double tau);

  ControlParams at(double t) const;
  double duration() const { return tau_; }
  Kind kind() const { return kind_; }

 private:
  ProtocolSchedule(Kind k, double e0, double e_tau, double tau,
                   std::function<ControlParams(double)> fn);

  Kind kind_;
  double e0_ = 0.0;
  double e_tau_ = 0.0;
  double tau_;
  std::function<ControlParams(double)> fn_;
};

/// Integrator configuration. Units: tau and dt in beta*hbar, beta fixed at 1.
struct LindbladConfig {
  double coupling = 0.2;    // dimensionless bath coupling c
  double tau = 50.0;        // protocol duration
  double dt = 1.0 / 500.0;  // RK4 step
  double beta = 1.0;

  /// Throws std::invalid_argument unless dt > 0, tau > 0, c > 0 and tau/dt
  /// is an integer (within 1e-9).
  void validate() const;
  long steps() const;
};

/// Time series produced by evolve(). Samples are stored every 50 steps plus
/// both endpoints. Heat is positive when it flows into the bath.
struct Trajectory {
  std::vector<double> times;
  std::vector<QubitState> states;
  std::vector<double> heat;     // cumulative Q(t), units k_B T
  std::vector<double> work;     // cumulative W(t), units k_B T
  std::vector<double> entropy;  // S(rho_t), nats

  // Diagnostics accumulated over every stored sample.
  double first_law_residual = 0.0;  // [U(tau)-U(0)] - [W(tau)-Q(tau)]
  double max_trace_error = 0.0;     // max |tr rho - 1|
  double min_eigenvalue = 1.0;      // min eigenvalue seen

  const QubitState& initial_state() const { return states.front(); }
  const QubitState& final_state() const { return states.back(); }
  double final_heat() const { return heat.back(); }
  double final_work() const { return work.back(); }
  double initial_entropy() const { return entropy.front(); }
  double final_entropy() const { return entropy.back(); }
};

/// H = (E/2)[cos(theta) sigma_z + sin(theta) sigma_x]; traceless, eigenvalues
/// +-E/2.
Mat2 hamiltonian(const ControlParams& p);

/// Lowering operator along the (E, theta) eigenbasis; [L, H] = E L, L^2 = 0.
Mat2 lowering_operator(double theta);

/// D[L](rho) = L rho L^dag - (1/2){L^dag L, rho}; traceless.
Mat2 dissipator(const Mat2& l, const Mat2& rho);

/// The two thermal dissipator terms
/// cE(N+1) D[L](rho) + cE N D[L^dag](rho) with N = 1/(e^{beta E} - 1).
Mat2 dissipative_part(const Mat2& rho, const ControlParams& p, double coupling, double beta);

/// Full Lindblad right-hand side i[rho, H] + dissipative_part.
Mat2 lindblad_rhs(const Mat2& rho, const ControlParams& p, double coupling, double beta);

/// Fixed-step RK4 integration of the Lindblad equation with heat and work
/// accumulated through the same stages: Qdot = -tr(H * dissipative_part),
/// Wdot = tr(rho * dH/dt), dH/dt by centered finite difference (step dt/10)
/// on the schedule. The state is re-Hermitized after every step.
Trajectory evolve(const QubitState& rho0, const ProtocolSchedule& schedule,
                  const LindbladConfig& cfg);

/// Reliability estimate: max trace distance between Gamma(rho0) and target
/// over the 6 Bloch-axis pure states and I/2 (always included) plus
/// `extra_samples` ball-sampled initial states.
double reliability(const ProtocolSchedule& schedule, const LindbladConfig& cfg,
                   const QubitState& target, int extra_samples, std::uint64_t seed);

}  // namespace qreset
