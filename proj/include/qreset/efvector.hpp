#pragma once
// Entropy-flow-vector machinery: entropy flow is an affine function of the
// initial Bloch vector, EF(a) = EF[I/2] + (1/2) a . phi. The vector phi is
// inferred from four linearly independent probe states, gives a closed form
// for the entropy production of a reliable reset, and pins down the
// minimally dissipative initial state a* = -tanh(phi/2) phi_hat.
//
// minimize_ep_numeric is the independent check on that formula: a
// derivative-free minimizer of trajectory-measured entropy production over
// the open Bloch ball, deliberately ignorant of the closed form.

#include <array>
#include <functional>
#include <stdexcept>

#include "qreset/dynamics.hpp"
#include "qreset/qmath.hpp"

namespace qreset {

/// Raised by infer_ef_vector when the probe states are (numerically)
/// linearly dependent.
struct LinearDependenceError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised by minimize_ep_numeric when no start converges; carries the best
/// point seen so far.
struct ConvergenceError : std::runtime_error {
  BlochVector best;
  double best_value;

  ConvergenceError(const std::string& what, BlochVector b, double v)
      : std::runtime_error(what), best(b), best_value(v) {}
};

/// The affine model of a protocol's entropy flow: EF[I/2], phi, |phi|.
struct EntropyFlowVector {
  double ef_mixed = 0.0;
  std::array<double, 3> phi{};
  double phi_norm = 0.0;
};

/// One measured probe: initial Bloch vector and its entropy flow (nats).
struct Probe {
  BlochVector a;
  double ef;
};

/// Four probes; the 4x4 system matrix (first column 2, then the Bloch
/// components) must be invertible with 1-norm condition number < 1e8.
struct ProbeSet {
  std::array<Probe, 4> probes;
};

/// The well-conditioned default: I/2 plus the pure +x, +y, +z states.
/// EF values are left for the caller to fill in.
ProbeSet default_probe_bloch();

/// Solve the 4x4 linear system for (EF[I/2], phi). Throws
/// LinearDependenceError naming the offending probes if the system is
/// singular or ill-conditioned.
EntropyFlowVector infer_ef_vector(const ProbeSet& probes);

/// 1-norm condition number of the probe matrix (diagnostic output).
double probe_condition_number(const ProbeSet& probes);

/// EF(a) = EF[I/2] + (1/2) a . phi.
double predict_ef(const EntropyFlowVector& v, const BlochVector& a);

/// EP(a) = EF(a) + S_target - S(|a|) for a reliable reset whose final-state
/// entropy is S_target (0 for erasure to a pure state).
double ep_analytic(const EntropyFlowVector& v, const BlochVector& a, double s_target);

/// a* = -tanh(phi/2) phi_hat; the origin when phi = 0. Always strictly
/// inside the Bloch ball.
BlochVector minimally_dissipative_state(const EntropyFlowVector& v);

/// Derivative-free minimization of an EP landscape over the ball
/// |a| <= 1 - 1e-6: multi-start Nelder-Mead from 8 symmetric interior
/// starts, followed by a parabolic line-search polish along the radial and
/// tangential directions (the radial curvature is steep when the minimum
/// sits near the sphere). Deterministic for fixed tolerances. Throws
/// ConvergenceError if no start reaches the diameter tolerance within
/// max_iter iterations.
BlochVector minimize_ep_numeric(const std::function<double(const BlochVector&)>& ep, double tol,
                                int max_iter = 300);

/// Convenience overload: minimizes trajectory-measured entropy production
/// Q(tau)/T + S(rho_tau) - S(rho_0) for the given protocol.
BlochVector minimize_ep_numeric(const ProtocolSchedule& schedule, const LindbladConfig& cfg,
                                double tol);

/// Entropy production measured from a trajectory: Q(tau)/T + S(tau) - S(0).
/// Heat is stored in k_B T units, so Q/T is the same number in nats.
double trajectory_ep(const Trajectory& traj);

/// Measure the default probe set by simulation and infer (EF[I/2], phi).
EntropyFlowVector infer_ef_vector_simulated(const ProtocolSchedule& schedule,
                                            const LindbladConfig& cfg);

}  // namespace qreset
