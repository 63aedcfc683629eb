#pragma once
// Entropy-production accounting for reset protocols: the second-law and
// Landauer bookkeeping, the mismatch residual of the initial-state
// dependence identity
//   EP(rho0) - EP(alpha0) = D[rho0||alpha0] - D[rho_tau||alpha_tau],
// and the per-initial-state report aggregating everything.

#include "qreset/dynamics.hpp"
#include "qreset/qmath.hpp"

namespace qreset {

/// Everything worth knowing about one reset run from one initial state.
/// Invariants: ep = ef + s_tau - s0 by construction and kl + coherence = d0.
struct ThermoReport {
  double q;          // heat to the bath, k_B T
  double w;          // work input, k_B T
  double s0, s_tau;  // system entropies, nats
  double ef;         // entropy flow Q/T, nats
  double ep;         // entropy production, nats
  double d0;         // D[rho0 || alpha0]
  double d_tau;      // D[rho_tau || alpha_tau]
  double kl;         // classical part of d0 in alpha0's eigenbasis
  double coherence;  // relative entropy of coherence on that basis
  double eps_final;  // trace distance of rho_tau to the target
};

/// The minimally dissipative input, its image under the protocol, and its
/// entropy production. Computed once per protocol and shared by reports.
struct ResetBaseline {
  QubitState alpha0;
  QubitState alpha_tau;
  double ep_alpha;
};

/// EF = Q/T for a single thermal bath (k_B = 1, so the result is in nats
/// when Q is in units of k_B T's energy scale). T must be positive.
double entropy_flow_single_bath(double q, double temperature);

/// EP = EF + S(tau) - S(0).
double entropy_production(double ef, double s0, double s_tau);

/// Q_Landauer = k_B T [S(0) - S(tau)]: the minimum heat compatible with the
/// entropy change.
double landauer_bound(double s0, double s_tau, double temperature);

/// (EP_rho - EP_alpha) - (D0 - Dtau); identically zero when alpha0 is the
/// true minimally dissipative state.
double mismatch_residual(double ep_rho, double ep_alpha, double d0, double d_tau);

/// Second law with a small numerical allowance: EP >= -1e-6.
bool second_law_check(double ep);

/// Package alpha0 and its evolved image from the trajectory started there.
ResetBaseline baseline_from(const QubitState& alpha0, const Trajectory& alpha_traj);

/// Full per-initial-state report. `traj` must come from the same protocol
/// that produced the baseline.
ThermoReport report(const QubitState& rho0, const Trajectory& traj, const ResetBaseline& base,
                    const QubitState& target);

}  // namespace qreset
