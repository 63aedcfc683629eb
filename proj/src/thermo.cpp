#include "qreset/thermo.hpp"

#include <stdexcept>

namespace qreset {

double entropy_flow_single_bath(double q, double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  return q / temperature;
}

double entropy_production(double ef, double s0, double s_tau) { return ef + s_tau - s0; }

double landauer_bound(double s0, double s_tau, double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  return temperature * (s0 - s_tau);
}

double mismatch_residual(double ep_rho, double ep_alpha, double d0, double d_tau) {
  return (ep_rho - ep_alpha) - (d0 - d_tau);
}

bool second_law_check(double ep) { return ep >= -1e-6; }

ResetBaseline baseline_from(const QubitState& alpha0, const Trajectory& alpha_traj) {
  const double ef = entropy_flow_single_bath(alpha_traj.final_heat(), 1.0);
  return ResetBaseline{alpha0, alpha_traj.final_state(),
                       entropy_production(ef, alpha_traj.initial_entropy(),
                                          alpha_traj.final_entropy())};
}

ThermoReport report(const QubitState& rho0, const Trajectory& traj, const ResetBaseline& base,
                    const QubitState& target) {
  ThermoReport r;
  r.q = traj.final_heat();
  r.w = traj.final_work();
  r.s0 = traj.initial_entropy();
  r.s_tau = traj.final_entropy();
  r.ef = entropy_flow_single_bath(r.q, 1.0);
  r.ep = entropy_production(r.ef, r.s0, r.s_tau);
  r.d0 = relative_entropy(rho0, base.alpha0);
  r.d_tau = relative_entropy(traj.final_state(), base.alpha_tau);
  const CoherenceSplit cs = coherence_decomposition(rho0, base.alpha0);
  r.kl = cs.kl;
  r.coherence = cs.coherence;
  r.eps_final = trace_distance(traj.final_state(), target);
  return r;
}

}  // namespace qreset
