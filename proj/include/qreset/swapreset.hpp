#pragma once
// Reset by swapping the system qubit with one qubit of a Gibbs bath,
// gamma = e^{-beta H_b}/Z_b with H_b = -E_b sigma_z. Every thermodynamic
// quantity has a closed form, which makes this model the analytic oracle
// for the rest of the library: EP(rho0) = D[rho0 || gamma] exactly, the
// minimally dissipative input is gamma itself, and the entropy-flow vector
// is (0, 0, -2 beta E_b).

#include "qreset/efvector.hpp"
#include "qreset/qmath.hpp"

namespace qreset {

/// One qubit of the bath: thermal state of H_b = -E_b sigma_z, Bloch vector
/// (0, 0, tanh(beta E_b)). Full rank for any finite E_b.
struct GibbsBathQubit {
  double eb;            // bath-qubit energy scale, units k_B T
  double beta;          // inverse temperature
  QubitState gamma;     // the thermal state
  double ln_g0, ln_g1;  // log populations of |0>, |1>
};

/// Build the bath qubit. E_b = 0 gives I/2; beta E_b >> 1 approaches |0><0|.
GibbsBathQubit gibbs_qubit(double eb, double beta = 1.0);

/// Heat released to the bath by the swap, in k_B T units:
/// Q = tr(gamma ln gamma) - tr(rho0 ln gamma). Zero when rho0 = gamma.
double swap_heat(const QubitState& rho0, const GibbsBathQubit& bath);

/// Change in system entropy, nats: tr(rho0 ln rho0) - tr(gamma ln gamma)
/// = S(gamma) - S(rho0).
double swap_entropy_change(const QubitState& rho0, const GibbsBathQubit& bath);

/// Entropy production Q/T + dS_sys = D[rho0 || gamma], nats. Non-negative;
/// diverges as rho0 -> |1><1| while the bath approaches purity.
double swap_entropy_production(const QubitState& rho0, const GibbsBathQubit& bath);

/// Closed-form entropy-flow vector of the swap protocol:
/// EF[I/2] = tr(gamma ln gamma) - (1/2) tr(ln gamma), phi = (0,0,-2 beta E_b).
EntropyFlowVector swap_entropy_flow_vector(const GibbsBathQubit& bath);

}  // namespace qreset
