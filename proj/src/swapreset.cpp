#include "qreset/swapreset.hpp"

#include <cmath>
#include <stdexcept>

namespace qreset {

GibbsBathQubit gibbs_qubit(double eb, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const double x = beta * eb;
  // ln Z = ln(2 cosh x), written to survive large |x|.
  const double ln_z = std::abs(x) + std::log1p(std::exp(-2.0 * std::abs(x)));
  // Populations built directly so the small one keeps full relative
  // precision (the Bloch route would lose it in (1 - tanh x)/2).
  const double g1 = 1.0 / (1.0 + std::exp(2.0 * x));
  const double g0 = 1.0 - g1;
  return GibbsBathQubit{eb, beta, QubitState(Mat2{g0, 0.0, 0.0, g1}), x - ln_z, -x - ln_z};
}

double swap_heat(const QubitState& rho0, const GibbsBathQubit& bath) {
  const double g0 = bath.gamma(0, 0).real();
  const double g1 = bath.gamma(1, 1).real();
  const double p0 = rho0(0, 0).real();
  const double p1 = rho0(1, 1).real();
  return (g0 - p0) * bath.ln_g0 + (g1 - p1) * bath.ln_g1;
}

double swap_entropy_change(const QubitState& rho0, const GibbsBathQubit& bath) {
  return von_neumann_entropy(bath.gamma) - von_neumann_entropy(rho0);
}

double swap_entropy_production(const QubitState& rho0, const GibbsBathQubit& bath) {
  // Q is in k_B T units, so Q/T is the same number in nats.
  return swap_heat(rho0, bath) + swap_entropy_change(rho0, bath);
}

EntropyFlowVector swap_entropy_flow_vector(const GibbsBathQubit& bath) {
  const double g0 = bath.gamma(0, 0).real();
  const double g1 = bath.gamma(1, 1).real();
  EntropyFlowVector v;
  v.ef_mixed = (g0 * bath.ln_g0 + g1 * bath.ln_g1) - 0.5 * (bath.ln_g0 + bath.ln_g1);
  v.phi = {0.0, 0.0, -2.0 * bath.beta * bath.eb};
  v.phi_norm = std::abs(2.0 * bath.beta * bath.eb);
  return v;
}

}  // namespace qreset
