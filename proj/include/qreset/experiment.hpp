#pragma once
// Batch experiment driver behind the CLI: experiment configuration (JSON
// file plus command-line overrides), deterministic state sampling, the four
// commands (simulate / infer-phi / verify / swap-demo) and their CSV/JSON
// outputs.
//
// Determinism contract: every sample owns an RngStream keyed by
// (seed, sample index) and results are written in index order, so CSV output
// is byte-identical across runs and thread counts. Summary JSON is identical
// except for its timing field.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qreset/dynamics.hpp"
#include "qreset/efvector.hpp"
#include "qreset/qmath.hpp"
#include "qreset/sampling.hpp"
#include "qreset/swapreset.hpp"
#include "qreset/thermo.hpp"

namespace qreset {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Process exit codes shared by the commands and the CLI wrapper.
enum ExitCode : int {
  kOk = 0,
  kAssertionFailure = 1,
  kConfigError = 2,
  kNumericalFailure = 3,
};

/// Tabulated control schedule for protocol "custom": (t, E, theta) knots,
/// linearly interpolated, clamped at the ends.
struct CustomScheduleTable {
  std::vector<double> times;
  std::vector<double> energies;
  std::vector<double> thetas;
};

struct ExperimentConfig {
  // protocol: fig1-rotating | fig2-fixed-angle | fig3-relaxation | swap | custom
  std::string protocol = "fig3-relaxation";
  double coupling = 0.2;     // c
  double tau = 50.0;         // duration, beta*hbar
  double dt = 1.0 / 500.0;   // integrator step
  double e0 = 0.2;           // E0, k_B T
  double e_tau = 10.0;       // Etau, k_B T
  double eb = 1.0;           // bath-qubit scale for the swap model
  int samples = 10;
  std::uint64_t seed = 1;
  SamplingMode sampling = SamplingMode::Ball;
  BlochVector target{0.0, 0.0, 1.0};  // desired final state r_tau
  std::string out_dir = ".";
  double tolerance = 1e-5;   // |residual| gate used by verify
  bool alpha0_from_phi = false;
  std::optional<BlochVector> initial;  // fixes the (single) initial state
  std::optional<CustomScheduleTable> custom_schedule;

  static ExperimentConfig from_json_file(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text);

  /// Throws ConfigError naming the offending field.
  void validate() const;

  bool is_swap() const { return protocol == "swap"; }
  ProtocolSchedule schedule() const;  // Lindblad protocols only
  LindbladConfig lindblad() const;
  QubitState target_state() const { return bloch_to_density(target); }
};

/// Run fn(0..n-1) on a small worker pool; any exception is rethrown on the
/// calling thread. Work items must only touch their own slot.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Shortest text that round-trips a double exactly ("%.17g").
std::string format_full(double v);

// Commands. Each writes its outputs under cfg.out_dir, prints a one-line
// summary, and returns an ExitCode. Partial output is flushed before any
// assertion gate is evaluated.
int cmd_simulate(const ExperimentConfig& cfg);
int cmd_infer_phi(const ExperimentConfig& cfg);
int cmd_verify(const ExperimentConfig& cfg);
int cmd_swap_demo(const ExperimentConfig& cfg);

}  // namespace qreset
