#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "dipolatt/errors.hpp"
#include "dipolatt/figures_of_merit.hpp"

namespace dipolatt::gate_sim {

// Two driven 2-level atoms coupled by exchange; energies in units of
// hbar*gamma unless gamma is set differently.
struct TwoLevelParams {
  double rabi = 0.0;
  double detuning = 0.0;
  double gamma = 1.0;
  double v_c = 0.0;      // coherent exchange coupling
  double gamma_c = 0.0;  // cooperative linewidth

  void validate() const {
    if (gamma <= 0.0 && (gamma != 0.0 || gamma_c != 0.0))
      throw DomainError("TwoLevelParams: gamma must be > 0");
    if (std::abs(gamma_c) > gamma + 1e-12)
      throw DomainError("TwoLevelParams: |Gamma_c| exceeds the cooperative bound gamma");
  }
};

// Non-Hermitian effective Hamiltonian on {gg, ge, eg, ee}.
Eigen::Matrix4cd effective_hamiltonian_4(const TwoLevelParams& p);

struct PerturbativeGroundEnergy {
  std::complex<double> e_gg;  // second-order ground energy
  double fom;                 // V_c / (gamma + Gamma_c); geometry only
  double fom_direct;          // Re(E - E0) / (-2 Im E) from the exact expression
  bool regime_ok;             // |rabi| << |detuning|
};

PerturbativeGroundEnergy ground_energy_perturbative(const TwoLevelParams& p);

struct GateReport {
  Eigen::Matrix4cd unitary = Eigen::Matrix4cd::Identity();
  double leakage = 0.0;
  double phase = 0.0;                      // conditional phase on |11>
  double fidelity = 1.0;                   // mean over the four basis inputs
  double fidelity_superposition = 1.0;     // uniform-superposition input
  double duration = 0.0;                   // units 1/gamma
  double duration_lower_bound = 0.0;       // maximally-excited-dipole bound
  std::array<double, 4> input_survival{{1.0, 1.0, 1.0, 1.0}};
};

// Bookkeeping for the hyperfine encoding; physics enters through geometry.
struct LogicalBasis {
  int twice_F_plus = 4;
  int twice_F_minus = 4;
};

// Level-shift CPHASE: dipoles induced only for logical-|1>, free evolution
// until |11> accumulates phase pi.  s is the catalysis saturation.
GateReport cphase_levelshift(const figures_of_merit::TrapGeometry& geometry,
                             double s, int q = 0, const LogicalBasis& basis = {});

struct SqrtSwapOptions {
  double s = 1e-3;   // catalysis saturation
  int twice_I = 3;   // nuclear spin
  int twice_F = 4;   // ground hyperfine level carrying the qubits
};

// Exchange gate on circular vibrational states in a common spherical well,
// evolved to the leakage recurrence time.
GateReport sqrt_swap(double eta, const SqrtSwapOptions& opts = {});

struct RamseyPulseConfig {
  double pulse_duration = 0.0;   // units 1/gamma; 0 = ideal sudden pulse
  double sudden_threshold = 0.1; // max allowed pulse_duration * |V_c|
};

// Maximally-excited-dipole CPHASE: pi pulse on the (+) atom, half exchange
// cycle, -pi pulse.
GateReport ramsey_cphase(const TwoLevelParams& p, const RamseyPulseConfig& cfg = {});

}  // namespace dipolatt::gate_sim
