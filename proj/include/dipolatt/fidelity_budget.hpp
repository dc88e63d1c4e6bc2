#pragma once

#include "dipolatt/errors.hpp"
#include "dipolatt/figures_of_merit.hpp"

namespace dipolatt::fidelity_budget {

// Lattice and protocol inputs, all dimensionless.  Detunings are in units of
// the atomic linewidth gamma; energies in recoil units E_R where noted.
struct LatticeParams {
  double intensity_ratio;        // I_1 / I_0, single beam over saturation
  double linewidth_over_recoil;  // hbar gamma / E_R
  int hyperfine_F;               // ground F carrying the qubit
  double transport_factor = 2.0; // n >= 2 oscillation periods of transport
  double protocol_constant;      // c: |F| = c / eta^3 for the chosen geometry
  double lattice_detuning = 0.0; // Delta_L / gamma (0 = unset)

  void validate() const {
    if (intensity_ratio <= 0.0 || linewidth_over_recoil <= 0.0 ||
        protocol_constant <= 0.0)
      throw DomainError("LatticeParams: fields must be positive");
    if (hyperfine_F < 1) throw DomainError("LatticeParams: F must be >= 1");
    if (transport_factor < 2.0)
      throw DomainError("LatticeParams: transport factor n must be >= 2");
  }
};

struct TrapDerived {
  double omega_osc_over_recoil;  // hbar omega_osc / E_R
  double eta;                    // Lamb-Dicke parameter
};

// Oscillation frequency and localization of the three-color lattice at the
// given detuning: hbar omega/E_R = 4 sqrt(2 U_1 / (3 E_R)), eta^2 = E_R/(hbar omega).
TrapDerived trap_from_lattice(const LatticeParams& p, double detuning_over_gamma);

// Probability of scattering a catalysis photon during the entangling step,
// 1 - exp(-pi / |F|).
double catalysis_error(const figures_of_merit::FomValue& fom);

struct LatticeScattering {
  double rate;         // Gamma_L / gamma
  double gate_time;    // T * gamma
  double probability;  // 1 - exp(-Gamma_L T)
};

LatticeScattering lattice_scattering(const LatticeParams& p,
                                     double detuning_over_gamma,
                                     bool include_entangling_time = false);

struct FidelityBudget {
  double fidelity;
  double err_catalysis;
  double err_lattice;
  double eta;
  double omega_osc_over_recoil;
  double fom_magnitude;
  double detuning;
};

FidelityBudget total_fidelity(const LatticeParams& p, double detuning_over_gamma,
                              bool include_entangling_time = false);

struct DetuningOptimum {
  double detuning;
  double fidelity;
  double analytic_detuning;  // closed-form stationary point of the error sum
  double analytic_fidelity;
  bool interior;
};

// Maximise the total fidelity over the lattice detuning; the re-derived
// power-law optimum seeds the numerical bracket.
DetuningOptimum optimize_detuning(const LatticeParams& p,
                                  bool include_entangling_time = false);

}  // namespace dipolatt::fidelity_budget
