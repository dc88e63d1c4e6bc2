#include "dipolatt/fidelity_budget.hpp"

#include <cmath>

namespace dipolatt::fidelity_budget {

namespace {

double branching(int F) { return 2.0 / 3.0 - 1.0 / (3.0 * F); }

// error-sum coefficients: 1 - F_C = A d^{3/4}, Gamma_L T = B d^{-3/2}
double coef_catalysis(const LatticeParams& p) {
  const double gr = p.linewidth_over_recoil * p.intensity_ratio;
  return M_PI / (8.0 * p.protocol_constant) * std::pow(12.0 / gr, 0.75);
}

double coef_lattice(const LatticeParams& p) {
  const double gr = p.linewidth_over_recoil * p.intensity_ratio;
  return M_PI * p.transport_factor * branching(p.hyperfine_F) / 16.0 *
         std::sqrt(12.0 * gr);
}

}  // namespace

TrapDerived trap_from_lattice(const LatticeParams& p, double detuning_over_gamma) {
  p.validate();
  if (detuning_over_gamma <= 0.0)
    throw DomainError("trap_from_lattice: detuning must be > 0");
  // U_1 / E_R = (hbar gamma / E_R) (I_1/I_0) / (8 Delta_L/gamma)
  const double u1 = p.linewidth_over_recoil * p.intensity_ratio /
                    (8.0 * detuning_over_gamma);
  TrapDerived out;
  out.omega_osc_over_recoil = 4.0 * std::sqrt(2.0 * u1 / 3.0);
  out.eta = 1.0 / std::sqrt(out.omega_osc_over_recoil);
  return out;
}

double catalysis_error(const figures_of_merit::FomValue& fom) {
  const double a = std::abs(fom.value);
  if (a <= 0.0) throw DomainError("catalysis_error: zero figure of merit");
  return -std::expm1(-M_PI / a);
}

LatticeScattering lattice_scattering(const LatticeParams& p,
                                     double detuning_over_gamma,
                                     bool include_entangling_time) {
  p.validate();
  const auto trap = trap_from_lattice(p, detuning_over_gamma);
  const double u1 = p.linewidth_over_recoil * p.intensity_ratio /
                    (8.0 * detuning_over_gamma);
  LatticeScattering out;
  // Gamma_L/gamma = (U_1/(hbar gamma)) * (gamma/Delta_L) * branching, with the
  // transport average over the standing wave already folded in
  out.rate = u1 / p.linewidth_over_recoil / detuning_over_gamma *
             branching(p.hyperfine_F);
  // T = n (2 pi / omega); gamma T = 2 pi n (hbar gamma/E_R)/(hbar omega/E_R)
  out.gate_time = 2.0 * M_PI * p.transport_factor * p.linewidth_over_recoil /
                  trap.omega_osc_over_recoil;
  if (include_entangling_time) out.gate_time += 0.5 * M_PI;
  out.probability = -std::expm1(-out.rate * out.gate_time);
  return out;
}

FidelityBudget total_fidelity(const LatticeParams& p, double detuning_over_gamma,
                              bool include_entangling_time) {
  const auto trap = trap_from_lattice(p, detuning_over_gamma);
  const double fom_mag = p.protocol_constant / (trap.eta * trap.eta * trap.eta);
  figures_of_merit::FomValue fv{-fom_mag, figures_of_merit::Method::analytic, false};
  const double ec = catalysis_error(fv);
  const auto scat = lattice_scattering(p, detuning_over_gamma, include_entangling_time);

  FidelityBudget out;
  out.err_catalysis = ec;
  out.err_lattice = scat.probability;
  out.fidelity = (1.0 - ec) * (1.0 - scat.probability);
  out.eta = trap.eta;
  out.omega_osc_over_recoil = trap.omega_osc_over_recoil;
  out.fom_magnitude = fom_mag;
  out.detuning = detuning_over_gamma;
  return out;
}

DetuningOptimum optimize_detuning(const LatticeParams& p,
                                  bool include_entangling_time) {
  p.validate();
  const double a = coef_catalysis(p);
  const double b = coef_lattice(p);
  // stationary point of A d^{3/4} + B d^{-3/2}
  const double d_star = std::pow(2.0 * b / a, 4.0 / 9.0);

  DetuningOptimum out;
  out.analytic_detuning = d_star;
  out.analytic_fidelity =
      total_fidelity(p, d_star, include_entangling_time).fidelity;

  const auto objective = [&](double log_d) {
    return total_fidelity(p, std::exp(log_d), include_entangling_time).fidelity;
  };
  const auto res = figures_of_merit::optimize_geometry(
      objective, std::log(d_star) - 3.0, std::log(d_star) + 3.0, 1e-12);
  out.detuning = std::exp(res.argmax);
  out.fidelity = res.value;
  out.interior = res.interior;
  return out;
}

}  // namespace dipolatt::fidelity_budget
