#include "dipolatt/gate_sim.hpp"

#include <cmath>

#include "dipolatt/interaction.hpp"

namespace dipolatt::gate_sim {

using Complex = std::complex<double>;

Eigen::Matrix4cd effective_hamiltonian_4(const TwoLevelParams& p) {
  p.validate();
  const Complex I(0.0, 1.0);
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  const Complex excited = -p.detuning - I * 0.5 * p.gamma;
  h(1, 1) = excited;
  h(2, 2) = excited;
  h(3, 3) = 2.0 * excited;
  const double hr = -0.5 * p.rabi;
  h(0, 1) = h(1, 0) = hr;
  h(0, 2) = h(2, 0) = hr;
  h(1, 3) = h(3, 1) = hr;
  h(2, 3) = h(3, 2) = hr;
  const Complex ex = p.v_c - I * 0.5 * p.gamma_c;
  h(1, 2) += ex;
  h(2, 1) += ex;
  return h;
}

PerturbativeGroundEnergy ground_energy_perturbative(const TwoLevelParams& p) {
  p.validate();
  const Complex I(0.0, 1.0);
  const Complex denom = (p.detuning - p.v_c) + I * 0.5 * (p.gamma + p.gamma_c);
  const Complex denom0 = p.detuning + I * 0.5 * p.gamma;
  PerturbativeGroundEnergy out;
  out.e_gg = 0.5 * p.rabi * p.rabi / denom;
  const Complex e0 = 0.5 * p.rabi * p.rabi / denom0;
  out.fom = p.v_c / (p.gamma + p.gamma_c);
  out.fom_direct = (out.e_gg - e0).real() / (-2.0 * out.e_gg.imag());
  out.regime_ok = std::abs(p.rabi) < 0.1 * std::abs(p.detuning);
  return out;
}

namespace {

double nearfield_fom(const figures_of_merit::TrapGeometry& geometry, int q) {
  using namespace figures_of_merit;
  const double scale = (q == 0) ? 1.0 : -0.5;  // f_{11} carries -1/2 the P_2 weight
  return std::visit(
      [&](const auto& geo) -> double {
        using T = std::decay_t<decltype(geo)>;
        if constexpr (std::is_same_v<T, SeparatedSpheres>)
          return scale * fom_separated_spheres(geo.zbar, geo.eta).value;
        else if constexpr (std::is_same_v<T, CommonEllipsoid>)
          return scale * fom_ellipsoid_nearfield(geo.eta_perp, geo.eta_par).value;
        else
          return 0.0;
      },
      geometry);
}

interaction::DriveParams drive_with_saturation(double s) {
  const double detuning = 1.0e4;
  const double rabi = detuning * std::sqrt(2.0 * s / (1.0 - 0.5 * s));
  return interaction::DriveParams::sigma_plus(rabi, detuning);
}

}  // namespace

GateReport cphase_levelshift(const figures_of_merit::TrapGeometry& geometry,
                             double s, int q, const LogicalBasis&) {
  if (s <= 0.0 || s > 0.5)
    throw RegimeError("cphase_levelshift: saturation must be in (0, 0.5]");
  const double fom = nearfield_fom(geometry, q);
  if (fom == 0.0)
    throw RegimeError("cphase_levelshift: geometry has zero figure of merit");
  const double afom = std::abs(fom);

  // near field: <g_qq> = 1, |V_dd| = 2 s |F| (hbar gamma), t = pi hbar/|V_dd|
  GateReport rep;
  rep.duration = M_PI / (2.0 * s * afom);
  rep.duration_lower_bound = 0.5 * M_PI;
  rep.phase = M_PI;
  const double decay11 = M_PI / afom;              // gamma_tot(11) * t
  const double decay01 = M_PI / (4.0 * afom);      // single induced dipole
  rep.input_survival = {1.0, std::exp(-decay01), std::exp(-decay01),
                        std::exp(-decay11)};
  rep.unitary = Eigen::Matrix4cd::Identity();
  rep.unitary(1, 1) = std::exp(-0.5 * decay01);
  rep.unitary(2, 2) = std::exp(-0.5 * decay01);
  rep.unitary(3, 3) = -std::exp(-0.5 * decay11);
  rep.leakage = 0.0;
  double fsum = 0.0;
  for (double v : rep.input_survival) fsum += v;
  rep.fidelity = 0.25 * fsum;
  const Complex amp = 0.25 * (1.0 + rep.unitary(1, 1) + rep.unitary(2, 2) -
                              rep.unitary(3, 3));
  rep.fidelity_superposition = std::norm(amp);
  return rep;
}

GateReport sqrt_swap(double eta, const SqrtSwapOptions& opts) {
  using interaction::InternalState;
  using interaction::TwoAtomBasisState;
  using oscillator_basis::OscState;

  const angular::HyperfineContext ctx{opts.twice_I};
  if (!ctx.valid_ground_F(opts.twice_F))
    throw DomainError("sqrt_swap: unphysical ground F for the given nuclear spin");
  const InternalState plus{opts.twice_F, 2, interaction::Manifold::ground};
  const InternalState minus{opts.twice_F, -2, interaction::Manifold::ground};
  const OscState ground(0, 0, 0), ring(0, 1, 1);

  const std::vector<TwoAtomBasisState> logical = {
      {plus, minus, ground, ground},
      {plus, minus, ground, ring},
      {plus, minus, ring, ground},
      {plus, minus, ring, ring},
  };
  const auto drive = drive_with_saturation(opts.s);
  const auto mat = interaction::build_interaction_matrix(logical, drive, ctx, eta);
  const int dim = static_cast<int>(mat.full.rows());

  // hermitian evolution of the coherent block
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat.full);
  if (es.info() != Eigen::Success)
    throw NumericalError("sqrt_swap: eigen decomposition failed");
  const auto propagate = [&](double t) {
    Eigen::VectorXcd ph(dim);
    for (int i = 0; i < dim; ++i)
      ph(i) = std::exp(Complex(0.0, -es.eigenvalues()(i) * t));
    return Eigen::MatrixXcd(es.eigenvectors() * ph.asDiagonal() *
                            es.eigenvectors().adjoint());
  };

  const double kappa = mat.kappa;
  if (std::abs(kappa) < 1e-300)
    throw NumericalError("sqrt_swap: vanishing interaction scale");
  auto return_prob = [&](double t) {
    return std::norm(propagate(t)(3, 3));
  };

  // first maximum of the |11> return probability, near pi/|kappa|
  const double t0 = M_PI / std::abs(kappa);
  const auto res = figures_of_merit::optimize_geometry(return_prob, 0.5 * t0,
                                                       1.5 * t0, 1e-12);
  if (!res.interior || res.value < 0.5)
    throw NumericalError("sqrt_swap: recurrence detection failed");
  const double tau = res.argmax;

  const Eigen::MatrixXcd u_full = propagate(tau);
  GateReport rep;
  rep.unitary = u_full.topLeftCorner(4, 4);
  double leak = 0.0;
  for (int j = 0; j < 4; ++j) {
    double out_of_basis = 0.0;
    for (int i = 4; i < dim; ++i) out_of_basis += std::norm(u_full(i, j));
    leak = std::max(leak, out_of_basis);
  }
  rep.leakage = leak;
  rep.phase = std::arg(rep.unitary(3, 3));
  rep.duration = tau;
  rep.duration_lower_bound = 0.5 * M_PI;

  const double fom = std::abs(figures_of_merit::fom_sqrt_swap(eta).fom.value);
  const double survival = std::exp(-M_PI / fom);
  rep.input_survival = {survival, survival, survival, survival};
  rep.fidelity = survival;
  rep.fidelity_superposition = survival;
  return rep;
}

GateReport ramsey_cphase(const TwoLevelParams& p, const RamseyPulseConfig& cfg) {
  p.validate();
  if (p.v_c == 0.0) throw DomainError("ramsey_cphase: V_c must be nonzero");
  const double t = M_PI / std::abs(p.v_c);
  if (cfg.pulse_duration * std::abs(p.v_c) > cfg.sudden_threshold)
    throw RegimeError("ramsey_cphase: pulse is not sudden compared to hbar/|V_c|");

  const double gdecay = std::exp(-0.5 * p.gamma * t);
  const double b = 0.5 * M_PI * p.gamma_c / std::abs(p.v_c);
  const Complex a11 = -gdecay * std::cosh(b);
  const double residual = gdecay * std::sinh(std::abs(b));

  GateReport rep;
  rep.unitary = Eigen::Matrix4cd::Identity();
  rep.unitary(2, 2) = gdecay;  // |10>: excited round trip without a partner
  rep.unitary(3, 3) = a11;
  rep.phase = std::arg(a11);
  rep.leakage = residual * residual;
  rep.duration = t * p.gamma;
  rep.duration_lower_bound = 0.5 * M_PI;
  rep.input_survival = {1.0, 1.0, gdecay * gdecay, std::norm(a11)};
  double fsum = 0.0;
  for (double v : rep.input_survival) fsum += v;
  rep.fidelity = 0.25 * fsum;
  rep.fidelity_superposition =
      std::norm(0.25 * (1.0 + 1.0 + rep.unitary(2, 2) - a11));
  return rep;
}

}  // namespace dipolatt::gate_sim
