#include "dipolatt/interaction.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <optional>

namespace dipolatt::interaction {

using angular::AngMom;
using angular::HyperfineContext;
using oscillator_basis::OscState;

double DriveParams::saturation() const {
  if (rabi == 0.0 && detuning == 0.0)
    throw DomainError("DriveParams: rabi and detuning both zero");
  return (0.5 * rabi * rabi) / (detuning * detuning + 0.25 * rabi * rabi);
}

void DriveParams::validate() const {
  double n = 0.0;
  for (const auto& c : polarization) n += std::norm(c);
  if (std::abs(n - 1.0) > 1e-9)
    throw DomainError("DriveParams: polarization must have unit norm");
}

DriveParams DriveParams::sigma_plus(double rabi, double detuning) {
  DriveParams d;
  d.rabi = rabi;
  d.detuning = detuning;
  d.polarization = {{0.0, 0.0, 1.0}};
  return d;
}

DriveParams DriveParams::pi_polarized(double rabi, double detuning) {
  DriveParams d;
  d.rabi = rabi;
  d.detuning = detuning;
  d.polarization = {{0.0, 1.0, 0.0}};
  return d;
}

double saturation(const DriveParams& drive) { return drive.saturation(); }

double DipoleOperator::element(int twice_F_excited, int twice_M_excited, int q,
                               int twice_M_ground) const {
  if (twice_M_excited != twice_M_ground + 2 * q) return 0.0;
  if (std::abs(twice_M_ground) > twice_F_ground) return 0.0;
  if (std::abs(twice_M_excited) > twice_F_excited) return 0.0;
  const double f =
      angular::oscillator_strength_factor(twice_F_excited, twice_F_ground, ctx);
  if (f == 0.0) return 0.0;
  return f * angular::clebsch_gordan(AngMom(twice_F_ground, twice_M_ground),
                                     AngMom(2, 2 * q),
                                     AngMom(twice_F_excited, twice_M_excited));
}

std::vector<std::pair<int, int>> DipoleOperator::excited_labels() const {
  std::vector<std::pair<int, int>> out;
  for (int tF = std::abs(ctx.twice_I - ctx.twice_J_excited);
       tF <= ctx.twice_I + ctx.twice_J_excited; tF += 2)
    for (int tM = -tF; tM <= tF; tM += 2) out.emplace_back(tF, tM);
  return out;
}

Eigen::MatrixXd DipoleOperator::matrix(int q) const {
  const auto rows = excited_labels();
  Eigen::MatrixXd m(rows.size(), twice_F_ground + 1);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    int col = 0;
    for (int tM = -twice_F_ground; tM <= twice_F_ground; tM += 2, ++col)
      m(r, col) = element(rows[r].first, rows[r].second, q, tM);
  }
  return m;
}

DipoleOperator dipole_raising(const HyperfineContext& ctx, int twice_F_ground) {
  if (!ctx.valid_ground_F(twice_F_ground))
    throw DomainError("dipole_raising: unphysical ground F");
  return DipoleOperator{ctx, twice_F_ground};
}

double internal_chain(const HyperfineContext& ctx, int twice_F, int twice_M_out,
                      int a, int b, int twice_M_in) {
  // <F M_out | D_a D^dagger_b | F M_in>, nonzero only when M_out = M_in + b - a
  if (twice_M_out != twice_M_in + 2 * (b - a)) return 0.0;
  if (std::abs(twice_M_in) > twice_F || std::abs(twice_M_out) > twice_F) return 0.0;
  const int twice_M_mid = twice_M_in + 2 * b;
  double sum = 0.0;
  for (int tFp = std::abs(ctx.twice_I - ctx.twice_J_excited);
       tFp <= ctx.twice_I + ctx.twice_J_excited; tFp += 2) {
    if (std::abs(twice_M_mid) > tFp) continue;
    const double f = angular::oscillator_strength_factor(tFp, twice_F, ctx);
    if (f == 0.0) continue;
    const double up = angular::clebsch_gordan(
        AngMom(twice_F, twice_M_in), AngMom(2, 2 * b), AngMom(tFp, twice_M_mid));
    if (up == 0.0) continue;
    const double down = angular::clebsch_gordan(
        AngMom(twice_F, twice_M_out), AngMom(2, 2 * a), AngMom(tFp, twice_M_mid));
    if (down == 0.0) continue;
    sum += f * f * up * down;
  }
  return sum;
}

SeparationAverage SeparationAverage::from_separation(
    const dipole_tensor::ScaledSeparation& sep, bool include_radiation) {
  SeparationAverage avg;
  for (int q = -1; q <= 1; ++q)
    for (int qp = -1; qp <= 1; ++qp) {
      const auto [fs, gs] = dipole_tensor::tensor_spherical(q, qp, sep, include_radiation);
      avg.f(q + 1, qp + 1) = fs;
      avg.g(q + 1, qp + 1) = gs;
    }
  return avg;
}

namespace {

// per-atom matrix of <F M'|D_a D^dagger_b|F M> over the (2F+1) sublevels
Eigen::MatrixXd chain_matrix(const HyperfineContext& ctx, int twice_F, int a, int b) {
  const int dim = twice_F + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  int row = 0;
  for (int tMo = -twice_F; tMo <= twice_F; tMo += 2, ++row) {
    int col = 0;
    for (int tMi = -twice_F; tMi <= twice_F; tMi += 2, ++col)
      m(row, col) = internal_chain(ctx, twice_F, tMo, a, b, tMi);
  }
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

GroundManifoldOperator ground_manifold_hdd(const DriveParams& drive,
                                           const HyperfineContext& ctx,
                                           int twice_F1, int twice_F2,
                                           const SeparationAverage& avg,
                                           bool include_light_shift) {
  drive.validate();
  const double s = drive.saturation();
  if (s > drive.saturation_threshold)
    throw RegimeError("ground_manifold_hdd: saturation " + std::to_string(s) +
                      " above the adiabatic-elimination threshold");

  const int d1 = twice_F1 + 1, d2 = twice_F2 + 1;
  const int dim = d1 * d2;

  std::map<std::pair<int, int>, Eigen::MatrixXd> q1, q2;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) {
      q1[{a, b}] = chain_matrix(ctx, twice_F1, a, b);
      q2[{a, b}] = chain_matrix(ctx, twice_F2, a, b);
    }

  Eigen::MatrixXcd op_f = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd op_g = Eigen::MatrixXcd::Zero(dim, dim);
  for (int q = -1; q <= 1; ++q)
    for (int qp = -1; qp <= 1; ++qp) {
      for (int p = -1; p <= 1; ++p)
        for (int pp = -1; pp <= 1; ++pp) {
          const std::complex<double> w = std::conj(drive.pol(pp)) * drive.pol(p);
          if (w == std::complex<double>(0.0, 0.0)) continue;
          const Eigen::MatrixXcd chain12 =
              kron(q1.at({qp, p}).cast<std::complex<double>>(),
                   q2.at({pp, q}).cast<std::complex<double>>());
          const Eigen::MatrixXcd chain21 =
              kron(q1.at({pp, q}).cast<std::complex<double>>(),
                   q2.at({qp, p}).cast<std::complex<double>>());
          op_f += w * avg.f(q + 1, qp + 1) * (chain12 + chain21);
          op_g += w * avg.g(q + 1, qp + 1) * (chain12 + chain21);
        }
    }

  GroundManifoldOperator out;
  out.s = s;
  const Eigen::MatrixXcd h_f = -(s / 4.0) * op_f;
  const Eigen::MatrixXcd h_g = -(s / 4.0) * op_g;
  const Eigen::MatrixXcd h_dd = h_f + std::complex<double>(0.0, 1.0) * h_g;
  out.v_dd = 0.5 * (h_dd + h_dd.adjoint());
  out.gamma_dd = std::complex<double>(0.0, 1.0) * (h_dd - h_dd.adjoint());

  // single-atom pieces: per atom (s/2)(Delta - i/2) times the polarization-
  // contracted elastic weight
  Eigen::MatrixXcd w1 = Eigen::MatrixXcd::Zero(d1, d1);
  Eigen::MatrixXcd w2 = Eigen::MatrixXcd::Zero(d2, d2);
  for (int p = -1; p <= 1; ++p)
    for (int pp = -1; pp <= 1; ++pp) {
      const std::complex<double> w = std::conj(drive.pol(pp)) * drive.pol(p);
      if (w == std::complex<double>(0.0, 0.0)) continue;
      w1 += w * q1.at({pp, p}).cast<std::complex<double>>();
      w2 += w * q2.at({pp, p}).cast<std::complex<double>>();
    }
  const Eigen::MatrixXcd wsum =
      kron(w1, Eigen::MatrixXcd::Identity(d2, d2)) +
      kron(Eigen::MatrixXcd::Identity(d1, d1), w2);
  out.gamma_single = (s / 2.0) * wsum;
  out.light_shift = (s / 2.0) * drive.detuning * wsum;

  out.h_eff = out.v_dd -
              std::complex<double>(0.0, 0.5) * (out.gamma_dd + out.gamma_single);
  if (include_light_shift) out.h_eff += out.light_shift;

  for (int tM1 = -twice_F1; tM1 <= twice_F1; tM1 += 2)
    for (int tM2 = -twice_F2; tM2 <= twice_F2; tM2 += 2)
      out.labels.emplace_back(tM1, tM2);
  return out;
}

std::complex<double> two_atom_element(const TwoAtomBasisState& bra,
                                      const TwoAtomBasisState& ket,
                                      const DriveParams& drive,
                                      const HyperfineContext& ctx, double eta,
                                      const ElementOptions& opts) {
  bra.internal_1.validate();
  bra.internal_2.validate();
  ket.internal_1.validate();
  ket.internal_2.validate();
  if (eta <= 0.0) throw DomainError("two_atom_element: eta must be > 0");
  drive.validate();
  const double s = drive.saturation();

  std::function<double(double)> V;
  if (opts.near_field) {
    const double c = -3.0 / (8.0 * eta * eta * eta);
    V = [c](double r) { return c / (r * r * r); };
  } else {
    V = [eta](double r) {
      return dipole_tensor::radial_functions(2, 2.0 * eta * r).second;
    };
  }

  // external tensor elements per m_r, evaluated lazily
  std::array<std::optional<double>, 5> ext;
  auto external = [&](int m_r) {
    auto& slot = ext[m_r + 2];
    if (!slot)
      slot = oscillator_basis::external_tensor_element(
          bra.external_1, bra.external_2, ket.external_1, ket.external_2, m_r, V);
    return *slot;
  };

  const int tF1 = ket.internal_1.twice_F, tF2 = ket.internal_2.twice_F;
  if (bra.internal_1.twice_F != tF1 || bra.internal_2.twice_F != tF2)
    return 0.0;  // elastic ground-manifold process conserves F

  std::complex<double> total(0.0, 0.0);
  for (int q = -1; q <= 1; ++q) {
    for (int qp = -1; qp <= 1; ++qp) {
      if (opts.q_equal_qprime_only && q != qp) continue;
      const int m_r = qp - q;
      const double cg = angular::clebsch_gordan(AngMom(2, -2 * q), AngMom(2, 2 * qp),
                                                AngMom(4, 2 * m_r));
      if (cg == 0.0) continue;
      const double sign = (q % 2 == 0) ? 1.0 : -1.0;
      const double tensor_coef = -sign * std::sqrt(6.0 * M_PI / 5.0) * cg;

      for (int p = -1; p <= 1; ++p) {
        for (int pp = -1; pp <= 1; ++pp) {
          const std::complex<double> w = std::conj(drive.pol(pp)) * drive.pol(p);
          if (w == std::complex<double>(0.0, 0.0)) continue;

          const double c12 =
              internal_chain(ctx, tF1, bra.internal_1.twice_MF, qp, p,
                             ket.internal_1.twice_MF) *
              internal_chain(ctx, tF2, bra.internal_2.twice_MF, pp, q,
                             ket.internal_2.twice_MF);
          const double c21 =
              internal_chain(ctx, tF1, bra.internal_1.twice_MF, pp, q,
                             ket.internal_1.twice_MF) *
              internal_chain(ctx, tF2, bra.internal_2.twice_MF, qp, p,
                             ket.internal_2.twice_MF);
          if (c12 == 0.0 && c21 == 0.0) continue;

          const double x = external(m_r);
          if (x == 0.0) continue;
          total += w * tensor_coef * x * (c12 + c21);
        }
      }
    }
  }
  return -(s / 4.0) * total;
}

InteractionMatrix build_interaction_matrix(
    const std::vector<TwoAtomBasisState>& basis, const DriveParams& drive,
    const HyperfineContext& ctx, double eta,
    const InteractionMatrixOptions& opts) {
  if (basis.empty()) throw InputError("build_interaction_matrix: empty basis");
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      if (basis[i] == basis[j])
        throw InputError("build_interaction_matrix: basis states not mutually orthogonal");

  std::vector<TwoAtomBasisState> states = basis;
  if (opts.include_leakage) {
    for (const auto& b : basis) {
      oscillator_basis::SubspaceConstraints cons;
      cons.m_total = b.external_1.m + b.external_2.m;
      for (const auto& [e1, e2] : oscillator_basis::degenerate_subspace(
               b.external_quanta(), cons)) {
        TwoAtomBasisState cand{b.internal_1, b.internal_2, e1, e2};
        bool known = false;
        for (const auto& s : states)
          if (s == cand) {
            known = true;
            break;
          }
        if (!known) states.push_back(cand);
      }
    }
  }

  const int dim = static_cast<int>(states.size());
  ElementOptions eopts;
  eopts.q_equal_qprime_only = opts.q_equal_qprime_only;
  eopts.near_field = opts.near_field;

  InteractionMatrix out;
  out.full = Eigen::MatrixXcd::Zero(dim, dim);
  out.logical_dim = static_cast<int>(basis.size());
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (opts.resonant_only &&
          states[i].external_quanta() != states[j].external_quanta())
        continue;
      out.full(i, j) = two_atom_element(states[i], states[j], drive, ctx, eta, eopts);
    }
  }
  out.states = std::move(states);
  out.kappa = out.full(out.logical_dim - 1, out.logical_dim - 1).real();
  return out;
}

}  // namespace dipolatt::interaction
