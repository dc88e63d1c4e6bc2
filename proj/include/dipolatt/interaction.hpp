#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "dipolatt/angular.hpp"
#include "dipolatt/dipole_tensor.hpp"
#include "dipolatt/errors.hpp"
#include "dipolatt/oscillator_basis.hpp"

namespace dipolatt::interaction {

enum class Manifold { ground, excited };

struct InternalState {
  int twice_F;
  int twice_MF;
  Manifold manifold = Manifold::ground;

  void validate() const {
    if (twice_F < 0) throw DomainError("InternalState: F < 0");
    if (std::abs(twice_MF) > twice_F) throw DomainError("InternalState: |M_F| > F");
    if (((twice_F ^ twice_MF) & 1) != 0)
      throw DomainError("InternalState: F, M_F parity mismatch");
  }
  bool operator==(const InternalState& o) const {
    return twice_F == o.twice_F && twice_MF == o.twice_MF && manifold == o.manifold;
  }
};

// Catalysis drive.  rabi and detuning in units of hbar*gamma (gamma = 1);
// polarization given by spherical components (e_{-1}, e_0, e_{+1}), unit norm.
struct DriveParams {
  double rabi = 0.0;
  double detuning = 0.0;
  std::array<std::complex<double>, 3> polarization{{0.0, 0.0, 1.0}};  // q=-1,0,+1
  double saturation_threshold = 0.1;

  std::complex<double> pol(int q) const { return polarization[q + 1]; }
  double saturation() const;
  void validate() const;

  static DriveParams sigma_plus(double rabi, double detuning);
  static DriveParams pi_polarized(double rabi, double detuning);
};

struct TwoAtomBasisState {
  InternalState internal_1, internal_2;
  oscillator_basis::OscState external_1, external_2;

  bool operator==(const TwoAtomBasisState& o) const {
    return internal_1 == o.internal_1 && internal_2 == o.internal_2 &&
           external_1 == o.external_1 && external_2 == o.external_2;
  }
  int external_quanta() const {
    return external_1.quanta() + external_2.quanta();
  }
  int total_mf_plus_m() const {
    // conserved combination: total internal projection (doubled) + 2*(m1+m2)
    return internal_1.twice_MF + internal_2.twice_MF +
           2 * (external_1.m + external_2.m);
  }
};

// Dimensionless dipole raising operator D^dagger restricted to one ground F:
// <F' M+q | D^dagger_q | F M> = f_{F'F} <F M; 1 q | F' M+q>.
struct DipoleOperator {
  angular::HyperfineContext ctx;
  int twice_F_ground;

  double element(int twice_F_excited, int twice_M_excited, int q,
                 int twice_M_ground) const;
  // rows (F', M') over all excited F, cols M over the ground F
  Eigen::MatrixXd matrix(int q) const;
  std::vector<std::pair<int, int>> excited_labels() const;  // (2F', 2M')
};

DipoleOperator dipole_raising(const angular::HyperfineContext& ctx,
                              int twice_F_ground);

// Saturation parameter of the drive.
double saturation(const DriveParams& drive);

// Elastic second-order internal factor through the excited manifolds:
// <F M' | D_a D^dagger_b | F M> summed over F' with oscillator strengths.
double internal_chain(const angular::HyperfineContext& ctx, int twice_F,
                      int twice_M_out, int a, int b, int twice_M_in);

// Spherical-component expectation values <f_qq'>, <g_qq'> of the interaction
// tensor over some relative-coordinate distribution.
struct SeparationAverage {
  Eigen::Matrix3cd f = Eigen::Matrix3cd::Zero();  // index [q+1][q'+1]
  Eigen::Matrix3cd g = Eigen::Matrix3cd::Zero();

  static SeparationAverage from_separation(const dipole_tensor::ScaledSeparation& sep,
                                           bool include_radiation = true);
  static SeparationAverage zero() { return SeparationAverage{}; }
};

// Effective operator on the two-atom ground manifold (fixed F per atom),
// units hbar*gamma.  h_eff = light_shift + v_dd - (i/2) (gamma_single + gamma_dd).
struct GroundManifoldOperator {
  Eigen::MatrixXcd h_eff;
  Eigen::MatrixXcd v_dd;          // Hermitian dipole-dipole level shift
  Eigen::MatrixXcd gamma_dd;      // cooperative decay operator, rate units gamma
  Eigen::MatrixXcd gamma_single;  // single-atom scattering, rate units gamma
  Eigen::MatrixXcd light_shift;   // single-atom coherent shift
  double s = 0.0;
  std::vector<std::pair<int, int>> labels;  // (2M_F1, 2M_F2)
};

GroundManifoldOperator ground_manifold_hdd(const DriveParams& drive,
                                           const angular::HyperfineContext& ctx,
                                           int twice_F1, int twice_F2,
                                           const SeparationAverage& avg,
                                           bool include_light_shift = true);

struct ElementOptions {
  bool q_equal_qprime_only = false;  // azimuthal / Zeeman-protected mode
  bool near_field = true;            // n_2 -> -3/x^3 contact limit
};

// Full internal x external dipole-dipole matrix element for two atoms in a
// common spherical well with Lamb-Dicke parameter eta.  Units hbar*gamma
// (the drive's saturation is folded in); radiation terms dropped.
std::complex<double> two_atom_element(const TwoAtomBasisState& bra,
                                      const TwoAtomBasisState& ket,
                                      const DriveParams& drive,
                                      const angular::HyperfineContext& ctx,
                                      double eta,
                                      const ElementOptions& opts = {});

struct InteractionMatrixOptions {
  bool resonant_only = true;         // keep couplings within degenerate shells
  bool q_equal_qprime_only = true;   // suppress M_F-changing exchange
  bool near_field = true;
  bool include_leakage = true;
};

struct InteractionMatrix {
  Eigen::MatrixXcd full;  // logical block first, then leakage states
  int logical_dim = 0;
  std::vector<TwoAtomBasisState> states;
  double kappa = 0.0;  // real part of the last logical diagonal element
};

// V_dd on the given logical basis plus the degenerate leakage subspace the
// selection rules couple it to.  Units hbar*gamma.
InteractionMatrix build_interaction_matrix(
    const std::vector<TwoAtomBasisState>& basis, const DriveParams& drive,
    const angular::HyperfineContext& ctx, double eta,
    const InteractionMatrixOptions& opts = {});

}  // namespace dipolatt::interaction
