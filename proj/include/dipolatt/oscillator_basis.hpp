#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "dipolatt/errors.hpp"

namespace dipolatt::oscillator_basis {

// 3D isotropic oscillator eigenstate |n, l, m> with energy 2n + l + 3/2.
struct OscState {
  int n = 0, l = 0, m = 0;

  OscState() = default;
  OscState(int n_, int l_, int m_) : n(n_), l(l_), m(m_) { validate(); }

  void validate() const {
    if (n < 0 || l < 0) throw DomainError("OscState: n, l must be >= 0");
    if (std::abs(m) > l) throw DomainError("OscState: |m| > l");
  }
  int quanta() const { return 2 * n + l; }
  double energy() const { return quanta() + 1.5; }
  int degeneracy() const { return (quanta() + 1) * (quanta() + 2) / 2; }
  bool operator==(const OscState& o) const { return n == o.n && l == o.l && m == o.m; }
};

// Relative x centre-of-mass oscillator pair coupled to total angular
// momentum lam, projection mu.
struct RelCmState {
  int n, l, N, L, lam, mu;
};

// <n l, N L; lam | n1 l1, n2 l2; lam> for equal masses, with the symmetric
// convention r = (r1 - r2)/sqrt(2), R = (r1 + r2)/sqrt(2).  Zero unless
// 2n+l+2N+L matches the product-state quanta; independent of projection.
double moshinsky_bracket(int n, int l, int N, int L, int n1, int l1, int n2,
                         int l2, int lam);

// Expansion of |n1 l1, n2 l2; lam mu> over relative x CM states (nonzero
// terms only).
std::vector<std::pair<RelCmState, double>> relcm_expansion(int n1, int l1,
                                                           int n2, int l2,
                                                           int lam, int mu);

// I_p(V) = [2 / Gamma(p + 3/2)] Int_0^inf rbar^{2p+2} e^{-rbar^2} V(rbar) drbar.
// Throws IntegrabilityError when the small-r behaviour of V makes the moment
// diverge (e.g. V ~ 1/r^3 with p = 0).
double talmi_integral(int p, const std::function<double(double)>& potential);

// <n l | V | n' l'> radial integral as the finite B-coefficient sum over
// Talmi integrals; requires l + l' even.
double radial_reduced_element(int n, int l, int np, int lp,
                              const std::function<double(double)>& potential);

// <n1' l1' m1', n2' l2' m2' | V(rbar) Y_2^{m_r}(rhat) | n1 l1 m1, n2 l2 m2>
// for two particles in a common spherical well; rhat, rbar refer to the
// relative coordinate.  Assembled by coupling the orbital angular momenta,
// expanding in relative x CM oscillators with brackets, and reducing the
// relative element with Gaunt coefficients and the radial B/Talmi sum.
double external_tensor_element(const OscState& b1, const OscState& b2,
                               const OscState& k1, const OscState& k2, int m_r,
                               const std::function<double(double)>& potential);

// Rank-0 companion: <...| V(rbar) |...> (identity on angles).
double external_scalar_element(const OscState& b1, const OscState& b2,
                               const OscState& k1, const OscState& k2,
                               const std::function<double(double)>& potential);

struct SubspaceConstraints {
  std::optional<int> m_total;
};

// All product states |n1 l1 m1>|n2 l2 m2> with the given total vibrational
// quanta (and total projection, when constrained), in a deterministic order.
std::vector<std::pair<OscState, OscState>> degenerate_subspace(
    int total_quanta, const SubspaceConstraints& constraints = {});

}  // namespace dipolatt::oscillator_basis
