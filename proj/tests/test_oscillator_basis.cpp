#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dipolatt/oscillator_basis.hpp"
#include "oracles.hpp"

using namespace dipolatt;
using oscillator_basis::OscState;

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

double near_field_v(double r) { return 1.0 / (r * r * r); }

// composite-Simpson Talmi oracle with node doubling until 1e-10 agreement
double talmi_oracle(int p, const std::function<double(double)>& V) {
  auto integrate = [&](long n) {
    const double a = 0.0, b = 14.0;
    const double h = (b - a) / n;
    double sum = 0.0;
    for (long i = 0; i <= n; ++i) {
      const double r = a + i * h;
      const double f =
          (r == 0.0) ? 0.0 : std::pow(r, 2 * p + 2) * std::exp(-r * r) * V(r);
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      sum += w * f;
    }
    return sum * h / 3.0;
  };
  double prev = integrate(1 << 12), cur = 0.0;
  for (int k = 13; k <= 22; ++k) {
    cur = integrate(1L << k);
    if (std::abs(cur - prev) < 1e-10 * std::max(1.0, std::abs(cur))) break;
    prev = cur;
  }
  return 2.0 / std::tgamma(p + 1.5) * cur;
}

}  // namespace

TEST_CASE("moshinsky bracket ground state and frozen two-quanta values") {
  CHECK(oscillator_basis::moshinsky_bracket(0, 0, 0, 0, 0, 0, 0, 0, 0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // |011>|011> = (|R:022>|r:000> - |r:022>|R:000>)/sqrt(2), lam = 2
  CHECK(oscillator_basis::moshinsky_bracket(0, 0, 0, 2, 0, 1, 0, 1, 2) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-11));
  CHECK(oscillator_basis::moshinsky_bracket(0, 2, 0, 0, 0, 1, 0, 1, 2) ==
        doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-11));
  CHECK(oscillator_basis::moshinsky_bracket(0, 1, 0, 1, 0, 1, 0, 1, 2) ==
        doctest::Approx(0.0).epsilon(1e-12));
  // energy mismatch
  CHECK(oscillator_basis::moshinsky_bracket(1, 0, 0, 0, 0, 0, 0, 0, 0) == 0.0);
  CHECK_THROWS_AS(oscillator_basis::moshinsky_bracket(-1, 0, 0, 0, 0, 0, 0, 0, 0),
                  DomainError);
}

TEST_CASE("moshinsky bracket unitarity") {
  // sum over (n l, N L) of bracket^2 = 1 for each product state
  const int cases[][5] = {
      {0, 1, 0, 1, 0}, {0, 1, 0, 1, 1}, {0, 1, 0, 1, 2}, {0, 0, 0, 2, 2},
      {1, 0, 0, 1, 1}, {0, 2, 0, 2, 2}, {0, 2, 0, 1, 3}, {1, 1, 0, 1, 1},
  };
  for (const auto& c : cases) {
    const int n1 = c[0], l1 = c[1], n2 = c[2], l2 = c[3], lam = c[4];
    const int etot = 2 * n1 + l1 + 2 * n2 + l2;
    double sum = 0.0;
    for (int erel = 0; erel <= etot; ++erel)
      for (int l = erel % 2; l <= erel; l += 2)
        for (int L = (etot - erel) % 2; L <= etot - erel; L += 2) {
          const double b = oscillator_basis::moshinsky_bracket(
              (erel - l) / 2, l, (etot - erel - L) / 2, L, n1, l1, n2, l2, lam);
          sum += b * b;
        }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-11));
  }
}

TEST_CASE("moshinsky bracket against the explicit 6D overlap oracle") {
  const int cases[][9] = {
      // n l N L n1 l1 n2 l2 lam
      {0, 1, 0, 0, 0, 0, 0, 1, 1},
      {0, 0, 0, 1, 0, 0, 0, 1, 1},
      {0, 2, 0, 0, 0, 1, 0, 1, 2},
      {0, 1, 0, 1, 0, 1, 0, 1, 1},
      {1, 0, 0, 0, 0, 1, 0, 1, 0},
      {0, 0, 1, 0, 1, 0, 0, 0, 0},
      {0, 2, 0, 1, 0, 2, 0, 1, 2},
      {1, 1, 0, 0, 0, 2, 0, 1, 1},
  };
  for (const auto& c : cases) {
    const double lib = oscillator_basis::moshinsky_bracket(c[0], c[1], c[2], c[3],
                                                           c[4], c[5], c[6], c[7],
                                                           c[8]);
    const int mu = 0;
    const double oracle = oracles::bracket_6d(c[0], c[1], c[2], c[3], c[4], c[5],
                                              c[6], c[7], c[8], mu);
    CHECK(lib == doctest::Approx(oracle).epsilon(5e-10));
  }
  // projection independence: recompute one oracle at mu = 1
  const double lib = oscillator_basis::moshinsky_bracket(0, 1, 0, 1, 0, 1, 0, 1, 1);
  CHECK(lib == doctest::Approx(oracles::bracket_6d(0, 1, 0, 1, 0, 1, 0, 1, 1, 1))
                   .epsilon(5e-10));
  CHECK(lib == doctest::Approx(oracles::bracket_6d(0, 1, 0, 1, 0, 1, 0, 1, 1, 0))
                   .epsilon(5e-10));
}

TEST_CASE("relcm expansion matches brackets") {
  const auto terms = oscillator_basis::relcm_expansion(0, 1, 0, 1, 2, 2);
  double sum = 0.0;
  for (const auto& [st, coef] : terms) {
    CHECK(coef == doctest::Approx(oscillator_basis::moshinsky_bracket(
                                      st.n, st.l, st.N, st.L, 0, 1, 0, 1, 2))
                      .epsilon(1e-12));
    sum += coef * coef;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("talmi integrals") {
  for (int p = 0; p <= 5; ++p)
    CHECK(oscillator_basis::talmi_integral(p, [](double) { return 1.0; }) ==
          doctest::Approx(1.0).epsilon(1e-12));
  // I_p(r^2) = p + 3/2
  CHECK(oscillator_basis::talmi_integral(1, [](double r) { return r * r; }) ==
        doctest::Approx(2.5).epsilon(1e-11));
  CHECK_THROWS_AS(oscillator_basis::talmi_integral(0, near_field_v),
                  IntegrabilityError);
  CHECK_THROWS_AS(oscillator_basis::talmi_integral(-1, near_field_v), DomainError);

  // retarded Neumann potential at eta = 0.05 against the doubling oracle
  const double eta = 0.05;
  auto vn2 = [eta](double r) {
    const double x = 2.0 * eta * r;
    return (1.0 / x - 3.0 / (x * x * x)) * std::cos(x) -
           3.0 * std::sin(x) / (x * x);
  };
  CHECK(oscillator_basis::talmi_integral(2, vn2) ==
        doctest::Approx(talmi_oracle(2, vn2)).epsilon(1e-9));
}

TEST_CASE("radial reduced elements") {
  // orthonormality at V = 1
  for (int l = 0; l <= 3; ++l)
    for (int n = 0; n <= 3; ++n)
      for (int np = 0; np <= 3; ++np) {
        const double v = oscillator_basis::radial_reduced_element(
            n, l, np, l, [](double) { return 1.0; });
        CHECK(v == doctest::Approx(n == np ? 1.0 : 0.0).epsilon(1e-11));
      }

  // (0,2) <- (0,0) with the retarded Neumann potential vs direct quadrature
  const double eta = 0.05;
  auto vn2 = [eta](double r) {
    const double x = 2.0 * eta * r;
    return (1.0 / x - 3.0 / (x * x * x)) * std::cos(x) -
           3.0 * std::sin(x) / (x * x);
  };
  const double lib = oscillator_basis::radial_reduced_element(0, 2, 0, 0, vn2);
  const double oracle = oracles::radial_integral(
      [&](double r) {
        return oracles::radial_wavefunction(0, 2, r) *
               oracles::radial_wavefunction(0, 0, r) * vn2(r) * r * r;
      },
      14.0, 64);
  CHECK(lib == doctest::Approx(oracle).epsilon(1e-9));

  CHECK_THROWS_AS(oscillator_basis::radial_reduced_element(
                      0, 1, 0, 0, [](double) { return 1.0; }),
                  DomainError);
}

TEST_CASE("external tensor element frozen ring-state value") {
  const OscState ring(0, 1, 1);
  // <011,011| r^-3 Y_2^0 |011,011> = -(4 sqrt(5))/(105 pi) from the two-state
  // relative decomposition and the (0,2) radial moment
  const double expect = -4.0 * std::sqrt(5.0) / (105.0 * M_PI);
  const double lib = oscillator_basis::external_tensor_element(ring, ring, ring,
                                                               ring, 0, near_field_v);
  CHECK(lib == doctest::Approx(expect).epsilon(1e-11));
  // ground-ground diagonal vanishes: isotropic relative Gaussian vs Y_2
  const OscState g(0, 0, 0);
  CHECK(oscillator_basis::external_tensor_element(g, g, g, g, 0, near_field_v) ==
        0.0);
}

TEST_CASE("external tensor element against the direct rel/CM quadrature oracle") {
  struct Case {
    OscState b1, b2, k1, k2;
    int mr;
  };
  const Case cases[] = {
      {{0, 1, 1}, {0, 1, 1}, {0, 1, 1}, {0, 1, 1}, 0},
      {{0, 2, 2}, {0, 0, 0}, {0, 1, 1}, {0, 1, 1}, 0},
      {{0, 0, 0}, {0, 2, 2}, {0, 2, 2}, {0, 0, 0}, 0},
      {{0, 1, 0}, {0, 1, 1}, {0, 1, 1}, {0, 1, 0}, 0},
      {{0, 1, 1}, {0, 1, -1}, {0, 1, 0}, {0, 1, 0}, 0},
      {{0, 1, 1}, {0, 1, 1}, {0, 1, 0}, {0, 1, -1}, 2},
      {{1, 0, 0}, {0, 0, 0}, {0, 1, 1}, {0, 1, -1}, 0},
      {{0, 1, 1}, {0, 0, 0}, {0, 1, -1}, {0, 0, 0}, 2},
  };
  auto v = [](double r) { return near_field_v(r); };
  for (const auto& c : cases) {
    const double lib =
        oscillator_basis::external_tensor_element(c.b1, c.b2, c.k1, c.k2, c.mr, v);
    const double oracle =
        oracles::tensor_element_quadrature(c.b1, c.b2, c.k1, c.k2, 2, c.mr, v);
    CHECK(lib == doctest::Approx(oracle).epsilon(2e-7));
  }
}

TEST_CASE("selection rule and hermiticity properties") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> qdist(0, 4);
  std::uniform_int_distribution<int> mrdist(-2, 2);
  auto random_state = [&](int quanta) {
    std::uniform_int_distribution<int> ldist(quanta % 2, quanta);
    int l = ldist(rng);
    if ((quanta - l) % 2 != 0) l = (l == quanta) ? l - 1 : l + 1;
    l = std::clamp(l, 0, quanta);
    std::uniform_int_distribution<int> md(-l, l);
    return OscState((quanta - l) / 2, l, md(rng));
  };
  int nonzero_checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const OscState b1 = random_state(qdist(rng)), b2 = random_state(qdist(rng));
    const OscState k1 = random_state(qdist(rng)), k2 = random_state(qdist(rng));
    const int mr = mrdist(rng);
    const double e =
        oscillator_basis::external_tensor_element(b1, b2, k1, k2, mr, near_field_v);
    if (b1.m + b2.m != k1.m + k2.m + mr) {
      CHECK(e == 0.0);
    } else if (e != 0.0) {
      ++nonzero_checked;
      const double back = oscillator_basis::external_tensor_element(k1, k2, b1, b2,
                                                                    -mr, near_field_v);
      const double sign = (mr % 2 == 0) ? 1.0 : -1.0;
      CHECK(e == doctest::Approx(sign * back).epsilon(1e-9));
    }
  }
  CHECK(nonzero_checked > 5);
}

TEST_CASE("scalar element reduces to radial overlap") {
  const OscState ring(0, 1, 1), g(0, 0, 0);
  CHECK(oscillator_basis::external_scalar_element(g, g, g, g,
                                                  [](double) { return 1.0; }) ==
        doctest::Approx(1.0).epsilon(1e-11));
  CHECK(oscillator_basis::external_scalar_element(ring, ring, ring, ring,
                                                  [](double) { return 1.0; }) ==
        doctest::Approx(1.0).epsilon(1e-11));
  // orthogonal external states
  CHECK(oscillator_basis::external_scalar_element(ring, g, g, g,
                                                  [](double) { return 1.0; }) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("degenerate subspace enumeration") {
  oscillator_basis::SubspaceConstraints m0;
  m0.m_total = 0;
  CHECK(oscillator_basis::degenerate_subspace(2, m0).size() == 7);

  oscillator_basis::SubspaceConstraints m2;
  m2.m_total = 2;
  const auto stretched = oscillator_basis::degenerate_subspace(2, m2);
  CHECK(stretched.size() == 3);

  oscillator_basis::SubspaceConstraints g0;
  g0.m_total = 0;
  CHECK(oscillator_basis::degenerate_subspace(0, g0).size() == 1);
}
