#include "dipolatt/angular.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace dipolatt::angular {

namespace {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

const BigInt& factorial(int n) {
  static std::vector<BigInt> table = [] {
    std::vector<BigInt> t(201);
    t[0] = 1;
    for (int i = 1; i <= 200; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table.at(static_cast<std::size_t>(n));
}

bool triangle_ok(int ta, int tb, int tc) {
  return tc >= std::abs(ta - tb) && tc <= ta + tb && ((ta + tb + tc) & 1) == 0;
}

// (a+b-c)! (a-b+c)! (-a+b+c)! / (a+b+c+1)!  with doubled arguments.
BigRat triangle_rat(int ta, int tb, int tc) {
  return BigRat(factorial((ta + tb - tc) / 2) * factorial((ta - tb + tc) / 2) *
                    factorial((-ta + tb + tc) / 2),
                factorial((ta + tb + tc) / 2 + 1));
}

// sign(sum) * sqrt(pref * sum^2) evaluated in double.
double signed_sqrt(const BigRat& pref, const BigRat& sum) {
  BigRat q = pref * sum * sum;
  double v = std::sqrt(q.convert_to<double>());
  return sum < 0 ? -v : v;
}

}  // namespace

double clebsch_gordan(const AngMom& j1, const AngMom& j2, const AngMom& J) {
  j1.validate();
  j2.validate();
  J.validate();
  if (J.twice_m != j1.twice_m + j2.twice_m) return 0.0;
  if (!triangle_ok(j1.twice_j, j2.twice_j, J.twice_j)) return 0.0;

  const int a = (j1.twice_j + j1.twice_m) / 2, b = (j1.twice_j - j1.twice_m) / 2;
  const int c = (j2.twice_j + j2.twice_m) / 2, d = (j2.twice_j - j2.twice_m) / 2;
  const int e = (J.twice_j + J.twice_m) / 2, f = (J.twice_j - J.twice_m) / 2;
  const int g1 = (j1.twice_j + j2.twice_j - J.twice_j) / 2;   // j1+j2-J
  const int g2 = (J.twice_j - j2.twice_j + j1.twice_m) / 2;   // J-j2+m1
  const int g3 = (J.twice_j - j1.twice_j - j2.twice_m) / 2;   // J-j1-m2

  const int kmin = std::max({0, -g2, -g3});
  const int kmax = std::min({g1, b, c});
  if (kmin > kmax) return 0.0;

  BigRat sum = 0;
  for (int k = kmin; k <= kmax; ++k) {
    BigRat term(1, factorial(k) * factorial(g1 - k) * factorial(b - k) *
                       factorial(c - k) * factorial(g2 + k) * factorial(g3 + k));
    if (k & 1) term = -term;
    sum += term;
  }

  BigRat pref = triangle_rat(j1.twice_j, j2.twice_j, J.twice_j);
  pref *= J.twice_j + 1;
  pref *= BigRat(factorial(a) * factorial(b), 1) * BigRat(factorial(c), 1) *
          BigRat(factorial(d) * factorial(e) * factorial(f), 1);
  return signed_sqrt(pref, sum);
}

double wigner_6j(int tj1, int tj2, int tj3, int tj4, int tj5, int tj6) {
  const int tj[6] = {tj1, tj2, tj3, tj4, tj5, tj6};
  for (int v : tj)
    if (v < 0) throw DomainError("wigner_6j: negative angular momentum");
  const int triads[4][3] = {{tj1, tj2, tj3}, {tj1, tj5, tj6}, {tj4, tj2, tj6}, {tj4, tj5, tj3}};
  for (auto& t : triads)
    if (((t[0] + t[1] + t[2]) & 1) != 0)
      throw DomainError("wigner_6j: triad with half-integer perimeter");
  for (auto& t : triads)
    if (!triangle_ok(t[0], t[1], t[2])) return 0.0;

  // doubled triad sums and pair sums
  const int s1 = (tj1 + tj2 + tj3) / 2, s2 = (tj1 + tj5 + tj6) / 2;
  const int s3 = (tj4 + tj2 + tj6) / 2, s4 = (tj4 + tj5 + tj3) / 2;
  const int p1 = (tj1 + tj2 + tj4 + tj5) / 2;
  const int p2 = (tj2 + tj3 + tj5 + tj6) / 2;
  const int p3 = (tj3 + tj1 + tj6 + tj4) / 2;

  const int tmin = std::max({s1, s2, s3, s4});
  const int tmax = std::min({p1, p2, p3});
  if (tmin > tmax) return 0.0;

  BigRat sum = 0;
  for (int t = tmin; t <= tmax; ++t) {
    BigRat term(factorial(t + 1),
                factorial(t - s1) * factorial(t - s2) * factorial(t - s3) *
                    factorial(t - s4) * factorial(p1 - t) * factorial(p2 - t) *
                    factorial(p3 - t));
    if (t & 1) term = -term;
    sum += term;
  }

  BigRat pref = triangle_rat(tj1, tj2, tj3) * triangle_rat(tj1, tj5, tj6) *
                triangle_rat(tj4, tj2, tj6) * triangle_rat(tj4, tj5, tj3);
  return signed_sqrt(pref, sum);
}

double oscillator_strength_factor(int twice_F_excited, int twice_F_ground,
                                  const HyperfineContext& ctx) {
  if (!ctx.valid_ground_F(twice_F_ground))
    throw DomainError("oscillator_strength_factor: unphysical ground F");
  if (twice_F_excited < 0 || ((twice_F_excited ^ ctx.twice_I ^ ctx.twice_J_excited) & 1) != 0)
    throw DomainError("oscillator_strength_factor: unphysical excited F'");
  if (!ctx.valid_excited_F(twice_F_excited)) return 0.0;

  const double six_j =
      wigner_6j(ctx.twice_J_ground, ctx.twice_J_excited, 2, twice_F_excited,
                twice_F_ground, ctx.twice_I);
  // phase (-1)^(F' + J + 1 + I), doubled exponent always even here
  const int exp2 = twice_F_excited + ctx.twice_J_ground + 2 + ctx.twice_I;
  const double phase = (exp2 / 2) % 2 == 0 ? 1.0 : -1.0;
  return phase *
         std::sqrt(static_cast<double>((twice_F_ground + 1) *
                                       (ctx.twice_J_excited + 1))) *
         six_j;
}

namespace {

// P_l^m without the Condon-Shortley phase, m >= 0.
double assoc_legendre(int l, int m, double x) {
  double pmm = 1.0;
  if (m > 0) {
    const double somx2 = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
    double fact = 1.0;
    for (int i = 0; i < m; ++i) {
      pmm *= fact * somx2;
      fact += 2.0;
    }
  }
  if (l == m) return pmm;
  double pmmp1 = x * (2 * m + 1) * pmm;
  if (l == m + 1) return pmmp1;
  double pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    pll = (x * (2 * ll - 1) * pmmp1 - (ll + m - 1) * pmm) / (ll - m);
    pmm = pmmp1;
    pmmp1 = pll;
  }
  return pll;
}

}  // namespace

std::complex<double> spherical_harmonic(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) throw DomainError("spherical_harmonic: |m| > l");
  if (!std::isfinite(theta) || !std::isfinite(phi))
    throw DomainError("spherical_harmonic: non-finite angle");
  const int am = std::abs(m);
  double norm = (2 * l + 1) / (4.0 * M_PI);
  for (int k = l - am + 1; k <= l + am; ++k) norm /= k;
  double val = std::sqrt(norm) * assoc_legendre(l, am, std::cos(theta));
  if (am % 2 == 1) val = -val;  // Condon-Shortley
  std::complex<double> y = val * std::exp(std::complex<double>(0.0, am * phi));
  if (m < 0) {
    y = std::conj(y);
    if (am % 2 == 1) y = -y;
  }
  return y;
}

}  // namespace dipolatt::angular
