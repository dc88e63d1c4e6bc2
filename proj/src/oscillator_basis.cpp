#include "dipolatt/oscillator_basis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "dipolatt/angular.hpp"
#include "dipolatt/quadrature.hpp"

namespace dipolatt::oscillator_basis {

namespace {

using Complex = std::complex<double>;
using Occ = std::array<int, 3>;            // Cartesian occupation (kx, ky, kz)
using CartVec = std::map<Occ, Complex>;    // sparse state in the occupation basis

void accumulate(CartVec& v, const Occ& k, Complex c) {
  if (c == Complex(0.0, 0.0)) return;
  auto it = v.find(k);
  if (it == v.end())
    v.emplace(k, c);
  else {
    it->second += c;
    if (std::abs(it->second) < 1e-300) v.erase(it);
  }
}

CartVec apply_adag_cart(int axis, const CartVec& v) {
  CartVec out;
  for (const auto& [k, c] : v) {
    Occ kk = k;
    kk[axis] += 1;
    accumulate(out, kk, c * std::sqrt(double(kk[axis])));
  }
  return out;
}

CartVec apply_a_cart(int axis, const CartVec& v) {
  CartVec out;
  for (const auto& [k, c] : v) {
    if (k[axis] == 0) continue;
    Occ kk = k;
    kk[axis] -= 1;
    accumulate(out, kk, c * std::sqrt(double(k[axis])));
  }
  return out;
}

CartVec scale(const CartVec& v, Complex s) {
  CartVec out;
  for (const auto& [k, c] : v) out.emplace(k, c * s);
  return out;
}

CartVec add(const CartVec& a, const CartVec& b) {
  CartVec out = a;
  for (const auto& [k, c] : b) accumulate(out, k, c);
  return out;
}

// Spherical creation components: adag_{+1} = -(ax+iay)/sqrt2, adag_0 = az,
// adag_{-1} = (ax-iay)/sqrt2; annihilation parts are their adjoints.
CartVec apply_adag_sph(int q, const CartVec& v) {
  const double s = 1.0 / std::sqrt(2.0);
  switch (q) {
    case 1:
      return add(scale(apply_adag_cart(0, v), Complex(-s, 0)),
                 scale(apply_adag_cart(1, v), Complex(0, -s)));
    case 0:
      return apply_adag_cart(2, v);
    case -1:
      return add(scale(apply_adag_cart(0, v), Complex(s, 0)),
                 scale(apply_adag_cart(1, v), Complex(0, -s)));
    default:
      throw DomainError("apply_adag_sph: bad q");
  }
}

CartVec apply_a_sph(int q, const CartVec& v) {
  const double s = 1.0 / std::sqrt(2.0);
  switch (q) {
    case 1:
      return add(scale(apply_a_cart(0, v), Complex(-s, 0)),
                 scale(apply_a_cart(1, v), Complex(0, s)));
    case 0:
      return apply_a_cart(2, v);
    case -1:
      return add(scale(apply_a_cart(0, v), Complex(s, 0)),
                 scale(apply_a_cart(1, v), Complex(0, s)));
    default:
      throw DomainError("apply_a_sph: bad q");
  }
}

double norm2(const CartVec& v) {
  double s = 0.0;
  for (const auto& [k, c] : v) s += std::norm(c);
  return s;
}

// L_- = sqrt(2) (adag_0 a_{+1} + adag_{-1} a_0)
CartVec apply_lower(const CartVec& v) {
  CartVec out = add(apply_adag_sph(0, apply_a_sph(1, v)),
                    apply_adag_sph(-1, apply_a_sph(0, v)));
  return scale(out, std::sqrt(2.0));
}

// |n, l, m> in the Cartesian occupation basis.  Built as
// (-1)^n (adag.adag)^n (adag_{+1})^l |0>, normalised, then lowered to m.
// The (-1)^n keeps the radial part positive at the origin (Laguerre
// convention R_nl ~ +r^l L_n^{l+1/2}(r^2) e^{-r^2/2}).
class ShellTable {
 public:
  const CartVec& state(int n, int l, int m) {
    const uint64_t key = pack(n, l, m);
    {
      std::shared_lock lk(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    std::unique_lock lk(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    // build the whole (n, l) ladder at once
    CartVec top{{Occ{0, 0, 0}, Complex(1.0, 0.0)}};
    for (int i = 0; i < l; ++i) top = apply_adag_sph(1, top);
    for (int i = 0; i < n; ++i) {
      CartVec pair = apply_adag_cart(0, apply_adag_cart(0, top));
      pair = add(pair, apply_adag_cart(1, apply_adag_cart(1, top)));
      pair = add(pair, apply_adag_cart(2, apply_adag_cart(2, top)));
      top = pair;
    }
    top = scale(top, Complex((n % 2 == 0) ? 1.0 : -1.0, 0.0) / std::sqrt(norm2(top)));
    cache_.emplace(pack(n, l, l), top);
    CartVec cur = top;
    for (int mm = l; mm > -l; --mm) {
      cur = scale(apply_lower(cur), 1.0 / std::sqrt(double((l + mm) * (l - mm + 1))));
      cache_.emplace(pack(n, l, mm - 1), cur);
    }
    return cache_.at(key);
  }

 private:
  static uint64_t pack(int n, int l, int m) {
    return (uint64_t(n) << 32) | (uint64_t(l) << 16) | uint64_t(m + 512);
  }
  std::unordered_map<uint64_t, CartVec> cache_;
  std::shared_mutex mu_;
};

ShellTable& shells() {
  static ShellTable t;
  return t;
}

// 1D coefficient <k_r k_R | k_1 k_2> for x_r = (x1-x2)/sqrt2, x_R = (x1+x2)/sqrt2.
double rot1d(int kr, int kR, int k1, int k2) {
  if (kr + kR != k1 + k2) return 0.0;
  static std::unordered_map<uint64_t, double> cache;
  static std::shared_mutex mu;
  const uint64_t key = (uint64_t(kr) << 48) | (uint64_t(kR) << 32) |
                       (uint64_t(k1) << 16) | uint64_t(k2);
  {
    std::shared_lock lk(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto lfact = [](int n) { return std::lgamma(double(n + 1)); };
  auto lbinom = [&](int n, int k) { return lfact(n) - lfact(k) - lfact(n - k); };
  double sum = 0.0;
  for (int i = std::max(0, kR - k2); i <= std::min(k1, kR); ++i) {
    const int j = kR - i;
    const double term = std::exp(lbinom(k1, i) + lbinom(k2, j));
    sum += ((k2 - j) % 2 == 0) ? term : -term;
  }
  const double val =
      sum * std::exp(0.5 * (lfact(kr) + lfact(kR) - lfact(k1) - lfact(k2)) -
                     0.5 * (k1 + k2) * std::log(2.0));
  std::unique_lock lk(mu);
  cache.emplace(key, val);
  return val;
}

struct PairKey {
  Occ a, b;
  bool operator==(const PairKey& o) const { return a == o.a && b == o.b; }
};
struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const {
    std::size_t h = 1469598103934665603ull;
    for (int v : {k.a[0], k.a[1], k.a[2], k.b[0], k.b[1], k.b[2]})
      h = (h ^ std::size_t(v)) * 1099511628211ull;
    return h;
  }
};

struct SphAmp {
  OscState rel, cm;
  Complex amp;
};

// Expand |s1>|s2> over relative x CM spherical oscillator states.
std::vector<SphAmp> decompose_product(const OscState& s1, const OscState& s2) {
  static std::unordered_map<uint64_t, std::vector<SphAmp>> cache;
  static std::shared_mutex mu;
  auto pack6 = [](const OscState& a, const OscState& b) {
    auto p = [](const OscState& s) {
      return (uint64_t(s.n) << 20) | (uint64_t(s.l) << 10) | uint64_t(s.m + 512);
    };
    return (p(a) << 32) | p(b);
  };
  const uint64_t key = pack6(s1, s2);
  {
    std::shared_lock lk(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  const CartVec a = shells().state(s1.n, s1.l, s1.m);
  const CartVec b = shells().state(s2.n, s2.l, s2.m);

  // product in the (rel, CM) occupation basis
  std::unordered_map<PairKey, Complex, PairKeyHash> amp;
  for (const auto& [k1, c1] : a) {
    for (const auto& [k2, c2] : b) {
      const Complex c12 = c1 * c2;
      for (int rx = 0; rx <= k1[0] + k2[0]; ++rx) {
        const double wx = rot1d(rx, k1[0] + k2[0] - rx, k1[0], k2[0]);
        if (wx == 0.0) continue;
        for (int ry = 0; ry <= k1[1] + k2[1]; ++ry) {
          const double wy = rot1d(ry, k1[1] + k2[1] - ry, k1[1], k2[1]);
          if (wy == 0.0) continue;
          for (int rz = 0; rz <= k1[2] + k2[2]; ++rz) {
            const double wz = rot1d(rz, k1[2] + k2[2] - rz, k1[2], k2[2]);
            if (wz == 0.0) continue;
            const PairKey pk{{rx, ry, rz},
                             {k1[0] + k2[0] - rx, k1[1] + k2[1] - ry,
                              k1[2] + k2[2] - rz}};
            amp[pk] += c12 * wx * wy * wz;
          }
        }
      }
    }
  }

  // project occupation pairs back onto spherical states shell by shell
  const int etot = s1.quanta() + s2.quanta();
  std::vector<SphAmp> out;
  for (int erel = 0; erel <= etot; ++erel) {
    const int ecm = etot - erel;
    for (int lr = erel % 2; lr <= erel; lr += 2) {
      const int nr = (erel - lr) / 2;
      for (int mr = -lr; mr <= lr; ++mr) {
        const CartVec& rel = shells().state(nr, lr, mr);
        for (int lc = ecm % 2; lc <= ecm; lc += 2) {
          const int nc = (ecm - lc) / 2;
          for (int mc = -lc; mc <= lc; ++mc) {
            const CartVec& cm = shells().state(nc, lc, mc);
            Complex overlap(0.0, 0.0);
            for (const auto& [kr, cr] : rel) {
              for (const auto& [kc, cc] : cm) {
                auto it = amp.find(PairKey{kr, kc});
                if (it != amp.end())
                  overlap += std::conj(cr) * std::conj(cc) * it->second;
              }
            }
            if (std::abs(overlap) > 1e-13)
              out.push_back({OscState(nr, lr, mr), OscState(nc, lc, mc), overlap});
          }
        }
      }
    }
  }

  std::unique_lock lk(mu);
  auto [it, inserted] = cache.emplace(key, std::move(out));
  (void)inserted;
  return it->second;
}

double cg_cached(int tj1, int tm1, int tj2, int tm2, int tJ, int tM) {
  if (tM != tm1 + tm2) return 0.0;
  static std::unordered_map<uint64_t, double> cache;
  static std::shared_mutex mu;
  auto enc = [](int v) { return uint64_t(v + 128) & 0xFFFull; };
  const uint64_t key = (enc(tj1) << 48) | (enc(tm1) << 36) | (enc(tj2) << 24) |
                       (enc(tm2) << 12) | enc(tJ);
  {
    std::shared_lock lk(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  using angular::AngMom;
  const double v =
      angular::clebsch_gordan(AngMom(tj1, tm1), AngMom(tj2, tm2), AngMom(tJ, tM));
  std::unique_lock lk(mu);
  cache.emplace(key, v);
  return v;
}

// integer-l Clebsch-Gordan
double cgl(int l1, int m1, int l2, int m2, int L, int M) {
  return cg_cached(2 * l1, 2 * m1, 2 * l2, 2 * m2, 2 * L, 2 * M);
}

// Int Y_{l'm'}* Y_{K mr} Y_{lm} dOmega
double gaunt(int lp, int mp, int K, int mr, int l, int m) {
  if (mp != m + mr) return 0.0;
  const double c0 = cgl(l, 0, K, 0, lp, 0);
  if (c0 == 0.0) return 0.0;
  return std::sqrt((2 * K + 1) * (2 * l + 1) / (4.0 * M_PI * (2 * lp + 1))) *
         c0 * cgl(l, m, K, mr, lp, mp);
}

double half_gamma(int twice_x) {
  return std::tgamma(0.5 * twice_x);
}

// normalisation of R_nl = N r^l L_n^{l+1/2}(r^2) e^{-r^2/2}
double radial_norm(int n, int l) {
  return std::sqrt(2.0 * std::tgamma(double(n + 1)) / half_gamma(2 * n + 2 * l + 3));
}

// B(nl, n'l', p): R_nl R_n'l' r^2-moment expansion coefficients,
// Int R R' V r^2 dr = sum_p B(p) I_p(V).
double b_coeff(int n, int l, int np, int lp, int p) {
  const int p0 = (l + lp) / 2;
  if (p < p0 || p > p0 + n + np) return 0.0;
  double sum = 0.0;
  const int kk = p - p0;
  for (int k = std::max(0, kk - np); k <= std::min(n, kk); ++k) {
    const int k2 = kk - k;
    double t = half_gamma(2 * n + 2 * l + 3) /
               (half_gamma(2 * k + 2 * l + 3) * std::tgamma(double(n - k + 1)) *
                std::tgamma(double(k + 1)));
    t *= half_gamma(2 * np + 2 * lp + 3) /
         (half_gamma(2 * k2 + 2 * lp + 3) * std::tgamma(double(np - k2 + 1)) *
          std::tgamma(double(k2 + 1)));
    sum += (kk % 2 == 0) ? t : -t;
  }
  return 0.5 * half_gamma(2 * p + 3) * radial_norm(n, l) * radial_norm(np, lp) * sum;
}

}  // namespace

double moshinsky_bracket(int n, int l, int N, int L, int n1, int l1, int n2,
                         int l2, int lam) {
  for (int v : {n, l, N, L, n1, l1, n2, l2, lam})
    if (v < 0) throw DomainError("moshinsky_bracket: negative quantum number");
  if (2 * n + l + 2 * N + L != 2 * n1 + l1 + 2 * n2 + l2) return 0.0;
  if (lam < std::abs(l - L) || lam > l + L) return 0.0;
  if (lam < std::abs(l1 - l2) || lam > l1 + l2) return 0.0;

  static std::unordered_map<uint64_t, double> cache;
  static std::shared_mutex mu;
  uint64_t key = 0;
  for (int v : {n, l, N, L, n1, l1, n2, l2, lam}) key = (key << 7) | uint64_t(v);
  {
    std::shared_lock lk(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  // project the coupled product state onto the coupled rel-CM state; any
  // projection mu gives the same number (tested), mu = 0 is always allowed
  const int mu_proj = 0;
  Complex sum(0.0, 0.0);
  for (int m1 = -l1; m1 <= l1; ++m1) {
    const int m2 = mu_proj - m1;
    if (std::abs(m2) > l2) continue;
    const double c12 = cgl(l1, m1, l2, m2, lam, mu_proj);
    if (c12 == 0.0) continue;
    for (const auto& term : decompose_product(OscState(n1, l1, m1), OscState(n2, l2, m2))) {
      if (term.rel.n != n || term.rel.l != l || term.cm.n != N || term.cm.l != L)
        continue;
      const double clm =
          cgl(l, term.rel.m, L, term.cm.m, lam, mu_proj);
      if (clm == 0.0) continue;
      sum += c12 * clm * term.amp;
    }
  }
  const double val = sum.real();
  std::unique_lock lk(mu);
  cache.emplace(key, val);
  return val;
}

std::vector<std::pair<RelCmState, double>> relcm_expansion(int n1, int l1,
                                                           int n2, int l2,
                                                           int lam, int mu) {
  std::vector<std::pair<RelCmState, double>> out;
  const int etot = 2 * n1 + l1 + 2 * n2 + l2;
  for (int erel = 0; erel <= etot; ++erel) {
    for (int l = erel % 2; l <= erel; l += 2) {
      const int n = (erel - l) / 2;
      const int ecm = etot - erel;
      for (int L = ecm % 2; L <= ecm; L += 2) {
        const int N = (ecm - L) / 2;
        const double b = moshinsky_bracket(n, l, N, L, n1, l1, n2, l2, lam);
        if (std::abs(b) > 1e-14)
          out.push_back({RelCmState{n, l, N, L, lam, mu}, b});
      }
    }
  }
  return out;
}

double talmi_integral(int p, const std::function<double(double)>& potential) {
  if (p < 0) throw DomainError("talmi_integral: p must be >= 0");
  // integrability probe at the origin
  const double t3 = std::abs(std::pow(1e-3, 2 * p + 2) * potential(1e-3));
  const double t4 = std::abs(std::pow(1e-4, 2 * p + 2) * potential(1e-4));
  const double t5 = std::abs(std::pow(1e-5, 2 * p + 2) * potential(1e-5));
  if (t4 > 8.0 * t3 && t5 > 8.0 * t4 && t5 > 1e-12)
    throw IntegrabilityError("talmi_integral: moment diverges at the origin");

  quadrature::Options opts;
  opts.rel_tol = 1e-11;
  const double integral = quadrature::integrate_0_inf(
      [&](double r) {
        // the probe above certified an integrable origin; avoid 0 * inf there
        if (r < 1e-12) return 0.0;
        return std::pow(r, 2 * p + 2) * std::exp(-r * r) * potential(r);
      },
      opts);
  return 2.0 / half_gamma(2 * p + 3) * integral;
}

double radial_reduced_element(int n, int l, int np, int lp,
                              const std::function<double(double)>& potential) {
  if (n < 0 || l < 0 || np < 0 || lp < 0)
    throw DomainError("radial_reduced_element: negative quantum number");
  if ((l + lp) % 2 != 0)
    throw DomainError("radial_reduced_element: l + l' must be even");
  const int p0 = (l + lp) / 2;
  double sum = 0.0;
  for (int p = p0; p <= p0 + n + np; ++p) {
    const double b = b_coeff(n, l, np, lp, p);
    if (b == 0.0) continue;
    sum += b * talmi_integral(p, potential);
  }
  return sum;
}

namespace {

double external_element_rank(const OscState& b1, const OscState& b2,
                             const OscState& k1, const OscState& k2, int K,
                             int m_r, const std::function<double(double)>& V) {
  b1.validate();
  b2.validate();
  k1.validate();
  k2.validate();
  if (std::abs(m_r) > K) throw DomainError("external element: |m_r| > K");

  const int mu_ket = k1.m + k2.m;
  const int mu_bra = b1.m + b2.m;

  // cache radial integrals per (n l, n' l') within this call
  std::map<std::array<int, 4>, double> rad_cache;
  auto radial = [&](int n, int l, int np, int lp) {
    const std::array<int, 4> key{n, l, np, lp};
    auto it = rad_cache.find(key);
    if (it != rad_cache.end()) return it->second;
    const double v = radial_reduced_element(n, l, np, lp, V);
    rad_cache.emplace(key, v);
    return v;
  };

  double total = 0.0;
  for (int lam = std::abs(k1.l - k2.l); lam <= k1.l + k2.l; ++lam) {
    if (std::abs(mu_ket) > lam) continue;
    const double cket = cgl(k1.l, k1.m, k2.l, k2.m, lam, mu_ket);
    if (cket == 0.0) continue;
    const auto ket_terms = relcm_expansion(k1.n, k1.l, k2.n, k2.l, lam, mu_ket);

    for (int lamp = std::abs(b1.l - b2.l); lamp <= b1.l + b2.l; ++lamp) {
      if (std::abs(mu_bra) > lamp) continue;
      const double cbra = cgl(b1.l, b1.m, b2.l, b2.m, lamp, mu_bra);
      if (cbra == 0.0) continue;
      const auto bra_terms = relcm_expansion(b1.n, b1.l, b2.n, b2.l, lamp, mu_bra);

      for (const auto& [kt, bket] : ket_terms) {
        for (const auto& [bt, bbra] : bra_terms) {
          if (bt.N != kt.N || bt.L != kt.L) continue;  // CM conserved
          // angular sum over relative projections
          double ang = 0.0;
          for (int ml = -kt.l; ml <= kt.l; ++ml) {
            const int ML = mu_ket - ml;
            if (std::abs(ML) > kt.L) continue;
            const int mlp = ml + m_r;
            if (std::abs(mlp) > bt.l) continue;
            const double c1 = cgl(kt.l, ml, kt.L, ML, lam, mu_ket);
            if (c1 == 0.0) continue;
            const double c2 = cgl(bt.l, mlp, bt.L, ML, lamp, mu_bra);
            if (c2 == 0.0) continue;
            const double gg = gaunt(bt.l, mlp, K, m_r, kt.l, ml);
            if (gg == 0.0) continue;
            ang += c1 * c2 * gg;
          }
          if (ang == 0.0) continue;
          total += cket * cbra * bket * bbra * ang * radial(bt.n, bt.l, kt.n, kt.l);
        }
      }
    }
  }
  return total;
}

}  // namespace

double external_tensor_element(const OscState& b1, const OscState& b2,
                               const OscState& k1, const OscState& k2, int m_r,
                               const std::function<double(double)>& potential) {
  return external_element_rank(b1, b2, k1, k2, 2, m_r, potential);
}

double external_scalar_element(const OscState& b1, const OscState& b2,
                               const OscState& k1, const OscState& k2,
                               const std::function<double(double)>& potential) {
  // rank-0 assembly produces the Y_0^0 component; rescale to the identity
  return std::sqrt(4.0 * M_PI) *
         external_element_rank(b1, b2, k1, k2, 0, 0, potential);
}

std::vector<std::pair<OscState, OscState>> degenerate_subspace(
    int total_quanta, const SubspaceConstraints& constraints) {
  if (total_quanta < 0) throw DomainError("degenerate_subspace: negative quanta");
  std::vector<std::pair<OscState, OscState>> out;
  for (int e1 = 0; e1 <= total_quanta; ++e1) {
    const int e2 = total_quanta - e1;
    for (int l1 = e1 % 2; l1 <= e1; l1 += 2) {
      const int n1 = (e1 - l1) / 2;
      for (int l2 = e2 % 2; l2 <= e2; l2 += 2) {
        const int n2 = (e2 - l2) / 2;
        for (int m1 = -l1; m1 <= l1; ++m1) {
          if (constraints.m_total) {
            const int m2 = *constraints.m_total - m1;
            if (std::abs(m2) > l2) continue;
            out.push_back({OscState(n1, l1, m1), OscState(n2, l2, m2)});
          } else {
            for (int m2 = -l2; m2 <= l2; ++m2)
              out.push_back({OscState(n1, l1, m1), OscState(n2, l2, m2)});
          }
        }
      }
    }
  }
  return out;
}

}  // namespace dipolatt::oscillator_basis
