#pragma once

// Brute-force pairing of e_k(w1..w3) against conj(e_l(w4..w6)) over six unit
// circle points with w1 + ... + w6 = 0, by splitting the constraint through
// x = w1 + w2 + w3:
//   W(k, l) = int g_k(x) conj(g_l(-x)) dx = 2 pi (-1)^(sum l) int_0^3 g_k(r) g_l(r) r dr,
//   g_k(r) = int d theta1 sum over the two (theta2, theta3) with w2 + w3 = r - w1
//            of e^{i k.theta} / (|y| sqrt(1 - |y|^2 / 4)),  y = r - w1.
// g_k is real on the positive axis and g_0 is the triple convolution density.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <queue>
#include <vector>

#include "circext/quadrature.hpp"

namespace oracle {

using Triple = std::array<int, 3>;
using Pair = std::pair<Triple, Triple>;

inline Triple sorted(Triple t) {
  std::sort(t.begin(), t.end());
  return t;
}

inline Triple negated(const Triple& t) { return {-t[0], -t[1], -t[2]}; }

// Representative under slot permutations, k <-> l and overall negation, all
// of which leave the real pairing unchanged.
inline Pair representative(const Triple& k, const Triple& l) {
  std::array<Pair, 4> c{{{sorted(k), sorted(l)},
                         {sorted(l), sorted(k)},
                         {sorted(negated(k)), sorted(negated(l))},
                         {sorted(negated(l)), sorted(negated(k))}}};
  return *std::min_element(c.begin(), c.end());
}

// Vector-valued globally adaptive G10/K21; error is the max-norm over components.
template <class F>
std::vector<double> integrate_vec(F&& f, std::vector<double> pts, std::size_t dim, double abs_tol,
                                  int max_panels = 4000) {
  namespace d = circext::quad::detail;
  struct Panel {
    double a, b, err;
    std::vector<double> val, errs;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  auto rule = [&](double a, double b) {
    Panel p{a, b, 0.0, std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
    std::vector<double> gauss(dim, 0.0);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const auto fc = f(c);
    for (std::size_t i = 0; i < dim; ++i) p.val[i] = d::kWgk[10] * fc[i];
    for (std::size_t j = 0; j < 10; ++j) {
      const auto lo = f(c - h * d::kXgk[j]);
      const auto hi = f(c + h * d::kXgk[j]);
      for (std::size_t i = 0; i < dim; ++i) {
        const double s = lo[i] + hi[i];
        p.val[i] += d::kWgk[j] * s;
        if (j % 2 == 1) gauss[i] += d::kWg[j / 2] * s;
      }
    }
    for (std::size_t i = 0; i < dim; ++i) {
      p.val[i] *= h;
      p.errs[i] = std::abs(p.val[i] - h * gauss[i]);
      p.err = std::max(p.err, p.errs[i]);
    }
    return p;
  };
  std::priority_queue<Panel> queue;
  std::vector<double> total(dim, 0.0), err(dim, 0.0);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] <= pts[i]) continue;
    auto p = rule(pts[i], pts[i + 1]);
    for (std::size_t c = 0; c < dim; ++c) {
      total[c] += p.val[c];
      err[c] += p.errs[c];
    }
    queue.push(std::move(p));
  }
  int panels = static_cast<int>(queue.size());
  while (panels < max_panels && *std::max_element(err.begin(), err.end()) > abs_tol) {
    Panel top = queue.top();
    queue.pop();
    const double mid = 0.5 * (top.a + top.b);
    auto l = rule(top.a, mid), r = rule(mid, top.b);
    for (std::size_t c = 0; c < dim; ++c) {
      total[c] += l.val[c] + r.val[c] - top.val[c];
      err[c] += l.errs[c] + r.errs[c] - top.errs[c];
    }
    queue.push(std::move(l));
    queue.push(std::move(r));
    ++panels;
  }
  return total;
}

inline int index_of(const Triple& k) { return (k[0] + 2) * 25 + (k[1] + 2) * 5 + (k[2] + 2); }

// g_k(r) for all k in [-2, 2]^3, indexed by index_of.
inline std::vector<double> twisted_densities(double r, double abs_tol = 1e-7) {
  using cplx = std::complex<double>;
  constexpr double pi = std::numbers::pi;
  auto at = [&](double t1, double weight) {
    std::vector<double> out(125, 0.0);
    const cplx y = r - std::polar(1.0, t1);
    const double m = std::abs(y);
    if (!(m < 2.0) || m == 0.0) return out;
    const double g = std::arg(y), b = std::acos(0.5 * m);
    const double jac = weight / (m * std::sqrt(1.0 - 0.25 * m * m));
    for (int sol = 0; sol < 2; ++sol) {
      const double t2 = sol ? g - b : g + b, t3 = sol ? g + b : g - b;
      std::array<std::array<cplx, 5>, 3> pw;
      const double th[3] = {t1, t2, t3};
      for (int j = 0; j < 3; ++j) {
        const cplx e = std::polar(1.0, th[j]);
        pw[j] = {1.0 / (e * e), 1.0 / e, 1.0, e, e * e};
      }
      for (int a = 0; a < 5; ++a)
        for (int c = 0; c < 5; ++c) {
          const cplx ab = pw[0][a] * pw[1][c];
          for (int e = 0; e < 5; ++e) out[a * 25 + c * 5 + e] += jac * (ab * pw[2][e]).real();
        }
    }
    return out;
  };
  if (r <= 1.0) return integrate_vec([&](double t) { return at(t, 1.0); }, {-pi, 0.0, pi}, 125, abs_tol);
  const double cmax = (r * r - 3.0) / (2.0 * r);
  if (cmax >= 1.0) return std::vector<double>(125, 0.0);
  const double pmax = std::acos(std::max(-1.0, cmax));
  // theta1 = pmax sin(t) removes the inverse square roots at the edges.
  return integrate_vec([&](double t) { return at(pmax * std::sin(t), pmax * std::cos(t)); },
                       {-pi / 2, 0.0, pi / 2}, 125, abs_tol);
}

// Pairings (with d theta measure) for the given (k, l); |indices| <= 2.
inline std::vector<double> delta_pairings(const std::vector<Pair>& pairs, double abs_tol = 1e-5) {
  constexpr double pi = std::numbers::pi;
  // r = 1 - s^3 on [0, 1] and r = 1 + 2 s^3 on [1, 3] flatten the log^2
  // singularity of g_k g_l at r = 1.
  auto f = [&](double s, bool outside) {
    const double s3 = s * s * s;
    const double r = outside ? 1.0 + 2.0 * s3 : 1.0 - s3;
    const double jac = (outside ? 6.0 : 3.0) * s * s * r;
    std::vector<double> out(pairs.size(), 0.0);
    if (jac == 0.0) return out;
    const auto g = twisted_densities(r);
    for (std::size_t c = 0; c < pairs.size(); ++c) {
      const auto& [k, l] = pairs[c];
      const int parity = (l[0] + l[1] + l[2]) & 1;
      out[c] = (parity ? -jac : jac) * g[index_of(k)] * g[index_of(l)];
    }
    return out;
  };
  auto lo = integrate_vec([&](double s) { return f(s, false); }, {0.0, 1.0}, pairs.size(), abs_tol);
  auto hi = integrate_vec([&](double s) { return f(s, true); }, {0.0, 1.0}, pairs.size(), abs_tol);
  for (std::size_t c = 0; c < lo.size(); ++c) lo[c] = 2 * pi * (lo[c] + hi[c]);
  return lo;
}

}  // namespace oracle
