#include "circext/jacobi.hpp"

#include <algorithm>
#include <cmath>

#include "circext/errors.hpp"

namespace circext::spectrum {

std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n, int max_sweeps) {
  if (a.size() != n * n) throw DomainError("jacobi_eigenvalues: matrix size mismatch");
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) at(i, j) = at(j, i);

  std::vector<double> d(n), b(n), z(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = b[i] = at(i, i);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0, total = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      total += d[p] * d[p];
      for (std::size_t q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    }
    total += 2.0 * off;
    if (off == 0.0 || off <= 1e-30 * total) break;
    // Threshold on early sweeps, as in the classical cyclic scheme.
    const double thresh = sweep < 3 ? 0.2 * std::sqrt(off) / static_cast<double>(n * n) : 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(d[p]) + g == std::abs(d[p]) && std::abs(d[q]) + g == std::abs(d[q])) {
          at(p, q) = 0.0;
          continue;
        }
        if (std::abs(apq) <= thresh) continue;
        const double h = d[q] - d[p];
        double t;
        if (std::abs(h) + g == std::abs(h)) {
          t = apq / h;
        } else {
          const double theta = 0.5 * h / apq;
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        const double hh = t * apq;
        z[p] -= hh;
        z[q] += hh;
        d[p] -= hh;
        d[q] += hh;
        at(p, q) = 0.0;
        auto rotate = [&](double& x, double& y) {
          const double gx = x, hy = y;
          x = gx - s * (hy + gx * tau);
          y = hy + s * (gx - hy * tau);
        };
        for (std::size_t j = 0; j < p; ++j) rotate(at(j, p), at(j, q));
        for (std::size_t j = p + 1; j < q; ++j) rotate(at(p, j), at(j, q));
        for (std::size_t j = q + 1; j < n; ++j) rotate(at(p, j), at(q, j));
      }
    }
    for (std::size_t p = 0; p < n; ++p) {
      b[p] += z[p];
      d[p] = b[p];
      z[p] = 0.0;
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace circext::spectrum
