#include "circext/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "circext/bessel.hpp"
#include "circext/errors.hpp"
#include "circext/jacobi.hpp"
#include "circext/parallel.hpp"
#include "circext/quadrature.hpp"

namespace circext::spectrum {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

constexpr int kPanelNodes = 20;
constexpr double kPanelLength = 2.0;
constexpr int kHankelTerms = 20;
constexpr int kHankelCheckTerms = 14;
constexpr int kTailDegree = 30;   // truncation degree in 1/R of the six-fold product
constexpr int kMaxFreq = 6;
constexpr int kMaxOrder = 256;

int bucket_of(int max_order) { return std::max(8, (max_order + 7) / 8 * 8); }

double cutoff_radius(int bucket) {
  // The Hankel series in 1/R has ratio ~ n^2 / (2 m R); keep it below 1/m.
  double r0 = std::max(64.0, 0.5 * bucket * bucket + 64.0);
  return std::ceil(r0 / kPanelLength) * kPanelLength;
}

std::array<int, 6> join(const Triple& k, const Triple& l) {
  return {k[0], k[1], k[2], l[0], l[1], l[2]};
}

int sum(const Triple& t) { return t[0] + t[1] + t[2]; }

double norm(const Triple& t) {
  return std::sqrt(double(t[0]) * t[0] + double(t[1]) * t[1] + double(t[2]) * t[2]);
}

Triple add(const Triple& a, const Triple& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Triple sub(const Triple& a, const Triple& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

// Least-squares slope and intercept of y on x.
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (x.size() < 2 || den == 0.0) return {0.0, n > 0 ? sy / n : 0.0};
  const double slope = (n * sxy - sx * sy) / den;
  return {slope, (sy - slope * sx) / n};
}

}  // namespace

struct PairIntegrator::Tables {
  int bucket = 0;
  double r0 = 0.0;
  std::vector<double> weights;           // quadrature weight times R
  std::vector<double> bessel;            // [node][order], bucket + 1 orders
  std::vector<std::vector<cplx>> hankel; // [order][m]: phase * i^m * a_m(n)
  // tail[p][f + kMaxFreq] = int_{r0}^inf R^-p e^{ifR} dR, p = 0..kTailDegree + 2
  std::vector<std::array<cplx, 2 * kMaxFreq + 1>> tail;

  explicit Tables(int b) : bucket(b), r0(cutoff_radius(b)) {
    const auto gl = quad::gauss_legendre(kPanelNodes);
    const int panels = static_cast<int>(std::lround(r0 / kPanelLength));
    const std::size_t stride = bucket + 1;
    weights.reserve(panels * kPanelNodes);
    bessel.reserve(panels * kPanelNodes * stride);
    for (int p = 0; p < panels; ++p) {
      const double a = p * kPanelLength;
      for (int i = 0; i < kPanelNodes; ++i) {
        const double r = a + 0.5 * kPanelLength * (gl.nodes[i] + 1.0);
        weights.push_back(0.5 * kPanelLength * gl.weights[i] * r);
        const auto js = bessel_j_all(bucket, r);
        bessel.insert(bessel.end(), js.begin(), js.end());
      }
    }

    hankel.resize(stride);
    for (int n = 0; n <= bucket; ++n) {
      const double phase = -(n * kPi / 2 + kPi / 4);
      cplx c = std::polar(1.0, phase);
      double a = 1.0;
      const double mu = 4.0 * n * n;
      for (int m = 0; m < kHankelTerms; ++m) {
        hankel[n].push_back(c * a);
        c *= cplx(0.0, 1.0);
        a *= (mu - (2.0 * m + 1) * (2.0 * m + 1)) / ((m + 1) * 8.0);
      }
    }

    tail.resize(kTailDegree + 3);
    for (int p = 2; p <= kTailDegree + 2; ++p) {
      for (int f = -kMaxFreq; f <= kMaxFreq; ++f) {
        cplx v;
        if (f == 0) {
          v = std::pow(r0, 1.0 - p) / (p - 1.0);
        } else {
          // Repeated integration by parts; terms shrink like (p+k)/(|f| r0).
          const cplx inv_if = 1.0 / cplx(0.0, f);
          cplx term = std::pow(r0, -p) * inv_if;
          cplx acc = term;
          for (int k = 1; k < 60; ++k) {
            term *= (p + k - 1.0) * inv_if / r0;
            acc += term;
            if (std::abs(term) < 1e-20 * std::abs(acc)) break;
          }
          v = -std::polar(1.0, f * r0) * acc;
        }
        tail[p][f + kMaxFreq] = v;
      }
    }
  }

  // (1 / 8 pi^3) Re sum_f sum_p coef int R^-(p+2) e^{ifR}, with each J_n
  // replaced by sqrt(2/(pi R)) Re[e^{iR} c_n(1/R)] truncated at `terms`.
  double tail_integral(const CanonicalKey& key, int terms) const {
    using Poly = std::array<cplx, kTailDegree + 1>;
    std::array<Poly, 2 * kMaxFreq + 1> cur{}, next{};
    cur[kMaxFreq][0] = 1.0;
    for (int j = 0; j < 6; ++j) {
      for (auto& p : next) p.fill(cplx{});
      const auto& h = hankel[key[j]];
      for (int f = -j; f <= j; ++f) {
        const Poly& src = cur[f + kMaxFreq];
        for (int d = 0; d <= kTailDegree; ++d) {
          if (src[d] == cplx{}) continue;
          for (int m = 0; m < terms && d + m <= kTailDegree; ++m) {
            next[f + 1 + kMaxFreq][d + m] += src[d] * h[m];
            next[f - 1 + kMaxFreq][d + m] += src[d] * std::conj(h[m]);
          }
        }
      }
      std::swap(cur, next);
    }
    cplx acc;
    for (int f = -kMaxFreq; f <= kMaxFreq; ++f)
      for (int d = 0; d <= kTailDegree; ++d)
        if (cur[f + kMaxFreq][d] != cplx{}) acc += cur[f + kMaxFreq][d] * tail[d + 2][f + kMaxFreq];
    return acc.real() / (8.0 * kPi * kPi * kPi);
  }
};

CanonicalKey canonical_key(const std::array<int, 6>& orders) {
  CanonicalKey key;
  for (int i = 0; i < 6; ++i) key[i] = std::abs(orders[i]);
  std::sort(key.begin(), key.end());
  return key;
}

int canonical_sign(const std::array<int, 6>& orders) {
  int parity = 0;
  for (int n : orders)
    if (n < 0) parity += -n;
  return parity % 2 ? -1 : 1;
}

std::vector<ModeIndex> enumerate_modes(int N, int d) {
  if (N < 0 || N % 2 != 0) throw DomainError("enumerate_modes: N must be a nonnegative even integer");
  if (d % 2 != 0) throw DomainError("enumerate_modes: d must be even");
  std::vector<ModeIndex> out;
  for (int a = -N; a <= N; a += 2)
    for (int b = -N; b <= N; b += 2) {
      const int c = d - a - b;
      if (std::abs(c) <= N) out.push_back({{a, b, c}});
    }
  return out;
}

PairIntegrator::PairIntegrator(int jobs) : jobs_(resolve_jobs(jobs)) {}
PairIntegrator::~PairIntegrator() = default;

const PairIntegrator::Tables& PairIntegrator::tables_for(int max_order) {
  const int b = bucket_of(max_order);
  std::lock_guard<std::mutex> lock(tables_mutex_);
  auto& slot = tables_[b];
  if (!slot) slot = std::make_unique<Tables>(b);
  return *slot;
}

RadialValue PairIntegrator::compute(const CanonicalKey& key) {
  if (key[5] > kMaxOrder) throw DomainError("pair_integral: index magnitude exceeds 256");
  const Tables& t = tables_for(key[5]);
  const std::size_t stride = t.bucket + 1;
  double body = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < t.weights.size(); ++i) {
    const double* j = &t.bessel[i * stride];
    const double v = t.weights[i] * j[key[0]] * j[key[1]] * j[key[2]] * j[key[3]] * j[key[4]] * j[key[5]];
    body += v;
    scale += std::abs(v);
  }
  const double tail = t.tail_integral(key, kHankelTerms);
  const double tail_check = t.tail_integral(key, kHankelCheckTerms);
  const double err = std::abs(tail - tail_check) + 1e-15 * scale;
  if (!std::isfinite(body + tail)) throw PrecisionError("pair_integral: non-finite value", body, INFINITY);
  return {body + tail, err};
}

RadialValue PairIntegrator::radial(const std::array<int, 6>& orders) {
  const auto key = canonical_key(orders);
  const int sign = canonical_sign(orders);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return {sign * it->second.value, it->second.est_error};
  }
  const RadialValue v = compute(key);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    cache_.emplace(key, v);
  }
  return {sign * v.value, v.est_error};
}

void PairIntegrator::prefetch(std::vector<CanonicalKey> keys) {
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  {
    std::lock_guard<std::mutex> lock(mutex_);
    std::erase_if(keys, [&](const CanonicalKey& k) { return cache_.count(k) > 0; });
  }
  if (keys.empty()) return;
  std::set<int> buckets;
  for (const auto& k : keys) {
    if (k[5] > kMaxOrder) throw DomainError("pair_integral: index magnitude exceeds 256");
    buckets.insert(bucket_of(k[5]));
  }
  for (int b : buckets) tables_for(b);
  std::vector<RadialValue> values(keys.size());
  parallel_for(keys.size(), jobs_, [&](std::size_t i) { values[i] = compute(keys[i]); });
  std::lock_guard<std::mutex> lock(mutex_);
  for (std::size_t i = 0; i < keys.size(); ++i) cache_.emplace(keys[i], values[i]);
}

PairIntegral PairIntegrator::pair_integral(const Triple& k, const Triple& l) {
  PairIntegral out{k, l, 0.0, 0.0};
  if (sum(k) != sum(l)) return out;
  const auto r = radial(join(k, l));
  // J_{-n} = (-1)^n J_n turns conj(e_l) into the orders of l.
  out.value = (sum(l) % 2 ? -1.0 : 1.0) * r.value;
  out.est_error = r.est_error;
  return out;
}

std::size_t PairIntegrator::cache_size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.size();
}

void PairIntegrator::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write cache file " + path.string());
  out.precision(17);
  std::lock_guard<std::mutex> lock(mutex_);
  for (const auto& [k, v] : cache_) {
    for (int n : k) out << n << ' ';
    out << v.value << ' ' << v.est_error << '\n';
  }
  if (!out) throw std::runtime_error("error writing cache file " + path.string());
}

std::size_t PairIntegrator::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read cache file " + path.string());
  std::size_t count = 0;
  std::string line;
  std::lock_guard<std::mutex> lock(mutex_);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    CanonicalKey k;
    RadialValue v;
    for (int& n : k) ss >> n;
    ss >> v.value >> v.est_error;
    if (!ss || !std::is_sorted(k.begin(), k.end()) || k[0] < 0)
      throw std::runtime_error("malformed cache line: " + line);
    cache_[k] = v;
    ++count;
  }
  return count;
}

// ---- matrix ----

namespace {

template <class F>
void for_each_c_term(const Triple& k, const Triple& l, F&& f) {
  f(2.0, k, l);
  for (const auto& u : kShifts) {
    f(1.0, add(k, u), l);
    f(1.0, sub(k, u), l);
  }
}

template <class F>
void for_each_d_term(const Triple& diff, F&& f) {
  const Triple zero{0, 0, 0};
  f(2.0, diff, zero);
  for (const auto& u : kShifts) {
    f(1.0, add(diff, u), zero);
    f(1.0, sub(diff, u), zero);
  }
}

void check_modes(const ModeIndex& k, const ModeIndex& l) {
  for (int i = 0; i < 3; ++i)
    if (k.k[i] % 2 || l.k[i] % 2) throw DomainError("qform_entry: modes must have even components");
  if (k.degree() != l.degree()) throw DomainError("qform_entry: modes must have equal degree");
}

}  // namespace

double multiplier_entry(PairIntegrator& integrator, const Triple& diff) {
  double acc = 0.0;
  for_each_d_term(diff, [&](double c, const Triple& a, const Triple& b) {
    acc += c * integrator.pair_integral(a, b).value;
  });
  return acc;
}

double qform_entry(PairIntegrator& integrator, const ModeIndex& k, const ModeIndex& l) {
  check_modes(k, l);
  double c = 0.0;
  for_each_c_term(k.k, l.k, [&](double w, const Triple& a, const Triple& b) {
    c += w * integrator.pair_integral(a, b).value;
  });
  return multiplier_entry(integrator, sub(k.k, l.k)) - c;
}

double QFormMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : entries) s += v * v;
  return std::sqrt(s);
}

int QFormMatrix::constant_mode() const {
  for (std::size_t i = 0; i < modes.size(); ++i)
    if (modes[i].k == Triple{0, 0, 0}) return static_cast<int>(i);
  return -1;
}

QFormMatrix assemble(PairIntegrator& integrator, int N, int d) {
  if (N > 64) throw DomainError("assemble: N must not exceed 64");
  if (std::abs(d) > 3 * N) throw DomainError("assemble: |d| must not exceed 3N");
  QFormMatrix m;
  m.N = N;
  m.d = d;
  m.modes = enumerate_modes(N, d);
  const std::size_t n = m.modes.size();

  std::set<CanonicalKey> keys;
  auto collect = [&](double, const Triple& a, const Triple& b) { keys.insert(canonical_key(join(a, b))); };
  std::set<Triple> diffs;
  for (const auto& a : m.modes)
    for (const auto& b : m.modes) {
      for_each_c_term(a.k, b.k, collect);
      diffs.insert(sub(a.k, b.k));
    }
  for (const auto& diff : diffs) for_each_d_term(diff, collect);
  integrator.prefetch({keys.begin(), keys.end()});

  std::map<Triple, double> multiplier;
  for (const auto& diff : diffs) multiplier[diff] = multiplier_entry(integrator, diff);

  m.entries.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double c = 0.0;
      for_each_c_term(m.modes[i].k, m.modes[j].k, [&](double w, const Triple& a, const Triple& b) {
        c += w * integrator.pair_integral(a, b).value;
      });
      m.entries[i * n + j] = multiplier[sub(m.modes[i].k, m.modes[j].k)] - c;
    }

  const double fro = m.frobenius_norm();
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double& x = m.entries[i * n + j];
      double& y = m.entries[j * n + i];
      asym = std::max(asym, std::abs(x - y));
      x = y = 0.5 * (x + y);
    }
  m.max_asymmetry = fro > 0.0 ? asym / fro : asym;
  return m;
}

std::vector<double> eigenvalues(const QFormMatrix& m) {
  return jacobi_eigenvalues(m.entries, m.dim());
}

std::vector<double> smallest_eigenvalues(const QFormMatrix& m, std::size_t count) {
  if (count > m.dim()) throw DomainError("smallest_eigenvalues: count exceeds dimension");
  auto ev = eigenvalues(m);
  ev.resize(count);
  return ev;
}

double lambda_min_nonconstant(const QFormMatrix& m) {
  const int c = m.constant_mode();
  if (c < 0) return eigenvalues(m).front();
  const std::size_t n = m.dim();
  if (n == 1) throw DomainError("lambda_min_nonconstant: only the constant mode is present");
  std::vector<double> sub;
  sub.reserve((n - 1) * (n - 1));
  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<int>(i) == c) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (static_cast<int>(j) != c) sub.push_back(m.at(i, j));
  }
  return jacobi_eigenvalues(std::move(sub), n - 1).front();
}

double constant_mode_residual(const QFormMatrix& m) {
  const int c = m.constant_mode();
  if (c < 0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) s += m.at(i, c) * m.at(i, c);
  const double fro = m.frobenius_norm();
  return fro > 0.0 ? std::sqrt(s) / fro : std::sqrt(s);
}

ScalingStudy scaling_study(PairIntegrator& integrator, const std::vector<int>& Ns) {
  ScalingStudy study;
  std::vector<double> lx, ly;
  for (int N : Ns) {
    if (N < 2 || N % 2) throw DomainError("scaling_study: N values must be even and >= 2");
    const auto m = assemble(integrator, N, 0);
    ScalingRow row;
    row.N = N;
    row.dim = m.dim();
    row.frobenius = m.frobenius_norm();
    row.min_eigenvalue_ratio = eigenvalues(m).front() / row.frobenius;
    row.lambda_min = lambda_min_nonconstant(m);
    row.constant_residual = constant_mode_residual(m);
    row.model_ratio = row.lambda_min / (std::log(double(N)) / (double(N) * N));
    if (!study.rows.empty() && row.lambda_min > study.rows.back().lambda_min * (1.0 + 1e-9))
      study.monotone = false;
    study.rows.push_back(row);
    if (row.lambda_min > 0.0) {
      lx.push_back(std::log(double(N)));
      ly.push_back(std::log(row.lambda_min));
    }
  }
  std::tie(study.fitted_exponent, study.fitted_intercept) = fit_line(lx, ly);
  double mean = 0.0;
  for (const auto& r : study.rows) mean += r.model_ratio;
  if (!study.rows.empty()) mean /= static_cast<double>(study.rows.size());
  study.model_constant = mean;
  for (const auto& r : study.rows)
    study.model_spread = std::max(study.model_spread, std::abs(r.model_ratio / mean - 1.0));
  return study;
}

ConcentrationReport concentration_report(PairIntegrator& integrator, int N) {
  if (N > 32) throw DomainError("concentration_report: N must not exceed 32");
  const auto m = assemble(integrator, N, 0);
  ConcentrationReport rep;
  rep.N = N;
  rep.dim = m.dim();
  rep.frobenius = m.frobenius_norm();
  std::map<std::pair<int, int>, double> bins;
  double near = 0, band = 0, uni = 0, far2 = 0, far_abs = 0;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) {
      const double b = m.at(i, j);
      const double dist = norm(sub(m.modes[i].k, m.modes[j].k));
      const double ni = norm(m.modes[i].k), nj = norm(m.modes[j].k);
      if (dist > 8.0) {
        far2 += b * b;
        far_abs += std::abs(b);
      }
      if (i == j) continue;
      const double w = b * b;
      rep.offdiag_mass += w;
      const bool in_near = dist <= 4.0;
      const bool in_band = std::abs(ni - nj) <= 4.0 * std::sqrt(ni);
      if (in_near) near += w;
      if (in_band) band += w;
      if (in_near || in_band) uni += w;
      bins[{int(dist / 2.0), int(std::abs(ni * ni - nj * nj) / 16.0)}] += w;
    }
  if (rep.offdiag_mass > 0.0) {
    rep.near_fraction = near / rep.offdiag_mass;
    rep.band_fraction = band / rep.offdiag_mass;
    rep.union_fraction = uni / rep.offdiag_mass;
  }
  if (rep.frobenius > 0.0) {
    rep.far_fraction = std::sqrt(far2) / rep.frobenius;
    rep.far_abs_ratio = far_abs / rep.frobenius;
  }
  for (const auto& [key, mass] : bins) rep.bins.push_back({key.first, key.second, mass});

  // Envelope of |D(j)| over shells of width 2 in |j|, for 8 < |j| <= 2N.
  std::map<int, double> envelope;
  for (const auto& a : m.modes)
    for (const auto& b : m.modes) {
      const Triple diff = sub(a.k, b.k);
      const double r = norm(diff);
      if (r <= 8.0) continue;
      double& e = envelope[int(r / 2.0)];
      e = std::max(e, std::abs(multiplier_entry(integrator, diff)));
    }
  std::vector<double> lx, ly;
  for (const auto& [shell, e] : envelope)
    if (e > 0.0) {
      lx.push_back(std::log(2.0 * shell + 1.0));
      ly.push_back(std::log(e));
    }
  rep.multiplier_exponent = fit_line(lx, ly).first;
  return rep;
}

}  // namespace circext::spectrum
