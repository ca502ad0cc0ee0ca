#include "circext/certifier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "circext/errors.hpp"
#include "circext/geometry.hpp"
#include "circext/kernel.hpp"
#include "circext/parallel.hpp"
#include "circext/quadrature.hpp"

namespace circext::certify {

namespace {

using geometry::AngleTriple;

constexpr double kPi = std::numbers::pi;
constexpr double kLog2 = std::numbers::ln2;
constexpr double kSqrt3 = std::numbers::sqrt3;
constexpr double kTolerance = 1e-12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Eval {
  std::vector<double> margin;
  std::vector<double> quantity;
};

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

// Evaluates `eval` on every point of the tensor grid (last axis fastest) and
// reduces in index order. A NaN margin marks a skipped point.
template <class F>
CertReport run_grid(const std::string& id, const GridSpec& grid,
                    const std::vector<std::string>& names, const Options& opt, F&& eval) {
  const auto start = Clock::now();
  grid.validate();
  std::vector<std::vector<double>> axis_values;
  for (const auto& a : grid.axes) axis_values.push_back(a.values());
  const std::size_t n = grid.size();
  const std::size_t dims = grid.axes.size();
  const std::size_t nsub = names.size();

  auto point_of = [&](std::size_t idx) {
    std::vector<double> p(dims);
    for (std::size_t d = dims; d-- > 0;) {
      const std::size_t len = axis_values[d].size();
      p[d] = axis_values[d][idx % len];
      idx /= len;
    }
    return p;
  };

  std::vector<Eval> results(n);
  parallel_for(n, opt.jobs, [&](std::size_t i) {
    results[i] = eval(point_of(i));
    if (results[i].margin.size() != nsub || results[i].quantity.size() != nsub)
      throw ConsistencyError("certifier '" + id + "': evaluation arity mismatch");
  });

  CertReport rep;
  rep.lemma_id = id;
  rep.grid = grid;
  rep.tolerance = kTolerance;
  rep.bound_scale = opt.bound_scale;
  rep.sub_checks.resize(nsub);
  for (std::size_t k = 0; k < nsub; ++k) {
    rep.sub_checks[k].name = names[k];
    rep.sub_checks[k].worst_margin = std::numeric_limits<double>::infinity();
    rep.sub_checks[k].quantity_min = std::numeric_limits<double>::infinity();
    rep.sub_checks[k].quantity_max = -std::numeric_limits<double>::infinity();
  }
  std::vector<double> overall(n, kNaN);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = results[i];
    bool skipped = false;
    for (double m : r.margin) skipped |= std::isnan(m);
    if (skipped) {
      ++rep.points_skipped;
      continue;
    }
    ++rep.points_evaluated;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < nsub; ++k) {
      auto& sc = rep.sub_checks[k];
      worst = std::min(worst, r.margin[k]);
      sc.quantity_min = std::min(sc.quantity_min, r.quantity[k]);
      sc.quantity_max = std::max(sc.quantity_max, r.quantity[k]);
      if (r.margin[k] < sc.worst_margin) {
        sc.worst_margin = r.margin[k];
        sc.worst_point = point_of(i);
        sc.quantity_at_worst = r.quantity[k];
      }
    }
    overall[i] = worst;
  }

  // Neighbour variation of the overall margin along each axis.
  std::size_t stride = 1;
  for (std::size_t d = dims; d-- > 0;) {
    const std::size_t len = axis_values[d].size();
    for (std::size_t i = 0; i < n; ++i) {
      if ((i / stride) % len + 1 >= len) continue;
      const double a = overall[i], b = overall[i + stride];
      if (!std::isnan(a) && !std::isnan(b))
        rep.max_step_variation = std::max(rep.max_step_variation, std::abs(a - b));
    }
    stride *= len;
  }

  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (auto& sc : rep.sub_checks) {
    sc.passed = sc.worst_margin >= -kTolerance;
    if (sc.worst_margin < rep.worst_margin) {
      rep.worst_margin = sc.worst_margin;
      rep.worst_point = sc.worst_point;
    }
  }
  const bool inconclusive =
      rep.points_evaluated == 0 || rep.points_skipped * 1000 > n;
  rep.passed = !inconclusive && rep.worst_margin >= -kTolerance;
  rep.status = inconclusive ? "inconclusive" : (rep.passed ? "passed" : "failed");
  rep.runtime_ms = elapsed_ms(start);
  return rep;
}

GridSpec s_alpha_grid(int ns, int nalpha) {
  return {{uniform_axis("s", 0.05 / ns, 0.05, ns), uniform_axis("alpha", 0.0, 2 * kPi, nalpha, false)}};
}

double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(std::abs(x)); }

quad::Options tight() {
  quad::Options o;
  o.abs_tol = 0.0;
  o.rel_tol = 1e-13;
  o.max_intervals = 20000;
  return o;
}

double integrate_checked(const auto& f, double lo, double hi) {
  const auto r = quad::integrate(f, lo, hi, tight());
  if (!r.converged) return kNaN;
  return r.value;
}

// int_0^1 du / (sqrt u sqrt(u + delta)) with u = t^2.
double aux1_integral(double delta) {
  return integrate_checked([delta](double t) { return 2.0 / std::sqrt(t * t + delta); }, 0.0, 1.0);
}

// int_0^1 dx / (sqrt(1-x^2) sqrt(a+1-x) sqrt(b+1+x)) with x = 1 - t^2.
double aux5_integral(double a, double b) {
  return integrate_checked(
      [a, b](double t) {
        const double t2 = t * t;
        return 2.0 / (std::sqrt(2.0 - t2) * std::sqrt(a + t2) * std::sqrt(b + 2.0 - t2));
      },
      0.0, 1.0);
}

// int_0^1 dx / ((1+x) sqrt(1-x) sqrt(a+1-x)) with x = 1 - t^2.
double aux6_integral(double a) {
  return integrate_checked(
      [a](double t) {
        const double t2 = t * t;
        return 2.0 / ((2.0 - t2) * std::sqrt(a + t2));
      },
      0.0, 1.0);
}

CertReport merge(const std::string& id, const GridSpec& grid, std::vector<CertReport> parts) {
  CertReport rep;
  rep.lemma_id = id;
  rep.grid = grid;
  rep.tolerance = parts.front().tolerance;
  rep.bound_scale = parts.front().bound_scale;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  bool inconclusive = false;
  for (auto& p : parts) {
    rep.runtime_ms += p.runtime_ms;
    rep.points_evaluated += p.points_evaluated;
    rep.points_skipped += p.points_skipped;
    rep.max_step_variation = std::max(rep.max_step_variation, p.max_step_variation);
    inconclusive |= p.status == "inconclusive";
    if (p.worst_margin < rep.worst_margin) {
      rep.worst_margin = p.worst_margin;
      rep.worst_point = p.worst_point;
    }
    for (auto& sc : p.sub_checks) rep.sub_checks.push_back(std::move(sc));
  }
  rep.passed = !inconclusive && rep.worst_margin >= -rep.tolerance;
  rep.status = inconclusive ? "inconclusive" : (rep.passed ? "passed" : "failed");
  return rep;
}

const SubCheck& sub(const CertReport& r, std::size_t k) { return r.sub_checks.at(k); }

}  // namespace

double CertReport::extra(const std::string& key) const {
  for (const auto& [k, v] : extras)
    if (k == key) return v;
  throw DomainError("report '" + lemma_id + "' has no extra '" + key + "'");
}

GridSpec default_rho_asymptotics_grid() {
  return {{log_axis("offset", 1e-6, 0.1, 5000), uniform_axis("side", -1.0, 1.0, 2)}};
}

GridSpec default_aux_integrals_grid() {
  return {{log_axis("delta", 1e-6, 10.0, 200), log_axis("a", 1e-4, 0.99, 40),
           log_axis("b", 1e-4, 0.99, 40)}};
}

GridSpec default_psi_grid() { return s_alpha_grid(200, 200); }
GridSpec default_expansion_grid() { return s_alpha_grid(100, 400); }
GridSpec default_trig_log_grid() { return {{uniform_axis("alpha", 0.0, 2 * kPi, 100000, false)}}; }
GridSpec default_multiplier_grid() { return s_alpha_grid(100, 400); }
GridSpec default_cauchy_schwarz_grid() { return s_alpha_grid(100, 400); }

GridSpec default_step5_grid(double eps_prime) {
  return {{uniform_axis("theta1", -eps_prime, eps_prime, 25),
           uniform_axis("theta2", -eps_prime, eps_prime, 25),
           uniform_axis("theta3", -eps_prime, eps_prime, 25)}};
}

double multiplier(double s, double alpha) {
  const auto theta = geometry::embed({s, alpha});
  const auto c = geometry::centers();
  double sum = 0.0;
  for (int j = 1; j < 4; ++j) sum += kernel::weighted_rho(geometry::a_minus_one(theta + c[j].c));
  return sum / (2.0 * kSqrt3);
}

double expansion_main_terms(double s, double alpha) {
  const double w = geometry::weight_factor(alpha);
  return -12.0 * s * s * w * std::log(s) - 6.0 * s * s * xlogx(w) + 18.0 * kLog2 * s * s * w;
}

double step5_symmetrised(double t1, double t2, double t3) {
  double sum = 0.0;
  for (int g = 0; g < 8; ++g) {
    const AngleTriple t{{t1 + ((g & 1) ? kPi : 0.0), t2 + ((g & 2) ? kPi : 0.0),
                         t3 + ((g & 4) ? kPi : 0.0)}};
    sum += kernel::weighted_rho(geometry::a_minus_one(t));
  }
  return sum / 8.0;
}

double step5_average() {
  static const double value = [] {
    quad::Options inner;
    inner.abs_tol = 1e-12;
    inner.rel_tol = 1e-11;
    quad::Options outer = inner;
    outer.abs_tol = 1e-10;
    outer.rel_tol = 1e-10;
    auto row = [&](double x) {
      // Breakpoints where a = 1: y = pi and y = x + pi (mod 2pi).
      std::vector<double> pts{0.0, kPi, std::fmod(x + kPi, 2 * kPi), 2 * kPi};
      std::sort(pts.begin(), pts.end());
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      const auto r = quad::integrate_pieces(
          [x](double y) { return kernel::weighted_rho(geometry::a_minus_one({{0.0, x, y}})); },
          pts, inner);
      return r.value;
    };
    std::vector<double> pts{0.0, kPi, 2 * kPi};
    const auto r = quad::integrate_pieces(row, pts, outer);
    if (!r.converged) throw PrecisionError("step5_average: quadrature did not converge", r.value, r.abs_error);
    return r.value / (4 * kPi * kPi);
  }();
  return value;
}

CertReport certify_rho_asymptotics(const GridSpec& grid, const Options& opt, double coefficient) {
  auto rep = run_grid("rho_asymptotics", grid, {"asymptotic_band"}, opt,
                      [&](const std::vector<double>& p) {
                        const double d = p[0];
                        const double r = p[1] < 0 ? 1.0 - d : 1.0 + d;
                        const double err = std::abs(kernel::rho_elliptic(r).value -
                                                    (-6.0 * std::log(d) + 12.0 * kLog2));
                        const double bound = -coefficient * d * std::log(d) + 23.0 * d;
                        return Eval{{bound * opt.bound_scale - err}, {err / bound}};
                      });
  rep.extras = {{"max_error_over_bound", sub(rep, 0).quantity_max}};
  return rep;
}

CertReport certify_aux_integrals(const GridSpec& grid, const Options& opt) {
  const double sc = opt.bound_scale;
  GridSpec g1{{grid.axis("delta")}};
  GridSpec g5{{grid.axis("a"), grid.axis("b")}};
  GridSpec g6{{grid.axis("a")}};
  auto r1 = run_grid("aux1", g1, {"aux1_lower", "aux1_upper", "aux1_closed_form"}, opt,
                     [&](const std::vector<double>& p) {
                       const double d = p[0];
                       const double val = aux1_integral(d);
                       const double closed = -std::log(d) + 2.0 * std::log1p(std::sqrt(1.0 + d));
                       const double diff = val - std::log(4.0 / d);
                       const double mismatch = std::abs(val - closed);
                       return Eval{{diff, 0.5 * d * sc - diff, 1e-10 * std::max(1.0, closed) - mismatch},
                                   {diff, diff, mismatch}};
                     });
  auto r5 = run_grid("aux5", g5, {"aux5"}, opt, [&](const std::vector<double>& p) {
    const double a = p[0], b = p[1];
    const double diff = std::abs(aux5_integral(a, b) - aux5_integral(a, 0.0));
    const double bound = 0.5 * b * (std::log(4.0 / a) + 0.5 * a);
    return Eval{{bound * sc - diff}, {diff / bound}};
  });
  auto r6 = run_grid("aux6", g6, {"aux6"}, opt, [&](const std::vector<double>& p) {
    const double a = p[0];
    const double diff = std::abs(aux6_integral(a) - 0.5 * std::log(8.0 / a));
    const double bound = 0.5 * a * std::log1p(1.0 / a);
    return Eval{{bound * sc - diff}, {diff / bound}};
  });
  auto rep = merge("aux_integrals", grid, {std::move(r1), std::move(r5), std::move(r6)});
  rep.extras = {{"aux5_max_ratio", rep.sub_checks[3].quantity_max},
                {"aux6_max_ratio", rep.sub_checks[4].quantity_max}};
  return rep;
}

CertReport certify_psi_bounds(const GridSpec& grid, const Options& opt) {
  const double sc = opt.bound_scale;
  auto rep = run_grid(
      "psi_bounds", grid, {"psi", "psi_prime", "log_derivative"}, opt,
      [&](const std::vector<double>& p) {
        const double s = p[0], al = p[1];
        const auto ps = geometry::psi(s, al);
        const auto pp = geometry::psi_prime(s, al);
        const double qpsi = std::abs(ps.value) + ps.truncation_bound;
        const double qprime = std::abs(pp.value) + pp.truncation_bound;
        const double bpsi = 7.0 / 24 * s * s + 17.0 / 720 * std::pow(s, 4) +
                            std::pow(s, 6) * std::exp(std::sqrt(2.0) * s);
        const double bprime = 14.0 / 24 * s + 17.0 / 180 * std::pow(s, 3) +
                              2 * std::pow(s, 5) * std::exp(std::sqrt(2.0) * s);
        const double ld = std::abs(s * pp.value / (1.0 + ps.value));
        return Eval{{bpsi * sc - qpsi, bprime * sc - qprime, sc / 198.0 - ld}, {qpsi, qprime, ld}};
      });
  rep.extras = {{"max_abs_log_derivative", sub(rep, 2).quantity_max}};
  return rep;
}

CertReport certify_expansion_error(const GridSpec& grid, const Options& opt) {
  auto rep = run_grid("expansion_error", grid, {"expansion_remainder"}, opt,
                      [&](const std::vector<double>& p) {
                        const double s = p[0], al = p[1];
                        const auto theta = geometry::embed({s, al});
                        const double full = kernel::weighted_rho(
                            geometry::a_minus_one(geometry::centers()[3].c + theta));
                        const double e = std::abs(full - expansion_main_terms(s, al));
                        const double s4 = std::pow(s, 4);
                        const double bound = -180.0 * s4 * std::log(s) + 71.0 * s4;
                        return Eval{{bound * opt.bound_scale - e}, {e / bound}};
                      });
  rep.extras = {{"max_error_over_bound", sub(rep, 0).quantity_max}};
  return rep;
}

CertReport certify_trig_log(const GridSpec& grid, const Options& opt) {
  const double cap = 3.0 * std::log(3.0);
  auto rep = run_grid("trig_log", grid, {"trig_log_sum", "identity_sum", "identity_sum_squares"}, opt,
                      [&](const std::vector<double>& p) {
                        double sum = 0.0, s1 = 0.0, s2 = 0.0;
                        for (int j = 1; j <= 3; ++j) {
                          const double w = geometry::weight_factor(p[0] + 2 * kPi * j / 3);
                          sum += xlogx(w);
                          s1 += w / 3.0;
                          s2 += (w / 3.0) * (w / 3.0);
                        }
                        const double e1 = std::abs(s1 - 1.0), e2 = std::abs(s2 - 1.0);
                        return Eval{{cap * opt.bound_scale - sum, 1e-12 - e1, 1e-12 - e2}, {sum, e1, e2}};
                      });
  rep.extras = {{"max_sum", sub(rep, 0).quantity_max}, {"bound", cap}};
  return rep;
}

CertReport certify_multiplier_lower(const GridSpec& grid, const Options& opt, double threshold) {
  const double need = threshold / opt.bound_scale;
  auto rep = run_grid("multiplier_lower", grid, {"m_over_s2"}, opt,
                      [&](const std::vector<double>& p) {
                        const double q = multiplier(p[0], p[1]) / (p[0] * p[0]);
                        return Eval{{q - need}, {q}};
                      });
  rep.extras = {{"min_m_over_s2", sub(rep, 0).quantity_min}, {"threshold", threshold}};
  return rep;
}

CertReport certify_cauchy_schwarz_factor(const GridSpec& grid, const Options& opt) {
  const double sc = opt.bound_scale;
  auto rep = run_grid("cauchy_schwarz_factor", grid, {"factor_101_200", "factor_198_395"}, opt,
                      [&](const std::vector<double>& p) {
                        const double s = p[0], al = p[1];
                        const double ps = geometry::psi(s, al).value;
                        const double pp = geometry::psi_prime(s, al).value;
                        const double f = 1.0 / (2.0 + s * pp / (1.0 + ps));
                        return Eval{{101.0 / 200 * sc - f, 198.0 / 395 * sc - f}, {f, f}};
                      });
  rep.extras = {{"max_factor", sub(rep, 0).quantity_max}};
  return rep;
}

CertReport certify_step5(double eps_prime, const GridSpec& grid, const Options& opt) {
  if (!(eps_prime > 0.0) || eps_prime > 0.07)
    throw DomainError("certify_step5: eps_prime must lie in (0, 0.07]");
  const double rhs = step5_average();
  auto rep = run_grid("step5", grid, {"max_vs_average"}, opt, [&](const std::vector<double>& p) {
    const double lhs = step5_symmetrised(p[0], p[1], p[2]);
    return Eval{{rhs * opt.bound_scale - lhs}, {lhs}};
  });
  rep.extras = {{"eps_prime", eps_prime}, {"lhs_max", sub(rep, 0).quantity_max}, {"rhs_average", rhs}};
  return rep;
}

std::vector<CertReport> certify_all(double eps_prime, const Options& opt) {
  std::vector<CertReport> out;
  out.push_back(certify_rho_asymptotics(default_rho_asymptotics_grid(), opt));
  out.push_back(certify_aux_integrals(default_aux_integrals_grid(), opt));
  out.push_back(certify_psi_bounds(default_psi_grid(), opt));
  out.push_back(certify_expansion_error(default_expansion_grid(), opt));
  out.push_back(certify_trig_log(default_trig_log_grid(), opt));
  out.push_back(certify_multiplier_lower(default_multiplier_grid(), opt));
  out.push_back(certify_cauchy_schwarz_factor(default_cauchy_schwarz_grid(), opt));
  out.push_back(certify_step5(eps_prime, default_step5_grid(eps_prime), opt));
  return out;
}

}  // namespace circext::certify
