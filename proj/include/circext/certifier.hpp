#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "circext/grid.hpp"

namespace circext::certify {

/// One inequality checked over the grid. margin = bound - quantity (or
/// quantity - bound for lower bounds); positive means satisfied.
struct SubCheck {
  std::string name;
  double worst_margin = 0.0;
  std::vector<double> worst_point;
  double quantity_at_worst = 0.0;  ///< checked quantity at the worst point
  double quantity_min = 0.0;
  double quantity_max = 0.0;
  bool passed = false;
};

struct CertReport {
  std::string lemma_id;
  GridSpec grid;
  double worst_margin = 0.0;
  std::vector<double> worst_point;  ///< coordinates in grid axis order
  bool passed = false;
  std::string status;  ///< "passed", "failed" or "inconclusive"
  double tolerance = 0.0;
  double bound_scale = 1.0;
  std::int64_t runtime_ms = 0;
  std::size_t points_evaluated = 0;
  std::size_t points_skipped = 0;
  /// Largest change of the overall margin between neighbouring grid points.
  /// The grid resolves the check when this stays below worst_margin.
  double max_step_variation = 0.0;
  std::vector<SubCheck> sub_checks;
  std::vector<std::pair<std::string, double>> extras;

  double extra(const std::string& key) const;
};

struct Options {
  /// Multiplies every upper bound and divides every lower bound. Values
  /// below 1 tighten the checks (used for falsification runs).
  double bound_scale = 1.0;
  int jobs = 0;  ///< worker threads; 0 = hardware concurrency
};

// Default grids.
GridSpec default_rho_asymptotics_grid();
GridSpec default_aux_integrals_grid();
GridSpec default_psi_grid();
GridSpec default_expansion_grid();
GridSpec default_trig_log_grid();
GridSpec default_multiplier_grid();
GridSpec default_cauchy_schwarz_grid();
GridSpec default_step5_grid(double eps_prime);

/// |rho - (-6 log|1-r| + 12 log 2)| <= -22 d log d + 23 d, d = |r - 1|.
/// Axes: offset (log, in [1e-6, 0.1]), side (values -1 and 1 pick r = 1 -/+ d).
/// `coefficient` replaces the 22 (falsification hook).
CertReport certify_rho_asymptotics(const GridSpec& grid, const Options& opt = {},
                                   double coefficient = 22.0);

/// The three one-dimensional integral estimates. Axes: delta, a, b.
CertReport certify_aux_integrals(const GridSpec& grid, const Options& opt = {});

/// |psi|, |psi'| bounds and |s psi'/(1+psi)| <= 1/198. Axes: s, alpha.
CertReport certify_psi_bounds(const GridSpec& grid, const Options& opt = {});

/// |E| <= -180 s^4 log s + 71 s^4 for the expansion of (a-1) rho(sqrt a)
/// around c4. Axes: s, alpha.
CertReport certify_expansion_error(const GridSpec& grid, const Options& opt = {});

/// sum_j w_j log|w_j| <= 3 log 3 plus the identities on a_j = w_j / 3.
/// Axis: alpha.
CertReport certify_trig_log(const GridSpec& grid, const Options& opt = {});

/// m(theta) >= threshold * s^2. Axes: s, alpha.
CertReport certify_multiplier_lower(const GridSpec& grid, const Options& opt = {},
                                    double threshold = 30.0);

/// 1 / (2 + s psi'/(1+psi)) <= 101/200. Axes: s, alpha.
CertReport certify_cauchy_schwarz_factor(const GridSpec& grid, const Options& opt = {});

/// Pointwise symmetrised weight on [-eps', eps']^3 against its average over
/// the torus. Axes: theta1, theta2, theta3.
CertReport certify_step5(double eps_prime, const GridSpec& grid, const Options& opt = {});

/// Runs every certifier on its default grid (step 5 at eps_prime).
std::vector<CertReport> certify_all(double eps_prime, const Options& opt = {});

// Quantities shared with other modules and tests.

/// m(theta) = (1/(2 sqrt3)) sum_{j=2..4} (a(theta + c_j) - 1) rho(sqrt a(theta + c_j)).
double multiplier(double s, double alpha);

/// Main terms of the expansion of (a(c4 + theta) - 1) rho(sqrt a(c4 + theta)).
double expansion_main_terms(double s, double alpha);

/// (1/8) sum over sign patterns gamma of (a_gamma - 1) rho(sqrt a_gamma).
double step5_symmetrised(double t1, double t2, double t3);

/// (2pi)^-3 int (a - 1) rho(sqrt a) over the torus, by nested quadrature in
/// two angle differences. Computed once and cached.
double step5_average();

}  // namespace circext::certify
