#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

namespace circext::spectrum {

using Triple = std::array<int, 3>;

/// An even Fourier multi-index (k1, k2, k3); degree is k1 + k2 + k3.
struct ModeIndex {
  Triple k{0, 0, 0};
  int degree() const { return k[0] + k[1] + k[2]; }
  bool operator==(const ModeIndex&) const = default;
  auto operator<=>(const ModeIndex&) const = default;
};

/// All even triples with sum d and max |k_i| <= N, lexicographic.
std::vector<ModeIndex> enumerate_modes(int N, int d);

/// The delta-pairing of e_k(w1..w3) against conj(e_l(w4..w6)) over six unit
/// circle points summing to zero. Stored without the (2 pi)^5 constant:
///   value = (-1)^(l1+l2+l3) * int_0^inf prod J_{k_j}(R) prod J_{l_j}(R) R dR.
struct PairIntegral {
  Triple k{0, 0, 0};
  Triple l{0, 0, 0};
  double value = 0.0;
  double est_error = 0.0;
};

/// Factor between `PairIntegral::value` and the pairing with d(theta) measure.
inline constexpr double kPairNormalization =
    32.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi * std::numbers::pi *
    std::numbers::pi;

/// Sorted absolute values of six Bessel orders; the radial integral depends
/// only on this up to sign.
using CanonicalKey = std::array<int, 6>;

struct RadialValue {
  double value = 0.0;
  double est_error = 0.0;
};

/// Computes and caches radial six-Bessel integrals. Thread safe; values are a
/// pure function of the key, so concurrent inserts agree.
class PairIntegrator {
 public:
  explicit PairIntegrator(int jobs = 0);
  ~PairIntegrator();
  PairIntegrator(const PairIntegrator&) = delete;
  PairIntegrator& operator=(const PairIntegrator&) = delete;

  PairIntegral pair_integral(const Triple& k, const Triple& l);

  /// int_0^inf prod_j J_{n_j}(R) R dR for arbitrary integer orders.
  RadialValue radial(const std::array<int, 6>& orders);

  /// Computes every missing key in parallel.
  void prefetch(std::vector<CanonicalKey> keys);

  std::size_t cache_size() const;
  int jobs() const { return jobs_; }

  /// Plain text, one key per line: six orders, value, error.
  void save(const std::filesystem::path& path) const;
  /// Merges entries from `path`; returns the number read.
  std::size_t load(const std::filesystem::path& path);

 private:
  struct Tables;
  const Tables& tables_for(int max_order);
  RadialValue compute(const CanonicalKey& key);

  int jobs_;
  mutable std::mutex mutex_;
  std::map<CanonicalKey, RadialValue> cache_;
  std::mutex tables_mutex_;
  std::map<int, std::unique_ptr<Tables>> tables_;
};

CanonicalKey canonical_key(const std::array<int, 6>& orders);
/// +1 or -1: sign relating the radial integral of `orders` to its canonical key.
int canonical_sign(const std::array<int, 6>& orders);

/// Shift vectors u of the weight a - 1 = 2 + sum_u (e^{iu.theta} + e^{-iu.theta}).
inline constexpr std::array<Triple, 3> kShifts{{{1, -1, 0}, {0, 1, -1}, {-1, 0, 1}}};

/// B(k, l) = D(k, l) - C(k, l), D the multiplier part (a function of k - l).
double qform_entry(PairIntegrator& integrator, const ModeIndex& k, const ModeIndex& l);
double multiplier_entry(PairIntegrator& integrator, const Triple& diff);

struct QFormMatrix {
  int N = 0;
  int d = 0;
  std::vector<ModeIndex> modes;
  std::vector<double> entries;  ///< row-major, modes.size() squared
  double normalization = kPairNormalization;
  double max_asymmetry = 0.0;   ///< max |B(k,l) - B(l,k)| / ||M||_F before symmetrising

  std::size_t dim() const { return modes.size(); }
  double at(std::size_t i, std::size_t j) const { return entries[i * modes.size() + j]; }
  double frobenius_norm() const;
  /// Index of (0,0,0), or -1.
  int constant_mode() const;
};

/// Symmetric matrix of qform_entry over enumerate_modes(N, d); N <= 64.
QFormMatrix assemble(PairIntegrator& integrator, int N, int d);

/// All eigenvalues, ascending.
std::vector<double> eigenvalues(const QFormMatrix& m);
/// The `count` algebraically smallest eigenvalues.
std::vector<double> smallest_eigenvalues(const QFormMatrix& m, std::size_t count);
/// Smallest eigenvalue with the constant mode's row and column removed.
double lambda_min_nonconstant(const QFormMatrix& m);
/// ||M e_0|| / ||M||_F for the constant mode e_0 (0 if absent).
double constant_mode_residual(const QFormMatrix& m);

struct ScalingRow {
  int N = 0;
  std::size_t dim = 0;
  double frobenius = 0.0;
  double lambda_min = 0.0;
  double min_eigenvalue_ratio = 0.0;  ///< smallest eigenvalue of the full matrix / ||M||_F
  double constant_residual = 0.0;
  double model_ratio = 0.0;           ///< lambda_min / (N^-2 log N)
};

struct ScalingStudy {
  std::vector<ScalingRow> rows;
  double fitted_exponent = 0.0;  ///< slope of log lambda_min against log N
  double fitted_intercept = 0.0;
  double model_constant = 0.0;   ///< mean of lambda_min / (N^-2 log N)
  double model_spread = 0.0;     ///< max relative deviation from model_constant
  bool monotone = true;          ///< lambda_min non-increasing in N
};

/// d = 0 study over the given even N values (each <= 64).
ScalingStudy scaling_study(PairIntegrator& integrator, const std::vector<int>& Ns);

struct ConcentrationBin {
  int distance_bin = 0;  ///< floor(|k - l| / 2)
  int cone_bin = 0;      ///< floor(||k|^2 - |l|^2| / 16)
  double mass = 0.0;     ///< sum of B(k,l)^2
};

struct ConcentrationReport {
  int N = 0;
  std::size_t dim = 0;
  double frobenius = 0.0;
  double offdiag_mass = 0.0;      ///< sum over k != l of B^2
  double near_fraction = 0.0;     ///< share with |k - l| <= 4
  double band_fraction = 0.0;     ///< share with ||k| - |l|| <= 4 |k|^(1/2)
  double union_fraction = 0.0;
  double far_fraction = 0.0;      ///< sqrt(sum_{|k-l|>8} B^2) / ||M||_F
  double far_abs_ratio = 0.0;     ///< sum_{|k-l|>8} |B| / ||M||_F
  double multiplier_exponent = 0.0;  ///< envelope slope of |D(j)| for |j| > 8
  std::vector<ConcentrationBin> bins;
};

/// d = 0, N <= 32.
ConcentrationReport concentration_report(PairIntegrator& integrator, int N);

}  // namespace circext::spectrum
