#pragma once

#include <vector>

namespace circext::spectrum {

/// J_n(r) for integer |n| <= 256 and 0 <= r <= 1e6, by Miller's downward
/// recurrence normalised with J_0 + 2 sum J_2k = 1.
double bessel_j(int n, double r);

/// J_0(r), ..., J_nmax(r) from a single downward sweep.
std::vector<double> bessel_j_all(int nmax, double r);

}  // namespace circext::spectrum
