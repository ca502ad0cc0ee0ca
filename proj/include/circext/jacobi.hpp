#pragma once

#include <cstddef>
#include <vector>

namespace circext::spectrum {

/// Eigenvalues (ascending) of the symmetric n x n row-major matrix `a` by the
/// cyclic Jacobi method with threshold sweeps. Only the upper triangle is read.
std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n, int max_sweeps = 100);

}  // namespace circext::spectrum
