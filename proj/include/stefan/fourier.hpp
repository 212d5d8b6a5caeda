#pragma once

#include <span>
#include <vector>

#include "stefan/util.hpp"

namespace stefan {

/// Unitary discrete Fourier transform on the periodic tangential grid.
/// Mode m carries frequency xi = 2*pi*k/L with k = m (m < N/2) or m - N.
std::vector<Complex> forward_tangential(std::span<const Complex> field);
std::vector<Complex> forward_tangential(std::span<const double> field);

std::vector<Complex> inverse_tangential(std::span<const Complex> modes);
/// Inverse transform of conjugate-symmetric modes; drops the O(eps) imaginary part.
std::vector<double> inverse_tangential_real(std::span<const Complex> modes);

}  // namespace stefan
