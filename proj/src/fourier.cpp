#include "stefan/fourier.hpp"

#include <cmath>
#include <stdexcept>

namespace stefan {

namespace {

std::vector<Complex> dft(std::span<const Complex> in, int sign) {
    const std::size_t n = in.size();
    if (n == 0) throw std::invalid_argument("tangential transform: empty field");
    std::vector<Complex> out(n, Complex{});
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t m = 0; m < n; ++m) {
        Complex acc{};
        for (std::size_t j = 0; j < n; ++j) {
            double phase = sign * 2.0 * kPi * static_cast<double>(m * j % n) / n;
            acc += in[j] * Complex(std::cos(phase), std::sin(phase));
        }
        out[m] = scale * acc;
    }
    return out;
}

}  // namespace

std::vector<Complex> forward_tangential(std::span<const Complex> field) {
    return dft(field, -1);
}

std::vector<Complex> forward_tangential(std::span<const double> field) {
    std::vector<Complex> tmp(field.begin(), field.end());
    return dft(tmp, -1);
}

std::vector<Complex> inverse_tangential(std::span<const Complex> modes) {
    return dft(modes, +1);
}

std::vector<double> inverse_tangential_real(std::span<const Complex> modes) {
    auto z = dft(modes, +1);
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
    return out;
}

}  // namespace stefan
