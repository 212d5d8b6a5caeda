#include "stefan/grids.hpp"

#include <cmath>
#include <stdexcept>

#include "stefan/util.hpp"

namespace stefan {

Grids::Grids(const GridConfig& cfg) : cfg_(cfg) {
    if (cfg.N_x < 8 || cfg.N_x % 2 != 0)
        throw std::invalid_argument("Grids: N_x must be even and >= 8");
    if (!(cfg.L_x > 0.0)) throw std::invalid_argument("Grids: L_x > 0");
    if (!(cfg.Y_max > 0.0)) throw std::invalid_argument("Grids: Y_max > 0");
    if (cfg.N_y < 4) throw std::invalid_argument("Grids: N_y >= 4");
    if (!(cfg.grading_ratio >= 1.0))
        throw std::invalid_argument("Grids: grading_ratio >= 1");
    if (cfg.N_t < 2) throw std::invalid_argument("Grids: N_t >= 2");
    if (!(cfg.T > 0.0)) throw std::invalid_argument("Grids: T > 0");

    x_.resize(cfg.N_x);
    xi_.resize(cfg.N_x);
    for (int j = 0; j < cfg.N_x; ++j) x_[j] = cfg.L_x * j / cfg.N_x;
    for (int m = 0; m < cfg.N_x; ++m) {
        int k = m < cfg.N_x / 2 ? m : m - cfg.N_x;
        xi_[m] = 2.0 * kPi * k / cfg.L_x;
    }

    // Geometric spacing with fixed total stretch: h_j = h0 * r^j,
    // r = grading_ratio^{1/(N_y-1)}, sum h_j = Y_max.
    y_.resize(cfg.N_y + 1);
    y_[0] = 0.0;
    double r = cfg.N_y > 1 ? std::pow(cfg.grading_ratio, 1.0 / (cfg.N_y - 1)) : 1.0;
    double geom_sum = r == 1.0 ? cfg.N_y : (std::pow(r, cfg.N_y) - 1.0) / (r - 1.0);
    double h0 = cfg.Y_max / geom_sum;
    double h = h0;
    for (int j = 1; j <= cfg.N_y; ++j) {
        y_[j] = y_[j - 1] + h;
        h *= r;
    }
    y_[cfg.N_y] = cfg.Y_max;

    t0_.resize(cfg.N_t + 1);
    for (int i = 0; i <= cfg.N_t; ++i) t0_[i] = cfg.T * i / cfg.N_t;
    t0_[cfg.N_t] = cfg.T;

    wy_ = trapezoid_weights(y_);
    wt_ = trapezoid_weights(t0_);
}

}  // namespace stefan
