#pragma once

#include <span>
#include <vector>

namespace stefan {

struct GridConfig {
    int N_x = 16;          // tangential nodes, even, >= 8
    double L_x = 6.283185307179586;
    double Y_max = 8.0;    // half-space truncation
    int N_y = 64;          // cells per side; N_y+1 nodes including y=0
    double grading_ratio = 64.0;  // total stretch h_last/h_first (>= 1)
    double T = 1.0;
    int N_t = 64;          // time cells; nodes dt,...,T (t=0 stored separately)
};

/// Discretization of (t, x, y): uniform periodic x, uniform t, and a shared
/// geometrically graded |y| grid for the two half-spaces, clustered at y = 0.
///
/// The total stretch is kept fixed under refinement, so doubling N_y refines
/// the image of a fixed smooth grading map.
class Grids {
public:
    explicit Grids(const GridConfig& cfg);

    const GridConfig& config() const { return cfg_; }

    std::span<const double> x() const { return x_; }
    /// Frequencies in DFT mode order; mode m corresponds to the integer
    /// wavenumber k = m for m < N_x/2 and k = m - N_x otherwise.
    std::span<const double> xi() const { return xi_; }
    int mode_k(int m) const { return m < cfg_.N_x / 2 ? m : m - cfg_.N_x; }

    std::span<const double> y() const { return y_; }            // N_y+1 nodes incl. 0
    std::span<const double> t_with0() const { return t0_; }     // N_t+1 nodes incl. 0
    std::span<const double> t_grid() const {                    // (0, T]
        return std::span<const double>(t0_).subspan(1);
    }

    int nx() const { return cfg_.N_x; }
    int ny() const { return cfg_.N_y; }            // cells; nodes = ny()+1
    int nt() const { return cfg_.N_t; }            // cells; stored rows = nt()+1
    double dt() const { return cfg_.T / cfg_.N_t; }

    std::span<const double> y_weights() const { return wy_; }   // trapezoid on y
    std::span<const double> t_weights() const { return wt_; }   // trapezoid on t_with0
    double x_weight() const { return cfg_.L_x / cfg_.N_x; }

private:
    GridConfig cfg_;
    std::vector<double> x_, xi_, y_, t0_, wy_, wt_;
};

}  // namespace stefan
