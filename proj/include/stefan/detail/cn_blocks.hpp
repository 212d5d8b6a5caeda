#pragma once

#include <functional>
#include <span>
#include <vector>

#include "stefan/fields.hpp"
#include "stefan/grids.hpp"
#include "stefan/util.hpp"

namespace stefan::detail {

/// Interior rows of L = c (d_yy - xi^2) on the graded grid, plus the coupling
/// coefficients to the pinned boundary values u_0 and u_M.
struct Operator {
    std::vector<double> lo, di, up;  // rows i = 1..M-1
    double couple0 = 0.0;            // coefficient of u_0 in row 1
    double coupleM = 0.0;            // coefficient of u_M in row M-1
};

inline Operator build_operator(double c, double xi, std::span<const double> y) {
    const int M = static_cast<int>(y.size()) - 1;
    Operator op;
    op.lo.assign(M - 1, 0.0);
    op.di.assign(M - 1, 0.0);
    op.up.assign(M - 1, 0.0);
    for (int i = 1; i < M; ++i) {
        double a = y[i] - y[i - 1], b = y[i + 1] - y[i];
        double lo = 2.0 * c / (a * (a + b));
        double di = -2.0 * c / (a * b) - c * xi * xi;
        double up = 2.0 * c / (b * (a + b));
        op.lo[i - 1] = lo;
        op.di[i - 1] = di;
        op.up[i - 1] = up;
        if (i == 1) op.couple0 = lo;
        if (i == M - 1) op.coupleM = up;
    }
    op.lo[0] = 0.0;
    op.up[M - 2] = 0.0;
    return op;
}

/// (L u)_i for i = 1..M-1 from the full node array.
inline void apply_operator(const Operator& op, std::span<const Complex> u,
                           std::vector<Complex>& out) {
    const std::size_t n = op.di.size();
    out.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        std::size_t i = r + 1;
        Complex acc = op.di[r] * u[i];
        acc += (r == 0 ? op.couple0 * u[0] : op.lo[r] * u[i - 1]);
        acc += (r == n - 1 ? op.coupleM * u[i + 1] : op.up[r] * u[i + 1]);
        out[r] = acc;
    }
}

/// Thomas factorization of (I - (dt/2) L) on the interior rows.
struct CNFactor {
    std::vector<double> w, d, up;

    CNFactor(const Operator& op, double dt) {
        const std::size_t n = op.di.size();
        w.assign(n, 0.0);
        d.assign(n, 0.0);
        up.assign(n, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            d[r] = 1.0 - 0.5 * dt * op.di[r];
            up[r] = r + 1 < n ? -0.5 * dt * op.up[r] : 0.0;
        }
        for (std::size_t r = 1; r < n; ++r) {
            double lo = -0.5 * dt * op.lo[r];
            w[r] = lo / d[r - 1];
            d[r] -= w[r] * up[r - 1];
        }
    }

    void solve(std::vector<Complex>& rhs) const {
        const std::size_t n = d.size();
        for (std::size_t r = 1; r < n; ++r) rhs[r] -= w[r] * rhs[r - 1];
        rhs[n - 1] /= d[n - 1];
        for (std::size_t r = n - 1; r-- > 0;) rhs[r] = (rhs[r] - up[r] * rhs[r + 1]) / d[r];
    }
};

struct HeatModeResult {
    Array2D<Complex> u;              // (t_with0, y nodes)
    std::vector<Complex> dy_stencil;  // one-sided d/d|y| at node 0 per time row
};

/// CN integration of du/dt = c (d_yy - xi^2) u + f on one half-line with a
/// prescribed Dirichlet value at y = 0; the outer node keeps its initial value.
inline HeatModeResult heat_mode_solve(double c, double xi, const Grids& grids,
                                      std::span<const Complex> init,
                                      const std::function<Complex(double)>& dirichlet,
                                      const std::function<Complex(double, int)>& f) {
    const auto y = grids.y();
    const int M = grids.ny();
    const int nt = grids.nt();
    const double dt = grids.dt();
    const Operator op = build_operator(c, xi, y);
    const CNFactor fac(op, dt);
    const OneSidedD1 st = one_sided_d1(y[1] - y[0], y[2] - y[1]);

    HeatModeResult res;
    res.u = Array2D<Complex>(nt + 1, M + 1);
    res.dy_stencil.resize(nt + 1);

    std::vector<Complex> u(init.begin(), init.end());
    u[0] = dirichlet(0.0);
    auto record = [&](int row) {
        for (int k = 0; k <= M; ++k) res.u.at(row, k) = u[k];
        res.dy_stencil[row] = st.c0 * u[0] + st.c1 * u[1] + st.c2 * u[2];
    };
    record(0);

    std::vector<Complex> rhs;
    for (int n = 0; n < nt; ++n) {
        const double t0 = grids.t_with0()[n], t1 = grids.t_with0()[n + 1];
        apply_operator(op, u, rhs);
        for (int r = 0; r < M - 1; ++r) rhs[r] = u[r + 1] + 0.5 * dt * rhs[r];
        if (f) {
            for (int r = 0; r < M - 1; ++r)
                rhs[r] += 0.5 * dt * (f(t0, r + 1) + f(t1, r + 1));
        }
        const Complex b1 = dirichlet(t1);
        rhs[0] += 0.5 * dt * op.couple0 * b1;
        rhs[M - 2] += 0.5 * dt * op.coupleM * u[M];
        fac.solve(rhs);
        u[0] = b1;
        for (int r = 0; r < M - 1; ++r) u[r + 1] = rhs[r];
        record(n + 1);
    }
    return res;
}

}  // namespace stefan::detail
