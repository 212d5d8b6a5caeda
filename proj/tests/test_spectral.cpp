#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "stefan/data.hpp"
#include "stefan/experiments.hpp"
#include "stefan/fd_oracle.hpp"
#include "stefan/spectral.hpp"

using namespace stefan;

namespace {

GridConfig solver_grid() {
    GridConfig g;
    g.N_x = 8;
    g.L_x = 2.0 * kPi;
    g.N_y = 96;
    g.N_t = 64;
    g.Y_max = 8.0;
    g.grading_ratio = 64.0;
    return g;
}

DataTuple single_mode_h(const Grids& grids) {
    DataTuple data;
    const std::size_t nt1 = grids.t_with0().size();
    data.g = RealField(nt1, grids.nx());
    data.h = RealField(nt1, grids.nx());
    data.rho0.assign(grids.nx(), 0.0);
    for (std::size_t i = 0; i < nt1; ++i) {
        double t = grids.t_with0()[i];
        for (int j = 0; j < grids.nx(); ++j)
            data.h.at(i, j) = t * std::exp(-t) * std::cos(grids.x()[j]);
    }
    data.v0_traces.value_plus.assign(grids.nx(), 0.0);
    data.v0_traces.value_minus.assign(grids.nx(), 0.0);
    data.v0_traces.dy_plus.assign(grids.nx(), 0.0);
    data.v0_traces.dy_minus.assign(grids.nx(), 0.0);
    return data;
}

}  // namespace

// ---------------------------------------------------------------------------
// extend_traces
// ---------------------------------------------------------------------------

TEST_CASE("extend_traces: eta1 = 0 gives a flat start") {
    for (double xi : {0.0, 1.0, 3.0}) {
        auto ext = extend_traces_mode(Complex(0.7, -0.2), Complex{}, xi);
        CHECK(std::abs(ext.value(0.0) - Complex(0.7, -0.2)) < 1e-15);
        CHECK(std::abs(ext.derivative(0.0)) < 1e-13);
    }
}

TEST_CASE("extend_traces: rho0 = 0 telescopes to the trace pair (0, eta1)") {
    for (double xi : {0.0, 2.0}) {
        auto ext = extend_traces_mode(Complex{}, Complex(1.3, 0.5), xi);
        CHECK(std::abs(ext.value(0.0)) == 0.0);
        CHECK(std::abs(ext.derivative(0.0) - Complex(1.3, 0.5)) < 1e-12);
    }
}

TEST_CASE("extend_traces value at t = 0.5 matches the extended-precision oracle") {
    // Single mode with rho0 = eta1 = 1 at xi = 1, so A = 2.
    auto ext = extend_traces_mode(Complex(1, 0), Complex(1, 0), 1.0);
    long double A = 2.0L, t = 0.5L;
    long double sq = std::sqrt(A);
    long double s1 = 2.0L * std::exp(-sq * t) - std::exp(-2.0L * sq * t);
    long double s2 = 2.0L * std::exp(-A * t) - std::exp(-2.0L * A * t);
    long double pf = std::exp(-A * t) * (std::exp(-A * A * t) - std::exp(-2.0L * A * A * t));
    long double want = s1 * s2 + pf / (A * A);
    CHECK(std::abs(ext.value(0.5) - Complex((double)want, 0.0)) < 1e-15);
}

TEST_CASE("extend_traces reproduces both traces exactly per mode on a grid field") {
    Grids grids(solver_grid());
    std::vector<double> rho0(grids.nx()), eta1(grids.nx());
    for (int j = 0; j < grids.nx(); ++j) {
        rho0[j] = std::cos(grids.x()[j]) + 0.4 * std::sin(2.0 * grids.x()[j]);
        eta1[j] = 0.7 - std::sin(grids.x()[j]);
    }
    PhysicalParams p;
    auto ext = extend_traces(rho0, eta1, p, grids, ExtensionRegime::both);
    for (int j = 0; j < grids.nx(); ++j) {
        CHECK(ext.rho1.at(0, j) == doctest::Approx(rho0[j]).epsilon(1e-13));
        CHECK(ext.rho1_t.at(0, j) == doctest::Approx(eta1[j]).epsilon(1e-12));
    }
}

// ---------------------------------------------------------------------------
// Auxiliary heat solves
// ---------------------------------------------------------------------------

TEST_CASE("solve_auxiliary_v1: zero data stays zero") {
    Grids grids(solver_grid());
    PhysicalParams p;
    DataTuple data = single_mode_h(grids);
    for (auto& v : data.h.v) v = 0.0;
    std::vector<double> zeta(grids.nx(), 0.0);
    auto v1 = solve_auxiliary_v1(data, zeta, p, grids);
    CHECK(max_abs(std::span<const double>(v1.plus.v)) == 0.0);
    CHECK(max_abs(std::span<const double>(v1.minus.v)) == 0.0);
}

TEST_CASE("solve_auxiliary_v1: frozen-boundary Gaussian matches the heat-kernel oracle") {
    GridConfig cfg = solver_grid();
    cfg.N_y = 192;
    cfg.N_t = 128;
    cfg.grading_ratio = 16.0;
    Grids grids(cfg);
    PhysicalParams p;
    DataTuple data;
    const std::size_t nt1 = grids.t_with0().size();
    data.g = RealField(nt1, grids.nx());
    data.h = RealField(nt1, grids.nx());
    data.rho0.assign(grids.nx(), 0.0);
    data.v0 = BulkSlice(grids.nx(), grids.ny() + 1);
    for (int j = 0; j < grids.nx(); ++j) {
        for (int k = 0; k <= grids.ny(); ++k) {
            double y = grids.y()[k];
            data.v0.plus.at(j, k) = data.v0.minus.at(j, k) = std::exp(-y * y);
        }
        for (std::size_t i = 0; i < nt1; ++i) data.g.at(i, j) = 1.0;  // frozen at v0(0)
    }
    data.v0_traces = slice_traces(data.v0, grids);
    std::vector<double> zeta(grids.nx(), 0.0);
    auto v1 = solve_auxiliary_v1(data, zeta, p, grids);

    // Odd-reflection heat-kernel convolution for u - 1 with u(t,0) = 1.
    auto oracle = [&](double t, double y) {
        auto G = [&](double r) {
            return std::exp(-r * r / (4.0 * t)) / std::sqrt(4.0 * kPi * t);
        };
        const int n = 40000;
        const double S = 30.0;
        double acc = 0.0, hq = S / n;
        for (int i = 0; i < n; ++i) {
            double a = i * hq, mid = a + 0.5 * hq, b = a + hq;
            auto f = [&](double s) { return (G(y - s) - G(y + s)) * (std::exp(-s * s) - 1.0); };
            acc += hq / 6.0 * (f(a) + 4.0 * f(mid) + f(b));
        }
        return 1.0 + acc;
    };
    const int it = grids.nt() / 4;  // short time
    const double t = grids.t_with0()[it];
    for (double ytest : {0.4, 1.0, 2.0}) {
        int k = 0;
        while (grids.y()[k] < ytest) ++k;
        double got = v1.plus.at(it, 0, k);
        CHECK(std::abs(got - oracle(t, grids.y()[k])) < 1e-4);
    }
}

TEST_CASE("solve_auxiliary_v1 boundary trace equals the prescribed Dirichlet datum") {
    Grids grids(solver_grid());
    PhysicalParams p;
    DataSeeds seeds = make_seed_family("two_mode", grids);
    auto made = make_compatible_data(p, grids, seeds);
    std::vector<double> zeta(grids.nx());
    for (int j = 0; j < grids.nx(); ++j)
        zeta[j] = made.data.v0_traces.value_plus[j] - made.data.g.at(0, j);
    auto v1 = solve_auxiliary_v1(made.data, zeta, p, grids);
    // Dirichlet value is g + exp(-(1-Dxx) t) zeta per mode; at t = 0 it is
    // g(0) + zeta = gamma v0.
    for (int j = 0; j < grids.nx(); ++j)
        CHECK(v1.plus.at(0, j, 0) ==
              doctest::Approx(made.data.v0_traces.value_plus[j]).epsilon(1e-11));
}

TEST_CASE("solve_rho_E: zero, initial slice, and the stationary limit") {
    GridConfig cfg = solver_grid();
    cfg.T = 6.0;
    cfg.N_t = 192;
    Grids grids(cfg);
    PhysicalParams p;

    const std::size_t nt1 = grids.t_with0().size();
    RealField rho(nt1, grids.nx());
    std::vector<double> rho0(grids.nx(), 0.0);
    auto zeroE = solve_rho_E(rho, rho0, p, grids);
    CHECK(max_abs(std::span<const double>(zeroE.plus.v)) == 0.0);

    // Constant-in-time single mode.
    for (std::size_t i = 0; i < nt1; ++i)
        for (int j = 0; j < grids.nx(); ++j) rho.at(i, j) = std::cos(grids.x()[j]);
    for (int j = 0; j < grids.nx(); ++j) rho0[j] = std::cos(grids.x()[j]);
    auto rhoE = solve_rho_E(rho, rho0, p, grids);

    // Initial slice reproduces the exp(-|y| sqrt(1+xi^2)) decay exactly.
    const double q = std::sqrt(2.0);
    for (int j = 0; j < grids.nx(); ++j)
        for (int k = 0; k <= grids.ny(); ++k)
            CHECK(std::abs(rhoE.plus.at(0, j, k) -
                           std::cos(grids.x()[j]) * std::exp(-q * grids.y()[k])) < 1e-12);

    // Long-time limit approaches the steady profile, computed from the
    // steady finite-difference boundary value problem c(w'' - xi^2 w) = 0.
    const int M = grids.ny();
    std::vector<double> lo(M - 1), di(M - 1), up(M - 1), rhs(M - 1), w(M + 1, 0.0);
    const double xi = 1.0;
    for (int i = 1; i < M; ++i) {
        double a = grids.y()[i] - grids.y()[i - 1], b = grids.y()[i + 1] - grids.y()[i];
        lo[i - 1] = 2.0 / (a * (a + b));
        di[i - 1] = -2.0 / (a * b) - xi * xi;
        up[i - 1] = 2.0 / (b * (a + b));
        rhs[i - 1] = 0.0;
    }
    rhs[0] -= lo[0] * 1.0;  // w(0) = 1 for the cos-mode profile
    for (int i = 1; i < M - 1; ++i) {
        double f = lo[i] / di[i - 1];
        di[i] -= f * up[i - 1];
        rhs[i] -= f * rhs[i - 1];
    }
    w[M - 1] = rhs[M - 2] / di[M - 2];
    for (int i = M - 2; i >= 1; --i) w[i] = (rhs[i - 1] - up[i - 1] * w[i + 1]) / di[i - 1];
    w[0] = 1.0;
    int j0 = 0;  // x index where cos = 1
    for (int k = 0; k <= grids.ny(); ++k)
        CHECK(std::abs(rhoE.plus.at(grids.nt(), j0, k) - w[k]) < 2e-3);
}

// ---------------------------------------------------------------------------
// Zero-trace transform solve
// ---------------------------------------------------------------------------

TEST_CASE("solve_zero_trace: all-zero data returns the zero triple") {
    Grids grids(solver_grid());
    PhysicalParams p;
    DataTuple data = single_mode_h(grids);
    for (auto& v : data.h.v) v = 0.0;
    SolverOptions opt = default_solver_options(p, grids);
    auto sol = solve_zero_trace(data, p, grids, opt);
    CHECK(max_abs(std::span<const double>(sol.rho.v)) == 0.0);
    CHECK(max_abs(std::span<const double>(sol.v.plus.v)) == 0.0);
}

TEST_CASE("solve_zero_trace rejects data with nonzero traces") {
    Grids grids(solver_grid());
    PhysicalParams p;
    DataTuple data = single_mode_h(grids);
    for (int j = 0; j < grids.nx(); ++j) data.g.at(0, j) = 1.0;
    SolverOptions opt = default_solver_options(p, grids);
    CHECK_THROWS_AS(solve_zero_trace(data, p, grids, opt), std::invalid_argument);
}

TEST_CASE("single-mode h: spectral rho agrees with the integrator oracle") {
    Grids grids(solver_grid());
    PhysicalParams p;  // delta = sigma = 0, a = 1, c = 1
    DataTuple data = single_mode_h(grids);
    SolverOptions opt = default_solver_options(p, grids);
    SpectralDiagnostics diag;
    auto sol = solve_zero_trace(data, p, grids, opt, &diag);
    auto fd = fd_solve_full(data, p, grids);
    CHECK(rel_l2_interface(sol.rho, fd.rho, grids) < 1e-3);
    CHECK(diag.contour_tail_fraction < 1e-4);
}

TEST_CASE("single-mode h: interface equations hold on the returned solution") {
    Grids grids(solver_grid());
    PhysicalParams p;
    DataTuple data = single_mode_h(grids);
    SolverOptions opt = default_solver_options(p, grids);
    auto sol = solve_zero_trace(data, p, grids, opt);
    auto rep = interface_residuals(sol, data, p, grids);
    CHECK(rep.interface_eq_max < 1e-6);
    CHECK(rep.stefan_eq_max < 1e-6);
}

TEST_CASE("solve_zero_trace is linear in the data") {
    Grids grids(solver_grid());
    PhysicalParams p;
    p.delta = 0.5;
    p.sigma = 0.25;
    DataSeeds s = make_seed_family("zero_trace_two_mode", grids);
    auto a = make_compatible_data(p, grids, s).data;
    DataTuple b = a;
    for (std::size_t i = 0; i < b.g.v.size(); ++i) {
        b.g.v[i] *= -0.3;
        b.h.v[i] *= 2.0;
    }
    DataTuple combo = a;
    for (std::size_t i = 0; i < combo.g.v.size(); ++i) {
        combo.g.v[i] = a.g.v[i] + 2.0 * b.g.v[i];
        combo.h.v[i] = a.h.v[i] + 2.0 * b.h.v[i];
    }
    SolverOptions opt = default_solver_options(p, grids);
    opt.contour.n_nodes = 8192;  // linearity is exact per node set
    auto sa = solve_zero_trace(a, p, grids, opt);
    auto sb = solve_zero_trace(b, p, grids, opt);
    auto sc = solve_zero_trace(combo, p, grids, opt);
    double scale = max_abs(std::span<const double>(sc.rho.v)) + 1e-300;
    for (std::size_t i = 0; i < sc.rho.v.size(); ++i)
        CHECK(std::abs(sc.rho.v[i] - (sa.rho.v[i] + 2.0 * sb.rho.v[i])) < 1e-11 * scale);
}

TEST_CASE("zero-trace solve with a bulk source exercises the kernel integrals") {
    GridConfig cfg = solver_grid();
    cfg.N_t = 32;
    cfg.N_y = 64;
    Grids grids(cfg);
    PhysicalParams p;
    p.delta = 0.5;
    p.sigma = 0.5;
    DataTuple data = single_mode_h(grids);
    for (auto& v : data.h.v) v = 0.0;
    const std::size_t nt1 = grids.t_with0().size();
    data.f = BulkField(nt1, grids.nx(), grids.ny() + 1);
    for (std::size_t i = 0; i < nt1; ++i) {
        double t = grids.t_with0()[i];
        for (int j = 0; j < grids.nx(); ++j)
            for (int k = 0; k <= grids.ny(); ++k) {
                double y = grids.y()[k];
                double shape = std::exp(-0.5 * y * y) * std::cos(grids.x()[j]);
                data.f.plus.at(i, j, k) = t * std::exp(-t) * shape;
                data.f.minus.at(i, j, k) = 0.5 * t * std::exp(-t) * shape;
            }
    }
    SolverOptions opt = default_solver_options(p, grids);
    opt.contour.n_nodes = 4096;  // f transforms are per (node, y); keep it lean
    opt.bulk_node_cap = 4096;
    auto sol = solve_zero_trace(data, p, grids, opt);
    auto fd = fd_solve_full(data, p, grids);
    CHECK(rel_l2_interface(sol.rho, fd.rho, grids) < 5e-3);
    CHECK(rel_l2_bulk(sol.v, fd.v, grids) < 5e-3);
}

// ---------------------------------------------------------------------------
// Full inhomogeneous solve
// ---------------------------------------------------------------------------

TEST_CASE("solve_full: zero seeds give the zero solution") {
    Grids grids(solver_grid());
    PhysicalParams p;
    p.delta = 0.5;
    p.sigma = 0.5;
    DataSeeds seeds = make_seed_family("zero", grids);
    auto made = make_compatible_data(p, grids, seeds);
    SolverOptions opt = default_solver_options(p, grids);
    auto [sol, bundle] = solve_full(made.data, p, grids, opt);
    CHECK(max_abs(std::span<const double>(sol.rho.v)) < 1e-14);
    CHECK(max_abs(std::span<const double>(sol.v.plus.v)) < 1e-14);
}

TEST_CASE("solve_full: reduced data are zero-trace to 1e-8") {
    Grids grids(solver_grid());
    for (double d : {0.0, 0.7}) {
        for (double s : {0.0, 0.4}) {
            PhysicalParams p;
            p.delta = d;
            p.sigma = s;
            DataSeeds seeds = make_seed_family("two_mode", grids);
            auto made = make_compatible_data(p, grids, seeds);
            SolverOptions opt = default_solver_options(p, grids);
            auto [sol, bundle] = solve_full(made.data, p, grids, opt);
            CHECK(bundle.g0_residual < 1e-8);
            CHECK(bundle.h0_residual < 1e-8);
        }
    }
}

TEST_CASE("solve_full matches the integrator oracle on the two-mode family") {
    Grids grids(solver_grid());
    PhysicalParams p;
    p.delta = 0.5;
    p.sigma = 0.5;
    DataSeeds seeds = make_seed_family("two_mode", grids);
    auto made = make_compatible_data(p, grids, seeds);
    SolverOptions opt = default_solver_options(p, grids);
    auto [sol, bundle] = solve_full(made.data, p, grids, opt);
    auto fd = fd_solve_full(made.data, p, grids);
    CHECK(rel_l2_interface(sol.rho, fd.rho, grids) < 5e-3);
    CHECK(rel_l2_bulk(sol.v, fd.v, grids) < 5e-3);
    CHECK(rel_l2_bulk(sol.rho_E, fd.rho_E, grids) < 5e-3);
}

TEST_CASE("solve_full solution invariants: traces, initial value, residuals") {
    Grids grids(solver_grid());
    PhysicalParams p;
    p.delta = 0.25;
    p.sigma = 0.75;
    DataSeeds seeds = make_seed_family("two_mode", grids);
    auto made = make_compatible_data(p, grids, seeds);
    SolverOptions opt = default_solver_options(p, grids);
    auto [sol, bundle] = solve_full(made.data, p, grids, opt);

    for (int j = 0; j < grids.nx(); ++j)
        CHECK(sol.rho.at(0, j) == doctest::Approx(made.data.rho0[j]).epsilon(1e-12));
    for (std::size_t i = 0; i < sol.rho.rows; ++i)
        for (int j = 0; j < grids.nx(); ++j) {
            CHECK(std::abs(sol.gamma_rhoE_plus.at(i, j) - sol.rho.at(i, j)) < 1e-11);
            CHECK(std::abs(sol.gamma_rhoE_minus.at(i, j) - sol.rho.at(i, j)) < 1e-11);
        }
    auto rep = interface_residuals(sol, made.data, p, grids);
    CHECK(rep.interface_eq_max < 1e-6);
    CHECK(rep.stefan_eq_max < 1e-6);
}

TEST_CASE("solve_full rejects incompatible data") {
    Grids grids(solver_grid());
    PhysicalParams p;
    p.delta = 0.5;
    DataSeeds seeds = make_seed_family("two_mode", grids);
    auto made = make_compatible_data(p, grids, seeds);
    made.data.g.at(0, 0) += 0.1;  // break the t=0 condition
    SolverOptions opt = default_solver_options(p, grids);
    CHECK_THROWS_AS(solve_full(made.data, p, grids, opt), std::invalid_argument);
}

TEST_CASE("even data with equal coefficients give an even bulk field") {
    Grids grids(solver_grid());
    PhysicalParams p;
    p.delta = 0.5;
    p.sigma = 0.5;
    DataSeeds seeds = make_seed_family("two_mode", grids);
    // Symmetrize v0 across the interface.
    seeds.v0.minus = seeds.v0.plus;
    seeds.v0_traces->value_minus = seeds.v0_traces->value_plus;
    for (int j = 0; j < grids.nx(); ++j)
        seeds.v0_traces->dy_minus[j] = -seeds.v0_traces->dy_plus[j];
    auto made = make_compatible_data(p, grids, seeds);
    SolverOptions opt = default_solver_options(p, grids);
    auto [sol, bundle] = solve_full(made.data, p, grids, opt);
    double scale = max_abs(std::span<const double>(sol.v.plus.v)) + 1e-300;
    for (std::size_t i = 0; i < sol.v.plus.v.size(); ++i)
        CHECK(std::abs(sol.v.plus.v[i] - sol.v.minus.v[i]) < 1e-10 * scale);
}
