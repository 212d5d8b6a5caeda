#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "stefan/data.hpp"
#include "stefan/fourier.hpp"
#include "stefan/grids.hpp"
#include "stefan/params.hpp"

using namespace stefan;

namespace {

GridConfig small_grid() {
    GridConfig g;
    g.N_x = 16;
    g.N_y = 48;
    g.N_t = 16;
    return g;
}

BulkSlice exp_slice(const Grids& grids, double bp, double bm, double amp = 1.0) {
    BulkSlice w(grids.nx(), grids.ny() + 1);
    for (int j = 0; j < grids.nx(); ++j)
        for (int k = 0; k <= grids.ny(); ++k) {
            double y = grids.y()[k];
            w.plus.at(j, k) = amp * std::exp(-bp * y);
            w.minus.at(j, k) = amp * std::exp(-bm * y);
        }
    return w;
}

}  // namespace

TEST_CASE("grids: frequencies, grading, and time horizon") {
    Grids grids(small_grid());
    for (int m = 0; m < grids.nx(); ++m) {
        int k = grids.mode_k(m);
        CHECK(grids.xi()[m] == doctest::Approx(2.0 * kPi * k / grids.config().L_x));
    }
    for (int k = 0; k < grids.ny(); ++k) {
        CHECK(grids.y()[k + 1] > grids.y()[k]);
        if (k > 0) CHECK(grids.y()[k + 1] - grids.y()[k] >= grids.y()[k] - grids.y()[k - 1]);
    }
    CHECK(grids.t_grid().back() == doctest::Approx(grids.config().T));
    GridConfig bad = small_grid();
    bad.N_x = 15;
    CHECK_THROWS_AS(Grids{bad}, std::invalid_argument);
}

TEST_CASE("jump_trace: explicit derivative values") {
    Grids grids(small_grid());
    PhysicalParams p;

    // w = exp(-|y|), c± = 1: jump = (-1) - (+1) = -2.
    auto j1 = jump_trace_slice(exp_slice(grids, 1.0, 1.0), p, grids);
    for (double v : j1) CHECK(v == doctest::Approx(-2.0).epsilon(2e-4));

    // smooth even field with c+ = c-: jump vanishes.
    BulkSlice even(grids.nx(), grids.ny() + 1);
    for (int j = 0; j < grids.nx(); ++j)
        for (int k = 0; k <= grids.ny(); ++k) {
            double y = grids.y()[k];
            even.plus.at(j, k) = even.minus.at(j, k) = std::exp(-y * y);
        }
    auto j_even = jump_trace_slice(even, p, grids);
    for (double v : j_even) CHECK(std::abs(v) < 1e-5);
    // and exactly, through supplied analytic traces:
    InterfaceTraces tr = slice_traces(even, grids);
    std::fill(tr.dy_plus.begin(), tr.dy_plus.end(), 0.0);
    std::fill(tr.dy_minus.begin(), tr.dy_minus.end(), 0.0);
    for (double v : jump_trace_from(tr, p)) CHECK(v == 0.0);

    // w = exp(-2y) above, exp(y) below (= exp(-|y|)), c+ = 3, c- = 1:
    // 3(-2) - (1)(+1) = -7.
    PhysicalParams p2;
    p2.c_plus = 3.0;
    p2.c_minus = 1.0;
    auto j2 = jump_trace_slice(exp_slice(grids, 2.0, 1.0), p2, grids);
    for (double v : j2) CHECK(v == doctest::Approx(-7.0).epsilon(2e-4));
}

TEST_CASE("jump_trace is linear") {
    Grids grids(small_grid());
    PhysicalParams p;
    auto w1 = exp_slice(grids, 1.0, 0.5);
    auto w2 = exp_slice(grids, 2.0, 1.5);
    BulkSlice combo(grids.nx(), grids.ny() + 1);
    const double al = 1.7, be = -0.4;
    for (std::size_t i = 0; i < combo.plus.v.size(); ++i) {
        combo.plus.v[i] = al * w1.plus.v[i] + be * w2.plus.v[i];
        combo.minus.v[i] = al * w1.minus.v[i] + be * w2.minus.v[i];
    }
    auto j1 = jump_trace_slice(w1, p, grids);
    auto j2 = jump_trace_slice(w2, p, grids);
    auto jc = jump_trace_slice(combo, p, grids);
    for (int j = 0; j < grids.nx(); ++j)
        CHECK(jc[j] == doctest::Approx(al * j1[j] + be * j2[j]).epsilon(1e-12));
}

TEST_CASE("one-sided derivative traces converge at 2nd order in the y grid") {
    double prev_err = 0.0;
    for (int level = 0; level < 3; ++level) {
        GridConfig g = small_grid();
        g.N_y = 24 << level;
        Grids grids(g);
        auto w = exp_slice(grids, 1.3, 0.6);
        auto tr = slice_traces(w, grids);
        // Physical derivatives at 0±: dy exp(-1.3 y) = -1.3; dy exp(-0.6|y|)
        // from below = +0.6.
        double err = std::abs(tr.dy_plus[0] - (-1.3)) + std::abs(tr.dy_minus[0] - 0.6);
        if (level > 0) CHECK(prev_err / err > 3.0);
        prev_err = err;
    }
}

TEST_CASE("make_compatible_data: sigma-only cosine seed forces g(0,x) = cos x") {
    GridConfig g = small_grid();
    g.L_x = 2.0 * kPi;
    Grids grids(g);
    PhysicalParams p;
    p.delta = 0.0;
    p.sigma = 1.0;
    DataSeeds seeds = make_seed_family("zero", grids);
    for (int j = 0; j < grids.nx(); ++j) seeds.rho0[j] = std::cos(grids.x()[j]);
    auto made = make_compatible_data(p, grids, seeds);
    for (int j = 0; j < grids.nx(); ++j)
        CHECK(made.data.g.at(0, j) == doctest::Approx(std::cos(grids.x()[j])).epsilon(1e-12));
    CHECK(made.report.residual_max < 1e-12);
    CHECK(made.report.w_norm_evaluated);  // delta = 0 path records the W norm
}

TEST_CASE("make_compatible_data: classical point reduces to g(0) = gamma v0") {
    Grids grids(small_grid());
    PhysicalParams p;  // delta = sigma = 0
    DataSeeds seeds = make_seed_family("two_mode", grids);
    auto made = make_compatible_data(p, grids, seeds);
    for (int j = 0; j < grids.nx(); ++j)
        CHECK(made.data.g.at(0, j) ==
              doctest::Approx(made.data.v0_traces.value_plus[j]).epsilon(1e-12));
}

TEST_CASE("make_compatible_data: single-mode G0 matches the per-term grid oracle") {
    GridConfig g = small_grid();
    g.L_x = 2.0 * kPi;
    Grids grids(g);
    PhysicalParams p;
    p.delta = 1.0;
    p.sigma = 0.0;

    DataSeeds seeds = make_seed_family("zero", grids);
    // All seeds a single tangential mode cos(x).
    for (int j = 0; j < grids.nx(); ++j) {
        double c = std::cos(grids.x()[j]);
        seeds.rho0[j] = c;
        for (std::size_t i = 0; i < seeds.h.rows; ++i)
            seeds.h.at(i, j) = (1.0 + grids.t_with0()[i]) * c;
    }
    InterfaceTraces tr;
    tr.analytic = true;
    tr.value_plus.resize(grids.nx());
    tr.value_minus.resize(grids.nx());
    tr.dy_plus.resize(grids.nx());
    tr.dy_minus.resize(grids.nx());
    seeds.v0 = BulkSlice(grids.nx(), grids.ny() + 1);
    for (int j = 0; j < grids.nx(); ++j) {
        double c = std::cos(grids.x()[j]);
        for (int k = 0; k <= grids.ny(); ++k)
            seeds.v0.plus.at(j, k) = seeds.v0.minus.at(j, k) = c * std::exp(-grids.y()[k]);
        tr.value_plus[j] = tr.value_minus[j] = c;
        tr.dy_plus[j] = -c;
        tr.dy_minus[j] = c;
    }
    seeds.v0_traces = tr;

    auto made = make_compatible_data(p, grids, seeds);
    // Per-term oracle: on the cos(x) mode A = 2, so
    //   q0 = h(0) - [[c dy v0]] - (c+ a+ + c- a-) sqrt(2) rho0,
    //   G0 = gamma v0 + delta q0.
    for (int j = 0; j < grids.nx(); ++j) {
        double c = std::cos(grids.x()[j]);
        double jump = p.c_plus * (-c) - p.c_minus * (c);
        double q0 = c - jump - 2.0 * std::sqrt(2.0) * c;
        double G0 = c + p.delta * q0;
        CHECK(std::abs(made.data.g.at(0, j) - G0) < 1e-12);
    }
}

TEST_CASE("compatibility residual stays below 1e-12 across the parameter box") {
    Grids grids(small_grid());
    DataSeeds seeds = make_seed_family("two_mode", grids);
    for (double d : {0.0, 0.5, 1.0}) {
        for (double s : {0.0, 0.5, 1.0}) {
            PhysicalParams p;
            p.delta = d;
            p.sigma = s;
            auto made = make_compatible_data(p, grids, seeds);
            CHECK(made.report.residual_max < 1e-12);
        }
    }
}

TEST_CASE("make_compatible_data rejects incompatible seeds") {
    Grids grids(small_grid());
    PhysicalParams p;
    DataSeeds seeds = make_seed_family("two_mode", grids);
    DataSeeds broken = seeds;
    broken.v0_traces->value_minus[3] += 0.5;  // jump in the value trace
    CHECK_THROWS_AS(make_compatible_data(p, grids, broken), std::invalid_argument);
    DataSeeds bad_g = seeds;
    bad_g.g_free.at(0, 0) = 0.2;  // nonzero g_free origin
    CHECK_THROWS_AS(make_compatible_data(p, grids, bad_g), std::invalid_argument);
}

TEST_CASE("seed families excite only grid-resolved modes") {
    Grids grids(small_grid());
    DataSeeds seeds = make_seed_family("two_mode", grids);
    auto modes = forward_tangential(seeds.h.row(grids.nt() / 2));
    for (int m = 0; m < grids.nx(); ++m) {
        if (std::abs(grids.mode_k(m)) > 2) CHECK(std::abs(modes[m]) < 1e-13);
    }
}
