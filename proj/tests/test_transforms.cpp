#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "stefan/fourier.hpp"
#include "stefan/laplace.hpp"

using namespace stefan;

TEST_CASE("forward_tangential puts a constant on the zero mode") {
    std::vector<double> field(16, 1.0);
    auto modes = forward_tangential(std::span<const double>(field));
    CHECK(std::abs(modes[0] - Complex(4.0, 0.0)) < 1e-13);  // sqrt(16) * 1
    for (int m = 1; m < 16; ++m) CHECK(std::abs(modes[m]) < 1e-13);
}

TEST_CASE("cosine splits evenly onto the +-1 modes") {
    const int n = 32;
    std::vector<double> field(n);
    for (int j = 0; j < n; ++j) field[j] = std::cos(2.0 * kPi * j / n);
    auto modes = forward_tangential(std::span<const double>(field));
    CHECK(std::abs(modes[1]) == doctest::Approx(std::abs(modes[n - 1])).epsilon(1e-12));
    CHECK(std::abs(modes[1]) > 0.1);
    for (int m = 0; m < n; ++m) {
        if (m == 1 || m == n - 1) continue;
        CHECK(std::abs(modes[m]) < 1e-13);
    }
}

TEST_CASE("tangential round-trip is the identity to 1e-13") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> field(64);
    for (auto& v : field) v = uni(rng);
    auto modes = forward_tangential(std::span<const double>(field));
    auto back = inverse_tangential_real(modes);
    for (int j = 0; j < 64; ++j) CHECK(std::abs(back[j] - field[j]) < 1e-13);
}

// ---------------------------------------------------------------------------
// Inverse Laplace: catalog of five known pairs, all sectorial.
// ---------------------------------------------------------------------------

TEST_CASE("talbot inversion reproduces the transform-pair catalog") {
    ContourSpec spec;  // talbot, 48 nodes
    spec.n_nodes = 48;
    auto invert = [&](auto F, double t) {
        auto out = inverse_laplace(F, t, spec);
        CHECK(out.converged);
        return out.value;
    };
    for (double t : {0.3, 1.0, 2.0}) {
        // 1/(lambda+1) -> exp(-t)
        CHECK(std::abs(invert([](Complex s) { return 1.0 / (s + 1.0); }, t) - std::exp(-t)) <
              1e-8);
        // 1/lambda^2 -> t
        CHECK(std::abs(invert([](Complex s) { return 1.0 / (s * s); }, t) - t) < 1e-8);
        // 1/sqrt(lambda+1) -> exp(-t)/sqrt(pi t)
        CHECK(std::abs(invert([](Complex s) { return 1.0 / std::sqrt(s + 1.0); }, t) -
                       std::exp(-t) / std::sqrt(kPi * t)) < 1e-6);
        // 1/(lambda+1)^2 -> t exp(-t)
        CHECK(std::abs(invert([](Complex s) { return 1.0 / ((s + 1.0) * (s + 1.0)); }, t) -
                       t * std::exp(-t)) < 1e-8);
        // 1/(lambda sqrt(lambda+1)) -> erf(sqrt(t))
        CHECK(std::abs(invert([](Complex s) { return 1.0 / (s * std::sqrt(s + 1.0)); }, t) -
                       std::erf(std::sqrt(t))) < 1e-8);
    }
}

TEST_CASE("inverse_laplace flags non-convergence under node doubling") {
    ContourSpec spec;
    spec.n_nodes = 16;
    spec.refine_max = 1;
    spec.tol = 1e-14;
    // A transform with slow decay and oscillation strains a 16-node Talbot.
    auto F = [](Complex s) { return std::exp(-2.0 * std::sqrt(s)) / std::sqrt(s); };
    auto out = inverse_laplace(F, 0.05, spec);
    CHECK_FALSE(out.converged);
}

TEST_CASE("bromwich contour inverts a decaying pair") {
    ContourSpec spec;
    spec.kind = ContourKind::bromwich;
    spec.n_nodes = 16384;
    spec.shift = 1.0;
    spec.spacing = 0.3;
    ContourNodes nodes = contour_nodes(spec, 1.0);
    std::vector<Complex> F(nodes.lambda.size());
    for (std::size_t k = 0; k < F.size(); ++k)
        F[k] = 1.0 / ((nodes.lambda[k] + 1.0) * (nodes.lambda[k] + 1.0));
    for (double t : {0.25, 1.0}) {
        Complex v = inverse_laplace_at(F, nodes, t);
        CHECK(std::abs(v - t * std::exp(-t)) < 1e-6);
    }
}

// ---------------------------------------------------------------------------
// Transforms of gridded data (reflection, damping, spline moments)
// ---------------------------------------------------------------------------

TEST_CASE("exp_moments match quadrature") {
    for (Complex lam : {Complex(0.3, 0.0), Complex(2.0, 35.0), Complex(1e-4, 1e-3)}) {
        double u = 0.7;
        auto M = exp_moments(lam, u);
        for (int j = 0; j < 4; ++j) {
            // Composite Simpson oracle.
            const int n = 20000;
            Complex acc{};
            double h = u / n;
            for (int i = 0; i < n; ++i) {
                double a = i * h, m = a + 0.5 * h, b = a + h;
                auto f = [&](double s) { return std::pow(s, j) * std::exp(-lam * s); };
                acc += h / 6.0 * (f(a) + 4.0 * f(m) + f(b));
            }
            CHECK(std::abs(M[j] - acc) < 1e-12);
        }
    }
}

TEST_CASE("laplace_of_data: zero series transforms to zero") {
    std::vector<double> t(17);
    for (int i = 0; i <= 16; ++i) t[i] = i / 16.0;
    std::vector<Complex> series(17, Complex{});
    std::vector<Complex> nodes = {Complex(1.0, 0.0), Complex(2.0, 5.0)};
    auto out = laplace_of_data(t, series, 1.0, nodes);
    for (auto& v : out.values) CHECK(std::abs(v) < 1e-300);
}

TEST_CASE("laplace_of_data matches the closed-form reflected integral for u=t") {
    const double T = 1.0, kappa = 1.0;
    const int nt = 64;
    std::vector<double> t(nt + 1);
    std::vector<Complex> series(nt + 1);
    for (int i = 0; i <= nt; ++i) {
        t[i] = T * i / nt;
        series[i] = t[i];
    }
    // E(u)(t) = t on [0,T], 2T-t on [T,2T]; transform of exp(-kappa t) E(u) at
    // real lambda has the piecewise closed form below with mu = lambda+kappa.
    auto closed = [&](double lambda) {
        double mu = lambda + kappa;
        double front = (1.0 - std::exp(-mu * T) * (1.0 + mu * T)) / (mu * mu);
        double tailA = T * (1.0 - std::exp(-mu * T)) / mu;
        double tailB = (1.0 - std::exp(-mu * T) * (1.0 + mu * T)) / (mu * mu);
        double back = std::exp(-mu * T) * (tailA - tailB);
        return front + back;
    };
    std::vector<Complex> nodes = {Complex(0.5, 0.0), Complex(1.0, 0.0), Complex(7.3, 0.0)};
    auto out = laplace_of_data(t, series, kappa, nodes);
    for (std::size_t k = 0; k < nodes.size(); ++k)
        CHECK(std::abs(out.values[k] - closed(nodes[k].real())) < 1e-10);
}

TEST_CASE("laplace_of_data is linear in the series") {
    const int nt = 32;
    std::vector<double> t(nt + 1);
    std::vector<Complex> a(nt + 1), b(nt + 1), combo(nt + 1);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int i = 0; i <= nt; ++i) {
        t[i] = i / double(nt);
        a[i] = Complex(uni(rng), uni(rng));
        b[i] = Complex(uni(rng), uni(rng));
        combo[i] = 2.0 * a[i] - 3.5 * b[i];
    }
    std::vector<Complex> nodes = {Complex(1.0, 3.0), Complex(2.0, -11.0)};
    auto ta = laplace_of_data(t, a, 1.0, nodes);
    auto tb = laplace_of_data(t, b, 1.0, nodes);
    auto tc = laplace_of_data(t, combo, 1.0, nodes);
    for (std::size_t k = 0; k < nodes.size(); ++k)
        CHECK(std::abs(tc.values[k] - (2.0 * ta.values[k] - 3.5 * tb.values[k])) < 1e-12);
}

TEST_CASE("laplace_of_data warns when a zero-trace transform sees a nonzero origin") {
    std::vector<double> t = {0.0, 0.5, 1.0};
    std::vector<Complex> series = {1.0, 0.5, 0.2};
    std::vector<Complex> nodes = {Complex(1.0, 0.0)};
    auto out = laplace_of_data(t, series, 1.0, nodes, /*expect_zero_trace=*/true);
    CHECK_FALSE(out.zero_trace_ok);
}

TEST_CASE("reflected extension is continuous at t = T") {
    const double T = 1.0;
    const int nt = 32;
    std::vector<double> t(nt + 1);
    std::vector<Complex> series(nt + 1);
    for (int i = 0; i <= nt; ++i) {
        t[i] = T * i / nt;
        series[i] = std::sin(1.7 * t[i]);
    }
    DampedSeriesTransform tf(t, series, 0.0);
    // A transform with a jump at T would decay like 1/lambda; continuity at the
    // kink gives 1/lambda^2. Compare large-lambda decay against that scaling.
    double v1 = std::abs(tf.at(Complex(200.0, 0.0)));
    double v2 = std::abs(tf.at(Complex(400.0, 0.0)));
    CHECK(v1 / v2 > 3.0);  // ~4 for 1/lambda^2, ~2 for a jump
}
