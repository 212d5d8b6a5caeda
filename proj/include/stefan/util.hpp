#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace stefan {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Thread cap for sweep/mode parallelism, from STEFAN_LIMITS_THREADS (>=1).
inline unsigned thread_budget() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("STEFAN_LIMITS_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return hw;
}

/// Runs body(i) for i in [0,n). Items are independent; results must be written
/// to pre-sized slots so the reduction order stays deterministic.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    unsigned nthreads = std::min<std::size_t>(thread_budget(), n);
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t]() {
            for (std::size_t i = t; i < n; i += nthreads) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

/// Coefficients of the 2nd-order one-sided first derivative at node 0 of the
/// stencil {0, h1, h1+h2}.
struct OneSidedD1 {
    double c0, c1, c2;
};

inline OneSidedD1 one_sided_d1(double h1, double h2) {
    OneSidedD1 s;
    s.c0 = -(2.0 * h1 + h2) / (h1 * (h1 + h2));
    s.c1 = (h1 + h2) / (h1 * h2);
    s.c2 = -h1 / (h2 * (h1 + h2));
    return s;
}

/// Trapezoid weights on an arbitrary strictly increasing node set.
inline std::vector<double> trapezoid_weights(std::span<const double> nodes) {
    const std::size_t n = nodes.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double h = nodes[i + 1] - nodes[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    return w;
}

inline double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs(std::span<const Complex> a) {
    double m = 0.0;
    for (const Complex& x : a) m = std::max(m, std::abs(x));
    return m;
}

/// Natural cubic spline through (x_i, y_i); complex-valued.
/// Evaluation outside [x_front, x_back] clamps to the end cubics.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::span<const double> x, std::span<const Complex> y) { build(x, y); }

    void build(std::span<const double> x, std::span<const Complex> y) {
        if (x.size() != y.size() || x.size() < 2)
            throw std::invalid_argument("CubicSpline: need >=2 matched nodes");
        x_.assign(x.begin(), x.end());
        a_.assign(y.begin(), y.end());
        const std::size_t n = x_.size();
        b_.assign(n, Complex{});
        c_.assign(n, Complex{});
        d_.assign(n, Complex{});
        if (n == 2) {
            b_[0] = (a_[1] - a_[0]) / (x_[1] - x_[0]);
            b_[1] = b_[0];
            return;
        }
        std::vector<double> h(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];
        // Solve the natural-spline tridiagonal system for second derivatives.
        std::vector<double> diag(n, 0.0), sub(n, 0.0), sup(n, 0.0);
        std::vector<Complex> rhs(n, Complex{});
        diag[0] = 1.0;
        diag[n - 1] = 1.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            sub[i] = h[i - 1];
            diag[i] = 2.0 * (h[i - 1] + h[i]);
            sup[i] = h[i];
            rhs[i] = 3.0 * ((a_[i + 1] - a_[i]) / h[i] - (a_[i] - a_[i - 1]) / h[i - 1]);
        }
        // Thomas sweep.
        for (std::size_t i = 1; i < n; ++i) {
            double m = sub[i] / diag[i - 1];
            diag[i] -= m * sup[i - 1];
            rhs[i] -= m * rhs[i - 1];
        }
        c_[n - 1] = rhs[n - 1] / diag[n - 1];
        for (std::size_t i = n - 1; i-- > 0;)
            c_[i] = (rhs[i] - sup[i] * c_[i + 1]) / diag[i];
        for (std::size_t i = 0; i + 1 < n; ++i) {
            b_[i] = (a_[i + 1] - a_[i]) / h[i] - h[i] * (2.0 * c_[i] + c_[i + 1]) / 3.0;
            d_[i] = (c_[i + 1] - c_[i]) / (3.0 * h[i]);
        }
    }

    Complex operator()(double x) const {
        std::size_t i = locate(x);
        double u = x - x_[i];
        return a_[i] + u * (b_[i] + u * (c_[i] + u * d_[i]));
    }

    Complex derivative(double x) const {
        std::size_t i = locate(x);
        double u = x - x_[i];
        return b_[i] + u * (2.0 * c_[i] + 3.0 * u * d_[i]);
    }

    std::size_t segments() const { return x_.size() - 1; }
    double knot(std::size_t i) const { return x_[i]; }
    /// Cubic coefficients on segment i in the local variable u = x - knot(i).
    void coeffs(std::size_t i, Complex& a, Complex& b, Complex& c, Complex& d) const {
        a = a_[i];
        b = b_[i];
        c = c_[i];
        d = d_[i];
    }

private:
    std::size_t locate(double x) const {
        if (x <= x_.front()) return 0;
        if (x >= x_.back()) return x_.size() - 2;
        std::size_t lo = 0, hi = x_.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (x_[mid] <= x ? lo : hi) = mid;
        }
        return lo;
    }

    std::vector<double> x_;
    std::vector<Complex> a_, b_, c_, d_;
};

}  // namespace stefan
