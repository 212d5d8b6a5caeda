#include "stefan/spectral.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "stefan/detail/cn_blocks.hpp"
#include "stefan/fourier.hpp"

namespace stefan {

SolverOptions default_solver_options(const PhysicalParams& params, const Grids& grids) {
    SolverOptions opt;
    const double T = grids.config().T;
    opt.contour.kind = ContourKind::bromwich;
    opt.contour.shift = 1.0 / T;
    // Spacing limited by the analyticity strip and by the damped-image decay.
    opt.contour.spacing = std::min(0.15 * (opt.contour.shift + params.kappa),
                                   0.3 * params.kappa);
    opt.contour.n_nodes = 32768;
    opt.bulk_node_cap = 8192;
    return opt;
}

Complex TraceExtensionMode::value(double t) const {
    const double sq = std::sqrt(A);
    const double s1 = 2.0 * std::exp(-sq * t) - std::exp(-2.0 * sq * t);
    const double s2 = 2.0 * std::exp(-A * t) - std::exp(-2.0 * A * t);
    const double A2 = A * A;
    const double pf = std::exp(-A * t) * (std::exp(-A2 * t) - std::exp(-2.0 * A2 * t));
    return s1 * s2 * rho0_hat + pf / A2 * eta1_hat;
}

Complex TraceExtensionMode::derivative(double t) const {
    const double sq = std::sqrt(A);
    const double e1 = std::exp(-sq * t), e2 = std::exp(-2.0 * sq * t);
    const double f1 = std::exp(-A * t), f2 = std::exp(-2.0 * A * t);
    const double s1 = 2.0 * e1 - e2, s2 = 2.0 * f1 - f2;
    const double ds1 = -2.0 * sq * e1 + 2.0 * sq * e2;
    const double ds2 = -2.0 * A * f1 + 2.0 * A * f2;
    const double A2 = A * A;
    const double g1 = std::exp(-A2 * t), g2 = std::exp(-2.0 * A2 * t);
    const double pf = f1 * (g1 - g2);
    const double dpf = -A * pf + f1 * (-A2 * g1 + 2.0 * A2 * g2);
    return (ds1 * s2 + s1 * ds2) * rho0_hat + dpf / A2 * eta1_hat;
}

TraceExtensionMode extend_traces_mode(Complex rho0_hat, Complex eta1_hat, double xi) {
    return TraceExtensionMode{rho0_hat, eta1_hat, 1.0 + xi * xi};
}

ExtendedTraces extend_traces(std::span<const double> rho0, std::span<const double> eta1,
                             const PhysicalParams& params, const Grids& grids,
                             ExtensionRegime regime) {
    (void)params;
    const int nx = grids.nx();
    const std::size_t nt1 = grids.t_with0().size();
    ExtendedTraces out;
    out.regime = regime;
    auto rho0_modes = forward_tangential(rho0);
    auto eta1_modes = forward_tangential(eta1);
    out.modes.reserve(nx);
    for (int m = 0; m < nx; ++m)
        out.modes.push_back(extend_traces_mode(rho0_modes[m], eta1_modes[m], grids.xi()[m]));
    out.rho1 = RealField(nt1, nx);
    out.rho1_t = RealField(nt1, nx);
    std::vector<Complex> vals(nx), dvals(nx);
    for (std::size_t i = 0; i < nt1; ++i) {
        double t = grids.t_with0()[i];
        for (int m = 0; m < nx; ++m) {
            vals[m] = out.modes[m].value(t);
            dvals[m] = out.modes[m].derivative(t);
        }
        auto v = inverse_tangential_real(vals);
        auto dv = inverse_tangential_real(dvals);
        for (int j = 0; j < nx; ++j) {
            out.rho1.at(i, j) = v[j];
            out.rho1_t.at(i, j) = dv[j];
        }
    }
    return out;
}

namespace {

// Contour machinery shared by every mode of one solve.
struct ContourWork {
    ContourNodes nodes;
    std::size_t bulk_begin = 0, bulk_count = 0;
    std::size_t tail_begin = 0;  // start of the outer 25% (upper half) for diagnostics
    Eigen::MatrixXcd E;          // (nt, K): exp(lambda_k t_i), i = 1..nt
    std::vector<double> ekt;     // exp(kappa t_i), i = 0..nt
};

ContourWork make_contour_work(const SolverOptions& opt, const PhysicalParams& params,
                              const Grids& grids) {
    ContourWork w;
    w.nodes = contour_nodes(opt.contour, grids.config().T);
    const std::size_t K = w.nodes.lambda.size();
    std::size_t cap = std::min<std::size_t>(opt.bulk_node_cap, K);
    w.bulk_begin = (K - cap) / 2;
    w.bulk_count = cap;
    w.tail_begin = K - K / 8;
    const int nt = grids.nt();
    w.E.resize(nt, K);
    for (std::size_t k = 0; k < K; ++k) {
        const Complex step = std::exp(w.nodes.lambda[k] * grids.dt());
        Complex acc = 1.0;
        for (int i = 0; i < nt; ++i) {
            acc *= step;
            w.E(i, k) = acc;
        }
    }
    w.ekt.resize(nt + 1);
    for (int i = 0; i <= nt; ++i) w.ekt[i] = std::exp(params.kappa * grids.t_with0()[i]);
    return w;
}

// Piecewise-linear product integrals of mode data against decaying exponentials.
Complex decay_integral(Complex mu, std::span<const double> y, std::span<const Complex> f) {
    Complex acc{};
    for (std::size_t j = 0; j + 1 < y.size(); ++j) {
        if (mu.real() * y[j] > 40.0) break;
        double h = y[j + 1] - y[j];
        auto M = exp_moments(mu, h);
        Complex a = f[j], b = (f[j + 1] - f[j]) / h;
        acc += std::exp(-mu * y[j]) * (a * M[0] + b * M[1]);
    }
    return acc;
}

// int_0^Y exp(-mu |y_q - s|) f(s) ds with y_q a grid node.
Complex abs_decay_integral(Complex mu, std::span<const double> y, std::span<const Complex> f,
                           std::size_t q) {
    Complex acc{};
    for (std::size_t j = 0; j < q; ++j) {  // s < y_q
        double h = y[j + 1] - y[j];
        double gap = y[q] - y[j];
        if (mu.real() * (gap - h) > 40.0) continue;
        auto M = exp_moments(-mu, h);
        Complex a = f[j], b = (f[j + 1] - f[j]) / h;
        acc += std::exp(-mu * gap) * (a * M[0] + b * M[1]);
    }
    for (std::size_t j = q; j + 1 < y.size(); ++j) {  // s > y_q
        double gap = y[j] - y[q];
        if (mu.real() * gap > 40.0) break;
        double h = y[j + 1] - y[j];
        auto M = exp_moments(mu, h);
        Complex a = f[j], b = (f[j + 1] - f[j]) / h;
        acc += std::exp(-mu * gap) * (a * M[0] + b * M[1]);
    }
    return acc;
}

struct ZeroTraceModeInput {
    std::vector<Complex> g_series, h_series;      // on t_with0
    // Optional analytic transforms; they take precedence over the spline
    // transforms of the series (exact for exponential-sum data).
    std::function<Complex(Complex)> g_transform, h_transform;
    const Array2D<Complex>* f_plus = nullptr;     // (t_with0, y) or null
    const Array2D<Complex>* f_minus = nullptr;
};

/// Exponential-sum form of the per-mode trace extension: rho1(t) =
/// sum coef_i exp(-rate_i t), used for closed-form Laplace transforms.
struct ExtensionSum {
    std::array<Complex, 6> coef{};
    std::array<double, 6> rate{};

    static ExtensionSum from(const TraceExtensionMode& ext) {
        const double a = std::sqrt(ext.A), b = ext.A, c2 = ext.A * ext.A;
        ExtensionSum s;
        s.coef = {4.0 * ext.rho0_hat, -2.0 * ext.rho0_hat, -2.0 * ext.rho0_hat,
                  ext.rho0_hat, ext.eta1_hat / c2, -ext.eta1_hat / c2};
        s.rate = {a + b, a + 2 * b, 2 * a + b, 2 * a + 2 * b, b + c2, b + 2 * c2};
        return s;
    }

    Complex laplace(Complex mu) const {
        Complex acc{};
        for (int i = 0; i < 6; ++i) acc += coef[i] / (mu + rate[i]);
        return acc;
    }
    Complex value0() const {
        Complex acc{};
        for (int i = 0; i < 6; ++i) acc += coef[i];
        return acc;
    }
};

ModeSolution solve_zero_trace_mode(const ZeroTraceModeInput& in, double xi,
                                   const PhysicalParams& params, const Grids& grids,
                                   const SolverOptions& opt, const ContourWork& cw,
                                   double* tail_fraction) {
    const std::size_t K = cw.nodes.lambda.size();
    const int nt = grids.nt();
    const int nyn = grids.ny() + 1;
    const auto y = grids.y();
    const double cp = params.c_plus, cm = params.c_minus;
    const double scp = std::sqrt(cp), scm = std::sqrt(cm);
    const double ap = params.ap(), am = params.am();

    const double scale =
        max_abs(std::span<const Complex>(in.g_series)) +
        max_abs(std::span<const Complex>(in.h_series)) + 1e-300;
    if (std::abs(in.g_series.front()) > opt.tol_zero_trace * scale ||
        std::abs(in.h_series.front()) > opt.tol_zero_trace * scale)
        throw std::invalid_argument("solve_zero_trace: zero-trace condition violated");

    DampedSeriesTransform Gt(grids.t_with0(), in.g_series, params.kappa);
    DampedSeriesTransform Ht(grids.t_with0(), in.h_series, params.kappa);
    auto g_hat = [&](Complex lam) { return in.g_transform ? in.g_transform(lam) : Gt.at(lam); };
    auto h_hat = [&](Complex lam) { return in.h_transform ? in.h_transform(lam) : Ht.at(lam); };

    // Transforms of f(., y) per node, built lazily only when f is present.
    std::vector<DampedSeriesTransform> fpt, fmt;
    if (in.f_plus) {
        std::vector<Complex> series(nt + 1);
        fpt.reserve(nyn);
        fmt.reserve(nyn);
        for (int j = 0; j < nyn; ++j) {
            for (int i = 0; i <= nt; ++i) series[i] = in.f_plus->at(i, j);
            fpt.emplace_back(grids.t_with0(), series, params.kappa);
            for (int i = 0; i <= nt; ++i) series[i] = in.f_minus->at(i, j);
            fmt.emplace_back(grids.t_with0(), series, params.kappa);
        }
    }

    // Scalar symbol columns: rho, (l+k) rho, gamma v, dyv+, dyv-, dyE+, dyE-.
    constexpr int kScalars = 7;
    Eigen::MatrixXcd S(K, kScalars);
    const int nbulk = 4 * nyn;  // v+, v-, rhoE+, rhoE- stacked over y
    Eigen::MatrixXcd QB(cw.bulk_count, nbulk);

    std::vector<Complex> fp_vals(in.f_plus ? nyn : 0), fm_vals(in.f_minus ? nyn : 0);
    for (std::size_t k = 0; k < K; ++k) {
        const Complex lam = cw.nodes.lambda[k];
        const Complex wgt = cw.nodes.weight[k];
        const Complex w = lam + params.kappa;
        const Complex wp = std::sqrt(w + cp * xi * xi);
        const Complex wm = std::sqrt(w + cm * xi * xi);
        const Complex Ssum = scp * wp + scm * wm;
        const Complex B = params.sigma * xi * xi + params.delta * w;
        const Complex msym = w + B * Ssum + ap * scp * wp + am * scm * wm;

        const Complex Gk = Gt.at(lam);
        const Complex Hk = Ht.at(lam);
        Complex Ip{}, Im{};
        if (in.f_plus) {
            for (int j = 0; j < nyn; ++j) {
                fp_vals[j] = fpt[j].at(lam);
                fm_vals[j] = fmt[j].at(lam);
            }
            Ip = decay_integral(wp / scp, y, fp_vals);
            Im = decay_integral(wm / scm, y, fm_vals);
        }
        const Complex eta = (Hk - Ip - Im + Ssum * Gk) / msym;
        const Complex bdry = B * eta - Gk;  // boundary factor of the bulk ansatz

        S(k, 0) = wgt * eta;
        S(k, 1) = wgt * (w * eta);
        S(k, 2) = wgt * (-bdry);
        S(k, 3) = wgt * (Ip / cp + wp / scp * bdry);
        S(k, 4) = wgt * (-Im / cm - wm / scm * bdry);
        S(k, 5) = wgt * (-wp / scp * eta);
        S(k, 6) = wgt * (wm / scm * eta);

        if (k >= cw.bulk_begin && k < cw.bulk_begin + cw.bulk_count) {
            const std::size_t col = k - cw.bulk_begin;
            for (int j = 0; j < nyn; ++j) {
                const Complex dp = std::exp(-wp * y[j] / scp);
                const Complex dm = std::exp(-wm * y[j] / scm);
                Complex Kp{}, Km{};
                if (in.f_plus) {
                    Kp = (abs_decay_integral(wp / scp, y, fp_vals, j) -
                          dp * decay_integral(wp / scp, y, fp_vals)) /
                         (2.0 * wp * scp);
                    Km = (abs_decay_integral(wm / scm, y, fm_vals, j) -
                          dm * decay_integral(wm / scm, y, fm_vals)) /
                         (2.0 * wm * scm);
                }
                QB(col, j) = wgt * (Kp - dp * bdry);
                QB(col, nyn + j) = wgt * (Km - dm * bdry);
                QB(col, 2 * nyn + j) = wgt * (dp * eta);
                QB(col, 3 * nyn + j) = wgt * (dm * eta);
            }
        }
    }

    Eigen::MatrixXcd RS = cw.E * S;  // (nt, scalars)
    Eigen::MatrixXcd RB =
        cw.E.middleCols(cw.bulk_begin, cw.bulk_count) * QB;  // (nt, bulk)

    if (tail_fraction) {
        // Share of rho(T) carried by the outermost nodes; flags poor decay.
        Complex tail{};
        for (std::size_t k = cw.tail_begin; k < K; ++k) tail += cw.E(nt - 1, k) * S(k, 0);
        Complex conj_tail{};
        for (std::size_t k = 0; k < K - cw.tail_begin; ++k)
            conj_tail += cw.E(nt - 1, k) * S(k, 0);
        double denom = std::abs(RS(nt - 1, 0)) + 1e-300;
        *tail_fraction = std::max(*tail_fraction,
                                  (std::abs(tail) + std::abs(conj_tail)) / denom);
    }

    ModeSolution sol = zero_mode_solution(grids);
    for (int i = 1; i <= nt; ++i) {
        const double e = cw.ekt[i];
        const int r = i - 1;
        sol.rho[i] = e * RS(r, 0);
        sol.rho_t[i] = e * RS(r, 1);
        sol.dyv_plus[i] = e * RS(r, 3);
        sol.dyv_minus[i] = e * RS(r, 4);
        sol.dyE_plus[i] = e * RS(r, 5);
        sol.dyE_minus[i] = e * RS(r, 6);
        for (int j = 0; j < nyn; ++j) {
            sol.v_plus.at(i, j) = e * RB(r, j);
            sol.v_minus.at(i, j) = e * RB(r, nyn + j);
            sol.rhoE_plus.at(i, j) = e * RB(r, 2 * nyn + j);
            sol.rhoE_minus.at(i, j) = e * RB(r, 3 * nyn + j);
        }
        // The interface rows carry the full-node-set values: the traces are
        // exact in the transform algebra, and gamma rho_E = rho by formula.
        sol.v_plus.at(i, 0) = e * RS(r, 2);
        sol.v_minus.at(i, 0) = e * RS(r, 2);
        sol.rhoE_plus.at(i, 0) = sol.rho[i];
        sol.rhoE_minus.at(i, 0) = sol.rho[i];
    }
    return sol;
}

std::vector<Complex> mode_series(const RealField& u, int m) {
    std::vector<Complex> out(u.rows);
    for (std::size_t i = 0; i < u.rows; ++i) out[i] = forward_tangential(u.row(i))[m];
    return out;
}

void check_y_truncation(const DataTuple& data, const SolverOptions& opt,
                        SpectralDiagnostics* diag) {
    if (!diag) return;
    diag->y_truncation_ok = true;
    auto outer_mass = [&](const Array2D<double>& s) {
        double inner = 0.0, outer = 0.0;
        std::size_t cut = s.cols - s.cols / 10 - 1;
        for (std::size_t j = 0; j < s.rows; ++j)
            for (std::size_t k = 0; k < s.cols; ++k)
                (k >= cut ? outer : inner) = std::max(k >= cut ? outer : inner,
                                                      std::abs(s.at(j, k)));
        return std::pair{inner, outer};
    };
    if (!data.v0.empty()) {
        auto [ip, op_] = outer_mass(data.v0.plus);
        auto [im, om] = outer_mass(data.v0.minus);
        double inner = std::max(ip, im), outer = std::max(op_, om);
        if (outer > opt.y_truncation_tol * (inner + 1e-300)) diag->y_truncation_ok = false;
    }
}

}  // namespace

BulkField solve_auxiliary_v1(const DataTuple& data, std::span<const double> zeta,
                             const PhysicalParams& params, const Grids& grids) {
    const int nx = grids.nx();
    auto zeta_modes = forward_tangential(zeta);
    std::vector<detail::HeatModeResult> rp(nx), rm(nx);
    std::vector<char> done(nx, 0);
    std::vector<std::size_t> todo;
    for (int m = 0; m <= nx / 2; ++m) todo.push_back(m);
    parallel_for(todo.size(), [&](std::size_t idx) {
        int m = static_cast<int>(todo[idx]);
        ModeData md = mode_data_from(data, m, grids);
        const double A = 1.0 + grids.xi()[m] * grids.xi()[m];
        const Complex z = zeta_modes[m];
        auto dirichlet = [&, z, A](double t) { return md.g(t) + std::exp(-A * t) * z; };
        auto fp = md.f ? std::function<Complex(double, int)>(
                             [&md](double t, int j) { return md.f(t, j, +1); })
                       : std::function<Complex(double, int)>();
        auto fm = md.f ? std::function<Complex(double, int)>(
                             [&md](double t, int j) { return md.f(t, j, -1); })
                       : std::function<Complex(double, int)>();
        std::vector<Complex> zp(grids.ny() + 1, Complex{}), zm(grids.ny() + 1, Complex{});
        const auto& v0p = md.v0_plus.empty() ? zp : md.v0_plus;
        const auto& v0m = md.v0_minus.empty() ? zm : md.v0_minus;
        rp[m] = detail::heat_mode_solve(params.c_plus, grids.xi()[m], grids, v0p, dirichlet, fp);
        rm[m] = detail::heat_mode_solve(params.c_minus, grids.xi()[m], grids, v0m, dirichlet, fm);
        done[m] = 1;
    });

    const std::size_t nt1 = grids.t_with0().size();
    const int nyn = grids.ny() + 1;
    BulkField out(nt1, nx, nyn);
    std::vector<Complex> buf(nx);
    for (std::size_t i = 0; i < nt1; ++i) {
        for (int j = 0; j < nyn; ++j) {
            for (int m = 0; m < nx; ++m)
                buf[m] = done[m] ? rp[m].u.at(i, j) : std::conj(rp[(nx - m) % nx].u.at(i, j));
            auto vp = inverse_tangential_real(buf);
            for (int m = 0; m < nx; ++m)
                buf[m] = done[m] ? rm[m].u.at(i, j) : std::conj(rm[(nx - m) % nx].u.at(i, j));
            auto vm = inverse_tangential_real(buf);
            for (int jx = 0; jx < nx; ++jx) {
                out.plus.at(i, jx, j) = vp[jx];
                out.minus.at(i, jx, j) = vm[jx];
            }
        }
    }
    return out;
}

BulkField solve_rho_E(const RealField& rho, std::span<const double> rho0,
                      const PhysicalParams& params, const Grids& grids) {
    const int nx = grids.nx();
    auto rho0_modes = forward_tangential(rho0);
    // Precondition: rho(0) = rho0.
    double scale = 1.0 + max_abs(rho0);
    for (int j = 0; j < nx; ++j)
        if (std::abs(rho.at(0, j) - rho0[j]) > 1e-8 * scale)
            throw std::invalid_argument("solve_rho_E: rho(0) != rho0");

    std::vector<detail::HeatModeResult> rp(nx), rm(nx);
    std::vector<char> done(nx, 0);
    std::vector<std::size_t> todo;
    for (int m = 0; m <= nx / 2; ++m) todo.push_back(m);
    std::vector<double> tnodes(grids.t_with0().begin(), grids.t_with0().end());
    parallel_for(todo.size(), [&](std::size_t idx) {
        int m = static_cast<int>(todo[idx]);
        auto series = mode_series(rho, m);
        auto sp = std::make_shared<CubicSpline>(tnodes, series);
        auto dirichlet = [sp](double t) { return (*sp)(t); };
        const double q = std::sqrt(1.0 + grids.xi()[m] * grids.xi()[m]);
        std::vector<Complex> init(grids.ny() + 1);
        for (int j = 0; j <= grids.ny(); ++j)
            init[j] = std::exp(-q * grids.y()[j]) * rho0_modes[m];
        rp[m] = detail::heat_mode_solve(params.c_plus, grids.xi()[m], grids, init, dirichlet, {});
        rm[m] = detail::heat_mode_solve(params.c_minus, grids.xi()[m], grids, init, dirichlet, {});
        done[m] = 1;
    });

    const std::size_t nt1 = grids.t_with0().size();
    const int nyn = grids.ny() + 1;
    BulkField out(nt1, nx, nyn);
    std::vector<Complex> buf(nx);
    for (std::size_t i = 0; i < nt1; ++i) {
        for (int j = 0; j < nyn; ++j) {
            for (int m = 0; m < nx; ++m)
                buf[m] = done[m] ? rp[m].u.at(i, j) : std::conj(rp[(nx - m) % nx].u.at(i, j));
            auto vp = inverse_tangential_real(buf);
            for (int m = 0; m < nx; ++m)
                buf[m] = done[m] ? rm[m].u.at(i, j) : std::conj(rm[(nx - m) % nx].u.at(i, j));
            auto vm = inverse_tangential_real(buf);
            for (int jx = 0; jx < nx; ++jx) {
                out.plus.at(i, jx, j) = vp[jx];
                out.minus.at(i, jx, j) = vm[jx];
            }
        }
    }
    return out;
}

SolutionTriple solve_zero_trace(const DataTuple& data, const PhysicalParams& params,
                                const Grids& grids, const SolverOptions& options,
                                SpectralDiagnostics* diag) {
    const int nx = grids.nx();
    const double data_scale =
        max_abs(std::span<const double>(data.g.v)) + max_abs(std::span<const double>(data.h.v)) +
        1e-300;
    if (max_abs(data.g.row(0)) > options.tol_zero_trace * data_scale ||
        max_abs(data.h.row(0)) > options.tol_zero_trace * data_scale)
        throw std::invalid_argument("solve_zero_trace: g(0) or h(0) not zero");
    if (!data.rho0.empty() && max_abs(std::span<const double>(data.rho0)) > 0.0)
        throw std::invalid_argument("solve_zero_trace: rho0 must vanish");
    if (!data.v0.empty() &&
        (max_abs(std::span<const double>(data.v0.plus.v)) > 0.0 ||
         max_abs(std::span<const double>(data.v0.minus.v)) > 0.0))
        throw std::invalid_argument("solve_zero_trace: v0 must vanish");
    check_y_truncation(data, options, diag);

    const ContourWork cw = make_contour_work(options, params, grids);

    const bool with_f = !data.f.empty();
    const std::size_t nt1 = grids.t_with0().size();
    const int nyn = grids.ny() + 1;

    std::vector<ModeSolution> modes(nx);
    std::vector<char> solved(nx, 0);
    std::vector<double> tails(nx, 0.0);
    std::vector<std::size_t> todo;
    for (int m = 0; m <= nx / 2; ++m) todo.push_back(m);

    parallel_for(todo.size(), [&](std::size_t idx) {
        int m = static_cast<int>(todo[idx]);
        ZeroTraceModeInput in;
        in.g_series = mode_series(data.g, m);
        in.h_series = mode_series(data.h, m);
        Array2D<Complex> fp, fm;
        if (with_f) {
            fp = Array2D<Complex>(nt1, nyn);
            fm = Array2D<Complex>(nt1, nyn);
            std::vector<double> col(nx);
            for (std::size_t i = 0; i < nt1; ++i) {
                for (int j = 0; j < nyn; ++j) {
                    for (int jx = 0; jx < nx; ++jx) col[jx] = data.f.plus.at(i, jx, j);
                    fp.at(i, j) = forward_tangential(std::span<const double>(col))[m];
                    for (int jx = 0; jx < nx; ++jx) col[jx] = data.f.minus.at(i, jx, j);
                    fm.at(i, j) = forward_tangential(std::span<const double>(col))[m];
                }
            }
            in.f_plus = &fp;
            in.f_minus = &fm;
        }
        double scale = max_abs(std::span<const Complex>(in.g_series)) +
                       max_abs(std::span<const Complex>(in.h_series));
        if (with_f)
            scale += max_abs(std::span<const Complex>(fp.v)) +
                     max_abs(std::span<const Complex>(fm.v));
        if (scale < 1e-14) {
            modes[m] = zero_mode_solution(grids);
        } else {
            modes[m] = solve_zero_trace_mode(in, grids.xi()[m], params, grids, options, cw,
                                             &tails[m]);
        }
        solved[m] = 1;
    });

    if (diag) {
        for (double t : tails)
            diag->contour_tail_fraction = std::max(diag->contour_tail_fraction, t);
    }
    return assemble_mode_solutions(modes, solved, grids);
}

std::pair<SolutionTriple, ReductionBundle> solve_full(const DataTuple& data,
                                                      const PhysicalParams& params,
                                                      const Grids& grids,
                                                      const SolverOptions& options,
                                                      SpectralDiagnostics* diag) {
    const int nx = grids.nx();
    const std::size_t nt1 = grids.t_with0().size();
    const int nyn = grids.ny() + 1;
    const auto y = grids.y();
    const double cp = params.c_plus, cm = params.c_minus;
    const double ap = params.ap(), am = params.am();

    // Compatibility gate.
    const auto q_modes = abc_second_trace_modes(data, params, grids);
    {
        auto rho0_modes = forward_tangential(std::span<const double>(data.rho0));
        std::vector<Complex> res_modes(nx);
        auto gv0_modes = forward_tangential(std::span<const double>(data.v0_traces.value_plus));
        auto g0_modes = forward_tangential(data.g.row(0));
        for (int m = 0; m < nx; ++m) {
            double xi = grids.xi()[m];
            res_modes[m] = gv0_modes[m] + params.sigma * xi * xi * rho0_modes[m] +
                           params.delta * q_modes[m] - g0_modes[m];
        }
        auto res = inverse_tangential_real(res_modes);
        double scale = 1.0 + max_abs(data.g.row(0));
        if (max_abs(std::span<const double>(res)) > options.tol_compat * scale)
            throw std::invalid_argument("solve_full: compatibility condition violated");
    }
    check_y_truncation(data, options, diag);

    const ContourWork cw = make_contour_work(options, params, grids);
    auto rho0_modes = forward_tangential(std::span<const double>(data.rho0));
    auto gv0_modes = forward_tangential(std::span<const double>(data.v0_traces.value_plus));
    auto dyv0p_modes = forward_tangential(std::span<const double>(data.v0_traces.dy_plus));
    auto dyv0m_modes = forward_tangential(std::span<const double>(data.v0_traces.dy_minus));

    std::vector<ModeSolution> modes(nx);
    std::vector<char> solved(nx, 0);
    std::vector<double> tails(nx, 0.0);

    // Reduction bundle mode series, assembled to x space afterwards.
    std::vector<Complex> zeta_modes(nx, Complex{});
    std::vector<std::vector<Complex>> rho1_m(nx), rho1t_m(nx), gred_m(nx), hred_m(nx);
    std::vector<detail::HeatModeResult> v1p_m(nx), v1m_m(nx), e1p_m(nx), e1m_m(nx);
    double g0_res = 0.0, h0_res = 0.0;

    std::vector<std::size_t> todo;
    for (int m = 0; m <= nx / 2; ++m) todo.push_back(m);

    parallel_for(todo.size(), [&](std::size_t idx) {
        int m = static_cast<int>(todo[idx]);
        const double xi = grids.xi()[m];
        const double A = 1.0 + xi * xi;
        ModeData md = mode_data_from(data, m, grids);
        auto g_series = mode_series(data.g, m);
        auto h_series = mode_series(data.h, m);

        const Complex zeta = gv0_modes[m] - g_series[0];
        zeta_modes[m] = zeta;
        const TraceExtensionMode ext = extend_traces_mode(rho0_modes[m], q_modes[m], xi);

        double scale = std::abs(rho0_modes[m]) + std::abs(gv0_modes[m]) +
                       max_abs(std::span<const Complex>(g_series)) +
                       max_abs(std::span<const Complex>(h_series)) +
                       max_abs(md.v0_plus) + max_abs(md.v0_minus) + (md.f ? 1.0 : 0.0);
        if (scale < 1e-14) {
            modes[m] = zero_mode_solution(grids);
            rho1_m[m].assign(nt1, Complex{});
            rho1t_m[m].assign(nt1, Complex{});
            gred_m[m].assign(nt1, Complex{});
            hred_m[m].assign(nt1, Complex{});
            v1p_m[m].u = Array2D<Complex>(nt1, nyn);
            v1m_m[m].u = Array2D<Complex>(nt1, nyn);
            e1p_m[m].u = Array2D<Complex>(nt1, nyn);
            e1m_m[m].u = Array2D<Complex>(nt1, nyn);
            v1p_m[m].dy_stencil.assign(nt1, Complex{});
            v1m_m[m].dy_stencil.assign(nt1, Complex{});
            e1p_m[m].dy_stencil.assign(nt1, Complex{});
            e1m_m[m].dy_stencil.assign(nt1, Complex{});
            solved[m] = 1;
            return;
        }

        // Stage 1: auxiliary diffusion with the decaying boundary correction.
        auto dirichlet = [&md, zeta, A](double t) { return md.g(t) + std::exp(-A * t) * zeta; };
        auto fp = md.f ? std::function<Complex(double, int)>(
                             [&md](double t, int j) { return md.f(t, j, +1); })
                       : std::function<Complex(double, int)>();
        auto fm = md.f ? std::function<Complex(double, int)>(
                             [&md](double t, int j) { return md.f(t, j, -1); })
                       : std::function<Complex(double, int)>();
        std::vector<Complex> zp(nyn, Complex{});
        const auto& v0p = md.v0_plus.empty() ? zp : md.v0_plus;
        const auto& v0m = md.v0_minus.empty() ? zp : md.v0_minus;
        v1p_m[m] = detail::heat_mode_solve(cp, xi, grids, v0p, dirichlet, fp);
        v1m_m[m] = detail::heat_mode_solve(cm, xi, grids, v0m, dirichlet, fm);

        std::vector<Complex> init(nyn);
        const double q = std::sqrt(A);
        for (int j = 0; j < nyn; ++j) init[j] = std::exp(-q * y[j]) * rho0_modes[m];
        auto rho1_dirichlet = [&ext](double t) { return ext.value(t); };
        e1p_m[m] = detail::heat_mode_solve(cp, xi, grids, init, rho1_dirichlet, {});
        e1m_m[m] = detail::heat_mode_solve(cm, xi, grids, init, rho1_dirichlet, {});

        // Stage 2: reduced zero-trace data. The four derivative-trace series
        // are anchored to their analytic t=0 values (the stencil error of the
        // initial slice), which makes the reduced h vanish exactly at the
        // origin and keeps the assembled traces consistent with it.
        const double sqA = std::sqrt(A);
        const Complex anchor_vp = dyv0p_modes[m] - v1p_m[m].dy_stencil[0];
        const Complex anchor_vm = -dyv0m_modes[m] - v1m_m[m].dy_stencil[0];
        const Complex anchor_ep = -sqA * rho0_modes[m] - e1p_m[m].dy_stencil[0];
        const Complex anchor_em = -sqA * rho0_modes[m] - e1m_m[m].dy_stencil[0];
        for (auto& v : v1p_m[m].dy_stencil) v += anchor_vp;
        for (auto& v : v1m_m[m].dy_stencil) v += anchor_vm;
        for (auto& v : e1p_m[m].dy_stencil) v += anchor_ep;
        for (auto& v : e1m_m[m].dy_stencil) v += anchor_em;

        rho1_m[m].resize(nt1);
        rho1t_m[m].resize(nt1);
        gred_m[m].resize(nt1);
        hred_m[m].resize(nt1);
        for (std::size_t i = 0; i < nt1; ++i) {
            const double t = grids.t_with0()[i];
            const Complex J = cp * v1p_m[m].dy_stencil[i] + cm * v1m_m[m].dy_stencil[i] -
                              cp * ap * e1p_m[m].dy_stencil[i] -
                              cm * am * e1m_m[m].dy_stencil[i];
            rho1_m[m][i] = ext.value(t);
            rho1t_m[m][i] = ext.derivative(t);
            gred_m[m][i] = -params.sigma * xi * xi * rho1_m[m][i] -
                           params.delta * rho1t_m[m][i] - std::exp(-A * t) * zeta;
            hred_m[m][i] = h_series[i] - rho1t_m[m][i] - J;
        }

        ZeroTraceModeInput in;
        in.g_series = gred_m[m];
        in.h_series = hred_m[m];
        ModeSolution stage2 =
            solve_zero_trace_mode(in, xi, params, grids, options, cw, &tails[m]);

        // Sum of the two stages; traces of stage 1 come from its stencils with
        // the physical sign on the minus side.
        ModeSolution total = zero_mode_solution(grids);
        for (std::size_t i = 0; i < nt1; ++i) {
            for (int j = 0; j < nyn; ++j) {
                total.v_plus.at(i, j) = v1p_m[m].u.at(i, j) + stage2.v_plus.at(i, j);
                total.v_minus.at(i, j) = v1m_m[m].u.at(i, j) + stage2.v_minus.at(i, j);
                total.rhoE_plus.at(i, j) = e1p_m[m].u.at(i, j) + stage2.rhoE_plus.at(i, j);
                total.rhoE_minus.at(i, j) = e1m_m[m].u.at(i, j) + stage2.rhoE_minus.at(i, j);
            }
            total.rho[i] = rho1_m[m][i] + stage2.rho[i];
            total.rho_t[i] = rho1t_m[m][i] + stage2.rho_t[i];
            total.dyv_plus[i] = v1p_m[m].dy_stencil[i] + stage2.dyv_plus[i];
            total.dyv_minus[i] = -v1m_m[m].dy_stencil[i] + stage2.dyv_minus[i];
            total.dyE_plus[i] = e1p_m[m].dy_stencil[i] + stage2.dyE_plus[i];
            total.dyE_minus[i] = -e1m_m[m].dy_stencil[i] + stage2.dyE_minus[i];
        }
        modes[m] = std::move(total);
        solved[m] = 1;
    });

    for (int m = 0; m <= nx / 2; ++m) {
        if (!gred_m[m].empty()) {
            g0_res = std::max(g0_res, std::abs(gred_m[m][0]));
            h0_res = std::max(h0_res, std::abs(hred_m[m][0]));
        }
    }

    SolutionTriple sol = assemble_mode_solutions(modes, solved, grids);

    ReductionBundle bundle;
    bundle.g0_residual = g0_res;
    bundle.h0_residual = h0_res;
    {
        std::vector<Complex> buf(nx);
        auto pick_mirror = [&](int m, auto&& get) {
            return solved[m] ? get(m) : std::conj(get((nx - m) % nx));
        };
        for (int m = 0; m < nx; ++m)
            buf[m] = pick_mirror(m, [&](int mm) { return zeta_modes[mm]; });
        bundle.zeta = inverse_tangential_real(buf);
        bundle.rho1 = RealField(nt1, nx);
        bundle.rho1_t = RealField(nt1, nx);
        bundle.reduced_g = RealField(nt1, nx);
        bundle.reduced_h = RealField(nt1, nx);
        for (std::size_t i = 0; i < nt1; ++i) {
            auto fill = [&](const std::vector<std::vector<Complex>>& src, RealField& dst) {
                for (int m = 0; m < nx; ++m)
                    buf[m] = pick_mirror(m, [&](int mm) { return src[mm][i]; });
                auto vals = inverse_tangential_real(buf);
                for (int j = 0; j < nx; ++j) dst.at(i, j) = vals[j];
            };
            fill(rho1_m, bundle.rho1);
            fill(rho1t_m, bundle.rho1_t);
            fill(gred_m, bundle.reduced_g);
            fill(hred_m, bundle.reduced_h);
        }
        bundle.v1 = BulkField(nt1, nx, nyn);
        bundle.rho1_E = BulkField(nt1, nx, nyn);
        for (std::size_t i = 0; i < nt1; ++i) {
            for (int j = 0; j < nyn; ++j) {
                for (int m = 0; m < nx; ++m)
                    buf[m] = pick_mirror(m, [&](int mm) { return v1p_m[mm].u.at(i, j); });
                auto a = inverse_tangential_real(buf);
                for (int m = 0; m < nx; ++m)
                    buf[m] = pick_mirror(m, [&](int mm) { return v1m_m[mm].u.at(i, j); });
                auto b = inverse_tangential_real(buf);
                for (int m = 0; m < nx; ++m)
                    buf[m] = pick_mirror(m, [&](int mm) { return e1p_m[mm].u.at(i, j); });
                auto c = inverse_tangential_real(buf);
                for (int m = 0; m < nx; ++m)
                    buf[m] = pick_mirror(m, [&](int mm) { return e1m_m[mm].u.at(i, j); });
                auto d = inverse_tangential_real(buf);
                for (int jx = 0; jx < nx; ++jx) {
                    bundle.v1.plus.at(i, jx, j) = a[jx];
                    bundle.v1.minus.at(i, jx, j) = b[jx];
                    bundle.rho1_E.plus.at(i, jx, j) = c[jx];
                    bundle.rho1_E.minus.at(i, jx, j) = d[jx];
                }
            }
        }
    }

    if (diag) {
        for (double t : tails)
            diag->contour_tail_fraction = std::max(diag->contour_tail_fraction, t);
    }
    return {std::move(sol), std::move(bundle)};
}

}  // namespace stefan
