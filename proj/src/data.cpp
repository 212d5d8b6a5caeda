#include "stefan/data.hpp"

#include <cmath>
#include <stdexcept>

#include "stefan/fourier.hpp"
#include "stefan/norms.hpp"

namespace stefan {

InterfaceTraces slice_traces(const BulkSlice& w, const Grids& grids) {
    const auto y = grids.y();
    const double h1 = y[1] - y[0], h2 = y[2] - y[1];
    const OneSidedD1 s = one_sided_d1(h1, h2);
    const int nx = grids.nx();
    InterfaceTraces tr;
    tr.value_plus.resize(nx);
    tr.value_minus.resize(nx);
    tr.dy_plus.resize(nx);
    tr.dy_minus.resize(nx);
    for (int j = 0; j < nx; ++j) {
        tr.value_plus[j] = w.plus.at(j, 0);
        tr.value_minus[j] = w.minus.at(j, 0);
        tr.dy_plus[j] = s.c0 * w.plus.at(j, 0) + s.c1 * w.plus.at(j, 1) + s.c2 * w.plus.at(j, 2);
        // The minus half stores values against |y|; d/dy at 0- flips the sign.
        tr.dy_minus[j] =
            -(s.c0 * w.minus.at(j, 0) + s.c1 * w.minus.at(j, 1) + s.c2 * w.minus.at(j, 2));
    }
    return tr;
}

std::vector<double> jump_trace_from(const InterfaceTraces& tr, const PhysicalParams& params) {
    std::vector<double> out(tr.dy_plus.size());
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = params.c_plus * tr.dy_plus[j] - params.c_minus * tr.dy_minus[j];
    return out;
}

std::vector<double> jump_trace_slice(const BulkSlice& w, const PhysicalParams& params,
                                     const Grids& grids) {
    return jump_trace_from(slice_traces(w, grids), params);
}

JumpTrace jump_trace(const BulkField& w, const PhysicalParams& params, const Grids& grids) {
    const std::size_t nt = w.plus.n0;
    const int nx = grids.nx();
    JumpTrace out;
    out.value = RealField(nt, nx);
    const auto y = grids.y();
    const OneSidedD1 s = one_sided_d1(y[1] - y[0], y[2] - y[1]);
    for (std::size_t i = 0; i < nt; ++i) {
        for (int j = 0; j < nx; ++j) {
            double dp = s.c0 * w.plus.at(i, j, 0) + s.c1 * w.plus.at(i, j, 1) +
                        s.c2 * w.plus.at(i, j, 2);
            double dm = -(s.c0 * w.minus.at(i, j, 0) + s.c1 * w.minus.at(i, j, 1) +
                          s.c2 * w.minus.at(i, j, 2));
            out.value.at(i, j) = params.c_plus * dp - params.c_minus * dm;
        }
    }
    return out;
}

ResidualReport interface_residuals(const SolutionTriple& sol, const DataTuple& data,
                                   const PhysicalParams& params, const Grids& grids) {
    const int nx = grids.nx();
    const std::size_t nt1 = grids.t_with0().size();
    ResidualReport rep;
    const double ap = params.ap(), am = params.am();
    for (std::size_t i = 1; i < nt1; ++i) {
        // sigma Dxx rho per mode, back to x space.
        auto rho_modes = forward_tangential(sol.rho.row(i));
        for (int m = 0; m < nx; ++m) rho_modes[m] *= -grids.xi()[m] * grids.xi()[m];
        auto lap_rho = inverse_tangential_real(rho_modes);
        for (int j = 0; j < nx; ++j) {
            double common = -params.sigma * lap_rho[j] + params.delta * sol.rho_t.at(i, j) -
                            data.g.at(i, j);
            rep.interface_eq_max = std::max(
                rep.interface_eq_max, std::abs(sol.gamma_v_plus.at(i, j) + common));
            rep.interface_eq_max = std::max(
                rep.interface_eq_max, std::abs(sol.gamma_v_minus.at(i, j) + common));
            double jump = params.c_plus * (sol.dy_v_plus.at(i, j) - ap * sol.dy_rhoE_plus.at(i, j)) -
                          params.c_minus * (sol.dy_v_minus.at(i, j) - am * sol.dy_rhoE_minus.at(i, j));
            rep.stefan_eq_max = std::max(
                rep.stefan_eq_max, std::abs(sol.rho_t.at(i, j) + jump - data.h.at(i, j)));
        }
    }
    return rep;
}

std::vector<Complex> abc_second_trace_modes(const DataTuple& data, const PhysicalParams& params,
                                            const Grids& grids) {
    const auto h0_modes = forward_tangential(data.h.row(0));
    const auto jump = jump_trace_from(data.v0_traces, params);
    const auto jump_modes = forward_tangential(std::span<const double>(jump));
    const auto rho0_modes = forward_tangential(std::span<const double>(data.rho0));
    const double ca = params.c_plus * params.ap() + params.c_minus * params.am();
    std::vector<Complex> q(grids.nx());
    for (int m = 0; m < grids.nx(); ++m) {
        double xi = grids.xi()[m];
        q[m] = h0_modes[m] - jump_modes[m] - ca * std::sqrt(1.0 + xi * xi) * rho0_modes[m];
    }
    return q;
}

CompatibleData make_compatible_data(const PhysicalParams& params, const Grids& grids,
                                    const DataSeeds& seeds) {
    const int nx = grids.nx();
    const std::size_t nt1 = grids.t_with0().size();
    if (seeds.g_free.rows != nt1 || seeds.h.rows != nt1)
        throw std::invalid_argument("make_compatible_data: seed fields must live on t_with0 x x");
    double scale = 1.0 + max_abs(std::span<const double>(seeds.g_free.v));
    if (max_abs(seeds.g_free.row(0)) > 1e-12 * scale)
        throw std::invalid_argument("make_compatible_data: g_free(0,.) must vanish");

    DataTuple data;
    data.f = seeds.f;
    data.h = seeds.h;
    data.v0 = seeds.v0.empty() ? BulkSlice(nx, grids.ny() + 1) : seeds.v0;
    data.v0_traces = seeds.v0_traces ? *seeds.v0_traces : slice_traces(data.v0, grids);
    data.rho0 = seeds.rho0.empty() ? std::vector<double>(nx, 0.0) : seeds.rho0;

    double v0_scale = 1.0 + max_abs(std::span<const double>(data.v0_traces.value_plus));
    for (int j = 0; j < nx; ++j) {
        if (std::abs(data.v0_traces.value_plus[j] - data.v0_traces.value_minus[j]) >
            1e-10 * v0_scale)
            throw std::invalid_argument(
                "make_compatible_data: incompatible seed, gamma v0+ != gamma v0-");
    }

    const auto q_modes = abc_second_trace_modes(data, params, grids);
    const auto gv0_modes =
        forward_tangential(std::span<const double>(data.v0_traces.value_plus));
    const auto rho0_modes = forward_tangential(std::span<const double>(data.rho0));
    std::vector<Complex> G0_modes(nx);
    for (int m = 0; m < nx; ++m) {
        double xi = grids.xi()[m];
        G0_modes[m] = gv0_modes[m] + params.sigma * xi * xi * rho0_modes[m] +
                      params.delta * q_modes[m];
    }
    const auto G0 = inverse_tangential_real(G0_modes);

    data.g = RealField(nt1, nx);
    for (std::size_t i = 0; i < nt1; ++i) {
        double decay = std::exp(-grids.t_with0()[i]);
        for (int j = 0; j < nx; ++j)
            data.g.at(i, j) = seeds.g_free.at(i, j) + decay * G0[j];
    }

    CompatibleData out;
    out.data = std::move(data);

    // Discretized compatibility residual at t=0, recomputed term by term.
    const auto q_x = inverse_tangential_real(q_modes);
    std::vector<Complex> lap_modes(nx);
    for (int m = 0; m < nx; ++m) {
        double xi = grids.xi()[m];
        lap_modes[m] = -xi * xi * rho0_modes[m];
    }
    const auto lap_rho0 = inverse_tangential_real(lap_modes);
    double res = 0.0;
    for (int j = 0; j < nx; ++j) {
        double r = out.data.v0_traces.value_plus[j] - params.sigma * lap_rho0[j] +
                   params.delta * q_x[j] - out.data.g.at(0, j);
        res = std::max(res, std::abs(r));
    }
    out.report.residual_max = res;

    if (params.delta == 0.0) {
        const auto jump = jump_trace_from(out.data.v0_traces, params);
        std::vector<double> w(nx);
        for (int j = 0; j < nx; ++j)
            w[j] = params.sigma * (out.data.h.at(0, j) - jump[j]);
        out.report.w_norm_c = torus_space_norm(w, grids, 2.0 - 6.0 / params.p, params.p);
        out.report.w_norm_evaluated = true;
    }
    return out;
}

namespace {

struct FamilyShape {
    double h1 = 0.0, h2 = 0.0;        // h mode amplitudes (cos k=1, sin k=2)
    double gf1 = 0.0, gf2 = 0.0;      // g_free amplitudes
    double v0_amp = 0.0;              // v0 = v0_amp (cos + 0.3) psi±(y)
    double r1 = 0.0, r2 = 0.0;        // rho0 amplitudes
};

DataSeeds build_family(const FamilyShape& fs, const Grids& grids) {
    const int nx = grids.nx();
    const std::size_t nt1 = grids.t_with0().size();
    const double w1 = 2.0 * kPi / grids.config().L_x;
    const double bp = 1.0, bm = 0.5;

    DataSeeds seeds;
    seeds.h = RealField(nt1, nx);
    seeds.g_free = RealField(nt1, nx);
    for (std::size_t i = 0; i < nt1; ++i) {
        double t = grids.t_with0()[i];
        double pulse = t * std::exp(-t);
        for (int j = 0; j < nx; ++j) {
            double x = grids.x()[j];
            seeds.h.at(i, j) = pulse * (fs.h1 * std::cos(w1 * x) + fs.h2 * std::sin(2.0 * w1 * x));
            seeds.g_free.at(i, j) =
                pulse * (fs.gf1 * std::cos(w1 * x) - fs.gf2 * std::sin(2.0 * w1 * x));
        }
    }
    if (fs.v0_amp != 0.0) {
        seeds.v0 = BulkSlice(nx, grids.ny() + 1);
        InterfaceTraces tr;
        tr.analytic = true;
        tr.value_plus.resize(nx);
        tr.value_minus.resize(nx);
        tr.dy_plus.resize(nx);
        tr.dy_minus.resize(nx);
        for (int j = 0; j < nx; ++j) {
            double phi = fs.v0_amp * (std::cos(w1 * grids.x()[j]) + 0.3);
            for (int k = 0; k <= grids.ny(); ++k) {
                double y = grids.y()[k];
                seeds.v0.plus.at(j, k) = phi * std::exp(-bp * y - 0.5 * y * y);
                seeds.v0.minus.at(j, k) = phi * std::exp(-bm * y - 0.5 * y * y);
            }
            tr.value_plus[j] = phi;
            tr.value_minus[j] = phi;
            tr.dy_plus[j] = -bp * phi;
            tr.dy_minus[j] = bm * phi;  // d/dy of exp(+bm y - y^2/2) at 0-
        }
        seeds.v0_traces = tr;
    }
    seeds.rho0.assign(nx, 0.0);
    for (int j = 0; j < nx; ++j) {
        double x = grids.x()[j];
        seeds.rho0[j] = fs.r1 * std::cos(w1 * x) + fs.r2 * std::sin(2.0 * w1 * x);
    }
    return seeds;
}

}  // namespace

DataSeeds make_seed_family(const std::string& name, const Grids& grids) {
    FamilyShape fs;
    if (name == "zero") {
        // all zero
    } else if (name == "single_mode") {
        fs.h1 = 1.0;
    } else if (name == "two_mode") {
        fs.h1 = 1.0;
        fs.h2 = 0.4;
        fs.gf1 = 0.5;
        fs.gf2 = 0.3;
        fs.v0_amp = 0.8;
        fs.r1 = 0.6;
        fs.r2 = 0.3;
    } else if (name == "zero_trace_two_mode") {
        fs.h1 = 1.0;
        fs.h2 = 0.4;
        fs.gf1 = 0.5;
        fs.gf2 = 0.3;
    } else {
        throw std::invalid_argument("unknown seed family: " + name);
    }
    return build_family(fs, grids);
}

}  // namespace stefan
