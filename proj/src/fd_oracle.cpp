#include "stefan/fd_oracle.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "stefan/detail/cn_blocks.hpp"
#include "stefan/fourier.hpp"

namespace stefan {

using detail::apply_operator;
using detail::build_operator;
using detail::CNFactor;
using detail::Operator;

namespace {

Complex solve3(const Complex A[3][3], const Complex b[3], Complex out[3]) {
    // Gaussian elimination with partial pivoting on a 3x3 system.
    Complex M[3][4];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) M[i][j] = A[i][j];
        M[i][3] = b[i];
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
        if (piv != col)
            for (int j = 0; j < 4; ++j) std::swap(M[col][j], M[piv][j]);
        for (int r = col + 1; r < 3; ++r) {
            Complex f = M[r][col] / M[col][col];
            for (int j = col; j < 4; ++j) M[r][j] -= f * M[col][j];
        }
    }
    for (int r = 2; r >= 0; --r) {
        Complex acc = M[r][3];
        for (int j = r + 1; j < 3; ++j) acc -= M[r][j] * out[j];
        out[r] = acc / M[r][r];
    }
    return out[2];
}

}  // namespace

ModeIntegrator::ModeIntegrator(double xi, const PhysicalParams& params, const Grids& grids)
    : xi_(xi), params_(params), grids_(&grids) {
    const auto y = grids.y();
    OneSidedD1 s = one_sided_d1(y[1] - y[0], y[2] - y[1]);
    a0_ = s.c0;
    a1_ = s.c1;
    a2_ = s.c2;
}

ModeSystemState ModeIntegrator::initial_state(const ModeData& data) const {
    const int n = grids_->ny() + 1;
    ModeSystemState st;
    st.v_plus = data.v0_plus.empty() ? std::vector<Complex>(n, Complex{}) : data.v0_plus;
    st.v_minus = data.v0_minus.empty() ? std::vector<Complex>(n, Complex{}) : data.v0_minus;
    st.rho = data.rho0;
    if (data.rhoE0) {
        st.rhoE_plus = data.rhoE0->first;
        st.rhoE_minus = data.rhoE0->second;
    } else {
        double q = std::sqrt(1.0 + xi_ * xi_);
        st.rhoE_plus.resize(n);
        st.rhoE_minus.resize(n);
        for (int k = 0; k < n; ++k) {
            Complex val = std::exp(-q * grids_->y()[k]) * data.rho0;
            st.rhoE_plus[k] = val;
            st.rhoE_minus[k] = val;
        }
    }
    st.t = 0.0;
    return st;
}

Complex ModeIntegrator::boundary_jump(const ModeSystemState& s) const {
    auto T = [&](const std::vector<Complex>& u) { return a0_ * u[0] + a1_ * u[1] + a2_ * u[2]; };
    const double cp = params_.c_plus, cm = params_.c_minus;
    const double ap = params_.ap(), am = params_.am();
    return cp * T(s.v_plus) + cm * T(s.v_minus) - cp * ap * T(s.rhoE_plus) -
           cm * am * T(s.rhoE_minus);
}

void ModeIntegrator::step(ModeSystemState& state, const ModeData& data, double dt) const {
    const auto y = grids_->y();
    const int M = grids_->ny();
    const double t0 = state.t, t1 = state.t + dt;
    const double cp = params_.c_plus, cm = params_.c_minus;
    const double ap = params_.ap(), am = params_.am();

    const Operator op_p = build_operator(cp, xi_, y);
    const Operator op_m = build_operator(cm, xi_, y);
    const CNFactor fac_p(op_p, dt), fac_m(op_m, dt);

    struct BlockSolve {
        std::vector<Complex> p;  // particular interior solution
        std::vector<Complex> w;  // response to a unit boundary value at y=0
    };
    auto solve_block = [&](const Operator& op, const CNFactor& fac,
                           const std::vector<Complex>& u, int side,
                           bool with_f) -> BlockSolve {
        std::vector<Complex> rhs;
        apply_operator(op, u, rhs);
        for (int r = 0; r < M - 1; ++r) rhs[r] = u[r + 1] + 0.5 * dt * rhs[r];
        if (with_f && data.f) {
            for (int r = 0; r < M - 1; ++r)
                rhs[r] += 0.5 * dt * (data.f(t0, r + 1, side) + data.f(t1, r + 1, side));
        }
        // Outer node stays at its initial (decayed) value; implicit-side term.
        rhs[M - 2] += 0.5 * dt * op.coupleM * u[M];
        BlockSolve bs;
        bs.w.assign(M - 1, Complex{});
        bs.w[0] = 0.5 * dt * op.couple0;
        fac.solve(rhs);
        fac.solve(bs.w);
        bs.p = std::move(rhs);
        return bs;
    };

    BlockSolve vp = solve_block(op_p, fac_p, state.v_plus, +1, true);
    BlockSolve vm = solve_block(op_m, fac_m, state.v_minus, -1, true);
    BlockSolve ep = solve_block(op_p, fac_p, state.rhoE_plus, +1, false);
    BlockSolve em = solve_block(op_m, fac_m, state.rhoE_minus, -1, false);

    // Trace functionals at t1 as affine functions of the border unknowns.
    auto t_aff = [&](const BlockSolve& b, Complex& c0, Complex& c1) {
        c0 = a1_ * b.p[0] + a2_ * b.p[1];
        c1 = a0_ + a1_ * b.w[0] + a2_ * b.w[1];
    };
    Complex TP0, TP1, TM0, TM1, TEP0, TEP1, TEM0, TEM1;
    t_aff(vp, TP0, TP1);
    t_aff(vm, TM0, TM1);
    t_aff(ep, TEP0, TEP1);
    t_aff(em, TEM0, TEM1);

    const Complex J0 = cp * TP0 + cm * TM0 - cp * ap * TEP0 - cm * am * TEM0;
    const Complex Jp = cp * TP1;
    const Complex Jm = cm * TM1;
    const Complex Jr = -cp * ap * TEP1 - cm * am * TEM1;

    const Complex g1 = data.g ? data.g(t1) : Complex{};
    const Complex h1 = data.h ? data.h(t1) : Complex{};
    const Complex h0 = data.h ? data.h(t0) : Complex{};
    const Complex Jn = boundary_jump(state);
    const double sz = params_.sigma * xi_ * xi_;
    const double de = params_.delta;

    // Unknowns (beta+, beta-, rho) at t1. The boundary rows use the Stefan row
    // to eliminate the rho time derivative; the third row is the CN update of
    // rho itself.
    Complex A[3][3], b[3], sol[3];
    A[0][0] = 1.0 - de * Jp;
    A[0][1] = -de * Jm;
    A[0][2] = sz - de * Jr;
    b[0] = g1 - de * h1 + de * J0;
    A[1][0] = -de * Jp;
    A[1][1] = 1.0 - de * Jm;
    A[1][2] = sz - de * Jr;
    b[1] = g1 - de * h1 + de * J0;
    A[2][0] = 0.5 * dt * Jp;
    A[2][1] = 0.5 * dt * Jm;
    A[2][2] = 1.0 + 0.5 * dt * Jr;
    b[2] = state.rho + 0.5 * dt * (h0 - Jn + h1) - 0.5 * dt * J0;
    solve3(A, b, sol);
    if (!std::isfinite(std::abs(sol[0])) || !std::isfinite(std::abs(sol[2])))
        throw std::runtime_error("ModeIntegrator: bordered step solve failed");

    state.v_plus[0] = sol[0];
    state.v_minus[0] = sol[1];
    state.rho = sol[2];
    state.rhoE_plus[0] = sol[2];
    state.rhoE_minus[0] = sol[2];
    for (int r = 0; r < M - 1; ++r) {
        state.v_plus[r + 1] = vp.p[r] + vp.w[r] * sol[0];
        state.v_minus[r + 1] = vm.p[r] + vm.w[r] * sol[1];
        state.rhoE_plus[r + 1] = ep.p[r] + ep.w[r] * sol[2];
        state.rhoE_minus[r + 1] = em.p[r] + em.w[r] * sol[2];
    }
    state.t = t1;
}

ModeSolution ModeIntegrator::integrate(const ModeData& data) const {
    const int nt = grids_->nt();
    const int nyn = grids_->ny() + 1;
    const double dt = grids_->dt();

    ModeSolution sol;
    sol.v_plus = Array2D<Complex>(nt + 1, nyn);
    sol.v_minus = Array2D<Complex>(nt + 1, nyn);
    sol.rhoE_plus = Array2D<Complex>(nt + 1, nyn);
    sol.rhoE_minus = Array2D<Complex>(nt + 1, nyn);
    sol.rho.resize(nt + 1);
    sol.rho_t.resize(nt + 1);
    sol.dyv_plus.resize(nt + 1);
    sol.dyv_minus.resize(nt + 1);
    sol.dyE_plus.resize(nt + 1);
    sol.dyE_minus.resize(nt + 1);

    ModeSystemState st = initial_state(data);
    auto record = [&](int row) {
        for (int k = 0; k < nyn; ++k) {
            sol.v_plus.at(row, k) = st.v_plus[k];
            sol.v_minus.at(row, k) = st.v_minus[k];
            sol.rhoE_plus.at(row, k) = st.rhoE_plus[k];
            sol.rhoE_minus.at(row, k) = st.rhoE_minus[k];
        }
        sol.rho[row] = st.rho;
        Complex h = data.h ? data.h(st.t) : Complex{};
        Complex J = boundary_jump(st);
        sol.rho_t[row] = h - J;
        auto T = [&](const std::vector<Complex>& u) {
            return a0_ * u[0] + a1_ * u[1] + a2_ * u[2];
        };
        sol.dyv_plus[row] = T(st.v_plus);
        sol.dyv_minus[row] = -T(st.v_minus);
        sol.dyE_plus[row] = T(st.rhoE_plus);
        sol.dyE_minus[row] = -T(st.rhoE_minus);
        // Boundary relation residual with dt rho taken from the Stefan row.
        Complex g = data.g ? data.g(st.t) : Complex{};
        double sz = params_.sigma * xi_ * xi_;
        Complex r1 = st.v_plus[0] + sz * st.rho + params_.delta * (h - J) - g;
        Complex r2 = st.v_minus[0] + sz * st.rho + params_.delta * (h - J) - g;
        if (row > 0)
            sol.max_residual_boundary =
                std::max({sol.max_residual_boundary, std::abs(r1), std::abs(r2)});
    };
    record(0);
    Complex prev_rate = sol.rho_t[0];
    for (int n = 1; n <= nt; ++n) {
        Complex rho_prev = st.rho;
        step(st, data, dt);
        record(n);
        Complex cn_res = (st.rho - rho_prev) / dt - 0.5 * (sol.rho_t[n] + prev_rate);
        sol.max_residual_stefan = std::max(sol.max_residual_stefan, std::abs(cn_res));
        prev_rate = sol.rho_t[n];
        if (!std::isfinite(std::abs(st.rho)) ||
            std::abs(st.rho) > 1e12 * (1.0 + std::abs(data.rho0)))
            throw std::runtime_error("ModeIntegrator: residual blow-up");
    }
    return sol;
}

ModeData mode_data_from(const DataTuple& data, int mode_index, const Grids& grids) {
    const int nx = grids.nx();
    const std::size_t nt1 = grids.t_with0().size();
    const int nyn = grids.ny() + 1;
    if (mode_index < 0 || mode_index >= nx)
        throw std::invalid_argument("mode_data_from: mode index out of range");

    ModeData md;
    std::vector<Complex> gseries(nt1), hseries(nt1);
    for (std::size_t i = 0; i < nt1; ++i) {
        gseries[i] = forward_tangential(data.g.row(i))[mode_index];
        hseries[i] = forward_tangential(data.h.row(i))[mode_index];
    }
    std::vector<double> tnodes(grids.t_with0().begin(), grids.t_with0().end());
    auto gsp = std::make_shared<CubicSpline>(tnodes, gseries);
    auto hsp = std::make_shared<CubicSpline>(tnodes, hseries);
    md.g = [gsp](double t) { return (*gsp)(t); };
    md.h = [hsp](double t) { return (*hsp)(t); };

    if (!data.v0.empty()) {
        md.v0_plus.resize(nyn);
        md.v0_minus.resize(nyn);
        std::vector<double> col(nx);
        for (int k = 0; k < nyn; ++k) {
            for (int j = 0; j < nx; ++j) col[j] = data.v0.plus.at(j, k);
            md.v0_plus[k] = forward_tangential(std::span<const double>(col))[mode_index];
            for (int j = 0; j < nx; ++j) col[j] = data.v0.minus.at(j, k);
            md.v0_minus[k] = forward_tangential(std::span<const double>(col))[mode_index];
        }
    }
    if (!data.rho0.empty())
        md.rho0 = forward_tangential(std::span<const double>(data.rho0))[mode_index];

    if (!data.f.empty()) {
        auto fsp = std::make_shared<std::vector<CubicSpline>>();
        fsp->resize(2 * nyn);
        std::vector<Complex> series(nt1);
        std::vector<double> col(nx);
        for (int k = 0; k < nyn; ++k) {
            for (std::size_t i = 0; i < nt1; ++i) {
                for (int j = 0; j < nx; ++j) col[j] = data.f.plus.at(i, j, k);
                series[i] = forward_tangential(std::span<const double>(col))[mode_index];
            }
            (*fsp)[k].build(tnodes, series);
            for (std::size_t i = 0; i < nt1; ++i) {
                for (int j = 0; j < nx; ++j) col[j] = data.f.minus.at(i, j, k);
                series[i] = forward_tangential(std::span<const double>(col))[mode_index];
            }
            (*fsp)[nyn + k].build(tnodes, series);
        }
        md.f = [fsp, nyn](double t, int yidx, int side) {
            return (*fsp)[(side > 0 ? 0 : nyn) + yidx](t);
        };
    }
    return md;
}

ModeSolution zero_mode_solution(const Grids& grids) {
    const std::size_t nt1 = grids.t_with0().size();
    const int nyn = grids.ny() + 1;
    ModeSolution zero;
    zero.v_plus = Array2D<Complex>(nt1, nyn);
    zero.v_minus = Array2D<Complex>(nt1, nyn);
    zero.rhoE_plus = Array2D<Complex>(nt1, nyn);
    zero.rhoE_minus = Array2D<Complex>(nt1, nyn);
    zero.rho.assign(nt1, Complex{});
    zero.rho_t.assign(nt1, Complex{});
    zero.dyv_plus.assign(nt1, Complex{});
    zero.dyv_minus.assign(nt1, Complex{});
    zero.dyE_plus.assign(nt1, Complex{});
    zero.dyE_minus.assign(nt1, Complex{});
    return zero;
}

SolutionTriple fd_solve_full(const DataTuple& data, const PhysicalParams& params,
                             const Grids& grids) {
    const int nx = grids.nx();
    std::vector<ModeSolution> modes(nx);
    std::vector<char> solved(nx, 0);
    const int half = nx / 2;
    std::vector<std::size_t> todo;
    for (int m = 0; m <= half; ++m) todo.push_back(m);

    parallel_for(todo.size(), [&](std::size_t idx) {
        int m = static_cast<int>(todo[idx]);
        ModeData md = mode_data_from(data, m, grids);
        double scale = std::abs(md.rho0) + max_abs(md.v0_plus) + max_abs(md.v0_minus);
        for (double t : grids.t_with0()) scale += std::abs(md.g(t)) + std::abs(md.h(t));
        if (md.f) scale += 1.0;
        if (scale < 1e-14) {
            modes[m] = zero_mode_solution(grids);
        } else {
            ModeIntegrator integ(grids.xi()[m], params, grids);
            modes[m] = integ.integrate(md);
        }
        solved[m] = 1;
    });
    return assemble_mode_solutions(modes, solved, grids);
}

SolutionTriple assemble_mode_solutions(const std::vector<ModeSolution>& modes,
                                       const std::vector<char>& solved, const Grids& grids) {
    const int nx = grids.nx();
    const int nyn = grids.ny() + 1;
    const std::size_t nt1 = grids.t_with0().size();

    // Conjugate symmetry fills modes k < 0.
    auto mode_at = [&](int m, const std::function<Complex(const ModeSolution&)>& pick) {
        if (solved[m]) return pick(modes[m]);
        return std::conj(pick(modes[(nx - m) % nx]));
    };

    SolutionTriple sol;
    sol.v = BulkField(nt1, nx, nyn);
    sol.rho_E = BulkField(nt1, nx, nyn);
    sol.rho = RealField(nt1, nx);
    sol.rho_t = RealField(nt1, nx);
    sol.gamma_v_plus = RealField(nt1, nx);
    sol.gamma_v_minus = RealField(nt1, nx);
    sol.dy_v_plus = RealField(nt1, nx);
    sol.dy_v_minus = RealField(nt1, nx);
    sol.gamma_rhoE_plus = RealField(nt1, nx);
    sol.gamma_rhoE_minus = RealField(nt1, nx);
    sol.dy_rhoE_plus = RealField(nt1, nx);
    sol.dy_rhoE_minus = RealField(nt1, nx);

    std::vector<Complex> buf(nx);
    auto expand = [&](std::size_t row, const std::function<Complex(const ModeSolution&)>& pick,
                      RealField& dst) {
        (void)row;
        for (int m = 0; m < nx; ++m) buf[m] = mode_at(m, pick);
        auto vals = inverse_tangential_real(buf);
        for (int j = 0; j < nx; ++j) dst.at(row, j) = vals[j];
    };

    for (std::size_t i = 0; i < nt1; ++i) {
        expand(i, [&](const ModeSolution& s) { return s.rho[i]; }, sol.rho);
        expand(i, [&](const ModeSolution& s) { return s.rho_t[i]; }, sol.rho_t);
        expand(i, [&](const ModeSolution& s) { return s.v_plus.at(i, 0); }, sol.gamma_v_plus);
        expand(i, [&](const ModeSolution& s) { return s.v_minus.at(i, 0); }, sol.gamma_v_minus);
        expand(i, [&](const ModeSolution& s) { return s.dyv_plus[i]; }, sol.dy_v_plus);
        expand(i, [&](const ModeSolution& s) { return s.dyv_minus[i]; }, sol.dy_v_minus);
        expand(i, [&](const ModeSolution& s) { return s.rhoE_plus.at(i, 0); }, sol.gamma_rhoE_plus);
        expand(i, [&](const ModeSolution& s) { return s.rhoE_minus.at(i, 0); }, sol.gamma_rhoE_minus);
        expand(i, [&](const ModeSolution& s) { return s.dyE_plus[i]; }, sol.dy_rhoE_plus);
        expand(i, [&](const ModeSolution& s) { return s.dyE_minus[i]; }, sol.dy_rhoE_minus);
        for (int k = 0; k < nyn; ++k) {
            for (int m = 0; m < nx; ++m)
                buf[m] = mode_at(m, [&](const ModeSolution& s) { return s.v_plus.at(i, k); });
            auto vp = inverse_tangential_real(buf);
            for (int m = 0; m < nx; ++m)
                buf[m] = mode_at(m, [&](const ModeSolution& s) { return s.v_minus.at(i, k); });
            auto vm = inverse_tangential_real(buf);
            for (int m = 0; m < nx; ++m)
                buf[m] = mode_at(m, [&](const ModeSolution& s) { return s.rhoE_plus.at(i, k); });
            auto rp = inverse_tangential_real(buf);
            for (int m = 0; m < nx; ++m)
                buf[m] = mode_at(m, [&](const ModeSolution& s) { return s.rhoE_minus.at(i, k); });
            auto rm = inverse_tangential_real(buf);
            for (int j = 0; j < nx; ++j) {
                sol.v.plus.at(i, j, k) = vp[j];
                sol.v.minus.at(i, j, k) = vm[j];
                sol.rho_E.plus.at(i, j, k) = rp[j];
                sol.rho_E.minus.at(i, j, k) = rm[j];
            }
        }
    }
    return sol;
}

}  // namespace stefan
