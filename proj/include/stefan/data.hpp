#pragma once

#include <optional>
#include <string>

#include "stefan/fields.hpp"
#include "stefan/grids.hpp"
#include "stefan/params.hpp"

namespace stefan {

/// One-sided interface traces of a bulk slice: values and normal derivatives
/// at y = 0+-, sampled on the x grid.
struct InterfaceTraces {
    std::vector<double> value_plus, value_minus;
    std::vector<double> dy_plus, dy_minus;
    bool analytic = false;  // supplied in closed form vs. one-sided differences
};

/// The inhomogeneities (f, g, h, v0, rho0) on their grids. Interface fields
/// live on t_with0 x x_grid; row 0 is the t=0 slice.
struct DataTuple {
    BulkField f;
    RealField g, h;
    BulkSlice v0;
    InterfaceTraces v0_traces;
    std::vector<double> rho0;
};

/// The computed (v, rho, rho_E) with its one-sided interface traces. Solvers
/// fill the trace rows from their own representation (exact in the transform
/// variables for the spectral path, discrete rows for the integrator), so the
/// interface residual checks probe the solver's actual boundary coupling.
struct SolutionTriple {
    BulkField v, rho_E;
    RealField rho, rho_t;
    RealField gamma_v_plus, gamma_v_minus;
    RealField dy_v_plus, dy_v_minus;
    RealField gamma_rhoE_plus, gamma_rhoE_minus;
    RealField dy_rhoE_plus, dy_rhoE_minus;
};

/// c+ dy w+(0) - c- dy w-(0) on the x grid (one time slice) or on t x x.
struct JumpTrace {
    RealField value;
};

struct ResidualReport {
    double interface_eq_max = 0.0;  // gamma v± - sigma Dxx rho + delta dt rho - g
    double stefan_eq_max = 0.0;     // dt rho + [[c dy (v - a rho_E)]] - h
};

/// Residuals of the two interface equations at every node of (0,T] x x_grid,
/// evaluated with the solution's stored traces and time derivative.
ResidualReport interface_residuals(const SolutionTriple& sol, const DataTuple& data,
                                   const PhysicalParams& params, const Grids& grids);

/// One-sided 2nd-order derivative traces of a bulk slice on the graded y grid.
InterfaceTraces slice_traces(const BulkSlice& w, const Grids& grids);

JumpTrace jump_trace(const BulkField& w, const PhysicalParams& params, const Grids& grids);
std::vector<double> jump_trace_slice(const BulkSlice& w, const PhysicalParams& params,
                                     const Grids& grids);
std::vector<double> jump_trace_from(const InterfaceTraces& tr, const PhysicalParams& params);

/// Seeds for the compatible-data factory: everything except g is free, and
/// g_free must vanish at t = 0.
struct DataSeeds {
    BulkField f;
    RealField g_free;
    RealField h;
    BulkSlice v0;
    std::optional<InterfaceTraces> v0_traces;  // analytic traces when available
    std::vector<double> rho0;
};

struct CompatReport {
    double residual_max = 0.0;     // discretized compatibility residual at t=0
    double w_norm_c = 0.0;         // || sigma (h(0) - [[c dy v0]]) ||_{W^{2-6/p}}, delta=0 only
    bool w_norm_evaluated = false;
};

struct CompatibleData {
    DataTuple data;
    CompatReport report;
};

/// Builds g(t,x) = g_free(t,x) + exp(-t) G0(x) so that the t=0 compatibility
/// condition holds exactly, where
///   G0 = gamma v0 - sigma Dxx rho0
///        + delta ( h(0) - [[c dy (v0 - a exp(-|y|(1-Dxx)^{1/2}) rho0)]] )
/// with Dxx acting per tangential mode. Requires gamma v0+ == gamma v0-.
CompatibleData make_compatible_data(const PhysicalParams& params, const Grids& grids,
                                    const DataSeeds& seeds);

/// Named deterministic seed families used by the experiments.
/// Known names: "zero", "single_mode", "two_mode", "zero_trace_two_mode".
DataSeeds make_seed_family(const std::string& name, const Grids& grids);

/// The per-mode q0 of the (ABC) trace pair:
///   q0_hat = h_hat(0) - jump_hat - (c+ a+ + c- a-) sqrt(1+xi^2) rho0_hat,
/// where jump_hat are the tangential modes of [[c dy v0]].
std::vector<Complex> abc_second_trace_modes(const DataTuple& data, const PhysicalParams& params,
                                            const Grids& grids);

}  // namespace stefan
