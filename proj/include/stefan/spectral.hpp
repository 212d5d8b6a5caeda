#pragma once

#include <vector>

#include "stefan/data.hpp"
#include "stefan/fd_oracle.hpp"
#include "stefan/grids.hpp"
#include "stefan/laplace.hpp"
#include "stefan/params.hpp"

namespace stefan {

struct SolverOptions {
    ContourSpec contour{ContourKind::bromwich, 16384, 1e-8, 4, 1.0, 0.3};
    int bulk_node_cap = 8192;     // contour nodes carried into bulk-field sums
    double tol_compat = 1e-8;     // compatibility residual gate for solve_full
    double tol_zero_trace = 1e-10;
    double y_truncation_tol = 1e-12;
};

/// Contour matched to the grids: vertical line at Re = 1/T with spacing tied
/// to the analyticity strip width (shift + kappa).
SolverOptions default_solver_options(const PhysicalParams& params, const Grids& grids);

struct SpectralDiagnostics {
    double contour_tail_fraction = 0.0;  // share of the result in the outer 25% of nodes
    bool y_truncation_ok = true;
};

/// Lemma-style simultaneous extension of the trace pair (rho0, eta1) at one
/// tangential mode, with A = 1 + xi^2:
///   rho1(t) = (2 e^{-sqrt(A) t} - e^{-2 sqrt(A) t})(2 e^{-A t} - e^{-2 A t}) rho0
///             + e^{-A t}(e^{-A^2 t} - e^{-2 A^2 t}) A^{-2} eta1.
/// The same formula serves all (delta, sigma) regimes; only the norms in which
/// it is measured change.
struct TraceExtensionMode {
    Complex rho0_hat{}, eta1_hat{};
    double A = 1.0;

    Complex value(double t) const;
    Complex derivative(double t) const;
};

TraceExtensionMode extend_traces_mode(Complex rho0_hat, Complex eta1_hat, double xi);

enum class ExtensionRegime { classical, kinetic, surface_tension, both };

struct ExtendedTraces {
    RealField rho1, rho1_t;                 // (t_with0, x)
    std::vector<TraceExtensionMode> modes;  // one per tangential mode
    ExtensionRegime regime = ExtensionRegime::classical;
};

/// Extension of (rho0, eta1) given in physical x space. The regime tag is
/// recorded for norm reporting; the formula does not branch on it.
ExtendedTraces extend_traces(std::span<const double> rho0, std::span<const double> eta1,
                             const PhysicalParams& params, const Grids& grids,
                             ExtensionRegime regime);

/// Two decoupled half-line heat problems per mode with Dirichlet value
/// g + e^{-(1+xi^2) t} zeta at y = 0 and initial value v0.
BulkField solve_auxiliary_v1(const DataTuple& data, std::span<const double> zeta,
                             const PhysicalParams& params, const Grids& grids);

/// Heat extension of an interface field: Dirichlet value rho(t) at y = 0 and
/// initial slice e^{-|y|(1-Dxx)^{1/2}} rho0.
BulkField solve_rho_E(const RealField& rho, std::span<const double> rho0,
                      const PhysicalParams& params, const Grids& grids);

/// Explicit transform-domain solve of the zero-trace system; data must
/// satisfy v0 = 0, rho0 = 0, g(0) = 0, h(0) = 0.
SolutionTriple solve_zero_trace(const DataTuple& data, const PhysicalParams& params,
                                const Grids& grids, const SolverOptions& options,
                                SpectralDiagnostics* diag = nullptr);

struct ReductionBundle {
    std::vector<double> zeta;        // gamma v0 - g(0) on the x grid
    BulkField v1;
    RealField rho1, rho1_t;
    BulkField rho1_E;
    RealField reduced_g, reduced_h;  // zero-trace data fed to the second stage
    double g0_residual = 0.0;
    double h0_residual = 0.0;
};

/// Full inhomogeneous solve: auxiliary diffusion stage, trace extension,
/// reduction to zero-trace data, transform-domain solve, and the sum.
std::pair<SolutionTriple, ReductionBundle> solve_full(const DataTuple& data,
                                                      const PhysicalParams& params,
                                                      const Grids& grids,
                                                      const SolverOptions& options,
                                                      SpectralDiagnostics* diag = nullptr);

}  // namespace stefan
