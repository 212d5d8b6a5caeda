#pragma once

#include <span>
#include <string>
#include <vector>

#include "stefan/data.hpp"
#include "stefan/fields.hpp"
#include "stefan/grids.hpp"
#include "stefan/params.hpp"

namespace stefan {

/// Fractional norm request for the double-integral path.
struct NormSpec {
    double s = 0.5;          // order >= 0, s - [s] in (0,1)
    double p = 4.0;
    bool torus = false;      // periodic domain
    double period = 0.0;     // required when torus
};

/// Discrete Sobolev--Slobodeckij seminorm of the [s]-th derivative of a
/// grid function, via the double-sum approximation: far cell pairs use the
/// product trapezoid rule on node values, the same-cell blocks are integrated
/// in closed form against the piecewise-linear interpolant, and adjacent-cell
/// blocks by graded composite Gauss quadrature of that interpolant.
double slobodeckij_seminorm(std::span<const double> nodes, std::span<const double> values,
                            const NormSpec& spec);

/// W^s_p norm of an x-grid field on the torus; integer derivatives are
/// spectral, the top fractional piece goes through slobodeckij_seminorm.
double torus_space_norm(std::span<const double> values, const Grids& grids, double s, double p);

/// W^s_p norm of a two-phase (x, y) slice; integer derivatives by spectral x /
/// graded finite differences in y, fractional pieces per axis.
double bulk_space_norm(const BulkSlice& w, const Grids& grids, double s, double p);

/// Anisotropic intersection-space tags.
enum class NormTag { E1, E2_00, E2_10, E2_01, F2, F3 };
NormTag norm_tag_from_string(const std::string& name);

/// Mixed-regularity norm W^a_p(J, W^b_p) as the sum of its corner pieces;
/// time-fractional pieces run slobodeckij along t per x node and aggregate
/// L_p in x, space pieces vice versa.
double norm_time_space(const RealField& u, double a, double b, double p, const Grids& grids);

double anisotropic_norm(const RealField& u, NormTag tag, const PhysicalParams& params,
                        const Grids& grids);
double anisotropic_norm(const BulkField& u, NormTag tag, const PhysicalParams& params,
                        const Grids& grids);

struct DataNormReport {
    double F1 = 0, F2 = 0, F3 = 0, F4 = 0, F5 = 0;
    double data_total = 0;        // ||(f,g,h,v0,rho0)||_{F_T(0,0)}
    double rho0_w43p = 0;         // ||rho0||_{W^{4-3/p}}
    double w_c = 0;               // ||h(0) - [[c dy v0]]||_{W^{2-6/p}}
    double rhs(double delta, double sigma) const {
        return data_total + (delta + sigma) * rho0_w43p + sigma * w_c;
    }
};

DataNormReport data_norm_report(const DataTuple& data, const PhysicalParams& params,
                                const Grids& grids);

struct SolutionNormReport {
    double E1_v = 0, E1_rhoE = 0;
    double E2_00 = 0, E2_10 = 0, E2_01 = 0;
    double E2_param = 0;          // E2_00 + delta E2_10 + sigma E2_01
    double total = 0;             // E1_v + E1_rhoE + E2_param
};

SolutionNormReport solution_norm_report(const SolutionTriple& sol, const PhysicalParams& params,
                                        const Grids& grids);

/// || a - b ||_{E_T(mu0)} with mu0 = (params.delta, params.sigma).
double solution_error_norm(const SolutionTriple& a, const SolutionTriple& b,
                           const PhysicalParams& params_at_mu0, const Grids& grids);

std::string norm_report_json(const SolutionNormReport& sol, const DataNormReport& data,
                             const PhysicalParams& params);

}  // namespace stefan
