#pragma once

#include <functional>
#include <optional>

#include "stefan/data.hpp"
#include "stefan/fields.hpp"
#include "stefan/grids.hpp"
#include "stefan/params.hpp"

namespace stefan {

/// Per-mode data for the method-of-lines integrator. Closures are evaluated at
/// arbitrary t in [0, T]; f may be empty (no bulk source).
struct ModeData {
    std::function<Complex(double)> g, h;
    std::function<Complex(double, int, int)> f;  // (t, y index, side +1/-1)
    std::vector<Complex> v0_plus, v0_minus;      // on y nodes
    Complex rho0{};
    /// Optional replacement for the default extension initial value
    /// exp(-|y| sqrt(1+xi^2)) rho0 (used by manufactured-solution tests).
    std::optional<std::pair<std::vector<Complex>, std::vector<Complex>>> rhoE0;
};

/// Coupled per-mode state: bulk temperatures, interface value, extension.
/// Boundary rows of rhoE equal rho by the algebraic Dirichlet constraint.
struct ModeSystemState {
    std::vector<Complex> v_plus, v_minus, rhoE_plus, rhoE_minus;
    Complex rho{};
    double t = 0.0;
};

struct ModeSolution {
    Array2D<Complex> v_plus, v_minus, rhoE_plus, rhoE_minus;  // (t_with0, y)
    std::vector<Complex> rho, rho_t;
    std::vector<Complex> dyv_plus, dyv_minus, dyE_plus, dyE_minus;
    double max_residual_boundary = 0.0;
    double max_residual_stefan = 0.0;
};

/// Trapezoidal MoL integrator for the transformed single-mode system: two
/// half-line heat equations, the dynamic boundary relation, and the Stefan
/// row, solved monolithically per step as a bordered linear system.
class ModeIntegrator {
public:
    ModeIntegrator(double xi, const PhysicalParams& params, const Grids& grids);

    ModeSystemState initial_state(const ModeData& data) const;
    void step(ModeSystemState& state, const ModeData& data, double dt) const;
    ModeSolution integrate(const ModeData& data) const;

private:
    struct Block;
    Complex boundary_jump(const ModeSystemState& s) const;

    double xi_;
    PhysicalParams params_;
    const Grids* grids_;
    double a0_, a1_, a2_;  // one-sided derivative stencil at y=0
};

/// Builds the per-mode data of a DataTuple (tangential transform + time splines).
ModeData mode_data_from(const DataTuple& data, int mode_index, const Grids& grids);

/// Assembles per-mode solutions into physical space. Modes with solved[m] == 0
/// are filled from the conjugate mirror (real data).
SolutionTriple assemble_mode_solutions(const std::vector<ModeSolution>& modes,
                                       const std::vector<char>& solved, const Grids& grids);

ModeSolution zero_mode_solution(const Grids& grids);

/// Full-grid cross-check solve: integrates every mode and assembles the triple.
SolutionTriple fd_solve_full(const DataTuple& data, const PhysicalParams& params,
                             const Grids& grids);

}  // namespace stefan
