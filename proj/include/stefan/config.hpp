#pragma once

#include <string>

#include "stefan/grids.hpp"
#include "stefan/laplace.hpp"
#include "stefan/params.hpp"
#include "stefan/spectral.hpp"
#include "stefan/symbols.hpp"

namespace stefan {

struct LimitSpec {
    int type = 5;            // one of the five singular-limit regimes
    int n_points = 7;
    double factor = 0.5;     // geometric approach factor
    double delta0 = 0.5;     // fixed target for type 2
    double sigma0 = 0.5;     // fixed target for type 3
    double delta_init = 1.0;
    double sigma_init = 1.0;
};

/// Aggregated run configuration; every block has working defaults and JSON
/// overrides merge field by field.
struct Config {
    GridConfig grid;
    PhysicalParams params;
    std::string seed_family = "two_mode";
    SectorSpec sector;
    SolverOptions solver;     // contour block + solver tolerances
    bool contour_overridden = false;
    LimitSpec limit;
    int uniformity_grid_n = 5;
    double uniformity_box = 1.0;

    /// Solver options with the contour matched to this configuration unless
    /// the JSON pinned one explicitly.
    SolverOptions resolved_solver(const Grids& grids) const;
};

Config config_from_json(const std::string& json_text);
Config load_config(const std::string& path);
std::string config_to_json(const Config& cfg);

}  // namespace stefan
