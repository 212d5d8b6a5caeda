#pragma once

#include <string>
#include <vector>

#include "stefan/config.hpp"
#include "stefan/data.hpp"
#include "stefan/norms.hpp"
#include "stefan/symbols.hpp"

namespace stefan {

struct UniformityRow {
    double delta = 0, sigma = 0;
    double sol_norm = 0, rhs = 0, ratio = 0;
    bool flagged = false;
    std::string note;
};

struct UniformityResult {
    std::vector<UniformityRow> rows;
    double max_ratio = 0, min_ratio = 0;
    bool monotone_blowup = false;  // ratios climbing monotonically into (0,0)
    bool any_flagged = false;
};

UniformityResult run_uniformity_study(const Config& cfg);
std::string uniformity_csv(const UniformityResult& res);

struct LimitRow {
    int k = 0;
    double delta = 0, sigma = 0;
    double err = 0;
};

struct LimitResult {
    int type = 0;
    double delta0 = 0, sigma0 = 0;
    std::vector<LimitRow> rows;
    bool monotone = false;
    double ratio_last_first = 0;
    bool pass = false;
};

LimitResult run_singular_limit(const Config& cfg, int limit_type);
std::string limit_csv(const LimitResult& res);

struct SectorRunResult {
    SectorReport report;     // at the configured resolution, probes kept
    SectorReport refined;    // doubled (lambda, z) sampling, probes dropped
    double kappa_used = 1;
    double refine_change = 0;  // relative movement of extrema under doubling
    bool pass = false;
};

SectorRunResult run_sector_report(const Config& cfg);
std::string sector_csv(const SectorRunResult& res);
std::string sector_summary_json(const SectorRunResult& res);

struct CrossCheckRow {
    double delta = 0, sigma = 0;
    double rho_rel_l2 = 0, v_rel_l2 = 0;
    bool pass = false;
};

/// Spectral vs. method-of-lines solutions on the zero-trace family over the
/// (delta, sigma) product {0, 1/2, 1}^2.
std::vector<CrossCheckRow> run_cross_check(const Config& cfg, double tol_rho = 1e-3,
                                           double tol_v = 5e-3);
std::string cross_check_csv(const std::vector<CrossCheckRow>& rows);

/// Relative L2 distances between two solution triples (interface and bulk).
double rel_l2_interface(const RealField& a, const RealField& b, const Grids& grids);
double rel_l2_bulk(const BulkField& a, const BulkField& b, const Grids& grids);

}  // namespace stefan
