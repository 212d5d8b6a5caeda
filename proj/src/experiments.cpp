#include "stefan/experiments.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "stefan/fd_oracle.hpp"
#include "stefan/spectral.hpp"

namespace stefan {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

SolverOptions Config::resolved_solver(const Grids& grids) const {
    if (contour_overridden) return solver;
    SolverOptions opt = default_solver_options(params, grids);
    opt.tol_compat = solver.tol_compat;
    opt.tol_zero_trace = solver.tol_zero_trace;
    opt.y_truncation_tol = solver.y_truncation_tol;
    return opt;
}

Config config_from_json(const std::string& json_text) {
    Config cfg;
    json j = json::parse(json_text);
    if (j.contains("model")) {
        const json& m = j["model"];
        auto get = [&](const char* key, auto& slot) {
            if (m.contains(key)) slot = m[key];
        };
        get("N_x", cfg.grid.N_x);
        get("L_x", cfg.grid.L_x);
        get("Y_max", cfg.grid.Y_max);
        get("N_y", cfg.grid.N_y);
        get("grading_ratio", cfg.grid.grading_ratio);
        get("T", cfg.grid.T);
        get("N_t", cfg.grid.N_t);
        get("c_plus", cfg.params.c_plus);
        get("c_minus", cfg.params.c_minus);
        get("kappa", cfg.params.kappa);
        get("p", cfg.params.p);
        get("R", cfg.params.R);
        get("delta", cfg.params.delta);
        get("sigma", cfg.params.sigma);
        if (m.contains("seed_family")) cfg.seed_family = m["seed_family"];
    }
    if (j.contains("sector")) {
        const json& s = j["sector"];
        if (s.contains("phi0_over_pi")) cfg.sector.phi0 = double(s["phi0_over_pi"]) * kPi;
        if (s.contains("phi_fraction")) cfg.sector.phi_fraction = s["phi_fraction"];
        if (s.contains("lambda_range")) {
            cfg.sector.lambda_min = s["lambda_range"][0];
            cfg.sector.lambda_max = s["lambda_range"][1];
        }
        if (s.contains("z_range")) {
            cfg.sector.z_min = s["z_range"][0];
            cfg.sector.z_max = s["z_range"][1];
        }
        if (s.contains("n_lambda")) cfg.sector.n_lambda = s["n_lambda"];
        if (s.contains("n_z")) cfg.sector.n_z = s["n_z"];
        if (s.contains("n_delta")) cfg.sector.n_delta = s["n_delta"];
        if (s.contains("n_sigma")) cfg.sector.n_sigma = s["n_sigma"];
        if (s.contains("floor")) cfg.sector.floor = s["floor"];
        if (s.contains("ceiling")) cfg.sector.ceiling = s["ceiling"];
        if (s.contains("kappa_list"))
            cfg.sector.kappa_list = s["kappa_list"].get<std::vector<double>>();
    }
    if (j.contains("contour")) {
        const json& c = j["contour"];
        cfg.contour_overridden = true;
        if (c.contains("kind"))
            cfg.solver.contour.kind = contour_kind_from_string(c["kind"]);
        if (c.contains("N_nodes")) cfg.solver.contour.n_nodes = c["N_nodes"];
        if (c.contains("tol")) cfg.solver.contour.tol = c["tol"];
        if (c.contains("refine_max")) cfg.solver.contour.refine_max = c["refine_max"];
        if (c.contains("shift")) cfg.solver.contour.shift = c["shift"];
        if (c.contains("spacing")) cfg.solver.contour.spacing = c["spacing"];
        if (c.contains("bulk_node_cap")) cfg.solver.bulk_node_cap = c["bulk_node_cap"];
    }
    if (j.contains("solver")) {
        const json& s = j["solver"];
        if (s.contains("tol_compat")) cfg.solver.tol_compat = s["tol_compat"];
        if (s.contains("tol_zero_trace")) cfg.solver.tol_zero_trace = s["tol_zero_trace"];
        if (s.contains("y_truncation_tol")) cfg.solver.y_truncation_tol = s["y_truncation_tol"];
    }
    if (j.contains("uniformity")) {
        const json& u = j["uniformity"];
        if (u.contains("grid_n")) cfg.uniformity_grid_n = u["grid_n"];
        if (u.contains("box")) cfg.uniformity_box = u["box"];
    }
    if (j.contains("limit")) {
        const json& l = j["limit"];
        if (l.contains("type")) cfg.limit.type = l["type"];
        if (l.contains("n_points")) cfg.limit.n_points = l["n_points"];
        if (l.contains("factor")) cfg.limit.factor = l["factor"];
        if (l.contains("delta0")) cfg.limit.delta0 = l["delta0"];
        if (l.contains("sigma0")) cfg.limit.sigma0 = l["sigma0"];
        if (l.contains("delta_init")) cfg.limit.delta_init = l["delta_init"];
        if (l.contains("sigma_init")) cfg.limit.sigma_init = l["sigma_init"];
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

std::string config_to_json(const Config& cfg) {
    json j;
    j["model"] = {{"N_x", cfg.grid.N_x},
                  {"L_x", cfg.grid.L_x},
                  {"Y_max", cfg.grid.Y_max},
                  {"N_y", cfg.grid.N_y},
                  {"grading_ratio", cfg.grid.grading_ratio},
                  {"T", cfg.grid.T},
                  {"N_t", cfg.grid.N_t},
                  {"c_plus", cfg.params.c_plus},
                  {"c_minus", cfg.params.c_minus},
                  {"kappa", cfg.params.kappa},
                  {"p", cfg.params.p},
                  {"R", cfg.params.R},
                  {"delta", cfg.params.delta},
                  {"sigma", cfg.params.sigma},
                  {"seed_family", cfg.seed_family}};
    j["sector"] = {{"phi0_over_pi", cfg.sector.phi0 / kPi},
                   {"phi_fraction", cfg.sector.phi_fraction},
                   {"lambda_range", {cfg.sector.lambda_min, cfg.sector.lambda_max}},
                   {"z_range", {cfg.sector.z_min, cfg.sector.z_max}},
                   {"n_lambda", cfg.sector.n_lambda},
                   {"n_z", cfg.sector.n_z},
                   {"n_delta", cfg.sector.n_delta},
                   {"n_sigma", cfg.sector.n_sigma},
                   {"floor", cfg.sector.floor},
                   {"ceiling", cfg.sector.ceiling},
                   {"kappa_list", cfg.sector.kappa_list}};
    j["limit"] = {{"type", cfg.limit.type},       {"n_points", cfg.limit.n_points},
                  {"factor", cfg.limit.factor},   {"delta0", cfg.limit.delta0},
                  {"sigma0", cfg.limit.sigma0},   {"delta_init", cfg.limit.delta_init},
                  {"sigma_init", cfg.limit.sigma_init}};
    j["uniformity"] = {{"grid_n", cfg.uniformity_grid_n}, {"box", cfg.uniformity_box}};
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Error metrics
// ---------------------------------------------------------------------------

double rel_l2_interface(const RealField& a, const RealField& b, const Grids& grids) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j) {
            double w = grids.t_weights()[i] * grids.x_weight();
            double d = a.at(i, j) - b.at(i, j);
            num += w * d * d;
            den += w * b.at(i, j) * b.at(i, j);
        }
    }
    return std::sqrt(num / (den + 1e-300));
}

double rel_l2_bulk(const BulkField& a, const BulkField& b, const Grids& grids) {
    double num = 0.0, den = 0.0;
    auto add = [&](const Array3D<double>& x, const Array3D<double>& y) {
        for (std::size_t i = 0; i < x.n0; ++i)
            for (std::size_t j = 0; j < x.n1; ++j)
                for (std::size_t k = 0; k < x.n2; ++k) {
                    double w = grids.t_weights()[i] * grids.x_weight() * grids.y_weights()[k];
                    double d = x.at(i, j, k) - y.at(i, j, k);
                    num += w * d * d;
                    den += w * y.at(i, j, k) * y.at(i, j, k);
                }
    };
    add(a.plus, b.plus);
    add(a.minus, b.minus);
    return std::sqrt(num / (den + 1e-300));
}

// ---------------------------------------------------------------------------
// Uniformity study
// ---------------------------------------------------------------------------

UniformityResult run_uniformity_study(const Config& cfg) {
    Grids grids(cfg.grid);
    DataSeeds seeds = make_seed_family(cfg.seed_family, grids);
    const int n = cfg.uniformity_grid_n;
    if (n < 2) throw std::invalid_argument("uniformity: grid_n >= 2");
    const double box = std::min(cfg.uniformity_box, cfg.params.R);

    UniformityResult res;
    res.rows.reserve(n * n);
    for (int i = 0; i < n; ++i) {
        for (int jj = 0; jj < n; ++jj) {
            UniformityRow row;
            row.delta = box * i / (n - 1);
            row.sigma = box * jj / (n - 1);
            PhysicalParams p = cfg.params.with_mu(row.delta, row.sigma);
            try {
                auto made = make_compatible_data(p, grids, seeds);
                SolverOptions opt = cfg.resolved_solver(grids);
                auto [sol, bundle] = solve_full(made.data, p, grids, opt);
                row.sol_norm = solution_norm_report(sol, p, grids).total;
                row.rhs = data_norm_report(made.data, p, grids).rhs(row.delta, row.sigma);
                if (row.rhs < 1e-300 || row.sol_norm < 1e-300) {
                    row.flagged = true;
                    row.note = "0/0";
                } else {
                    row.ratio = row.sol_norm / row.rhs;
                }
            } catch (const std::exception& e) {
                row.flagged = true;
                row.note = e.what();
            }
            res.rows.push_back(std::move(row));
        }
    }

    res.min_ratio = 1e300;
    for (const auto& r : res.rows) {
        res.any_flagged = res.any_flagged || r.flagged;
        if (!r.flagged) {
            res.max_ratio = std::max(res.max_ratio, r.ratio);
            res.min_ratio = std::min(res.min_ratio, r.ratio);
        }
    }
    // Blow-up toward (0,0): the origin carries the grid maximum and the ratios
    // increase monotonically into it along both axes.
    auto at = [&](int i, int jj) { return res.rows[i * n + jj].ratio; };
    bool origin_max = true;
    for (const auto& r : res.rows) origin_max = origin_max && at(0, 0) >= r.ratio - 1e-15;
    bool axis_monotone = true;
    for (int i = 0; i + 1 < n; ++i) axis_monotone = axis_monotone && at(i, 0) > at(i + 1, 0);
    for (int jj = 0; jj + 1 < n; ++jj) axis_monotone = axis_monotone && at(0, jj) > at(0, jj + 1);
    res.monotone_blowup = origin_max && axis_monotone;
    return res;
}

std::string uniformity_csv(const UniformityResult& res) {
    std::ostringstream os;
    os.precision(12);
    os << "# stefan-limits uniformity csv v1\n";
    os << "delta,sigma,sol_norm,rhs,ratio,flagged,note\n";
    for (const auto& r : res.rows)
        os << r.delta << ',' << r.sigma << ',' << r.sol_norm << ',' << r.rhs << ',' << r.ratio
           << ',' << (r.flagged ? 1 : 0) << ',' << r.note << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// Singular limits
// ---------------------------------------------------------------------------

namespace {

struct MuSequence {
    std::vector<std::pair<double, double>> mus;
    double delta0 = 0, sigma0 = 0;
};

MuSequence mu_sequence(const LimitSpec& spec, int type, double R) {
    MuSequence seq;
    const int n = spec.n_points;
    const double f = spec.factor;
    auto clampR = [R](double x) { return std::min(x, R); };
    const double di = clampR(spec.delta_init), si = clampR(spec.sigma_init);
    switch (type) {
        case 1:  // (delta, sigma) -> (0, 0) with both positive
            for (int k = 0; k < n; ++k)
                seq.mus.emplace_back(di * std::pow(f, k), si * std::pow(f, k));
            break;
        case 2:  // delta -> delta0 > 0, sigma = 0
            seq.delta0 = spec.delta0;
            for (int k = 0; k < n; ++k)
                seq.mus.emplace_back(
                    seq.delta0 + (clampR(seq.delta0 + 0.5) - seq.delta0) * std::pow(f, k), 0.0);
            break;
        case 3:  // (delta, sigma) -> (0, sigma0), sigma0 > 0
            seq.sigma0 = spec.sigma0;
            for (int k = 0; k < n; ++k)
                seq.mus.emplace_back(
                    0.5 * di * std::pow(f, k),
                    seq.sigma0 + (clampR(seq.sigma0 + 0.5) - seq.sigma0) * std::pow(f, k));
            break;
        case 4:  // (delta, 0) -> (0, 0)
            for (int k = 0; k < n; ++k) seq.mus.emplace_back(di * std::pow(f, k), 0.0);
            break;
        case 5:  // (0, sigma) -> (0, 0)
            for (int k = 0; k < n; ++k) seq.mus.emplace_back(0.0, si * std::pow(f, k));
            break;
        default:
            throw std::invalid_argument("run_singular_limit: type must be 1..5");
    }
    return seq;
}

}  // namespace

LimitResult run_singular_limit(const Config& cfg, int limit_type) {
    Grids grids(cfg.grid);
    DataSeeds seeds = make_seed_family(cfg.seed_family, grids);
    MuSequence seq = mu_sequence(cfg.limit, limit_type, cfg.params.R);

    LimitResult res;
    res.type = limit_type;
    res.delta0 = seq.delta0;
    res.sigma0 = seq.sigma0;

    // Reference solve at the target parameters, computed once.
    PhysicalParams p0 = cfg.params.with_mu(seq.delta0, seq.sigma0);
    SolverOptions opt = cfg.resolved_solver(grids);
    auto ref_data = make_compatible_data(p0, grids, seeds);
    auto [ref_sol, ref_bundle] = solve_full(ref_data.data, p0, grids, opt);

    for (int k = 0; k < static_cast<int>(seq.mus.size()); ++k) {
        auto [d, s] = seq.mus[k];
        PhysicalParams pk = cfg.params.with_mu(d, s);
        auto made = make_compatible_data(pk, grids, seeds);
        auto [sol, bundle] = solve_full(made.data, pk, grids, opt);
        LimitRow row;
        row.k = k;
        row.delta = d;
        row.sigma = s;
        row.err = solution_error_norm(sol, ref_sol, p0, grids);
        res.rows.push_back(row);
    }

    res.monotone = true;
    for (std::size_t k = 0; k + 1 < res.rows.size(); ++k)
        res.monotone = res.monotone && res.rows[k + 1].err < res.rows[k].err;
    res.ratio_last_first = res.rows.back().err / (res.rows.front().err + 1e-300);
    res.pass = res.monotone && res.ratio_last_first <= 0.25;
    return res;
}

std::string limit_csv(const LimitResult& res) {
    std::ostringstream os;
    os.precision(12);
    os << "# stefan-limits limit csv v1 type=" << res.type << "\n";
    os << "k,delta,sigma,err\n";
    for (const auto& r : res.rows)
        os << r.k << ',' << r.delta << ',' << r.sigma << ',' << r.err << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// Sector study
// ---------------------------------------------------------------------------

SectorRunResult run_sector_report(const Config& cfg) {
    SectorRunResult out;
    PhysicalParams p = cfg.params;
    auto kappa_d = find_kappa_for_margin(p, cfg.sector, p.R / 2.0, 0.0);
    auto kappa_s = find_kappa_for_margin(p, cfg.sector, 0.0, p.R / 2.0);
    out.kappa_used = std::max(kappa_d.value_or(cfg.sector.kappa_list.back()),
                              kappa_s.value_or(cfg.sector.kappa_list.back()));
    p.kappa = out.kappa_used;

    out.report = probe_sector_bounds(p, cfg.sector, /*keep_probes=*/true);
    SectorSpec doubled = cfg.sector;
    doubled.n_lambda *= 2;
    doubled.n_z *= 2;
    out.refined = probe_sector_bounds(p, doubled, /*keep_probes=*/false);

    double change = std::abs(out.refined.min_triangle - out.report.min_triangle) /
                    (std::abs(out.report.min_triangle) + 1e-300);
    for (int j = 0; j < 7; ++j) {
        double denom = std::max(out.report.sup_mj[j], 1e-12);
        change = std::max(change, std::abs(out.refined.sup_mj[j] - out.report.sup_mj[j]) / denom);
    }
    out.refine_change = change;
    out.pass = !out.report.fail && !out.refined.fail;
    return out;
}

std::string sector_csv(const SectorRunResult& res) {
    std::ostringstream os;
    os.precision(12);
    os << "# stefan-limits sector csv v1\n";
    os << "lambda_re,lambda_im,z_re,z_im,delta,sigma,triangle_ratio,"
          "m0,m1,m2,m3,m4,m5,m6\n";
    for (const auto& pr : res.report.probes) {
        os << pr.point.lambda.real() << ',' << pr.point.lambda.imag() << ','
           << pr.point.z.real() << ',' << pr.point.z.imag() << ',' << pr.point.delta << ','
           << pr.point.sigma << ',' << pr.triangle;
        for (int j = 0; j < 7; ++j) os << ',' << std::abs(pr.family[j]);
        os << '\n';
    }
    return os.str();
}

std::string sector_summary_json(const SectorRunResult& res) {
    json j;
    j["kappa_used"] = res.kappa_used;
    j["min_triangle_ratio"] = res.report.min_triangle;
    j["min_m_over_parts"] = res.report.min_m_over_parts;
    j["min_omega_lower"] = res.report.min_omega_lower;
    j["sup_mj"] = res.report.sup_mj;
    j["refined_min_triangle_ratio"] = res.refined.min_triangle;
    j["refined_sup_mj"] = res.refined.sup_mj;
    j["refine_change"] = res.refine_change;
    j["n_samples"] = res.report.n_samples;
    j["fail"] = !res.pass;
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Cross-check
// ---------------------------------------------------------------------------

std::vector<CrossCheckRow> run_cross_check(const Config& cfg, double tol_rho, double tol_v) {
    Grids grids(cfg.grid);
    DataSeeds seeds = make_seed_family("zero_trace_two_mode", grids);
    std::vector<CrossCheckRow> rows;
    const double vals[3] = {0.0, 0.5, 1.0};
    for (double d : vals) {
        for (double s : vals) {
            PhysicalParams p = cfg.params.with_mu(d, s);
            auto made = make_compatible_data(p, grids, seeds);
            SolverOptions opt = cfg.resolved_solver(grids);
            SolutionTriple spec_sol = solve_zero_trace(made.data, p, grids, opt);
            SolutionTriple fd_sol = fd_solve_full(made.data, p, grids);
            CrossCheckRow row;
            row.delta = d;
            row.sigma = s;
            row.rho_rel_l2 = rel_l2_interface(spec_sol.rho, fd_sol.rho, grids);
            row.v_rel_l2 = rel_l2_bulk(spec_sol.v, fd_sol.v, grids);
            row.pass = row.rho_rel_l2 <= tol_rho && row.v_rel_l2 <= tol_v;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string cross_check_csv(const std::vector<CrossCheckRow>& rows) {
    std::ostringstream os;
    os.precision(12);
    os << "# stefan-limits cross-check csv v1\n";
    os << "delta,sigma,rho_rel_l2,v_rel_l2,pass\n";
    for (const auto& r : rows)
        os << r.delta << ',' << r.sigma << ',' << r.rho_rel_l2 << ',' << r.v_rel_l2 << ','
           << (r.pass ? 1 : 0) << '\n';
    return os.str();
}

}  // namespace stefan
