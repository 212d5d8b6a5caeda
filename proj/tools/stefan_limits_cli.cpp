#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "stefan/experiments.hpp"
#include "stefan/fd_oracle.hpp"
#include "stefan/norms.hpp"
#include "stefan/spectral.hpp"

namespace fs = std::filesystem;
using namespace stefan;

namespace {

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

int cmd_uniformity(const Config& cfg, const fs::path& outdir) {
    auto res = run_uniformity_study(cfg);
    write_file(outdir / "uniformity.csv", uniformity_csv(res));
    nlohmann::json j;
    j["max_ratio"] = res.max_ratio;
    j["min_ratio"] = res.min_ratio;
    j["spread"] = res.min_ratio > 0 ? res.max_ratio / res.min_ratio : 0.0;
    j["monotone_blowup"] = res.monotone_blowup;
    j["any_flagged"] = res.any_flagged;
    write_file(outdir / "uniformity_summary.json", j.dump(2));
    std::cout << "uniformity: ratio spread " << j["spread"] << ", blowup "
              << (res.monotone_blowup ? "yes" : "no") << "\n";
    return (res.any_flagged || res.monotone_blowup) ? 2 : 0;
}

int cmd_limit(const Config& cfg, int type, const fs::path& outdir) {
    auto res = run_singular_limit(cfg, type);
    write_file(outdir / ("limit_type" + std::to_string(type) + ".csv"), limit_csv(res));
    std::cout << "limit type " << type << ": monotone " << (res.monotone ? "yes" : "no")
              << ", e_last/e_first = " << res.ratio_last_first << "\n";
    return res.pass ? 0 : 2;
}

int cmd_sector(const Config& cfg, const fs::path& outdir) {
    auto res = run_sector_report(cfg);
    write_file(outdir / "sector.csv", sector_csv(res));
    write_file(outdir / "sector_summary.json", sector_summary_json(res));
    std::cout << "sector: min triangle ratio " << res.report.min_triangle << ", kappa "
              << res.kappa_used << ", refine change " << res.refine_change << "\n";
    return res.pass ? 0 : 2;
}

int cmd_validate(const Config& cfg, const fs::path& outdir) {
    validate_params(cfg.params);
    Grids grids(cfg.grid);
    DataSeeds seeds = make_seed_family(cfg.seed_family, grids);
    auto made = make_compatible_data(cfg.params, grids, seeds);
    nlohmann::json j;
    j["params_valid"] = true;
    j["compat_residual"] = made.report.residual_max;
    if (made.report.w_norm_evaluated) j["w_norm_c"] = made.report.w_norm_c;
    auto rep = data_norm_report(made.data, cfg.params, grids);
    j["data_norm_F00"] = rep.data_total;
    j["rhs"] = rep.rhs(cfg.params.delta, cfg.params.sigma);
    write_file(outdir / "validate.json", j.dump(2));
    std::cout << "validate: compat residual " << made.report.residual_max << "\n";
    return made.report.residual_max <= 1e-12 ? 0 : 2;
}

int cmd_cross_check(const Config& cfg, const fs::path& outdir) {
    auto rows = run_cross_check(cfg);
    write_file(outdir / "cross_check.csv", cross_check_csv(rows));
    bool all = true;
    for (const auto& r : rows) all = all && r.pass;
    std::cout << "cross-check: " << rows.size() << " rows, " << (all ? "all pass" : "FAIL")
              << "\n";
    return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for the linearized two-phase Stefan problem "
                 "with surface tension and kinetic undercooling"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "results";
    app.add_option("--config", config_path, "JSON configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");

    auto* uni = app.add_subcommand("uniformity", "maximal-regularity ratio sweep");
    auto* lim = app.add_subcommand("limit", "singular-limit convergence sweep");
    int limit_type = 0;
    lim->add_option("--type", limit_type, "limit regime 1..5 (default from config)");
    auto* sec = app.add_subcommand("sector", "symbol sector-bound probe");
    auto* val = app.add_subcommand("validate", "parameter and compatibility checks");
    auto* crs = app.add_subcommand("cross-check", "spectral vs. method-of-lines comparison");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        Config cfg = load_config(config_path);
        fs::create_directories(out_dir);
        fs::path outdir(out_dir);
        if (uni->parsed()) return cmd_uniformity(cfg, outdir);
        if (lim->parsed()) return cmd_limit(cfg, limit_type > 0 ? limit_type : cfg.limit.type,
                                            outdir);
        if (sec->parsed()) return cmd_sector(cfg, outdir);
        if (val->parsed()) return cmd_validate(cfg, outdir);
        if (crs->parsed()) return cmd_cross_check(cfg, outdir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
