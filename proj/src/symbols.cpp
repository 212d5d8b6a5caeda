#include "stefan/symbols.hpp"

#include <cmath>
#include <stdexcept>

namespace stefan {

namespace {

double sector_arg(Complex w) { return std::atan2(w.imag(), w.real()); }

/// Deterministic sample of one sector: log-spaced moduli crossed with a fixed
/// seven-angle cycle. The angle set does not move under grid doubling, so
/// refinement studies only refine the moduli.
std::vector<Complex> sample_sector(double r_min, double r_max, int n, double half_angle) {
    std::vector<Complex> pts;
    pts.reserve(n);
    const double margin = 0.995;
    constexpr int kAngles = 7;
    for (int i = 0; i < n; ++i) {
        double r = n > 1 ? r_min * std::pow(r_max / r_min, double(i) / (n - 1)) : r_min;
        double frac = double(i % kAngles) / (kAngles - 1);
        double arg = margin * half_angle * (2.0 * frac - 1.0);
        pts.emplace_back(r * std::cos(arg), r * std::sin(arg));
    }
    return pts;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n > 1 ? a + (b - a) * i / (n - 1) : a;
    return v;
}

}  // namespace

bool sector_admissible(const SectorPoint& pt, const SectorSpec& spec, double R) {
    if (!spec.angles_valid()) return false;
    if (pt.lambda == Complex{} || std::abs(sector_arg(pt.lambda)) >= kPi - spec.phi0) return false;
    if (pt.z != Complex{} && std::abs(sector_arg(pt.z)) >= spec.phi()) return false;
    if (pt.delta < 0.0 || pt.delta > R || pt.sigma < 0.0 || pt.sigma > R) return false;
    return true;
}

Complex omega(Complex lambda, Complex z, double c, double kappa) {
    return std::sqrt(lambda + kappa + c * z);
}

bool omega_near_branch_cut(Complex lambda, Complex z, double c, double kappa) {
    Complex w = lambda + kappa + c * z;
    if (w == Complex{}) return true;
    return kPi - std::abs(sector_arg(w)) < 1e-10;
}

Complex m_symbol(const SectorPoint& pt, const PhysicalParams& params) {
    const Complex lk = pt.lambda + params.kappa;
    const Complex wp = omega(pt.lambda, pt.z, params.c_plus, params.kappa);
    const Complex wm = omega(pt.lambda, pt.z, params.c_minus, params.kappa);
    const double ap = params.a_plus(pt.delta, pt.sigma);
    const double am = params.a_minus(pt.delta, pt.sigma);
    const Complex sum = std::sqrt(params.c_plus) * wp + std::sqrt(params.c_minus) * wm;
    return lk + (pt.sigma * pt.z + pt.delta * lk) * sum +
           ap * std::sqrt(params.c_plus) * wp + am * std::sqrt(params.c_minus) * wm;
}

std::array<Complex, 7> m_family(const SectorPoint& pt, const PhysicalParams& params) {
    const Complex f = m_symbol(pt, params);
    const Complex lk = pt.lambda + params.kappa;
    const Complex sqlk = std::sqrt(lk);
    const Complex sqz = std::sqrt(pt.z);
    std::array<Complex, 7> m;
    m[0] = 1.0 / f;
    m[1] = lk / f;
    m[2] = sqz / f;
    m[3] = pt.sigma * pt.z * sqlk / f;
    m[4] = pt.sigma * pt.z * sqz / f;
    m[5] = pt.delta * lk * sqlk / f;
    m[6] = pt.delta * lk * sqz / f;
    return m;
}

double triangle_ratio(Complex f1, Complex f2) {
    double denom = std::abs(f1) + std::abs(f2);
    if (denom == 0.0) throw std::invalid_argument("triangle_ratio undefined at (0,0)");
    return std::abs(f1 + f2) / denom;
}

Complex f1_split(const SectorPoint& pt, const PhysicalParams& params) {
    const Complex lk = pt.lambda + params.kappa;
    const Complex wp = omega(pt.lambda, pt.z, params.c_plus, params.kappa);
    const Complex wm = omega(pt.lambda, pt.z, params.c_minus, params.kappa);
    const Complex sum = std::sqrt(params.c_plus) * wp + std::sqrt(params.c_minus) * wm;
    return lk * (pt.delta * sum + 1.0);
}

Complex f2_split(const SectorPoint& pt, const PhysicalParams& params) {
    return m_symbol(pt, params) - f1_split(pt, params);
}

SymbolProbe probe_point(const SectorPoint& pt, const PhysicalParams& params) {
    SymbolProbe probe;
    probe.point = pt;
    probe.omega_plus = omega(pt.lambda, pt.z, params.c_plus, params.kappa);
    probe.omega_minus = omega(pt.lambda, pt.z, params.c_minus, params.kappa);
    probe.m_value = m_symbol(pt, params);
    probe.family = m_family(pt, params);
    probe.triangle = triangle_ratio(f1_split(pt, params), f2_split(pt, params));
    return probe;
}

SectorReport probe_sector_bounds(const PhysicalParams& params, const SectorSpec& spec,
                                 bool keep_probes) {
    if (!spec.angles_valid())
        throw std::invalid_argument("probe_sector_bounds: sector angles out of range");
    if (spec.n_lambda < 2 || spec.n_z < 2 || spec.n_delta < 1 || spec.n_sigma < 1)
        throw std::invalid_argument("probe_sector_bounds: degenerate sample grid");

    const auto lambdas = sample_sector(spec.lambda_min, spec.lambda_max, spec.n_lambda,
                                       kPi - spec.phi0);
    const auto zs = sample_sector(spec.z_min, spec.z_max, spec.n_z, spec.phi());
    const auto deltas = linspace(0.0, params.R, spec.n_delta);
    const auto sigmas = linspace(0.0, params.R, spec.n_sigma);

    SectorReport rep;
    rep.min_omega_lower = 1e300;
    for (double d : deltas) {
        for (double s : sigmas) {
            for (const Complex& lam : lambdas) {
                for (const Complex& z : zs) {
                    SectorPoint pt{lam, z, d, s};
                    SymbolProbe pr = probe_point(pt, params);
                    rep.min_triangle = std::min(rep.min_triangle, pr.triangle);
                    for (int j = 0; j < 7; ++j)
                        rep.sup_mj[j] = std::max(rep.sup_mj[j], std::abs(pr.family[j]));
                    double denom_p = std::sqrt(std::abs(lam)) + std::sqrt(params.kappa) +
                                     params.c_plus * std::sqrt(std::abs(z));
                    double denom_m = std::sqrt(std::abs(lam)) + std::sqrt(params.kappa) +
                                     params.c_minus * std::sqrt(std::abs(z));
                    rep.min_omega_lower = std::min(
                        {rep.min_omega_lower, std::abs(pr.omega_plus) / denom_p,
                         std::abs(pr.omega_minus) / denom_m});
                    ++rep.n_samples;
                    if (keep_probes) rep.probes.push_back(pr);
                }
            }
        }
    }
    rep.min_m_over_parts = rep.min_triangle;
    rep.fail = rep.min_triangle < spec.floor;
    for (double s : rep.sup_mj) rep.fail = rep.fail || s > spec.ceiling;
    return rep;
}

double perturbation_margin(const PhysicalParams& params, const SectorSpec& spec, double kappa,
                           double delta_star, double sigma_star) {
    if (!(delta_star > 0.0) && !(sigma_star > 0.0))
        throw std::invalid_argument("perturbation_margin: need delta* > 0 or sigma* > 0");
    PhysicalParams pk = params;
    pk.kappa = kappa;
    const auto lambdas = sample_sector(spec.lambda_min, spec.lambda_max, spec.n_lambda,
                                       kPi - spec.phi0);
    const auto zs = sample_sector(spec.z_min, spec.z_max, spec.n_z, spec.phi());
    const auto deltas = linspace(delta_star > 0.0 ? delta_star : 0.0, params.R, spec.n_delta);
    const auto sigmas = linspace(sigma_star > 0.0 ? sigma_star : 0.0, params.R, spec.n_sigma);

    double sup = 0.0;
    for (double d : deltas) {
        for (double s : sigmas) {
            for (const Complex& lam : lambdas) {
                for (const Complex& z : zs) {
                    SectorPoint pt{lam, z, d, s};
                    const Complex wp = omega(lam, z, pk.c_plus, kappa);
                    const Complex wm = omega(lam, z, pk.c_minus, kappa);
                    const Complex aw = pk.a_plus(d, s) * std::sqrt(pk.c_plus) * wp +
                                       pk.a_minus(d, s) * std::sqrt(pk.c_minus) * wm;
                    const Complex g = m_symbol(pt, pk) - aw;
                    sup = std::max(sup, std::abs(aw) / std::abs(g));
                }
            }
        }
    }
    return sup;
}

std::optional<double> find_kappa_for_margin(const PhysicalParams& params, const SectorSpec& spec,
                                            double delta_star, double sigma_star) {
    for (double kappa : spec.kappa_list) {
        if (perturbation_margin(params, spec, kappa, delta_star, sigma_star) <= 0.5)
            return kappa;
    }
    return std::nullopt;
}

}  // namespace stefan
