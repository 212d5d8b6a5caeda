#pragma once

#include <array>
#include <optional>
#include <vector>

#include "stefan/params.hpp"
#include "stefan/util.hpp"

namespace stefan {

/// A point of the sector product on which the symbols are evaluated.
/// lambda ranges over Sigma_{pi-phi0}, z (standing for |xi|^2) over Sigma_phi,
/// and (delta, sigma) over the parameter box [0,R]^2.
struct SectorPoint {
    Complex lambda;
    Complex z;
    double delta = 0.0;
    double sigma = 0.0;
};

/// Sector geometry and sampling plan. Angles must satisfy
/// phi0 in (pi/3, pi/2) and phi in (0, phi0 - pi/3).
struct SectorSpec {
    double phi0 = 0.45 * kPi;
    double phi_fraction = 0.5;  // phi = phi_fraction * (phi0 - pi/3)
    double lambda_min = 1e-3, lambda_max = 1e6;
    double z_min = 1e-3, z_max = 1e6;
    int n_lambda = 40, n_z = 40;
    int n_delta = 5, n_sigma = 5;
    double floor = 1e-6, ceiling = 1e6;
    std::vector<double> kappa_list = {1, 2, 4, 8, 16, 32, 64, 128, 256};

    double phi() const { return phi_fraction * (phi0 - kPi / 3.0); }
    bool angles_valid() const {
        return phi0 > kPi / 3.0 && phi0 < kPi / 2.0 && phi() > 0.0 && phi() < phi0 - kPi / 3.0;
    }
};

bool sector_admissible(const SectorPoint& pt, const SectorSpec& spec, double R);

/// Principal branch of sqrt(lambda + kappa + c z); Re > 0 on the admissible
/// sectors. Total there; the branch-cut guard is exposed separately.
Complex omega(Complex lambda, Complex z, double c, double kappa);

/// True when arg(lambda + kappa + c z) is within 1e-10 of +-pi.
bool omega_near_branch_cut(Complex lambda, Complex z, double c, double kappa);

/// The interface symbol
///   m = (lambda+kappa) + (sigma z + delta (lambda+kappa)) (sqrt(c+) w+ + sqrt(c-) w-)
///       + a+ sqrt(c+) w+ + a- sqrt(c-) w-,
/// with w± = omega(lambda, z, c±, kappa) and a± evaluated at the point's
/// (delta, sigma).
Complex m_symbol(const SectorPoint& pt, const PhysicalParams& params);

/// The bounded multiplier family m0..m6 built on f = m_symbol:
/// 1/f, (l+k)/f, sqrt(z)/f, s z sqrt(l+k)/f, s z^{3/2}/f, d (l+k)^{3/2}/f,
/// d (l+k) sqrt(z)/f.
std::array<Complex, 7> m_family(const SectorPoint& pt, const PhysicalParams& params);

/// |f1+f2| / (|f1|+|f2|), in [0,1]. Rejects (0,0).
double triangle_ratio(Complex f1, Complex f2);

/// The two summands of the splitting m = f1 + f2:
///   f1 = (lambda+kappa) [ delta (sqrt(c+) w+ + sqrt(c-) w-) + 1 ],
///   f2 = m - f1.
Complex f1_split(const SectorPoint& pt, const PhysicalParams& params);
Complex f2_split(const SectorPoint& pt, const PhysicalParams& params);

struct SymbolProbe {
    SectorPoint point;
    Complex omega_plus, omega_minus;
    Complex m_value;
    std::array<Complex, 7> family;
    double triangle;
};

SymbolProbe probe_point(const SectorPoint& pt, const PhysicalParams& params);

struct SectorReport {
    double min_triangle = 1.0;
    double min_m_over_parts = 1.0;       // min |m| / (|f1|+|f2|), equals min_triangle
    std::array<double, 7> sup_mj{};
    double min_omega_lower = 0.0;        // min |w±| / (sqrt|l| + sqrt(k) + c sqrt|z|)
    std::size_t n_samples = 0;
    bool fail = false;
    std::vector<SymbolProbe> probes;     // in enumeration order, for CSV export
};

/// Deterministic sweep of the sector product; flags FAIL when the sampled
/// minimum drops below spec.floor or any sup exceeds spec.ceiling.
SectorReport probe_sector_bounds(const PhysicalParams& params, const SectorSpec& spec,
                                 bool keep_probes = false);

/// sup over the sample of |a+ sqrt(c+) w+ + a- sqrt(c-) w-| / |g| with
/// g = m - a+ sqrt(c+) w+ - a- sqrt(c-) w-, at fixed kappa. The parameter box
/// is restricted to delta >= delta_star or sigma >= sigma_star.
double perturbation_margin(const PhysicalParams& params, const SectorSpec& spec, double kappa,
                           double delta_star, double sigma_star);

/// Smallest kappa in spec.kappa_list with perturbation_margin <= 1/2, if any.
std::optional<double> find_kappa_for_margin(const PhysicalParams& params, const SectorSpec& spec,
                                            double delta_star, double sigma_star);

}  // namespace stefan
