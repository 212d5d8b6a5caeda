#pragma once

#include <functional>

namespace stefan {

/// Physical and analytic parameters of the linearized two-phase problem.
///
/// a_plus / a_minus are the interface coupling coefficients as functions of
/// (delta, sigma); they default to the constant 1. They must be continuous on
/// [0,R]^2 with a(0,0) > 0, which validate_params probes by sampling.
struct PhysicalParams {
    double c_plus = 1.0;
    double c_minus = 1.0;
    double delta = 0.0;
    double sigma = 0.0;
    double kappa = 1.0;
    double p = 4.0;
    double R = 1.0;
    std::function<double(double, double)> a_plus = [](double, double) { return 1.0; };
    std::function<double(double, double)> a_minus = [](double, double) { return 1.0; };

    double ap() const { return a_plus(delta, sigma); }
    double am() const { return a_minus(delta, sigma); }

    PhysicalParams with_mu(double d, double s) const {
        PhysicalParams q = *this;
        q.delta = d;
        q.sigma = s;
        return q;
    }
};

/// Returns params unchanged iff every invariant holds; otherwise throws
/// std::invalid_argument naming the first violated invariant.
PhysicalParams validate_params(const PhysicalParams& params);

}  // namespace stefan
