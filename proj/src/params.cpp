#include "stefan/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stefan {

PhysicalParams validate_params(const PhysicalParams& params) {
    auto fail = [](const std::string& name) {
        throw std::invalid_argument("invalid PhysicalParams: " + name);
    };
    if (!(params.c_plus > 0.0)) fail("c_plus > 0");
    if (!(params.c_minus > 0.0)) fail("c_minus > 0");
    if (!(params.kappa >= 1.0)) fail("kappa >= 1");
    if (!(params.R > 0.0)) fail("R > 0");
    if (!(params.delta >= 0.0 && params.delta <= params.R)) fail("0 <= delta <= R");
    if (!(params.sigma >= 0.0 && params.sigma <= params.R)) fail("0 <= sigma <= R");
    if (!(params.p > 3.0)) fail("p > 3");
    if (!params.a_plus || !params.a_minus) fail("a_plus/a_minus evaluable");
    if (!(params.a_plus(0.0, 0.0) > 0.0)) fail("a_plus(0,0) > 0");
    if (!(params.a_minus(0.0, 0.0) > 0.0)) fail("a_minus(0,0) > 0");
    // Continuity is probed, not proven: sample the parameter box for finiteness.
    const int n = 9;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double d = params.R * i / (n - 1);
            double s = params.R * j / (n - 1);
            if (!std::isfinite(params.a_plus(d, s))) fail("a_plus finite on [0,R]^2");
            if (!std::isfinite(params.a_minus(d, s))) fail("a_minus finite on [0,R]^2");
        }
    }
    return params;
}

}  // namespace stefan
