#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stefan/util.hpp"

namespace stefan {

enum class ContourKind { talbot, bromwich };

/// Quadrature contour for the Bromwich integral.
///
/// talbot: the cotangent contour re-tuned per target time; geometric accuracy
/// for transforms that decay in the left half-plane (resolvent-type symbols).
///
/// bromwich: a truncated vertical line Re(lambda) = shift. Slower, but the
/// node set is time-independent and the contour never enters the half-plane
/// where transforms of compactly supported data grow, which is what the
/// solver needs.
struct ContourSpec {
    ContourKind kind = ContourKind::talbot;
    int n_nodes = 48;
    double tol = 1e-8;        // convergence check threshold under node doubling
    int refine_max = 4;
    double shift = 1.0;       // bromwich: Re(lambda)
    double spacing = 0.35;    // bromwich: Im step
};

ContourKind contour_kind_from_string(const std::string& s);

struct ContourNodes {
    std::vector<Complex> lambda;
    std::vector<Complex> weight;  // includes d(lambda)/(2 pi i) and the quad weight
};

/// Nodes for a given target time (talbot rescales by t_scale; bromwich ignores it).
ContourNodes contour_nodes(const ContourSpec& spec, double t_scale, int n_override = 0);

/// Sum of weight * exp(lambda t) * F over the node set.
Complex inverse_laplace_at(std::span<const Complex> F_values, const ContourNodes& nodes, double t);

struct InvertOutcome {
    Complex value;
    bool converged = true;
    double last_delta = 0.0;
};

/// Contour-quadrature Bromwich inversion with node-doubling refinement; sets
/// converged = false when doubling still moves the result by more than tol.
InvertOutcome inverse_laplace(const std::function<Complex(Complex)>& F, double t,
                              const ContourSpec& spec);

/// Laplace transform of a time series given on (0,T], extended to (0,2T) by
/// reflection, damped by exp(-kappa t), and integrated exactly against the
/// piecewise-cubic spline of the damped extension. The two panels (0,T) and
/// (T,2T) carry separate splines so the reflection kink stays sharp.
class DampedSeriesTransform {
public:
    /// series is given on t_with0 (t=0 first); a zero-trace series has
    /// series[0] == 0.
    DampedSeriesTransform(std::span<const double> t_with0, std::span<const Complex> series,
                          double kappa);

    /// Transform at node lambda of the damped extension restricted to
    /// (0, min(t_upper, 2T)).
    Complex at(Complex lambda, double t_upper) const;
    Complex at(Complex lambda) const { return at(lambda, 2.0 * T_); }

    double horizon() const { return 2.0 * T_; }

private:
    double T_ = 0.0;
    double kappa_ = 0.0;
    CubicSpline front_, back_;  // reflected extension on [0,T] and [T,2T]
};

/// Convenience wrapper: transform of the damped reflected series at each node.
/// Warns (via the returned flag) when a zero-trace transform is requested for
/// a series with series[0] != 0.
struct DataTransformResult {
    std::vector<Complex> values;
    bool zero_trace_ok = true;
};

DataTransformResult laplace_of_data(std::span<const double> t_with0,
                                    std::span<const Complex> series, double kappa,
                                    std::span<const Complex> lambda_nodes,
                                    bool expect_zero_trace = false);

/// Exact moments M_j = int_0^u s^j exp(-lambda s) ds for j = 0..3.
std::array<Complex, 4> exp_moments(Complex lambda, double u);

}  // namespace stefan
