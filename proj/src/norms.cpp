#include "stefan/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "stefan/fourier.hpp"

namespace stefan {

namespace {

// Gauss-Legendre 8 on [-1,1].
constexpr double kGx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                           -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                           0.7966664774136267,  0.9602898564975363};
constexpr double kGw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                           0.2223810344533745, 0.1012285362903763};

double pow_abs(double x, double p) { return std::pow(std::abs(x), p); }

// Gauss 8x8 of |m1 u + m2 v|^p / (u+v)^{1+sp} over [ua,ub]x[va,vb].
double gauss_rect(double m1, double m2, double p, double sp1, double ua, double ub, double va,
                  double vb) {
    const double ju = 0.5 * (ub - ua), jv = 0.5 * (vb - va);
    double acc = 0.0;
    for (int i = 0; i < 8; ++i) {
        double u = 0.5 * (ua + ub) + ju * kGx[i];
        for (int j = 0; j < 8; ++j) {
            double v = 0.5 * (va + vb) + jv * kGx[j];
            acc += kGw[i] * kGw[j] * pow_abs(m1 * u + m2 * v, p) / std::pow(u + v, sp1);
        }
    }
    return acc * ju * jv;
}

// Integral over (0,h1)x(0,h2) with the corner singularity at (0,0) resolved
// by dyadic shrinking toward the corner.
double adjacent_cells_integral(double m1, double m2, double h1, double h2, double p, double s) {
    if (m1 == 0.0 && m2 == 0.0) return 0.0;
    const double sp1 = 1.0 + s * p;
    double acc = 0.0;
    double u1 = h1, v1 = h2;
    for (int level = 0; level < 54; ++level) {
        double u0 = 0.5 * u1, v0 = 0.5 * v1;
        double ring = gauss_rect(m1, m2, p, sp1, u0, u1, 0.0, v1) +
                      gauss_rect(m1, m2, p, sp1, 0.0, u0, v0, v1);
        acc += ring;
        if (ring < 1e-16 * acc || u0 < 1e-300) break;
        u1 = u0;
        v1 = v0;
    }
    return acc;
}

double same_cell_integral(double slope, double h, double p, double s) {
    if (slope == 0.0) return 0.0;
    const double q = p - 1.0 - s * p;  // > -1 since s < 1
    return pow_abs(slope, p) * 2.0 * std::pow(h, q + 2.0) / ((q + 1.0) * (q + 2.0));
}

// p-th power of the Slobodeckij seminorm of the piecewise-linear interpolant.
double seminorm_pow(std::span<const double> nodes, std::span<const double> values, double s,
                    double p, bool torus, double period) {
    const std::size_t n = nodes.size();
    if (n < 3) throw std::invalid_argument("slobodeckij_seminorm: need >= 3 nodes");
    const std::size_t ncell = torus ? n : n - 1;

    // Cell geometry; the torus wrap cell closes the ring.
    std::vector<double> xl(ncell), h(ncell), slope(ncell);
    std::vector<double> nval(nodes.begin(), nodes.end());
    for (std::size_t i = 0; i < ncell; ++i) {
        double xr = (i + 1 < n) ? nodes[i + 1] : nodes[0] + period;
        double vr = (i + 1 < n) ? values[i + 1] : values[0];
        xl[i] = nodes[i];
        h[i] = xr - nodes[i];
        slope[i] = (vr - values[i]) / h[i];
    }

    auto node_pos = [&](std::size_t a) { return a < n ? nodes[a] : nodes[0] + period; };
    auto node_val = [&](std::size_t a) { return a < n ? values[a] : values[0]; };
    auto dist = [&](double xa, double xb) {
        double d = std::abs(xa - xb);
        if (torus) d = std::min(d, period - d);
        return d;
    };

    const double sp1 = 1.0 + s * p;
    double acc = 0.0;

    // Far cell pairs: product trapezoid on the four corners.
    for (std::size_t i = 0; i < ncell; ++i) {
        for (std::size_t j = 0; j < ncell; ++j) {
            std::size_t dij = i > j ? i - j : j - i;
            if (torus) dij = std::min(dij, ncell - dij);
            if (dij <= 1) continue;
            double sum4 = 0.0;
            for (int ca = 0; ca < 2; ++ca) {
                for (int cb = 0; cb < 2; ++cb) {
                    double xa = node_pos(i + ca), xb = node_pos(j + cb);
                    double d = dist(xa, xb);
                    if (d <= 0.0) continue;
                    sum4 += pow_abs(node_val(i + ca) - node_val(j + cb), p) / std::pow(d, sp1);
                }
            }
            acc += 0.25 * h[i] * h[j] * sum4;
        }
    }
    // Same cell, exact for the linear interpolant.
    for (std::size_t i = 0; i < ncell; ++i) acc += same_cell_integral(slope[i], h[i], p, s);
    // Adjacent cells, counted twice by symmetry.
    const std::size_t nadj = torus ? ncell : ncell - 1;
    for (std::size_t i = 0; i < nadj; ++i) {
        std::size_t j = (i + 1) % ncell;
        acc += 2.0 * adjacent_cells_integral(slope[i], slope[j], h[i], h[j], p, s);
    }
    return acc;
}

std::vector<double> fd_first_derivative(std::span<const double> nodes,
                                        std::span<const double> values) {
    const std::size_t n = nodes.size();
    std::vector<double> d(n);
    {
        OneSidedD1 s = one_sided_d1(nodes[1] - nodes[0], nodes[2] - nodes[1]);
        d[0] = s.c0 * values[0] + s.c1 * values[1] + s.c2 * values[2];
        OneSidedD1 e = one_sided_d1(nodes[n - 1] - nodes[n - 2], nodes[n - 2] - nodes[n - 3]);
        d[n - 1] = -(e.c0 * values[n - 1] + e.c1 * values[n - 2] + e.c2 * values[n - 3]);
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double a = nodes[i] - nodes[i - 1], b = nodes[i + 1] - nodes[i];
        d[i] = (-b / (a * (a + b))) * values[i - 1] + ((b - a) / (a * b)) * values[i] +
               (a / (b * (a + b))) * values[i + 1];
    }
    return d;
}

std::vector<double> fd_second_derivative(std::span<const double> nodes,
                                         std::span<const double> values) {
    const std::size_t n = nodes.size();
    std::vector<double> d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double a = nodes[i] - nodes[i - 1], b = nodes[i + 1] - nodes[i];
        d[i] = 2.0 * values[i - 1] / (a * (a + b)) - 2.0 * values[i] / (a * b) +
               2.0 * values[i + 1] / (b * (a + b));
    }
    d[0] = d[1];
    d[n - 1] = d[n - 2];
    return d;
}

std::vector<double> spectral_derivative(std::span<const double> values, const Grids& grids,
                                        int order) {
    if (order == 0) return std::vector<double>(values.begin(), values.end());
    auto modes = forward_tangential(values);
    for (int m = 0; m < grids.nx(); ++m) {
        Complex ix(0.0, grids.xi()[m]);
        Complex f = 1.0;
        for (int k = 0; k < order; ++k) f *= ix;
        modes[m] *= f;
    }
    return inverse_tangential_real(modes);
}

int integer_floor(double s, double* frac) {
    double fl = std::floor(s + 1e-12);
    double f = s - fl;
    if (f < 1e-9) f = 0.0;
    *frac = f;
    return static_cast<int>(fl);
}

}  // namespace

double slobodeckij_seminorm(std::span<const double> nodes, std::span<const double> values,
                            const NormSpec& spec) {
    double frac;
    int k = integer_floor(spec.s, &frac);
    if (spec.s < 0.0 || frac == 0.0)
        throw std::invalid_argument("slobodeckij_seminorm: order out of range, s - [s] in (0,1)");
    if (spec.torus && !(spec.period > 0.0))
        throw std::invalid_argument("slobodeckij_seminorm: torus needs period");
    std::vector<double> work(values.begin(), values.end());
    for (int j = 0; j < k; ++j) work = fd_first_derivative(nodes, work);
    return std::pow(seminorm_pow(nodes, work, frac, spec.p, spec.torus, spec.period), 1.0 / spec.p);
}

namespace {

double torus_lp(std::span<const double> values, const Grids& grids, double p) {
    double acc = 0.0;
    for (double v : values) acc += pow_abs(v, p);
    return std::pow(acc * grids.x_weight(), 1.0 / p);
}

double torus_slobo_pow(std::span<const double> values, const Grids& grids, double s, double p) {
    std::vector<double> nodes(grids.x().begin(), grids.x().end());
    return seminorm_pow(nodes, values, s, p, true, grids.config().L_x);
}

}  // namespace

double torus_space_norm(std::span<const double> values, const Grids& grids, double s, double p) {
    double frac;
    int k = integer_floor(s, &frac);
    double total = 0.0;
    std::vector<double> work(values.begin(), values.end());
    total += torus_lp(work, grids, p);
    for (int j = 1; j <= k; ++j) {
        work = spectral_derivative(values, grids, j);
        total += torus_lp(work, grids, p);
    }
    if (frac > 0.0) {
        work = spectral_derivative(values, grids, k);
        total += std::pow(torus_slobo_pow(work, grids, frac, p), 1.0 / p);
    }
    return total;
}

namespace {

// L_p over (x, y, both sides) of a (x,y)-slice pair.
double slice_lp(const Array2D<double>& plus, const Array2D<double>& minus, const Grids& grids,
                double p) {
    double acc = 0.0;
    for (int j = 0; j < grids.nx(); ++j) {
        for (int k = 0; k <= grids.ny(); ++k) {
            double w = grids.x_weight() * grids.y_weights()[k];
            acc += w * (pow_abs(plus.at(j, k), p) + pow_abs(minus.at(j, k), p));
        }
    }
    return std::pow(acc, 1.0 / p);
}

Array2D<double> slice_dx(const Array2D<double>& a, const Grids& grids, int order) {
    Array2D<double> out(a.rows, a.cols);
    std::vector<double> col(a.rows);
    // rows = x, cols = y; differentiate along x per y node.
    for (std::size_t k = 0; k < a.cols; ++k) {
        for (std::size_t j = 0; j < a.rows; ++j) col[j] = a.at(j, k);
        auto d = spectral_derivative(col, grids, order);
        for (std::size_t j = 0; j < a.rows; ++j) out.at(j, k) = d[j];
    }
    return out;
}

Array2D<double> slice_dy(const Array2D<double>& a, const Grids& grids) {
    Array2D<double> out(a.rows, a.cols);
    for (std::size_t j = 0; j < a.rows; ++j) {
        auto d = fd_first_derivative(grids.y(), a.row(j));
        for (std::size_t k = 0; k < a.cols; ++k) out.at(j, k) = d[k];
    }
    return out;
}

}  // namespace

double bulk_space_norm(const BulkSlice& w, const Grids& grids, double s, double p) {
    double frac;
    int k = integer_floor(s, &frac);
    if (k > 1)
        throw std::invalid_argument("bulk_space_norm: only orders s < 2 are implemented");
    double total = slice_lp(w.plus, w.minus, grids, p);
    if (k < 1 && frac == 0.0) return total;

    std::array<Array2D<double>, 2> dx = {slice_dx(w.plus, grids, 1), slice_dx(w.minus, grids, 1)};
    std::array<Array2D<double>, 2> dy = {slice_dy(w.plus, grids), slice_dy(w.minus, grids)};
    if (k >= 1) {
        total += slice_lp(dx[0], dx[1], grids, p);
        total += slice_lp(dy[0], dy[1], grids, p);
    }
    if (frac > 0.0) {
        // s in (0,1): seminorm of the field itself; s in (1,2): of both gradients.
        std::vector<const Array2D<double>*> fields;
        if (k >= 1) {
            fields = {&dx[0], &dx[1], &dy[0], &dy[1]};
        } else {
            fields = {&w.plus, &w.minus};
        }
        std::vector<double> ynodes(grids.y().begin(), grids.y().end());
        std::vector<double> xnodes(grids.x().begin(), grids.x().end());
        for (const auto* f : fields) {
            // x-direction seminorm per y node, L_p-aggregated.
            double accx = 0.0;
            std::vector<double> col(f->rows);
            for (std::size_t kk = 0; kk < f->cols; ++kk) {
                for (std::size_t j = 0; j < f->rows; ++j) col[j] = f->at(j, kk);
                accx += grids.y_weights()[kk] *
                        seminorm_pow(xnodes, col, frac, p, true, grids.config().L_x);
            }
            total += std::pow(accx, 1.0 / p);
            // y-direction seminorm per x node.
            double accy = 0.0;
            for (std::size_t j = 0; j < f->rows; ++j)
                accy += grids.x_weight() * seminorm_pow(ynodes, f->row(j), frac, p, false, 0.0);
            total += std::pow(accy, 1.0 / p);
        }
    }
    return total;
}

namespace {

Array2D<double> field_dt(const RealField& u, const Grids& grids) {
    Array2D<double> out(u.rows, u.cols);
    const double dt = grids.dt();
    for (std::size_t j = 0; j < u.cols; ++j) {
        for (std::size_t i = 0; i < u.rows; ++i) {
            double d;
            if (i == 0)
                d = (-1.5 * u.at(0, j) + 2.0 * u.at(1, j) - 0.5 * u.at(2, j)) / dt;
            else if (i + 1 == u.rows)
                d = (1.5 * u.at(i, j) - 2.0 * u.at(i - 1, j) + 0.5 * u.at(i - 2, j)) / dt;
            else
                d = (u.at(i + 1, j) - u.at(i - 1, j)) / (2.0 * dt);
            out.at(i, j) = d;
        }
    }
    return out;
}

Array2D<double> field_dx(const RealField& u, const Grids& grids, int order) {
    Array2D<double> out(u.rows, u.cols);
    for (std::size_t i = 0; i < u.rows; ++i) {
        auto d = spectral_derivative(u.row(i), grids, order);
        for (std::size_t j = 0; j < u.cols; ++j) out.at(i, j) = d[j];
    }
    return out;
}

double field_lp(const RealField& u, const Grids& grids, double p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.rows; ++i) {
        double rowacc = 0.0;
        for (std::size_t j = 0; j < u.cols; ++j) rowacc += pow_abs(u.at(i, j), p);
        acc += grids.t_weights()[i] * rowacc * grids.x_weight();
    }
    return std::pow(acc, 1.0 / p);
}

}  // namespace

double norm_time_space(const RealField& u, double a, double b, double p, const Grids& grids) {
    double frac_a, frac_b;
    int ka = integer_floor(a, &frac_a);
    int kb = integer_floor(b, &frac_b);

    // dt^j dx^beta u, built progressively in time.
    std::vector<RealField> tslices(ka + 1);
    tslices[0] = u;
    for (int j = 1; j <= ka; ++j) tslices[j] = field_dt(tslices[j - 1], grids);

    double total = 0.0;
    for (int j = 0; j <= ka; ++j)
        for (int beta = 0; beta <= kb; ++beta)
            total += field_lp(beta == 0 ? tslices[j] : field_dx(tslices[j], grids, beta), grids, p);

    std::vector<double> xnodes(grids.x().begin(), grids.x().end());
    std::vector<double> tnodes(grids.t_with0().begin(), grids.t_with0().end());
    if (frac_b > 0.0) {
        for (int j = 0; j <= ka; ++j) {
            RealField top = field_dx(tslices[j], grids, kb);
            double acc = 0.0;
            for (std::size_t i = 0; i < top.rows; ++i)
                acc += grids.t_weights()[i] *
                       seminorm_pow(xnodes, top.row(i), frac_b, p, true, grids.config().L_x);
            total += std::pow(acc, 1.0 / p);
        }
    }
    if (frac_a > 0.0) {
        for (int beta = 0; beta <= kb; ++beta) {
            RealField top = beta == 0 ? tslices[ka] : field_dx(tslices[ka], grids, beta);
            double acc = 0.0;
            std::vector<double> col(top.rows);
            for (std::size_t jx = 0; jx < top.cols; ++jx) {
                for (std::size_t i = 0; i < top.rows; ++i) col[i] = top.at(i, jx);
                acc += grids.x_weight() * seminorm_pow(tnodes, col, frac_a, p, false, 0.0);
            }
            total += std::pow(acc, 1.0 / p);
        }
    }
    return total;
}

NormTag norm_tag_from_string(const std::string& name) {
    if (name == "E1") return NormTag::E1;
    if (name == "E2_00") return NormTag::E2_00;
    if (name == "E2_10") return NormTag::E2_10;
    if (name == "E2_01") return NormTag::E2_01;
    if (name == "F2") return NormTag::F2;
    if (name == "F3") return NormTag::F3;
    throw std::invalid_argument("unknown norm tag: " + name);
}

double anisotropic_norm(const RealField& u, NormTag tag, const PhysicalParams& params,
                        const Grids& grids) {
    const double p = params.p;
    switch (tag) {
        case NormTag::E2_00:
            return norm_time_space(u, 1.5 - 0.5 / p, 0.0, p, grids) +
                   norm_time_space(u, 1.0 - 0.5 / p, 1.0, p, grids) +
                   norm_time_space(u, 0.0, 2.0 - 1.0 / p, p, grids);
        case NormTag::E2_10:
            return norm_time_space(u, 2.0 - 0.5 / p, 0.0, p, grids) +
                   norm_time_space(u, 1.0, 2.0 - 1.0 / p, p, grids);
        case NormTag::E2_01:
            return norm_time_space(u, 1.0 - 0.5 / p, 2.0, p, grids) +
                   norm_time_space(u, 0.0, 4.0 - 1.0 / p, p, grids);
        case NormTag::F2:
            return norm_time_space(u, 1.0 - 0.5 / p, 0.0, p, grids) +
                   norm_time_space(u, 0.0, 2.0 - 1.0 / p, p, grids);
        case NormTag::F3:
            return norm_time_space(u, 0.5 - 0.5 / p, 0.0, p, grids) +
                   norm_time_space(u, 0.0, 1.0 - 1.0 / p, p, grids);
        case NormTag::E1:
            throw std::invalid_argument("anisotropic_norm: E1 needs a bulk field");
    }
    throw std::invalid_argument("anisotropic_norm: unknown tag");
}

namespace {

double bulk_lp(const BulkField& u, const Grids& grids, double p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.plus.n0; ++i) {
        double slice = 0.0;
        for (std::size_t j = 0; j < u.plus.n1; ++j)
            for (std::size_t k = 0; k < u.plus.n2; ++k)
                slice += grids.y_weights()[k] *
                         (pow_abs(u.plus.at(i, j, k), p) + pow_abs(u.minus.at(i, j, k), p));
        acc += grids.t_weights()[i] * grids.x_weight() * slice;
    }
    return std::pow(acc, 1.0 / p);
}

BulkField bulk_dt(const BulkField& u, const Grids& grids) {
    BulkField out(u.plus.n0, u.plus.n1, u.plus.n2);
    const double dt = grids.dt();
    const std::size_t nt = u.plus.n0;
    auto dt_one = [&](const Array3D<double>& a, Array3D<double>& o) {
        for (std::size_t j = 0; j < a.n1; ++j)
            for (std::size_t k = 0; k < a.n2; ++k)
                for (std::size_t i = 0; i < nt; ++i) {
                    double d;
                    if (i == 0)
                        d = (-1.5 * a.at(0, j, k) + 2.0 * a.at(1, j, k) - 0.5 * a.at(2, j, k)) / dt;
                    else if (i + 1 == nt)
                        d = (1.5 * a.at(i, j, k) - 2.0 * a.at(i - 1, j, k) +
                             0.5 * a.at(i - 2, j, k)) /
                            dt;
                    else
                        d = (a.at(i + 1, j, k) - a.at(i - 1, j, k)) / (2.0 * dt);
                    o.at(i, j, k) = d;
                }
    };
    dt_one(u.plus, out.plus);
    dt_one(u.minus, out.minus);
    return out;
}

BulkField bulk_dx(const BulkField& u, const Grids& grids, int order) {
    BulkField out(u.plus.n0, u.plus.n1, u.plus.n2);
    std::vector<double> col(u.plus.n1);
    auto dx_one = [&](const Array3D<double>& a, Array3D<double>& o) {
        for (std::size_t i = 0; i < a.n0; ++i)
            for (std::size_t k = 0; k < a.n2; ++k) {
                for (std::size_t j = 0; j < a.n1; ++j) col[j] = a.at(i, j, k);
                auto d = spectral_derivative(col, grids, order);
                for (std::size_t j = 0; j < a.n1; ++j) o.at(i, j, k) = d[j];
            }
    };
    dx_one(u.plus, out.plus);
    dx_one(u.minus, out.minus);
    return out;
}

BulkField bulk_dy(const BulkField& u, const Grids& grids, int order) {
    BulkField out(u.plus.n0, u.plus.n1, u.plus.n2);
    auto dy_one = [&](const Array3D<double>& a, Array3D<double>& o) {
        std::vector<double> row(a.n2);
        for (std::size_t i = 0; i < a.n0; ++i)
            for (std::size_t j = 0; j < a.n1; ++j) {
                for (std::size_t k = 0; k < a.n2; ++k) row[k] = a.at(i, j, k);
                auto d = order == 1 ? fd_first_derivative(grids.y(), row)
                                    : fd_second_derivative(grids.y(), row);
                for (std::size_t k = 0; k < a.n2; ++k) o.at(i, j, k) = d[k];
            }
    };
    dy_one(u.plus, out.plus);
    dy_one(u.minus, out.minus);
    return out;
}

}  // namespace

double anisotropic_norm(const BulkField& u, NormTag tag, const PhysicalParams& params,
                        const Grids& grids) {
    if (tag != NormTag::E1)
        throw std::invalid_argument("anisotropic_norm: bulk fields only carry the E1 tag");
    const double p = params.p;
    double total = bulk_lp(u, grids, p);
    total += bulk_lp(bulk_dt(u, grids), grids, p);
    BulkField ux = bulk_dx(u, grids, 1);
    total += bulk_lp(ux, grids, p);
    total += bulk_lp(bulk_dy(u, grids, 1), grids, p);
    total += bulk_lp(bulk_dx(u, grids, 2), grids, p);
    total += bulk_lp(bulk_dy(ux, grids, 1), grids, p);
    total += bulk_lp(bulk_dy(u, grids, 2), grids, p);
    return total;
}

DataNormReport data_norm_report(const DataTuple& data, const PhysicalParams& params,
                                const Grids& grids) {
    DataNormReport rep;
    const double p = params.p;
    if (!data.f.empty()) rep.F1 = bulk_lp(data.f, grids, p);
    rep.F2 = anisotropic_norm(data.g, NormTag::F2, params, grids);
    rep.F3 = anisotropic_norm(data.h, NormTag::F3, params, grids);
    if (!data.v0.empty()) rep.F4 = bulk_space_norm(data.v0, grids, 2.0 - 2.0 / p, p);
    rep.F5 = torus_space_norm(data.rho0, grids, 2.0 - 2.0 / p, p);
    rep.data_total = rep.F1 + rep.F2 + rep.F3 + rep.F4 + rep.F5;
    rep.rho0_w43p = torus_space_norm(data.rho0, grids, 4.0 - 3.0 / p, p);
    const auto jump = jump_trace_from(data.v0_traces, params);
    std::vector<double> w(grids.nx());
    for (int j = 0; j < grids.nx(); ++j) w[j] = data.h.at(0, j) - jump[j];
    rep.w_c = torus_space_norm(w, grids, 2.0 - 6.0 / p, p);
    return rep;
}

SolutionNormReport solution_norm_report(const SolutionTriple& sol, const PhysicalParams& params,
                                        const Grids& grids) {
    SolutionNormReport rep;
    rep.E1_v = anisotropic_norm(sol.v, NormTag::E1, params, grids);
    rep.E1_rhoE = anisotropic_norm(sol.rho_E, NormTag::E1, params, grids);
    rep.E2_00 = anisotropic_norm(sol.rho, NormTag::E2_00, params, grids);
    rep.E2_10 = anisotropic_norm(sol.rho, NormTag::E2_10, params, grids);
    rep.E2_01 = anisotropic_norm(sol.rho, NormTag::E2_01, params, grids);
    rep.E2_param = rep.E2_00 + params.delta * rep.E2_10 + params.sigma * rep.E2_01;
    rep.total = rep.E1_v + rep.E1_rhoE + rep.E2_param;
    return rep;
}

double solution_error_norm(const SolutionTriple& a, const SolutionTriple& b,
                           const PhysicalParams& params_at_mu0, const Grids& grids) {
    SolutionTriple diff;
    diff.v = a.v;
    diff.rho_E = a.rho_E;
    diff.rho = a.rho;
    for (std::size_t i = 0; i < diff.v.plus.v.size(); ++i) {
        diff.v.plus.v[i] -= b.v.plus.v[i];
        diff.v.minus.v[i] -= b.v.minus.v[i];
        diff.rho_E.plus.v[i] -= b.rho_E.plus.v[i];
        diff.rho_E.minus.v[i] -= b.rho_E.minus.v[i];
    }
    for (std::size_t i = 0; i < diff.rho.v.size(); ++i) diff.rho.v[i] -= b.rho.v[i];
    return solution_norm_report(diff, params_at_mu0, grids).total;
}

std::string norm_report_json(const SolutionNormReport& sol, const DataNormReport& data,
                             const PhysicalParams& params) {
    nlohmann::json j;
    j["E1_v"] = sol.E1_v;
    j["E1_rhoE"] = sol.E1_rhoE;
    j["E2_00"] = sol.E2_00;
    j["E2_10"] = sol.E2_10;
    j["E2_01"] = sol.E2_01;
    j["E2_param"] = sol.E2_param;
    j["sol_total"] = sol.total;
    j["F1"] = data.F1;
    j["F2"] = data.F2;
    j["F3"] = data.F3;
    j["F4"] = data.F4;
    j["F5"] = data.F5;
    j["rho0_W4m3p"] = data.rho0_w43p;
    j["w_comp_W2m6p"] = data.w_c;
    j["rhs"] = data.rhs(params.delta, params.sigma);
    return j.dump(2);
}

}  // namespace stefan
