#pragma once

#include <cstddef>
#include <vector>

#include "stefan/util.hpp"

namespace stefan {

/// Dense (rows x cols) array, row-major. Used as (t, x), (t, y), (x, y), ...
template <class T>
struct Array2D {
    std::size_t rows = 0, cols = 0;
    std::vector<T> v;

    Array2D() = default;
    Array2D(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, T{}) {}

    T& at(std::size_t i, std::size_t j) { return v[i * cols + j]; }
    const T& at(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
    std::span<T> row(std::size_t i) { return {v.data() + i * cols, cols}; }
    std::span<const T> row(std::size_t i) const { return {v.data() + i * cols, cols}; }
    bool empty() const { return v.empty(); }
};

template <class T>
struct Array3D {
    std::size_t n0 = 0, n1 = 0, n2 = 0;
    std::vector<T> v;

    Array3D() = default;
    Array3D(std::size_t a, std::size_t b, std::size_t c) : n0(a), n1(b), n2(c), v(a * b * c, T{}) {}

    T& at(std::size_t i, std::size_t j, std::size_t k) { return v[(i * n1 + j) * n2 + k]; }
    const T& at(std::size_t i, std::size_t j, std::size_t k) const {
        return v[(i * n1 + j) * n2 + k];
    }
    bool empty() const { return v.empty(); }
};

using RealField = Array2D<double>;            // (t_with0, x) interface field
using ComplexSeries = std::vector<Complex>;   // per-mode time series on t_with0

/// Two-phase bulk field over (t_with0, x, |y| nodes); plus/minus halves share
/// the |y| grid.
struct BulkField {
    Array3D<double> plus, minus;

    BulkField() = default;
    BulkField(std::size_t nt, std::size_t nx, std::size_t nyn)
        : plus(nt, nx, nyn), minus(nt, nx, nyn) {}
    bool empty() const { return plus.empty(); }
};

/// Single time slice of a two-phase bulk field, (x, |y| nodes).
struct BulkSlice {
    Array2D<double> plus, minus;

    BulkSlice() = default;
    BulkSlice(std::size_t nx, std::size_t nyn) : plus(nx, nyn), minus(nx, nyn) {}
    bool empty() const { return plus.empty(); }
};

}  // namespace stefan
