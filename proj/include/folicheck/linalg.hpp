#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>

namespace folicheck {

/// Fixed-capacity vector for cover coordinates (dimensions 1..4 in practice).
struct Vec {
    static constexpr std::size_t kCap = 6;

    std::size_t n = 0;
    std::array<double, kCap> a{};

    Vec() = default;
    explicit Vec(std::size_t dim) : n(dim) { assert(dim <= kCap); }
    Vec(std::initializer_list<double> xs) : n(xs.size()) {
        assert(n <= kCap);
        std::size_t i = 0;
        for (double x : xs) a[i++] = x;
    }

    double& operator[](std::size_t i) { assert(i < n); return a[i]; }
    double operator[](std::size_t i) const { assert(i < n); return a[i]; }
    std::size_t size() const { return n; }

    Vec& operator+=(const Vec& o) {
        assert(n == o.n);
        for (std::size_t i = 0; i < n; ++i) a[i] += o.a[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        assert(n == o.n);
        for (std::size_t i = 0; i < n; ++i) a[i] -= o.a[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (std::size_t i = 0; i < n; ++i) a[i] *= s;
        return *this;
    }

    friend Vec operator+(Vec x, const Vec& y) { return x += y; }
    friend Vec operator-(Vec x, const Vec& y) { return x -= y; }
    friend Vec operator*(double s, Vec x) { return x *= s; }
};

inline double dot(const Vec& x, const Vec& y) {
    assert(x.n == y.n);
    double s = 0;
    for (std::size_t i = 0; i < x.n; ++i) s += x.a[i] * y.a[i];
    return s;
}

inline double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

inline double dist_inf(const Vec& x, const Vec& y) {
    assert(x.n == y.n);
    double m = 0;
    for (std::size_t i = 0; i < x.n; ++i) m = std::max(m, std::fabs(x.a[i] - y.a[i]));
    return m;
}

/// Column-major tall matrix: `cols` columns of dimension `rows` each.
/// Used for Jacobians (rows = cover dim, cols = parameter dim <= 2)
/// and for frames (cols = frame size).
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::array<Vec, 4> col{};

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c) {
        assert(c <= 4);
        for (std::size_t j = 0; j < c; ++j) col[j] = Vec(r);
    }

    Vec& column(std::size_t j) { assert(j < cols); return col[j]; }
    const Vec& column(std::size_t j) const { assert(j < cols); return col[j]; }
    double& at(std::size_t i, std::size_t j) { return column(j)[i]; }
    double at(std::size_t i, std::size_t j) const { return column(j)[i]; }
};

inline Vec matvec(const Mat& m, const Vec& x) {
    assert(m.cols == x.n);
    Vec y(m.rows);
    for (std::size_t j = 0; j < m.cols; ++j)
        for (std::size_t i = 0; i < m.rows; ++i) y[i] += m.at(i, j) * x[j];
    return y;
}

inline double det2(double a, double b, double c, double d) { return a * d - b * c; }

inline double det3(const Vec& x, const Vec& y, const Vec& z) {
    assert(x.n == 3 && y.n == 3 && z.n == 3);
    return x[0] * (y[1] * z[2] - y[2] * z[1]) - x[1] * (y[0] * z[2] - y[2] * z[0]) +
           x[2] * (y[0] * z[1] - y[1] * z[0]);
}

inline Vec cross3(const Vec& x, const Vec& y) {
    assert(x.n == 3 && y.n == 3);
    return Vec{x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]};
}

/// det of the square change-of-basis P with B = A * P, solved in the least
/// squares sense via normal equations. A and B must have the same shape and
/// at most 2 columns. Returns 0 if the normal matrix is singular.
inline double change_of_basis_det(const Mat& A, const Mat& B) {
    assert(A.rows == B.rows && A.cols == B.cols && A.cols >= 1 && A.cols <= 2);
    if (A.cols == 1) {
        double aa = dot(A.column(0), A.column(0));
        if (aa == 0) return 0;
        return dot(A.column(0), B.column(0)) / aa;
    }
    double g00 = dot(A.column(0), A.column(0));
    double g01 = dot(A.column(0), A.column(1));
    double g11 = dot(A.column(1), A.column(1));
    double detg = det2(g00, g01, g01, g11);
    if (detg == 0) return 0;
    double r00 = dot(A.column(0), B.column(0));
    double r01 = dot(A.column(0), B.column(1));
    double r10 = dot(A.column(1), B.column(0));
    double r11 = dot(A.column(1), B.column(1));
    // P = G^{-1} R, det P = det R / det G
    return det2(r00, r01, r10, r11) / detg;
}

/// Smallest singular value of a matrix with 1 or 2 columns.
inline double sigma_min(const Mat& m) {
    assert(m.cols >= 1 && m.cols <= 2);
    if (m.cols == 1) return norm(m.column(0));
    double g00 = dot(m.column(0), m.column(0));
    double g01 = dot(m.column(0), m.column(1));
    double g11 = dot(m.column(1), m.column(1));
    double tr = g00 + g11;
    double disc = std::sqrt(std::max(0.0, (g00 - g11) * (g00 - g11) + 4 * g01 * g01));
    double lam = 0.5 * (tr - disc);
    return std::sqrt(std::max(0.0, lam));
}

}  // namespace folicheck
