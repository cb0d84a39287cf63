#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace folicheck {

// ============================================================================
// Forward-mode derivative scalars.
//
// Dual<N>  : first order, N independent seed directions (N = 1 or 2).
// Jet1     : second order along a single parameter (value, d, d2).
// Jet2     : second order in two parameters (value, gradient, Hessian).
//
// All satisfy the same arithmetic surface so expression evaluation and
// geometry code can be written once, generically.
// ============================================================================

template <int N>
struct Dual {
    double v = 0;
    std::array<double, N> d{};

    Dual() = default;
    Dual(double value) : v(value) {}
    static Dual seeded(double value, int dir) {
        Dual x(value);
        x.d[dir] = 1;
        return x;
    }

    Dual& operator+=(const Dual& o) {
        v += o.v;
        for (int i = 0; i < N; ++i) d[i] += o.d[i];
        return *this;
    }
    Dual& operator-=(const Dual& o) {
        v -= o.v;
        for (int i = 0; i < N; ++i) d[i] -= o.d[i];
        return *this;
    }

    friend Dual operator+(Dual a, const Dual& b) { return a += b; }
    friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
    friend Dual operator-(const Dual& a) {
        Dual r;
        r.v = -a.v;
        for (int i = 0; i < N; ++i) r.d[i] = -a.d[i];
        return r;
    }
    friend Dual operator*(const Dual& a, const Dual& b) {
        Dual r;
        r.v = a.v * b.v;
        for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
        return r;
    }
    friend Dual operator/(const Dual& a, const Dual& b) {
        Dual r;
        r.v = a.v / b.v;
        for (int i = 0; i < N; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) / b.v;
        return r;
    }
};

template <int N>
Dual<N> sin(const Dual<N>& x) {
    Dual<N> r;
    r.v = std::sin(x.v);
    double c = std::cos(x.v);
    for (int i = 0; i < N; ++i) r.d[i] = c * x.d[i];
    return r;
}

template <int N>
Dual<N> cos(const Dual<N>& x) {
    Dual<N> r;
    r.v = std::cos(x.v);
    double s = -std::sin(x.v);
    for (int i = 0; i < N; ++i) r.d[i] = s * x.d[i];
    return r;
}

template <int N>
Dual<N> exp(const Dual<N>& x) {
    Dual<N> r;
    r.v = std::exp(x.v);
    for (int i = 0; i < N; ++i) r.d[i] = r.v * x.d[i];
    return r;
}

template <int N>
Dual<N> sqrt(const Dual<N>& x) {
    Dual<N> r;
    r.v = std::sqrt(x.v);
    for (int i = 0; i < N; ++i) r.d[i] = x.d[i] / (2 * r.v);
    return r;
}

template <int N>
Dual<N> fabs(const Dual<N>& x) {
    if (x.v > 0) return x;
    if (x.v < 0) return -x;
    return Dual<N>(0.0);
}

// ----------------------------------------------------------------------------

/// Second-order jet along one parameter.
struct Jet1 {
    double v = 0, d = 0, dd = 0;

    Jet1() = default;
    Jet1(double value) : v(value) {}
    Jet1(double value, double d1, double d2) : v(value), d(d1), dd(d2) {}
    static Jet1 var(double value) { return Jet1(value, 1, 0); }

    friend Jet1 operator+(const Jet1& a, const Jet1& b) { return {a.v + b.v, a.d + b.d, a.dd + b.dd}; }
    friend Jet1 operator-(const Jet1& a, const Jet1& b) { return {a.v - b.v, a.d - b.d, a.dd - b.dd}; }
    friend Jet1 operator-(const Jet1& a) { return {-a.v, -a.d, -a.dd}; }
    friend Jet1 operator*(const Jet1& a, const Jet1& b) {
        return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2 * a.d * b.d + a.v * b.dd};
    }
    friend Jet1 operator/(const Jet1& a, const Jet1& b) {
        double iv = 1.0 / b.v;
        Jet1 inv{iv, -b.d * iv * iv, (2 * b.d * b.d - b.v * b.dd) * iv * iv * iv};
        return a * inv;
    }
};

inline Jet1 chain(double h, double dh, double ddh, const Jet1& x) {
    return {h, dh * x.d, dh * x.dd + ddh * x.d * x.d};
}

inline Jet1 sin(const Jet1& x) { return chain(std::sin(x.v), std::cos(x.v), -std::sin(x.v), x); }
inline Jet1 cos(const Jet1& x) { return chain(std::cos(x.v), -std::sin(x.v), -std::cos(x.v), x); }
inline Jet1 exp(const Jet1& x) {
    double e = std::exp(x.v);
    return chain(e, e, e, x);
}
inline Jet1 sqrt(const Jet1& x) {
    double s = std::sqrt(x.v);
    return chain(s, 0.5 / s, -0.25 / (s * x.v), x);
}
inline Jet1 fabs(const Jet1& x) {
    if (x.v > 0) return x;
    if (x.v < 0) return -x;
    return Jet1(0.0);
}

// ----------------------------------------------------------------------------

/// Second-order jet in two parameters (symmetric Hessian stored as h00,h01,h11).
struct Jet2 {
    double v = 0;
    double g0 = 0, g1 = 0;
    double h00 = 0, h01 = 0, h11 = 0;

    Jet2() = default;
    Jet2(double value) : v(value) {}
    static Jet2 var(double value, int dir) {
        Jet2 x(value);
        (dir == 0 ? x.g0 : x.g1) = 1;
        return x;
    }

    friend Jet2 operator+(const Jet2& a, const Jet2& b) {
        Jet2 r;
        r.v = a.v + b.v;
        r.g0 = a.g0 + b.g0;
        r.g1 = a.g1 + b.g1;
        r.h00 = a.h00 + b.h00;
        r.h01 = a.h01 + b.h01;
        r.h11 = a.h11 + b.h11;
        return r;
    }
    friend Jet2 operator-(const Jet2& a, const Jet2& b) {
        Jet2 r;
        r.v = a.v - b.v;
        r.g0 = a.g0 - b.g0;
        r.g1 = a.g1 - b.g1;
        r.h00 = a.h00 - b.h00;
        r.h01 = a.h01 - b.h01;
        r.h11 = a.h11 - b.h11;
        return r;
    }
    friend Jet2 operator-(const Jet2& a) { return Jet2(0.0) - a; }
    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        Jet2 r;
        r.v = a.v * b.v;
        r.g0 = a.g0 * b.v + a.v * b.g0;
        r.g1 = a.g1 * b.v + a.v * b.g1;
        r.h00 = a.h00 * b.v + 2 * a.g0 * b.g0 + a.v * b.h00;
        r.h01 = a.h01 * b.v + a.g0 * b.g1 + a.g1 * b.g0 + a.v * b.h01;
        r.h11 = a.h11 * b.v + 2 * a.g1 * b.g1 + a.v * b.h11;
        return r;
    }
    friend Jet2 operator/(const Jet2& a, const Jet2& b) {
        double iv = 1.0 / b.v;
        Jet2 inv;
        inv.v = iv;
        inv.g0 = -b.g0 * iv * iv;
        inv.g1 = -b.g1 * iv * iv;
        double iv3 = iv * iv * iv;
        inv.h00 = (2 * b.g0 * b.g0 - b.v * b.h00) * iv3;
        inv.h01 = (2 * b.g0 * b.g1 - b.v * b.h01) * iv3;
        inv.h11 = (2 * b.g1 * b.g1 - b.v * b.h11) * iv3;
        return a * inv;
    }
};

inline Jet2 chain(double h, double dh, double ddh, const Jet2& x) {
    Jet2 r;
    r.v = h;
    r.g0 = dh * x.g0;
    r.g1 = dh * x.g1;
    r.h00 = dh * x.h00 + ddh * x.g0 * x.g0;
    r.h01 = dh * x.h01 + ddh * x.g0 * x.g1;
    r.h11 = dh * x.h11 + ddh * x.g1 * x.g1;
    return r;
}

inline Jet2 sin(const Jet2& x) { return chain(std::sin(x.v), std::cos(x.v), -std::sin(x.v), x); }
inline Jet2 cos(const Jet2& x) { return chain(std::cos(x.v), -std::sin(x.v), -std::cos(x.v), x); }
inline Jet2 exp(const Jet2& x) {
    double e = std::exp(x.v);
    return chain(e, e, e, x);
}
inline Jet2 sqrt(const Jet2& x) {
    double s = std::sqrt(x.v);
    return chain(s, 0.5 / s, -0.25 / (s * x.v), x);
}
inline Jet2 fabs(const Jet2& x) {
    if (x.v > 0) return x;
    if (x.v < 0) return -x;
    return Jet2(0.0);
}

// ----------------------------------------------------------------------------

inline double scalar_value(double x) { return x; }
template <int N>
double scalar_value(const Dual<N>& x) { return x.v; }
inline double scalar_value(const Jet1& x) { return x.v; }
inline double scalar_value(const Jet2& x) { return x.v; }

/// x^k for integer k by repeated multiplication; k may be negative.
template <class S>
S pow_int(const S& x, long k) {
    if (k < 0) return S(1.0) / pow_int(x, -k);
    S r(1.0);
    S b = x;
    while (k > 0) {
        if (k & 1) r = r * b;
        b = b * b;
        k >>= 1;
    }
    return r;
}

}  // namespace folicheck
