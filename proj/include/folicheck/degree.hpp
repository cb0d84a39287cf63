#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "folicheck/detline.hpp"
#include "folicheck/errors.hpp"
#include "folicheck/fields.hpp"

namespace folicheck {

// ============================================================================
// Degrees of the composite map from the surface to the leaf space, and the
// tangency criterion they feed: a degree-zero composite forces tangencies.
// ============================================================================

/// Difference of circle coordinates lifted to the nearest representative in
/// [-0.5, 0.5] (the half-turn tie goes either way; callers stay clear of it).
inline double circle_diff(double a, double b) {
    double d = a - b;
    return d - std::round(d);
}

// ----------------------------------------------------------------------------
// Winding of a circle-valued coordinate along a one-dimensional domain
// ----------------------------------------------------------------------------

struct WindingResult {
    long degree = 0;
    std::size_t samples = 0;
};

/// Degree of t -> x_coord(t) mod 1. Accumulates wrapped increments and doubles
/// the sample count until two consecutive resolutions agree and every step is
/// under a quarter turn.
inline WindingResult winding_degree(const SurfaceMap& map, std::size_t coord) {
    long prev = 0;
    bool have_prev = false;
    for (std::size_t n = 64; n <= (1u << 20); n *= 2) {
        double sum = 0, max_step = 0;
        Vec u(1);
        u[0] = 0.0;
        double last = map.value(u)[coord];
        bool ok = true;
        for (std::size_t k = 1; k <= n; ++k) {
            u[0] = static_cast<double>(k) / static_cast<double>(n);
            double cur = map.value(u)[coord];
            double step = circle_diff(cur, last);
            max_step = std::max(max_step, std::fabs(step));
            sum += step;
            last = cur;
        }
        long rounded = std::lround(sum);
        if (max_step >= 0.25 || std::fabs(sum - static_cast<double>(rounded)) > 1e-6) ok = false;
        if (ok) {
            if (have_prev && prev == rounded) return {rounded, n};
            prev = rounded;
            have_prev = true;
        } else {
            have_prev = false;
        }
    }
    throw DomainError("winding accumulation did not stabilize");
}

// ----------------------------------------------------------------------------
// Preimage counting over a circle leaf space (codimension 1)
// ----------------------------------------------------------------------------

struct PreimageCount {
    std::size_t count = 0;
    bool regular = true;    // every preimage cleared the derivative floor
    bool certified = false; // emptiness or completeness backed by a margin
    std::vector<double> points;
    /// chart-determinant signs per preimage, transported to a common sheet
    /// (antipodally aligned preimages pick up the deck's base sign)
    std::vector<int> signs;
};

/// Count solutions of x_coord(t) == c (mod 1) on the circle domain.
inline PreimageCount count_preimages_circle(const SurfaceMap& map, std::size_t coord, double c,
                                            double tau_reg = 1e-4, std::size_t grid = 1024) {
    const double h = 1.0 / static_cast<double>(grid);
    auto gfun = [&](double t) {
        Vec u(1);
        u[0] = t;
        return circle_diff(map.value(u)[coord], c);
    };
    std::vector<double> gv(grid + 1);
    for (std::size_t i = 0; i <= grid; ++i) gv[i] = gfun((static_cast<double>(i) + 0.5) * h);

    PreimageCount out;
    double max_diff = 0;
    for (std::size_t i = 0; i < grid; ++i) {
        double a = gv[i], b = gv[i + 1];
        if (std::fabs(a) < 0.25 && std::fabs(b) < 0.25) max_diff = std::max(max_diff, std::fabs(b - a));
        if (std::fabs(a) < 1e-9 || std::fabs(b) < 1e-9) {
            out.regular = false;  // node sits on the fiber; candidate unusable
            return out;
        }
        if (std::fabs(a) >= 0.25 || std::fabs(b) >= 0.25) continue;  // near the cut, not a crossing
        if ((a > 0) == (b > 0)) continue;
        double lo = (static_cast<double>(i) + 0.5) * h, hi = lo + h, flo = a;
        for (int it = 0; it < 80 && (hi - lo) > 1e-13; ++it) {
            double mid = 0.5 * (lo + hi), fm = gfun(mid);
            if ((fm > 0) == (flo > 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        double t = 0.5 * (lo + hi);
        Dual<1> uu[1] = {Dual<1>::seeded(t, 0)};
        std::array<Dual<1>, Vec::kCap> pv{};
        map.eval(uu, pv.data());
        double deriv = pv[coord].d[0];
        if (std::fabs(deriv) < tau_reg) out.regular = false;
        out.points.push_back(t - std::floor(t));
    }
    std::sort(out.points.begin(), out.points.end());
    std::vector<double> dedup;
    for (double t : out.points) {
        if (!dedup.empty() && std::fabs(t - dedup.back()) < 1e-8) continue;
        dedup.push_back(t);
    }
    if (dedup.size() >= 2 && (1.0 - (dedup.back() - dedup.front())) < 1e-8) dedup.pop_back();
    out.points = dedup;
    out.count = out.points.size();

    // margin: away from the found crossings, |g| must clear the Lipschitz bound.
    // The exclusion window is 8 cells so maps whose local slope varies by up to
    // a factor of two still certify; narrower windows only admit constant slope.
    double lip = 2.0 * max_diff / h;
    double min_off = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= grid; ++i) {
        double t = (static_cast<double>(i) + 0.5) * h;
        bool near = false;
        for (double z : out.points) {
            double d = std::fabs(t - std::floor(t) - z);
            if (std::min(d, 1.0 - d) < 8.0 * h) near = true;
        }
        if (!near && std::fabs(gv[i]) < 0.25) min_off = std::min(min_off, std::fabs(gv[i]));
    }
    out.certified = !std::isfinite(min_off) || min_off >= 2.0 * lip * h;
    return out;
}

// ----------------------------------------------------------------------------
// Preimage counting over a sphere leaf space mod antipodes (codimension 2)
// ----------------------------------------------------------------------------

/// Count solutions of p(u) == +-c on the torus domain, where p is the unit
/// sphere block of the map. Candidates come from an angular-distance scan and
/// are refined by Newton iteration in a chart at the target.
inline PreimageCount count_preimages_sphere(const SurfaceMap& map, std::size_t off, const Vec& c,
                                            double tau_reg = 1e-6, std::size_t grid = 192) {
    const double h = 1.0 / static_cast<double>(grid);
    auto angdist = [&](const Vec& u) {
        Vec p = map.value(u);
        double dp = p[off] * c[0] + p[off + 1] * c[1] + p[off + 2] * c[2];
        return std::acos(std::min(1.0, std::fabs(dp)));
    };

    std::vector<double> dv((grid + 1) * (grid + 1));
    double min_d = std::numeric_limits<double>::infinity(), max_diff = 0;
    for (std::size_t i = 0; i <= grid; ++i)
        for (std::size_t j = 0; j <= grid; ++j) {
            double d = angdist(Vec{(static_cast<double>(i) + 0.5) * h, (static_cast<double>(j) + 0.5) * h});
            dv[i * (grid + 1) + j] = d;
            min_d = std::min(min_d, d);
        }
    for (std::size_t i = 0; i <= grid; ++i)
        for (std::size_t j = 0; j <= grid; ++j) {
            if (i > 0) max_diff = std::max(max_diff, std::fabs(dv[i * (grid + 1) + j] - dv[(i - 1) * (grid + 1) + j]));
            if (j > 0) max_diff = std::max(max_diff, std::fabs(dv[i * (grid + 1) + j] - dv[i * (grid + 1) + j - 1]));
        }
    double lip = 2.0 * max_diff / h;

    PreimageCount out;
    if (min_d >= 2.0 * lip * h && min_d > 0.02) {
        out.certified = true;
        return out;  // certified empty
    }

    // chart at the target: orthonormal e1, e2 perpendicular to c
    Vec e1(3), e2(3);
    Foliation::sphere_frame(c, e1, e2);

    double thresh = std::max(0.06, 3.0 * lip * h);
    for (std::size_t i = 0; i < grid; ++i) {
        for (std::size_t j = 0; j < grid; ++j) {
            if (dv[i * (grid + 1) + j] > thresh) continue;
            double s = (static_cast<double>(i) + 0.5) * h, t = (static_cast<double>(j) + 0.5) * h;
            // pick the representative of {c, -c} on this sheet
            Vec p0 = map.value(Vec{s, t});
            double side = p0[off] * c[0] + p0[off + 1] * c[1] + p0[off + 2] * c[2];
            double sgn = side >= 0 ? 1.0 : -1.0;
            bool converged = false;
            int last_sign = 0;
            for (int it = 0; it < 40; ++it) {
                Dual<2> uu[2] = {Dual<2>::seeded(s, 0), Dual<2>::seeded(t, 1)};
                std::array<Dual<2>, Vec::kCap> pv{};
                map.eval(uu, pv.data());
                double f0 = 0, f1 = 0, j00 = 0, j01 = 0, j10 = 0, j11 = 0, align = 0;
                for (std::size_t k = 0; k < 3; ++k) {
                    f0 += pv[off + k].v * e1[k];
                    f1 += pv[off + k].v * e2[k];
                    j00 += pv[off + k].d[0] * e1[k];
                    j01 += pv[off + k].d[1] * e1[k];
                    j10 += pv[off + k].d[0] * e2[k];
                    j11 += pv[off + k].d[1] * e2[k];
                    align += pv[off + k].v * sgn * c[k];
                }
                if (std::fabs(f0) < 1e-12 && std::fabs(f1) < 1e-12 && align > 0.9) {
                    double jdet = det2(j00, j01, j10, j11);
                    if (std::fabs(jdet) < tau_reg) out.regular = false;
                    last_sign = (jdet > 0 ? 1 : -1) * (sgn < 0 ? -1 : 1);
                    converged = true;
                    break;
                }
                double jdet = det2(j00, j01, j10, j11);
                if (std::fabs(jdet) < 1e-14) break;
                s -= (j11 * f0 - j01 * f1) / jdet;
                t -= (-j10 * f0 + j00 * f1) / jdet;
            }
            if (!converged) continue;
            double cs = s - std::floor(s), ct = t - std::floor(t);
            bool dup = false;
            for (std::size_t k = 0; k + 1 < out.points.size(); k += 2) {
                double ds = std::fabs(out.points[k] - cs), dt = std::fabs(out.points[k + 1] - ct);
                ds = std::min(ds, 1.0 - ds);
                dt = std::min(dt, 1.0 - dt);
                if (std::max(ds, dt) < 1e-6) dup = true;
            }
            if (!dup) {
                out.points.push_back(cs);
                out.points.push_back(ct);
                out.signs.push_back(last_sign);
            }
        }
    }
    out.count = out.points.size() / 2;
    out.certified = true;  // scan threshold covers the movement bound
    return out;
}

// ----------------------------------------------------------------------------
// Mod-2 degree via two independent regular values
// ----------------------------------------------------------------------------

struct Mod2Result {
    int parity = 0;
    std::size_t counts[2] = {0, 0};
    double values_used[2] = {0, 0};
};

inline Mod2Result mod2_degree_circle(const SurfaceMap& map, std::size_t coord, double tau_reg = 1e-4) {
    Mod2Result out;
    int accepted = 0;
    for (int j = 0; j < 16 && accepted < 2; ++j) {
        double c = 0.55 + 0.6180339887498949 * j;
        c -= std::floor(c);
        PreimageCount pc = count_preimages_circle(map, coord, c, tau_reg);
        if (!pc.regular || !pc.certified) continue;
        out.counts[accepted] = pc.count;
        out.values_used[accepted] = c;
        ++accepted;
    }
    if (accepted < 2) throw NoRegularValue("fewer than two certified regular values on the leaf circle");
    if (out.counts[0] % 2 != out.counts[1] % 2)
        throw NoRegularValue("regular values disagree on the preimage parity");
    out.parity = static_cast<int>(out.counts[0] % 2);
    return out;
}

inline Mod2Result mod2_degree_sphere(const SurfaceMap& map, std::size_t off, double tau_reg = 1e-6) {
    Mod2Result out;
    int accepted = 0;
    for (int j = 0; j < 16 && accepted < 2; ++j) {
        // low-discrepancy directions on the sphere
        double z = 2.0 * (0.37 + 0.6180339887498949 * j - std::floor(0.37 + 0.6180339887498949 * j)) - 1.0;
        double az = 2.0 * kPi * (0.11 + 0.7548776662466927 * j - std::floor(0.11 + 0.7548776662466927 * j));
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        Vec c{r * std::cos(az), r * std::sin(az), z};
        PreimageCount pc = count_preimages_sphere(map, off, c, tau_reg);
        if (!pc.regular || !pc.certified) continue;
        out.counts[accepted] = pc.count;
        out.values_used[accepted] = z;
        ++accepted;
    }
    if (accepted < 2) throw NoRegularValue("fewer than two certified regular values on the leaf sphere");
    if (out.counts[0] % 2 != out.counts[1] % 2)
        throw NoRegularValue("regular values disagree on the preimage parity");
    out.parity = static_cast<int>(out.counts[0] % 2);
    return out;
}

// ----------------------------------------------------------------------------
// Covering verification for everywhere-transverse sections
// ----------------------------------------------------------------------------

struct CoveringCheck {
    std::size_t sheets = 0;
    bool counts_equal = false;
    bool matches_degree = false;
    double witness_radius = 0;
    std::vector<std::size_t> counts;
};

/// With no tangencies the leaf-space composite must be a covering: equal fiber
/// cardinality over sampled base points, matching |degree|.
inline CoveringCheck covering_check(const SurfaceMap& map, std::size_t coord, long degree,
                                    bool locus_empty, double tau_reg = 1e-4) {
    if (!locus_empty) throw NotTransverse("covering verification requires an empty tangency locus");
    CoveringCheck out;
    out.counts_equal = true;
    out.witness_radius = std::numeric_limits<double>::infinity();
    int taken = 0;
    for (int j = 0; j < 24 && taken < 8; ++j) {
        double c = 0.31 + 0.6180339887498949 * j;
        c -= std::floor(c);
        PreimageCount pc = count_preimages_circle(map, coord, c, tau_reg);
        if (!pc.regular || !pc.certified) continue;
        out.counts.push_back(pc.count);
        ++taken;
        for (std::size_t a = 0; a < pc.points.size(); ++a)
            for (std::size_t b = a + 1; b < pc.points.size(); ++b) {
                double d = std::fabs(pc.points[a] - pc.points[b]);
                out.witness_radius = std::min(out.witness_radius, std::min(d, 1.0 - d) / 2.0);
            }
    }
    if (taken < 8) throw NoRegularValue("fewer than eight certified base points for the covering check");
    out.sheets = out.counts[0];
    for (std::size_t n : out.counts)
        if (n != out.sheets) out.counts_equal = false;
    out.matches_degree = out.counts_equal && out.sheets == static_cast<std::size_t>(std::labs(degree));
    if (!std::isfinite(out.witness_radius)) out.witness_radius = 0.25;
    return out;
}

// ----------------------------------------------------------------------------
// The criterion verdict
// ----------------------------------------------------------------------------

enum class DegreeVerdict { Confirmed, Silent, TransverseCovering, Inconsistent, NotApplicable };

inline const char* verdict_name(DegreeVerdict v) {
    switch (v) {
        case DegreeVerdict::Confirmed: return "confirmed";
        case DegreeVerdict::Silent: return "silent";
        case DegreeVerdict::TransverseCovering: return "transverse_covering";
        case DegreeVerdict::Inconsistent: return "INCONSISTENT";
        case DegreeVerdict::NotApplicable: return "not_applicable";
    }
    return "?";
}

struct DegreeCriterion {
    DegreeVerdict verdict = DegreeVerdict::Silent;
    std::string detail;
    bool applicable = false;
    int mod2_degree = 0;
    bool integer_defined = false;
    long integer_degree = 0;
    bool locus_empty = false;
};

/// Nonzero degree of the leaf-space composite forbids an empty tangency locus
/// only in one direction: degree zero plus an empty locus is a contradiction,
/// degree zero plus a nonempty locus confirms the prediction, and a nonzero
/// degree says nothing (the locus may or may not be empty).
inline DegreeCriterion degree_criterion_verdict(const Foliation& fol, bool locus_empty, int mod2,
                                                bool integer_defined, long integer_degree) {
    DegreeCriterion out;
    out.locus_empty = locus_empty;
    if (fol.kind == Foliation::Kind::InvariantLineField) {
        out.verdict = DegreeVerdict::NotApplicable;
        out.applicable = false;
        out.detail = "line-field foliation has no leaf-space fibration; the degree criterion does not apply";
        return out;
    }
    out.applicable = true;
    out.mod2_degree = mod2;
    out.integer_defined = integer_defined;
    out.integer_degree = integer_degree;
    bool deg_zero = integer_defined ? (integer_degree == 0) : (mod2 == 0);
    if (deg_zero && locus_empty) {
        out.verdict = DegreeVerdict::Inconsistent;
        out.detail = "degree zero forces a tangency, but the locus came back empty";
    } else if (deg_zero) {
        out.verdict = DegreeVerdict::Confirmed;
        out.detail = "degree zero forces a tangency and the locus is nonempty";
    } else if (locus_empty) {
        out.verdict = DegreeVerdict::TransverseCovering;
        out.detail = "nonzero degree with an empty locus; the leaf-space composite is a covering";
    } else {
        out.verdict = DegreeVerdict::Silent;
        out.detail = "nonzero degree places no constraint on the locus";
    }
    return out;
}

}  // namespace folicheck
