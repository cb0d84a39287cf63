#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "folicheck/fields.hpp"

namespace folicheck {

// ============================================================================
// The scalar section cutting out the tangency locus: the determinant of the
// transverse-derivative matrix, viewed as a section of a real line bundle
// over the parameter quotient. Its monodromy signs along the parameter seams
// split into a tangent factor and a normal-bundle factor; the product drives
// every mod-2 pairing downstream.
// ============================================================================

/// A loop on the surface given as a word in parameter-domain generators.
struct LoopClass {
    std::string name;
    std::vector<std::size_t> word;
};

struct DetSection {
    std::size_t n = 1;          // codimension = parameter dimension
    ParamDomain domain;
    std::vector<int> sign_ts;        // per generator: det(TS)* monodromy factor
    std::vector<int> sign_nu;        // per generator: nu determinant monodromy factor
    std::vector<int> seam_signs;     // product of the two factors
    std::vector<int> measured_sign;  // sign fit from section values; 0 if unmeasurable

    std::function<double(const Vec&)> evaluate;
    /// value and gradient with respect to the parameters
    std::function<void(const Vec&, double&, Vec&)> jet;

    int seam_sign(std::size_t gi) const { return seam_signs[gi]; }
};

namespace detail {

/// Shared ownership of everything the section evaluators close over.
struct SectionContext {
    Embedding emb;
    TrigPerturbation pert;
    Foliation fol;

    SurfaceMap map() const { return SurfaceMap{&emb, pert.empty() ? nullptr : &pert}; }
};

template <class S>
void eval_map(const SectionContext& ctx, const S* u, S* out) {
    ctx.map().eval(u, out);
}

}  // namespace detail

/// Build the determinant section for a complementary embedding, verifying the
/// seam structure numerically (32 samples per generator).
inline DetSection det_section(const Embedding& emb, const TrigPerturbation& pert, const Foliation& fol) {
    auto ctx = std::make_shared<detail::SectionContext>(detail::SectionContext{emb, pert, fol});
    const ModelSpace& model = *emb.target;
    std::size_t n = fol.codim;
    if (emb.domain.dim != n)
        throw ValidationError("dperp", "parameter dimension must equal the foliation codimension");

    DetSection ds;
    ds.n = n;
    ds.domain = emb.domain;

    // --- pointwise evaluators -----------------------------------------------
    if (n == 1) {
        int c = fol.complement_coords.at(0);
        ds.evaluate = [ctx, c](const Vec& u) {
            Dual<1> uu[1] = {Dual<1>::seeded(u[0], 0)};
            std::array<Dual<1>, Vec::kCap> out{};
            detail::eval_map(*ctx, uu, out.data());
            return out[static_cast<std::size_t>(c)].d[0];
        };
        ds.jet = [ctx, c](const Vec& u, double& val, Vec& grad) {
            Jet1 uu[1] = {Jet1::var(u[0])};
            std::array<Jet1, Vec::kCap> out{};
            detail::eval_map(*ctx, uu, out.data());
            val = out[static_cast<std::size_t>(c)].d;
            grad = Vec{out[static_cast<std::size_t>(c)].dd};
        };
    } else if (fol.sphere_base) {
        std::size_t off = fol.sphere_off;
        ds.evaluate = [ctx, off](const Vec& u) {
            Dual<2> uu[2] = {Dual<2>::seeded(u[0], 0), Dual<2>::seeded(u[1], 1)};
            std::array<Dual<2>, Vec::kCap> out{};
            detail::eval_map(*ctx, uu, out.data());
            Vec A(3), B(3), C(3);
            for (std::size_t i = 0; i < 3; ++i) {
                A[i] = out[off + i].d[0];
                B[i] = out[off + i].d[1];
                C[i] = out[off + i].v;
            }
            return det3(A, B, C);
        };
        ds.jet = [ctx, off](const Vec& u, double& val, Vec& grad) {
            Jet2 uu[2] = {Jet2::var(u[0], 0), Jet2::var(u[1], 1)};
            std::array<Jet2, Vec::kCap> out{};
            detail::eval_map(*ctx, uu, out.data());
            Vec A(3), B(3), C(3), H00(3), H01(3), H11(3);
            for (std::size_t i = 0; i < 3; ++i) {
                const Jet2& j = out[off + i];
                A[i] = j.g0;
                B[i] = j.g1;
                C[i] = j.v;
                H00[i] = j.h00;
                H01[i] = j.h01;
                H11[i] = j.h11;
            }
            val = det3(A, B, C);
            grad = Vec{det3(H00, B, C) + det3(A, H01, C), det3(H01, B, C) + det3(A, H11, C)};
        };
    } else {
        int c0 = fol.complement_coords.at(0);
        int c1 = fol.complement_coords.at(1);
        ds.evaluate = [ctx, c0, c1](const Vec& u) {
            Dual<2> uu[2] = {Dual<2>::seeded(u[0], 0), Dual<2>::seeded(u[1], 1)};
            std::array<Dual<2>, Vec::kCap> out{};
            detail::eval_map(*ctx, uu, out.data());
            const auto& x = out[static_cast<std::size_t>(c0)];
            const auto& y = out[static_cast<std::size_t>(c1)];
            return det2(x.d[0], x.d[1], y.d[0], y.d[1]);
        };
        ds.jet = [ctx, c0, c1](const Vec& u, double& val, Vec& grad) {
            Jet2 uu[2] = {Jet2::var(u[0], 0), Jet2::var(u[1], 1)};
            std::array<Jet2, Vec::kCap> out{};
            detail::eval_map(*ctx, uu, out.data());
            const Jet2& x = out[static_cast<std::size_t>(c0)];
            const Jet2& y = out[static_cast<std::size_t>(c1)];
            val = det2(x.g0, x.g1, y.g0, y.g1);
            grad = Vec{x.h00 * y.g1 + x.g0 * y.h01 - x.h01 * y.g0 - x.g1 * y.h00,
                       x.h01 * y.g1 + x.g0 * y.h11 - x.h11 * y.g0 - x.g1 * y.h01};
        };
    }

    // --- seam structure ------------------------------------------------------
    SurfaceMap map = ctx->map();
    const std::size_t kSamples = 32;
    for (std::size_t gi = 0; gi < emb.domain.gens.size(); ++gi) {
        const DeckElement& g = emb.seam_decks[gi];
        int ts = 0, nu = 0;
        double scale = 0;
        std::vector<std::pair<double, double>> pairs;
        for (std::size_t k = 0; k < kSamples; ++k) {
            Vec u = sample_point(emb.domain.dim, k);
            Vec v = emb.domain.apply(gi, u);
            PointJet pu = jacobian(map, u);
            PointJet pv = jacobian(map, v);

            // tangent factor: change of basis between the Jacobian at the
            // translated parameter and the deck-pushed Jacobian
            Mat pushed(pu.jac.rows, pu.jac.cols);
            for (std::size_t j = 0; j < pu.jac.cols; ++j) pushed.column(j) = g.push(pu.jac.column(j));
            double pdet = change_of_basis_det(pushed, pv.jac);
            if (std::fabs(pdet) < 0.5 || std::fabs(pdet) > 2.0)
                throw FrameError("tangent seam change-of-basis is not near unimodular");
            int s = pdet > 0 ? 1 : -1;
            if (ts == 0) ts = s;
            else if (ts != s)
                throw FrameError("tangent seam sign is not constant along the seam");

            // normal factor: same comparison for the complement frames
            Mat fu = fol.complement_frame(model, pu.point);
            Mat fv = fol.complement_frame(model, pv.point);
            Mat fpush(fu.rows, fu.cols);
            for (std::size_t j = 0; j < fu.cols; ++j) fpush.column(j) = g.push(fu.column(j));
            double qdet = change_of_basis_det(fpush, fv);
            if (std::fabs(qdet) < 0.5 || std::fabs(qdet) > 2.0)
                throw FrameError("normal seam change-of-basis is not near unimodular");
            int t = qdet > 0 ? 1 : -1;
            if (nu == 0) nu = t;
            else if (nu != t)
                throw FrameError("normal seam sign is not constant along the seam");

            double a = ds.evaluate(u), b = ds.evaluate(v);
            scale = std::max({scale, std::fabs(a), std::fabs(b)});
            pairs.emplace_back(a, b);
        }

        // cross-checks against the structural data
        int lam_det = emb.domain.gens[gi].lambda.det();
        if (ts != lam_det)
            throw FrameError("tangent seam sign disagrees with the parameter deck determinant");
        if (nu != ModelSpace::deck_sign(g, fol.nu_tag))
            throw FrameError("normal seam sign disagrees with the deck sign character");

        int seam = ts * nu;
        int measured = 0;
        for (auto [a, b] : pairs) {
            if (std::fabs(b - seam * a) > 1e-9 * (1.0 + scale))
                throw ValidationError("equivariance",
                                      "section values do not transform by the seam sign along generator " +
                                          emb.domain.loop_names[gi]);
            if (std::fabs(a) > std::max(1e-9, 1e-3 * scale)) {
                int m = (b / a) > 0 ? 1 : -1;
                if (measured == 0) measured = m;
            }
        }

        ds.sign_ts.push_back(ts);
        ds.sign_nu.push_back(nu);
        ds.seam_signs.push_back(seam);
        ds.measured_sign.push_back(measured);
    }
    return ds;
}

// ----------------------------------------------------------------------------
// Mod-2 pairings
// ----------------------------------------------------------------------------

inline int sign_product(const std::vector<int>& signs, const LoopClass& loop) {
    int s = 1;
    for (std::size_t gi : loop.word) s *= signs.at(gi);
    return s;
}

/// <w1 of the determinant line, loop> in Z/2.
inline int w1_pairing(const DetSection& ds, const LoopClass& loop) {
    return sign_product(ds.seam_signs, loop) < 0 ? 1 : 0;
}

inline int w1_pairing_ts(const DetSection& ds, const LoopClass& loop) {
    return sign_product(ds.sign_ts, loop) < 0 ? 1 : 0;
}

inline int w1_pairing_nu(const DetSection& ds, const LoopClass& loop) {
    return sign_product(ds.sign_nu, loop) < 0 ? 1 : 0;
}

/// Generator loops of the parameter domain, in generator order.
inline std::vector<LoopClass> generator_loops(const ParamDomain& d) {
    std::vector<LoopClass> loops;
    for (std::size_t gi = 0; gi < d.gens.size(); ++gi) loops.push_back({d.loop_names[gi], {gi}});
    return loops;
}

struct W1Row {
    std::string loop;
    int ts = 0, nu = 0, line = 0;
    bool ok = false;
};

/// Per-loop check that the line-bundle class is the sum of the two factor
/// classes. The line-bundle bit is taken from the measured section monodromy
/// when the section is not identically small along the samples.
inline std::vector<W1Row> w1_identity_check(const DetSection& ds) {
    std::vector<W1Row> rows;
    auto loops = generator_loops(ds.domain);
    for (std::size_t gi = 0; gi < loops.size(); ++gi) {
        W1Row r;
        r.loop = loops[gi].name;
        r.ts = w1_pairing_ts(ds, loops[gi]);
        r.nu = w1_pairing_nu(ds, loops[gi]);
        int m = ds.measured_sign[gi];
        r.line = (m != 0) ? (m < 0 ? 1 : 0) : w1_pairing(ds, loops[gi]);
        r.ok = (r.line == (r.ts ^ r.nu));
        rows.push_back(r);
    }
    return rows;
}

/// If the section never vanishes, every seam-sign product must already be +1
/// (a nonvanishing section trivializes the line bundle). Nonvanishing is
/// certified with a grid-difference Lipschitz margin, not bare positivity.
struct NonvanishingCheck {
    double min_abs = 0;
    double lipschitz = 0;
    bool nonvanishing = false;
    bool pairings_trivial = false;
    bool consistent = false;
};

inline NonvanishingCheck nonvanishing_trivial_check(const DetSection& ds, std::size_t grid = 512) {
    NonvanishingCheck out;
    double mn = std::numeric_limits<double>::infinity();
    double max_diff = 0;
    const double h = 1.0 / static_cast<double>(grid);
    if (ds.n == 1) {
        double prev = 0;
        for (std::size_t i = 0; i <= grid; ++i) {
            double v = ds.evaluate(Vec{(static_cast<double>(i) + 0.5) * h});
            mn = std::min(mn, std::fabs(v));
            if (i > 0) max_diff = std::max(max_diff, std::fabs(v - prev));
            prev = v;
        }
    } else {
        std::vector<double> vals((grid + 1) * (grid + 1));
        for (std::size_t i = 0; i <= grid; ++i)
            for (std::size_t j = 0; j <= grid; ++j) {
                double v = ds.evaluate(Vec{(static_cast<double>(i) + 0.5) * h,
                                           (static_cast<double>(j) + 0.5) * h});
                vals[i * (grid + 1) + j] = v;
                mn = std::min(mn, std::fabs(v));
            }
        for (std::size_t i = 0; i <= grid; ++i)
            for (std::size_t j = 0; j <= grid; ++j) {
                if (i > 0)
                    max_diff = std::max(max_diff, std::fabs(vals[i * (grid + 1) + j] - vals[(i - 1) * (grid + 1) + j]));
                if (j > 0)
                    max_diff = std::max(max_diff, std::fabs(vals[i * (grid + 1) + j] - vals[i * (grid + 1) + j - 1]));
            }
    }
    out.min_abs = mn;
    out.lipschitz = 2.0 * max_diff / h;
    out.nonvanishing = mn > 0 && mn >= 2.0 * out.lipschitz * h;
    out.pairings_trivial = true;
    for (int s : ds.seam_signs)
        if (s < 0) out.pairings_trivial = false;
    out.consistent = !out.nonvanishing || out.pairings_trivial;
    return out;
}

}  // namespace folicheck
