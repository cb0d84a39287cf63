#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "folicheck/detline.hpp"
#include "folicheck/errors.hpp"
#include "folicheck/fields.hpp"

namespace folicheck {

// ============================================================================
// Tangency locus extraction with genericity certificates.
// ============================================================================

struct Tolerances {
    double tau_nd = 1e-4;     // nondegeneracy floor for |grad det| on the locus
    double delta_sep = 1e-3;  // minimum separation between locus components
    std::size_t grid_1d = 512;
    std::size_t grid_2d = 256;
    int max_tries = 16;
    double refine_tol = 1e-12;

    static Tolerances from_env() {
        Tolerances t;
        if (const char* s = std::getenv("FOLICHECK_TOL_ND")) {
            char* end = nullptr;
            double v = std::strtod(s, &end);
            if (end && *end == '\0' && v > 0) t.tau_nd = v;
        }
        return t;
    }
};

/// Resolution-and-bound evidence that the reported locus is complete. Off a
/// small neighborhood of the found zeros, every grid cell is certified
/// zero-free: its sampled value clears twice the cell's own grid-difference
/// Lipschitz estimate (which itself carries a safety factor of two). Inside
/// the neighborhood, completeness rests on the gradient floor along the
/// locus plus sampled derivative monotonicity (one-dimensional case). The
/// `lipschitz` field reports the global estimate for the record.
struct GenericityCertificate {
    std::size_t grid = 0;
    double min_det_off_locus = 0;
    double lipschitz = 0;
    std::optional<double> min_grad_on_locus;
    bool sound = false;
    int attempts = 1;
};

struct Zero1D {
    double t = 0;
    double det_derivative = 0;
};

struct Locus1D {
    std::vector<Zero1D> zeros;
    GenericityCertificate cert;
};

struct Curve2D {
    std::vector<Vec> pts;  // unwrapped parameter points, closing point omitted
    long wrap_s = 0, wrap_t = 0;
};

struct Locus2D {
    std::vector<Curve2D> curves;
    GenericityCertificate cert;
};

inline double frac(double x) { return x - std::floor(x); }

inline double circ_dist(double a, double b) {
    double d = std::fabs(frac(a) - frac(b));
    return std::min(d, 1.0 - d);
}

// ----------------------------------------------------------------------------
// One-dimensional zero finding
// ----------------------------------------------------------------------------

inline Locus1D find_zeros_1d(const DetSection& ds, const Tolerances& tol, std::size_t grid = 0) {
    if (grid == 0) grid = tol.grid_1d;
    const double h = 1.0 / static_cast<double>(grid);
    std::vector<double> vals(grid + 1);
    auto node = [&](std::size_t i) { return (static_cast<double>(i) + 0.5) * h; };
    for (std::size_t i = 0; i <= grid; ++i) vals[i] = ds.evaluate(Vec{node(i)});

    Locus1D out;
    for (std::size_t i = 0; i < grid; ++i) {
        double a = vals[i], b = vals[i + 1];
        bool sa = a > 0, sb = b > 0;
        if (sa == sb) {
            if (std::fabs(a) < tol.tau_nd * h && std::fabs(b) < tol.tau_nd * h)
                throw SuspectedDegenerate("near-zero cell without a sign change at t=" + std::to_string(node(i)));
            continue;
        }
        double lo = node(i), hi = node(i + 1), flo = a;
        for (int it = 0; it < 80 && (hi - lo) > tol.refine_tol; ++it) {
            double mid = 0.5 * (lo + hi);
            double fm = ds.evaluate(Vec{mid});
            if ((fm > 0) == (flo > 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        // report the zero and its derivative in the fundamental-domain lift
        double t = frac(0.5 * (lo + hi));
        double val;
        Vec grad;
        ds.jet(Vec{t}, val, grad);
        out.zeros.push_back({t, grad[0]});
    }
    std::sort(out.zeros.begin(), out.zeros.end(), [](const Zero1D& x, const Zero1D& y) { return x.t < y.t; });

    // circular dedup at the separation scale
    std::vector<Zero1D> dedup;
    for (const auto& z : out.zeros) {
        if (!dedup.empty() && circ_dist(dedup.back().t, z.t) < tol.delta_sep) continue;
        dedup.push_back(z);
    }
    if (dedup.size() >= 2 && circ_dist(dedup.front().t, dedup.back().t) < tol.delta_sep) dedup.pop_back();
    out.zeros = dedup;

    // certificate
    GenericityCertificate cert;
    cert.grid = grid;
    double max_diff = 0;
    for (std::size_t i = 0; i < grid; ++i) max_diff = std::max(max_diff, std::fabs(vals[i + 1] - vals[i]));
    cert.lipschitz = 2.0 * max_diff / h;

    // Cell-free-of-zero test per node: a zero within one cell of a node forces
    // |value| <= true_Lipschitz * h there, so clearing twice the local
    // grid-difference estimate rules one out. Nodes close to a found zero are
    // left to the monotonicity pass below.
    const double r_ex = std::max(tol.delta_sep, 8.0 * h);
    double min_off = std::numeric_limits<double>::infinity();
    bool margin_ok = true;
    for (std::size_t i = 0; i <= grid; ++i) {
        bool excluded = false;
        for (const auto& z : out.zeros)
            if (circ_dist(node(i), z.t) < r_ex) excluded = true;
        if (excluded) continue;
        double local = 0;
        if (i > 0) local = std::max(local, std::fabs(vals[i] - vals[i - 1]));
        if (i < grid) local = std::max(local, std::fabs(vals[i + 1] - vals[i]));
        min_off = std::min(min_off, std::fabs(vals[i]));
        if (std::fabs(vals[i]) < 4.0 * local) margin_ok = false;
    }
    cert.min_det_off_locus = std::isfinite(min_off) ? min_off : 0.0;

    bool sound = margin_ok;
    if (!out.zeros.empty()) {
        const double r_mono = std::max(2.0 * tol.delta_sep, 16.0 * h);
        double min_grad = std::numeric_limits<double>::infinity();
        for (const auto& z : out.zeros) {
            min_grad = std::min(min_grad, std::fabs(z.det_derivative));
            // sampled derivative monotonicity across the excluded window
            int sign0 = 0;
            for (int k = -4; k <= 4; ++k) {
                double val;
                Vec grad;
                ds.jet(Vec{z.t + r_mono * k / 4.0}, val, grad);
                int s = grad[0] > 0 ? 1 : -1;
                if (std::fabs(grad[0]) < tol.tau_nd) sound = false;
                if (sign0 == 0) sign0 = s;
                else if (s != sign0) sound = false;
            }
        }
        cert.min_grad_on_locus = min_grad;
        if (min_grad < tol.tau_nd) sound = false;
    }
    cert.sound = sound;
    out.cert = cert;
    return out;
}

// ----------------------------------------------------------------------------
// Two-dimensional zero-curve extraction (marching squares on the quotient)
// ----------------------------------------------------------------------------

namespace detail {

struct EdgeKey {
    char orient;  // 'H' or 'V'
    std::size_t i, j;
    bool operator<(const EdgeKey& o) const {
        if (orient != o.orient) return orient < o.orient;
        if (i != o.i) return i < o.i;
        return j < o.j;
    }
    bool operator==(const EdgeKey& o) const { return orient == o.orient && i == o.i && j == o.j; }
};

struct Segment {
    EdgeKey e0, e1;
};

}  // namespace detail

inline Locus2D extract_zero_curve_2d(const DetSection& ds, const Tolerances& tol, std::size_t grid = 0) {
    if (grid == 0) grid = tol.grid_2d;
    const std::size_t g = grid, W = g + 1;
    const double h = 1.0 / static_cast<double>(g);
    auto node = [&](std::size_t i) { return (static_cast<double>(i) + 0.5) * h; };

    std::vector<double> vals(W * W);
    for (std::size_t i = 0; i < W; ++i)
        for (std::size_t j = 0; j < W; ++j) vals[i * W + j] = ds.evaluate(Vec{node(i), node(j)});
    auto V = [&](std::size_t i, std::size_t j) { return vals[i * W + j]; };

    // canonical crossing points per edge (computed once, from canonical indices)
    std::map<detail::EdgeKey, Vec> crossing;
    auto edge_point = [&](const detail::EdgeKey& k) -> std::optional<Vec> {
        auto it = crossing.find(k);
        if (it != crossing.end()) return it->second;
        double a, b;
        Vec p(2);
        if (k.orient == 'H') {
            a = V(k.i, k.j);
            b = V(k.i + 1, k.j);
            if ((a > 0) == (b > 0)) return std::nullopt;
            p[0] = node(k.i) + h * (a / (a - b));
            p[1] = node(k.j);
        } else {
            a = V(k.i, k.j);
            b = V(k.i, k.j + 1);
            if ((a > 0) == (b > 0)) return std::nullopt;
            p[0] = node(k.i);
            p[1] = node(k.j) + h * (a / (a - b));
        }
        crossing[k] = p;
        return p;
    };

    // segments per cell
    std::vector<detail::Segment> segs;
    std::map<detail::EdgeKey, std::vector<std::size_t>> incident;
    std::vector<bool> cross_cell(g * g, false);
    auto add_seg = [&](const detail::EdgeKey& a, const detail::EdgeKey& b) {
        segs.push_back({a, b});
        incident[a].push_back(segs.size() - 1);
        incident[b].push_back(segs.size() - 1);
    };

    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < g; ++j) {
            bool sbl = V(i, j) > 0, sbr = V(i + 1, j) > 0;
            bool stl = V(i, j + 1) > 0, str = V(i + 1, j + 1) > 0;
            detail::EdgeKey bottom{'H', i, j % g};
            detail::EdgeKey top{'H', i, (j + 1) % g};
            detail::EdgeKey left{'V', i, j};
            detail::EdgeKey right{'V', (i + 1) % g, j};

            std::vector<detail::EdgeKey> hit;
            if (sbl != sbr) hit.push_back(bottom);
            if (sbr != str) hit.push_back(right);
            if (stl != str) hit.push_back(top);
            if (sbl != stl) hit.push_back(left);

            if (hit.empty()) continue;
            cross_cell[i * g + j] = true;
            if (hit.size() == 2) {
                add_seg(hit[0], hit[1]);
            } else if (hit.size() == 4) {
                double c = ds.evaluate(Vec{node(i) + 0.5 * h, node(j) + 0.5 * h});
                bool sc = c > 0;
                if (sc == sbl) {
                    add_seg(bottom, right);
                    add_seg(top, left);
                } else {
                    add_seg(bottom, left);
                    add_seg(top, right);
                }
            } else {
                throw OpenChainError("degenerate marching-squares cell (corner value exactly on the contour)");
            }
        }
    }

    for (const auto& [k, list] : incident) {
        if (list.size() != 2)
            throw OpenChainError("contour edge with " + std::to_string(list.size()) +
                                 " incident segments; refine the grid (double grid_n) and retry");
    }

    // chain segments into closed polylines, unwrapping across the seams
    Locus2D out;
    std::vector<bool> used(segs.size(), false);
    auto unwrap_near = [&](const Vec& target, const Vec& prev) {
        // nearest integer translate of the canonical point; the running chain
        // coordinate is unwrapped and may sit many periods away
        return Vec{target[0] + std::round(prev[0] - target[0]),
                   target[1] + std::round(prev[1] - target[1])};
    };

    for (std::size_t s0 = 0; s0 < segs.size(); ++s0) {
        if (used[s0]) continue;
        Curve2D curve;
        detail::EdgeKey start_edge = segs[s0].e0;
        Vec start_pt = *edge_point(start_edge);
        curve.pts.push_back(start_pt);
        detail::EdgeKey cur_edge = start_edge;
        std::size_t cur_seg = s0;
        while (true) {
            used[cur_seg] = true;
            detail::EdgeKey next_edge = (segs[cur_seg].e0 == cur_edge) ? segs[cur_seg].e1 : segs[cur_seg].e0;
            Vec np = unwrap_near(*edge_point(next_edge), curve.pts.back());
            if (next_edge == start_edge) {
                Vec diff{np[0] - start_pt[0], np[1] - start_pt[1]};
                long ws = std::lround(diff[0]), wt = std::lround(diff[1]);
                if (std::fabs(diff[0] - ws) > 1e-6 || std::fabs(diff[1] - wt) > 1e-6)
                    throw OpenChainError("chain failed to close onto its start point");
                curve.wrap_s = ws;
                curve.wrap_t = wt;
                break;
            }
            curve.pts.push_back(np);
            const auto& inc = incident[next_edge];
            std::size_t next_seg = (inc[0] == cur_seg) ? inc[1] : inc[0];
            if (used[next_seg]) throw OpenChainError("chain revisited a segment before closing");
            cur_seg = next_seg;
            cur_edge = next_edge;
        }
        out.curves.push_back(std::move(curve));
    }

    // certificate
    GenericityCertificate cert;
    cert.grid = g;
    double max_diff = 0;
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < W; ++j) max_diff = std::max(max_diff, std::fabs(V(i + 1, j) - V(i, j)));
    for (std::size_t i = 0; i < W; ++i)
        for (std::size_t j = 0; j < g; ++j) max_diff = std::max(max_diff, std::fabs(V(i, j + 1) - V(i, j)));
    cert.lipschitz = 2.0 * max_diff / h;

    // Chebyshev cell distance to the nearest crossing cell (wrapping), capped
    const std::size_t kExcl = 10, kCap = 11;
    std::vector<std::uint8_t> dist(g * g, kCap);
    std::vector<std::size_t> frontier;
    for (std::size_t c = 0; c < g * g; ++c)
        if (cross_cell[c]) {
            dist[c] = 0;
            frontier.push_back(c);
        }
    for (std::uint8_t d = 1; d < kCap && !frontier.empty(); ++d) {
        std::vector<std::size_t> next;
        for (std::size_t c : frontier) {
            long ci = static_cast<long>(c / g), cj = static_cast<long>(c % g);
            for (long di = -1; di <= 1; ++di)
                for (long dj = -1; dj <= 1; ++dj) {
                    long ni = (ci + di + static_cast<long>(g)) % static_cast<long>(g);
                    long nj = (cj + dj + static_cast<long>(g)) % static_cast<long>(g);
                    std::size_t nc = static_cast<std::size_t>(ni) * g + static_cast<std::size_t>(nj);
                    if (dist[nc] > d) {
                        dist[nc] = d;
                        next.push_back(nc);
                    }
                }
        }
        frontier = std::move(next);
    }

    // Per-cell zero-exclusion margin: a zero inside the cell would pull some
    // corner below its own local Lipschitz reach, so corners clearing twice
    // the doubled local grid difference certify the cell zero-free.
    auto local_diff = [&](std::size_t i, std::size_t j) {
        double m = 0;
        if (i > 0) m = std::max(m, std::fabs(V(i, j) - V(i - 1, j)));
        if (i < g) m = std::max(m, std::fabs(V(i + 1, j) - V(i, j)));
        if (j > 0) m = std::max(m, std::fabs(V(i, j) - V(i, j - 1)));
        if (j < g) m = std::max(m, std::fabs(V(i, j + 1) - V(i, j)));
        return m;
    };
    double min_off = std::numeric_limits<double>::infinity();
    bool margin_ok = true;
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < g; ++j) {
            if (dist[i * g + j] < kExcl) continue;
            for (std::size_t ci = i; ci <= i + 1; ++ci)
                for (std::size_t cj = j; cj <= j + 1; ++cj) {
                    double v = std::fabs(V(ci, cj));
                    min_off = std::min(min_off, v);
                    if (v < 4.0 * std::sqrt(2.0) * local_diff(ci, cj)) margin_ok = false;
                }
        }
    cert.min_det_off_locus = std::isfinite(min_off) ? min_off : 0.0;

    bool sound = margin_ok;
    if (!out.curves.empty()) {
        double min_grad = std::numeric_limits<double>::infinity();
        for (const auto& c : out.curves) {
            std::size_t stride = std::max<std::size_t>(1, c.pts.size() / 128);
            for (std::size_t k = 0; k < c.pts.size(); k += stride) {
                double val;
                Vec gradv;
                ds.jet(Vec{frac(c.pts[k][0]), frac(c.pts[k][1])}, val, gradv);
                min_grad = std::min(min_grad, norm(gradv));
            }
        }
        cert.min_grad_on_locus = min_grad;
        if (min_grad < tol.tau_nd) sound = false;
    }
    cert.sound = sound;
    out.cert = cert;
    return out;
}

// ----------------------------------------------------------------------------
// Crossing parities of the extracted curves with placed generator loops
// ----------------------------------------------------------------------------

/// Counts crossings of the curves with the line {u_axis == offset (mod 1)}.
/// Throws NonGenericLoopPlacement when a vertex sits within guard of the line.
inline std::size_t count_axis_crossings(const Locus2D& locus, std::size_t axis, double offset,
                                        double guard = 1e-6) {
    std::size_t count = 0;
    for (const auto& c : locus.curves) {
        std::size_t m = c.pts.size();
        for (std::size_t k = 0; k < m; ++k) {
            Vec a = c.pts[k];
            Vec b = (k + 1 < m) ? c.pts[k + 1]
                                : Vec{c.pts[0][0] + static_cast<double>(c.wrap_s),
                                      c.pts[0][1] + static_cast<double>(c.wrap_t)};
            double xa = a[axis] - offset, xb = b[axis] - offset;
            if (std::fabs(xa - std::round(xa)) < guard || std::fabs(xb - std::round(xb)) < guard)
                throw NonGenericLoopPlacement("curve vertex too close to the counting loop");
            count += static_cast<std::size_t>(std::labs(static_cast<long>(std::floor(xb)) -
                                                        static_cast<long>(std::floor(xa))));
        }
    }
    return count;
}

/// Crossing parity with retry over 8 deterministic offsets.
inline std::size_t axis_crossing_count(const Locus2D& locus, std::size_t axis) {
    static const double base[8] = {0.3183, 0.7561, 0.1379, 0.5827, 0.9241, 0.4657, 0.0919, 0.6733};
    for (int attempt = 0; attempt < 8; ++attempt) {
        try {
            return count_axis_crossings(locus, axis, base[attempt]);
        } catch (const NonGenericLoopPlacement&) {
            if (attempt == 7) throw;
        }
    }
    throw NonGenericLoopPlacement("no generic loop offset found");
}

// ----------------------------------------------------------------------------
// Verdicts
// ----------------------------------------------------------------------------

struct ParityCheck {
    std::size_t zero_count = 0;
    int count_mod2 = 0;
    int pairing = 0;
    bool pass = false;
};

/// Corollary-style check: tangency count parity against <w1(L), [S]>.
inline ParityCheck parity_check(const Locus1D& locus, const DetSection& ds) {
    ParityCheck out;
    out.zero_count = locus.zeros.size();
    out.count_mod2 = static_cast<int>(locus.zeros.size() % 2);
    LoopClass fundamental{ds.domain.loop_names[0], {0}};
    out.pairing = w1_pairing(ds, fundamental);
    out.pass = (out.count_mod2 == out.pairing);
    return out;
}

struct PdClassRow {
    std::string loop;
    std::size_t crossings = 0;
    int crossing_parity = 0;
    int pairing = 0;
    bool pass = false;
};

struct PdClassCheck {
    std::vector<PdClassRow> rows;
    bool pass = false;
};

/// Homology-class check: curve crossing parities against the w1 pairings, one
/// row per generator loop. The loop along generator gi is a placed line at a
/// generic offset of the other axis.
inline PdClassCheck pd_class_check(const Locus2D& locus, const DetSection& ds) {
    PdClassCheck out;
    out.pass = true;
    auto loops = generator_loops(ds.domain);
    for (std::size_t gi = 0; gi < loops.size(); ++gi) {
        PdClassRow row;
        row.loop = loops[gi].name;
        row.crossings = axis_crossing_count(locus, 1 - gi);
        row.crossing_parity = static_cast<int>(row.crossings % 2);
        row.pairing = w1_pairing(ds, loops[gi]);
        row.pass = (row.crossing_parity == row.pairing);
        // wrap bookkeeping must agree with the geometric count
        long wrap_sum = 0;
        for (const auto& c : locus.curves) wrap_sum += (gi == 1) ? c.wrap_s : c.wrap_t;
        if (((wrap_sum % 2) + 2) % 2 != row.crossing_parity)
            throw NonGenericLoopPlacement("crossing parity disagrees with chain winding bookkeeping");
        out.rows.push_back(row);
        out.pass = out.pass && row.pass;
    }
    return out;
}

// ----------------------------------------------------------------------------
// Perturbation search
// ----------------------------------------------------------------------------

struct GenericResult {
    TrigPerturbation pert;
    DetSection section;
    std::variant<Locus1D, Locus2D> locus;
    int attempts = 1;
    bool transverse_everywhere = false;

    const Locus1D& locus1() const { return std::get<Locus1D>(locus); }
    const Locus2D& locus2() const { return std::get<Locus2D>(locus); }
};

/// Verify the perturbed map still closes up along the stored seam decks and
/// stays immersed.
inline void check_perturbed_map(const Embedding& emb, const TrigPerturbation& pert) {
    SurfaceMap map{&emb, pert.empty() ? nullptr : &pert};
    for (std::size_t gi = 0; gi < emb.domain.gens.size(); ++gi) {
        for (std::size_t k = 0; k < 32; ++k) {
            Vec u = sample_point(emb.domain.dim, k);
            Vec p = map.value(u);
            Vec q = map.value(emb.domain.apply(gi, u));
            if (dist_inf(emb.seam_decks[gi].apply(p), q) > kClosureTol)
                throw ValidationError("closure", "perturbed map fails closure");
        }
    }
    for (std::size_t k = 0; k < 32; ++k) {
        PointJet pj = jacobian(map, sample_point(emb.domain.dim, k));
        if (sigma_min(pj.jac) < kImmersionTol)
            throw ValidationError("immersion", "perturbed map drops rank");
    }
}

/// Draw equivariant perturbations (attempt k uses seed+k) until the locus is
/// certified generic. eps == 0 runs the unperturbed map once.
inline GenericResult perturb_until_generic(const Embedding& emb, const Foliation& fol, double eps,
                                           std::uint64_t seed, const Tolerances& tol) {
    int tries = (eps == 0) ? 1 : tol.max_tries;
    std::string diag;
    for (int k = 0; k < tries; ++k) {
        TrigPerturbation pert = make_perturbation(emb, eps, seed + static_cast<std::uint64_t>(k));
        try {
            check_perturbed_map(emb, pert);
            DetSection ds = det_section(emb, pert, fol);

            // identically-zero detection on a coarse scan
            double mx = 0;
            std::size_t coarse = 64;
            if (emb.domain.dim == 1) {
                for (std::size_t i = 0; i <= coarse; ++i)
                    mx = std::max(mx, std::fabs(ds.evaluate(Vec{(i + 0.5) / static_cast<double>(coarse)})));
            } else {
                for (std::size_t i = 0; i <= coarse; ++i)
                    for (std::size_t j = 0; j <= coarse; ++j)
                        mx = std::max(mx, std::fabs(ds.evaluate(Vec{(i + 0.5) / static_cast<double>(coarse),
                                                                    (j + 0.5) / static_cast<double>(coarse)})));
            }
            if (mx < 1e-12) {
                if (eps == 0)
                    throw DegenerateSection(
                        "transverse derivative vanishes identically; rerun with a positive perturbation size");
                diag += "attempt " + std::to_string(k) + ": section identically zero\n";
                continue;
            }

            if (emb.domain.dim == 1) {
                Locus1D locus = find_zeros_1d(ds, tol);
                if (!locus.cert.sound) {
                    diag += "attempt " + std::to_string(k) + ": certificate not sound\n";
                    continue;
                }
                locus.cert.attempts = k + 1;
                GenericResult r{std::move(pert), std::move(ds), std::move(locus), k + 1, false};
                r.transverse_everywhere = r.locus1().zeros.empty();
                return r;
            } else {
                Locus2D locus;
                try {
                    locus = extract_zero_curve_2d(ds, tol);
                } catch (const OpenChainError&) {
                    locus = extract_zero_curve_2d(ds, tol, tol.grid_2d * 2);
                }
                if (!locus.cert.sound) {
                    diag += "attempt " + std::to_string(k) + ": certificate not sound\n";
                    continue;
                }
                locus.cert.attempts = k + 1;
                GenericResult r{std::move(pert), std::move(ds), std::move(locus), k + 1, false};
                r.transverse_everywhere = r.locus2().curves.empty();
                return r;
            }
        } catch (const DegenerateSection&) {
            throw;
        } catch (const SuspectedDegenerate& e) {
            diag += "attempt " + std::to_string(k) + ": " + e.what() + "\n";
        } catch (const OpenChainError& e) {
            diag += "attempt " + std::to_string(k) + ": " + e.what() + "\n";
        } catch (const ValidationError& e) {
            diag += "attempt " + std::to_string(k) + ": " + e.what() + "\n";
        }
    }
    throw GenericityFailed(tries, diag);
}

}  // namespace folicheck
