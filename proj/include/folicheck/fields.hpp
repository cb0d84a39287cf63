#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "folicheck/dual.hpp"
#include "folicheck/errors.hpp"
#include "folicheck/expr.hpp"
#include "folicheck/linalg.hpp"
#include "folicheck/modelspace.hpp"

namespace folicheck {

// ============================================================================
// Parameter domains, embeddings, equivariant perturbations, foliations and
// the transverse-derivative matrix.
// ============================================================================

inline constexpr double kClosureTol = 1e-9;
inline constexpr double kImmersionTol = 1e-8;
inline constexpr double kPi = 3.14159265358979323846;

/// Parameter quotient the embedding is defined on. Generators act on the
/// parameter cover as u -> L u + shift with L a diagonal sign matrix.
struct ParamDomain {
    enum class Kind { Circle, Torus, Klein };

    struct Gen {
        SignedPerm lambda;
        Vec shift;
    };

    Kind kind = Kind::Circle;
    std::size_t dim = 1;
    std::vector<Gen> gens;
    std::vector<std::string> loop_names;

    Vec apply(std::size_t gi, const Vec& u) const {
        return gens[gi].lambda.apply(u) + gens[gi].shift;
    }

    static ParamDomain circle() {
        ParamDomain d;
        d.kind = Kind::Circle;
        d.dim = 1;
        Gen g{SignedPerm::identity(1), Vec{1.0}};
        d.gens = {g};
        d.loop_names = {"S"};
        return d;
    }
    static ParamDomain torus() {
        ParamDomain d;
        d.kind = Kind::Torus;
        d.dim = 2;
        d.gens = {{SignedPerm::identity(2), Vec{1.0, 0.0}}, {SignedPerm::identity(2), Vec{0.0, 1.0}}};
        d.loop_names = {"loop_s", "loop_t"};
        return d;
    }
    static ParamDomain klein() {
        ParamDomain d;
        d.kind = Kind::Klein;
        d.dim = 2;
        SignedPerm flip = SignedPerm::identity(2);
        flip.sign[1] = -1;
        d.gens = {{flip, Vec{1.0, 0.0}}, {SignedPerm::identity(2), Vec{0.0, 1.0}}};
        d.loop_names = {"loop_s", "loop_t"};
        return d;
    }
};

// ----------------------------------------------------------------------------
// Embedding: expression components on the parameter cover, equivariant with
// respect to one target deck element per parameter generator.
// ----------------------------------------------------------------------------

struct Embedding {
    std::shared_ptr<const ModelSpace> target;
    ParamDomain domain;
    std::vector<Expr> components;            // one per cover coordinate
    std::vector<std::string> param_vars;     // "t" or "s","t"
    std::map<std::string, double> params;
    std::vector<DeckElement> seam_decks;     // inferred; one per parameter generator
    std::vector<Program> programs;

    void compile_components() {
        programs.clear();
        for (const auto& e : components) programs.push_back(compile(e, param_vars, params));
    }
};

/// Deterministic low-discrepancy sample points on the parameter cover (also
/// used for 3-dimensional direction scans).
inline Vec sample_point(std::size_t dim, std::size_t k) {
    static const double alpha[3] = {0.6180339887498949, 0.7548776662466927, 0.8191725133961645};
    if (dim > 3) throw ValidationError("samples", "sample_point supports at most three dimensions");
    Vec u(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        double x = 0.137 + (static_cast<double>(k) + 1) * alpha[i];
        u[i] = x - std::floor(x);
    }
    return u;
}

// ----------------------------------------------------------------------------
// Equivariant trig-polynomial displacement fields.
//
// Per cover coordinate, the basis consists of products of one-axis trig
// functions whose transformation sign under every parameter seam matches the
// sign the target deck element imposes on that coordinate. Periodic axes use
// frequencies 2*pi*k, sign-flipped axes use odd multiples of pi. The weighted
// sum is normalized so the field's C^1 norm is at most 1.
// ----------------------------------------------------------------------------

struct TrigPerturbation {
    struct AxisFun {
        double omega = 0;   // angular frequency; 0 means the constant 1
        bool is_sin = false;
    };
    struct Term {
        double coef = 0;            // includes the 1/W normalization
        std::array<int, 2> fn{};    // per-axis index into axis_funs
    };
    struct CoordField {
        std::vector<Term> terms;
    };

    double eps = 0;
    std::size_t dim = 1;         // parameter dimension
    std::size_t cover_dim = 0;
    std::vector<std::vector<AxisFun>> axis_funs;  // per axis
    std::vector<CoordField> fields;               // per cover coordinate

    bool empty() const { return eps == 0 || cover_dim == 0; }

    static constexpr std::size_t kMaxAxisFuns = 16;

    template <class S>
    void add(const S* u, S* out) const {
        using std::cos;
        using std::sin;
        if (empty()) return;
        // one-axis function values, computed once per point
        S vals[2][kMaxAxisFuns];
        for (std::size_t ax = 0; ax < dim; ++ax) {
            for (std::size_t i = 0; i < axis_funs[ax].size(); ++i) {
                const auto& f = axis_funs[ax][i];
                if (f.omega == 0)
                    vals[ax][i] = S(1.0);
                else {
                    S arg = S(f.omega) * u[ax];
                    vals[ax][i] = f.is_sin ? sin(arg) : cos(arg);
                }
            }
        }
        for (std::size_t c = 0; c < cover_dim; ++c) {
            if (fields[c].terms.empty()) continue;
            S acc(0.0);
            for (const auto& t : fields[c].terms) {
                S prod = vals[0][static_cast<std::size_t>(t.fn[0])];
                if (dim == 2) prod = prod * vals[1][static_cast<std::size_t>(t.fn[1])];
                acc = acc + S(t.coef) * prod;
            }
            out[c] = out[c] + S(eps) * acc;
        }
    }
};

/// Uniform draws in [-1, 1] from a fixed 64-bit generator, so sequences are
/// identical across platforms.
struct Rng {
    std::mt19937_64 g;
    explicit Rng(std::uint64_t seed) : g(seed) {}
    double pm1() { return static_cast<double>(g() >> 11) * 0x1.0p-52 - 1.0; }
};

inline TrigPerturbation make_perturbation(const Embedding& emb, double eps, std::uint64_t seed, int degree = 3) {
    TrigPerturbation p;
    p.eps = eps;
    p.dim = emb.domain.dim;
    p.cover_dim = emb.target->cover_dim;

    // Required transformation sign of coordinate c under generator gi.
    auto required_sign = [&](std::size_t c, std::size_t gi) {
        const SignedPerm& L = emb.seam_decks[gi].linear;
        if (L.row[c] != static_cast<int>(c))
            throw ValidationError("perturbation", "seam deck permutes cover coordinates; no equivariant trig basis");
        return L.sign[c];
    };

    // Candidate one-axis functions: constant, periodic and anti-periodic trig
    // up to the requested degree (in full turns).
    std::vector<TrigPerturbation::AxisFun> candidates;
    candidates.push_back({0, false});
    for (int k = 1; k <= degree; ++k) {
        candidates.push_back({2 * kPi * k, true});
        candidates.push_back({2 * kPi * k, false});
    }
    for (int k = 1; 2 * k - 1 <= 2 * degree - 1; ++k) {
        candidates.push_back({kPi * (2 * k - 1), true});
        candidates.push_back({kPi * (2 * k - 1), false});
    }
    p.axis_funs.assign(p.dim, candidates);

    // Transformation sign of a one-axis function under a generator's action
    // on that axis (u -> sign*u + shift with integer shift).
    auto fun_sign = [&](const TrigPerturbation::AxisFun& f, int axis_sign, double shift) -> int {
        if (f.omega == 0) return 1;
        double turns = f.omega * shift / (2 * kPi);
        long half_turns = std::lround(2 * turns);
        int shift_sign = (half_turns % 2 == 0) ? 1 : -1;
        int parity_sign = (axis_sign < 0 && f.is_sin) ? -1 : 1;
        return shift_sign * parity_sign;
    };

    Rng rng(seed);
    p.fields.resize(p.cover_dim);
    for (std::size_t c = 0; c < p.cover_dim; ++c) {
        auto& field = p.fields[c];
        std::vector<double> weights;
        std::size_t n0 = candidates.size();
        std::size_t n1 = p.dim == 2 ? candidates.size() : 1;
        for (std::size_t i0 = 0; i0 < n0; ++i0) {
            for (std::size_t i1 = 0; i1 < n1; ++i1) {
                bool ok = true;
                for (std::size_t gi = 0; gi < emb.domain.gens.size() && ok; ++gi) {
                    const auto& gen = emb.domain.gens[gi];
                    int s = fun_sign(candidates[i0], gen.lambda.sign[0], gen.shift[0]);
                    if (p.dim == 2) s *= fun_sign(candidates[i1], gen.lambda.sign[1], gen.shift[1]);
                    if (s != required_sign(c, gi)) ok = false;
                }
                if (!ok) continue;
                TrigPerturbation::Term t;
                t.coef = rng.pm1();
                t.fn = {static_cast<int>(i0), static_cast<int>(i1)};
                field.terms.push_back(t);
                double c1 = 1.0 + candidates[i0].omega + (p.dim == 2 ? candidates[i1].omega : 0.0);
                weights.push_back(c1);
            }
        }
        double W = 0;
        for (double w : weights) W += w;
        if (W > 0)
            for (auto& t : field.terms) t.coef /= W;
    }
    return p;
}

// ----------------------------------------------------------------------------
// SurfaceMap: embedding plus optional displacement, with unit-sphere blocks
// renormalized after displacing. Evaluation is generic over the derivative
// scalar carried by the parameters.
// ----------------------------------------------------------------------------

struct SurfaceMap {
    const Embedding* emb = nullptr;
    const TrigPerturbation* pert = nullptr;  // may be null

    std::size_t param_dim() const { return emb->domain.dim; }
    std::size_t cover_dim() const { return emb->target->cover_dim; }

    template <class S>
    void eval(const S* u, S* out) const {
        using std::sqrt;
        const auto& progs = emb->programs;
        for (std::size_t c = 0; c < progs.size(); ++c) out[c] = run_program(progs[c], u);
        if (pert && !pert->empty()) pert->add(u, out);
        for (auto [off, len] : emb->target->sphere_blocks) {
            S n2(0.0);
            for (std::size_t i = 0; i < len; ++i) n2 = n2 + out[off + i] * out[off + i];
            S n = sqrt(n2);
            for (std::size_t i = 0; i < len; ++i) out[off + i] = out[off + i] / n;
        }
    }

    Vec value(const Vec& u) const {
        std::array<double, 2> uu{};
        for (std::size_t i = 0; i < u.n; ++i) uu[i] = u[i];
        std::array<double, Vec::kCap> out{};
        eval(uu.data(), out.data());
        Vec p(cover_dim());
        for (std::size_t c = 0; c < p.n; ++c) p[c] = out[c];
        return p;
    }
};

struct PointJet {
    Vec point;  // cover coordinates
    Mat jac;    // cover_dim x param_dim
};

inline PointJet jacobian(const SurfaceMap& map, const Vec& u) {
    PointJet r;
    std::size_t d = map.param_dim(), m = map.cover_dim();
    r.point = Vec(m);
    r.jac = Mat(m, d);
    if (d == 1) {
        Dual<1> uu[1] = {Dual<1>::seeded(u[0], 0)};
        std::array<Dual<1>, Vec::kCap> out{};
        map.eval(uu, out.data());
        for (std::size_t c = 0; c < m; ++c) {
            r.point[c] = out[c].v;
            r.jac.at(c, 0) = out[c].d[0];
        }
    } else {
        Dual<2> uu[2] = {Dual<2>::seeded(u[0], 0), Dual<2>::seeded(u[1], 1)};
        std::array<Dual<2>, Vec::kCap> out{};
        map.eval(uu, out.data());
        for (std::size_t c = 0; c < m; ++c) {
            r.point[c] = out[c].v;
            r.jac.at(c, 0) = out[c].d[0];
            r.jac.at(c, 1) = out[c].d[1];
        }
    }
    return r;
}

// ----------------------------------------------------------------------------
// Closure validation and seam-deck inference
// ----------------------------------------------------------------------------

namespace detail {

/// Infer the target deck element matching q = g(p) over paired samples.
/// Works for the catalog's diagonal deck groups: per flat coordinate a sign
/// and an integer shift, per sphere block a global sign.
inline DeckElement infer_deck(const ModelSpace& model, const std::vector<Vec>& ps, const std::vector<Vec>& qs) {
    std::size_t m = model.cover_dim;
    DeckElement g = DeckElement::identity(m);

    std::vector<bool> on_sphere(m, false);
    for (auto [off, len] : model.sphere_blocks)
        for (std::size_t i = 0; i < len; ++i) on_sphere[off + i] = true;

    for (std::size_t c = 0; c < m; ++c) {
        if (on_sphere[c]) continue;
        bool plus_ok = true, minus_ok = true;
        double shift_plus = qs[0][c] - ps[0][c];
        double shift_minus = qs[0][c] + ps[0][c];
        for (std::size_t k = 0; k < ps.size(); ++k) {
            if (std::fabs((qs[k][c] - ps[k][c]) - shift_plus) > kClosureTol) plus_ok = false;
            if (std::fabs((qs[k][c] + ps[k][c]) - shift_minus) > kClosureTol) minus_ok = false;
        }
        if (plus_ok && std::fabs(shift_plus - std::round(shift_plus)) <= kClosureTol) {
            g.translation[c] = std::round(shift_plus);
        } else if (minus_ok && std::fabs(shift_minus - std::round(shift_minus)) <= kClosureTol) {
            g.linear.sign[c] = -1;
            g.translation[c] = std::round(shift_minus);
        } else {
            throw ValidationError("closure", "embedding does not close up along a deck element (coordinate " +
                                                 std::to_string(c) + ")");
        }
    }
    for (auto [off, len] : model.sphere_blocks) {
        bool plus_ok = true, minus_ok = true;
        for (std::size_t k = 0; k < ps.size(); ++k) {
            for (std::size_t i = 0; i < len; ++i) {
                if (std::fabs(qs[k][off + i] - ps[k][off + i]) > kClosureTol) plus_ok = false;
                if (std::fabs(qs[k][off + i] + ps[k][off + i]) > kClosureTol) minus_ok = false;
            }
        }
        if (plus_ok) {
            // identity on this block
        } else if (minus_ok) {
            for (std::size_t i = 0; i < len; ++i) g.linear.sign[off + i] = -1;
        } else {
            throw ValidationError("closure", "sphere block does not close up under identity or the antipodal map");
        }
    }

    // Membership in the deck group: the Klein x-gluing couples the x shift
    // parity to the phi flip.
    std::function<void(const ModelSpace&, std::size_t)> check = [&](const ModelSpace& ms, std::size_t off) {
        if (ms.kind == ModelSpace::Kind::KleinBottle) {
            long k = std::lround(g.translation[off + 0]);
            int flip = g.linear.sign[off + 1];
            if ((k % 2 == 0 && flip != 1) || (k % 2 != 0 && flip != -1))
                throw ValidationError("closure", "closure map is not in the Klein bottle deck group");
            if (g.linear.sign[off + 0] != 1)
                throw ValidationError("closure", "closure map flips the Klein x coordinate; not a deck element");
        }
        if (ms.kind == ModelSpace::Kind::Circle || ms.kind == ModelSpace::Kind::Torus2) {
            for (std::size_t i = 0; i < ms.cover_dim; ++i)
                if (g.linear.sign[off + i] != 1)
                    throw ValidationError("closure", "closure map reflects a flat coordinate; not a deck element");
        }
        if (ms.kind == ModelSpace::Kind::Product) {
            std::size_t o = off;
            for (const auto& f : ms.factors) {
                check(f, o);
                o += f.cover_dim;
            }
        }
    };
    check(model, 0);

    g.signs = derive_signs(model, g);
    return g;
}

}  // namespace detail

/// Verify closure under one deck element per parameter generator (inferring
/// the elements), and the immersion bound. Fills emb.seam_decks.
inline void validate_embedding(Embedding& emb, std::size_t samples = 32) {
    emb.compile_components();
    SurfaceMap map{&emb, nullptr};

    for (std::size_t gi = 0; gi < emb.domain.gens.size(); ++gi) {
        std::vector<Vec> ps, qs;
        for (std::size_t k = 0; k < samples; ++k) {
            Vec u = sample_point(emb.domain.dim, k);
            ps.push_back(map.value(u));
            qs.push_back(map.value(emb.domain.apply(gi, u)));
        }
        DeckElement g = detail::infer_deck(*emb.target, ps, qs);
        for (std::size_t k = 0; k < samples; ++k) {
            Vec expect = g.apply(ps[k]);
            if (dist_inf(expect, qs[k]) > kClosureTol)
                throw ValidationError("closure", "embedding fails closure along generator " +
                                                     emb.domain.loop_names[gi]);
        }
        emb.seam_decks.push_back(g);
    }

    for (std::size_t k = 0; k < samples; ++k) {
        Vec u = sample_point(emb.domain.dim, k);
        PointJet pj = jacobian(map, u);
        if (sigma_min(pj.jac) < kImmersionTol)
            throw ValidationError("immersion", "Jacobian drops rank at a sampled parameter (sigma_min < 1e-8)");
    }
}

// ----------------------------------------------------------------------------
// Foliations and the transverse-derivative matrix
// ----------------------------------------------------------------------------

struct Foliation {
    enum class Kind { SubmersionFibers, InvariantLineField };

    Kind kind = Kind::SubmersionFibers;
    std::string id;
    std::size_t codim = 1;
    std::vector<int> complement_coords;  // flat complement coordinates
    std::vector<int> leaf_coords;
    bool sphere_base = false;            // complement is the tangent plane of a sphere block
    std::size_t sphere_off = 0;
    BundleTag nu_tag = BundleTag::DetBase;

    /// Orthonormal frame of the sphere tangent plane at p with outward
    /// orientation: det[e1, e2, p] > 0. Deterministic axis choice keeps the
    /// orientation (the only thing the determinant depends on) globally
    /// constant even where the axis switches.
    static void sphere_frame(const Vec& p3, Vec& e1, Vec& e2) {
        std::size_t k = 0;
        for (std::size_t i = 1; i < 3; ++i)
            if (std::fabs(p3[i]) < std::fabs(p3[k])) k = i;
        Vec axis(3);
        axis[k] = 1;
        Vec proj = axis - dot(axis, p3) * p3;
        double n = norm(proj);
        if (n < 1e-8) throw FrameError("degenerate sphere tangent frame");
        e1 = (1.0 / n) * proj;
        e2 = cross3(p3, e1);
    }

    /// Complement frame as ambient cover vectors (cover_dim x codim).
    Mat complement_frame(const ModelSpace& model, const Vec& p) const {
        Mat f(model.cover_dim, codim);
        if (!sphere_base) {
            for (std::size_t j = 0; j < complement_coords.size(); ++j)
                f.at(static_cast<std::size_t>(complement_coords[j]), j) = 1;
            return f;
        }
        Vec p3{p[sphere_off], p[sphere_off + 1], p[sphere_off + 2]};
        double n = norm(p3);
        if (std::fabs(n - 1.0) > 1e-6) throw FrameError("sphere block is off the unit sphere");
        Vec e1(3), e2(3);
        sphere_frame(p3, e1, e2);
        for (std::size_t i = 0; i < 3; ++i) {
            f.at(sphere_off + i, 0) = e1[i];
            f.at(sphere_off + i, 1) = e2[i];
        }
        return f;
    }
};

inline Foliation make_vertical_circles() {
    Foliation f;
    f.kind = Foliation::Kind::SubmersionFibers;
    f.id = "vertical_circles";
    f.codim = 1;
    f.complement_coords = {0};
    f.leaf_coords = {1};
    f.nu_tag = BundleTag::DetBase;
    return f;
}

inline Foliation make_horizontal_lines() {
    Foliation f;
    f.kind = Foliation::Kind::InvariantLineField;
    f.id = "horizontal_lines";
    f.codim = 1;
    f.complement_coords = {1};
    f.leaf_coords = {0};
    f.nu_tag = BundleTag::DetFiber;
    return f;
}

inline Foliation make_circle_fibers() {
    Foliation f;
    f.kind = Foliation::Kind::SubmersionFibers;
    f.id = "circle_fibers";
    f.codim = 2;
    f.leaf_coords = {0};
    f.sphere_base = true;
    f.sphere_off = 1;
    f.nu_tag = BundleTag::DetBase;
    return f;
}

/// Coefficients of the Jacobian columns in the complement frame after
/// dropping leafwise components: the matrix whose determinant cuts out the
/// tangency locus.
struct DPerp {
    std::size_t n = 1;
    double m[2][2]{};
    Mat frame;  // complement frame used

    double det() const { return n == 1 ? m[0][0] : det2(m[0][0], m[0][1], m[1][0], m[1][1]); }
};

/// `frame_scale`, if given, multiplies the complement frame pointwise (used
/// to confirm that positive rescalings never move the zero set).
inline DPerp dperp(const Foliation& fol, const ModelSpace& model, const PointJet& pj,
                   double frame_scale = 1.0) {
    if (pj.jac.cols != fol.codim)
        throw ValidationError("dperp", "submanifold is not complementary to the foliation");
    DPerp out;
    out.n = fol.codim;
    out.frame = fol.complement_frame(model, pj.point);
    if (frame_scale != 1.0)
        for (std::size_t j = 0; j < out.frame.cols; ++j) out.frame.column(j) *= frame_scale;
    for (std::size_t r = 0; r < fol.codim; ++r) {
        double f2 = dot(out.frame.column(r), out.frame.column(r));
        if (f2 < 1e-16) throw FrameError("complement frame vector is numerically zero");
        for (std::size_t c = 0; c < fol.codim; ++c)
            out.m[r][c] = dot(out.frame.column(r), pj.jac.column(c)) / f2;
    }
    return out;
}

}  // namespace folicheck
