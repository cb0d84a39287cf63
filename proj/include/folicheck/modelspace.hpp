#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <string>
#include <vector>

#include "folicheck/errors.hpp"
#include "folicheck/linalg.hpp"

namespace folicheck {

// ============================================================================
// Model spaces: an orientable cover (flat R^k with unit lattice, or a unit
// 2-sphere block) together with a finite set of deck generators. Quotients
// covered: circles, tori, Klein bottles, RP^2, and products of those.
// ============================================================================

enum class BundleTag { DetBase = 0, DetFiber = 1, DetAmbient = 2 };

/// Signed permutation matrix; column j maps to +/- e_{row[j]}.
struct SignedPerm {
    std::size_t dim = 0;
    std::array<int, Vec::kCap> row{};
    std::array<int, Vec::kCap> sign{};

    static SignedPerm identity(std::size_t d) {
        SignedPerm p;
        p.dim = d;
        for (std::size_t j = 0; j < d; ++j) {
            p.row[j] = static_cast<int>(j);
            p.sign[j] = 1;
        }
        return p;
    }

    Vec apply(const Vec& x) const {
        assert(x.n == dim);
        Vec y(dim);
        for (std::size_t j = 0; j < dim; ++j) y[static_cast<std::size_t>(row[j])] = sign[j] * x[j];
        return y;
    }

    /// this ∘ other
    SignedPerm compose(const SignedPerm& other) const {
        assert(dim == other.dim);
        SignedPerm c;
        c.dim = dim;
        for (std::size_t j = 0; j < dim; ++j) {
            c.row[j] = row[static_cast<std::size_t>(other.row[j])];
            c.sign[j] = sign[static_cast<std::size_t>(other.row[j])] * other.sign[j];
        }
        return c;
    }

    /// Determinant of the restriction to a coordinate subset. The subset must
    /// be invariant under the permutation.
    int block_det(const std::vector<int>& coords) const {
        std::vector<int> local(dim, -1);
        for (std::size_t i = 0; i < coords.size(); ++i) local[static_cast<std::size_t>(coords[i])] = static_cast<int>(i);
        std::vector<int> perm(coords.size());
        int s = 1;
        for (std::size_t i = 0; i < coords.size(); ++i) {
            int from = coords[i];
            int to = row[static_cast<std::size_t>(from)];
            if (local[static_cast<std::size_t>(to)] < 0)
                throw FrameError("deck linear part does not preserve the tagged coordinate block");
            perm[i] = local[static_cast<std::size_t>(to)];
            s *= sign[static_cast<std::size_t>(from)];
        }
        // parity by cycle decomposition
        std::vector<bool> seen(perm.size(), false);
        for (std::size_t i = 0; i < perm.size(); ++i) {
            if (seen[i]) continue;
            std::size_t len = 0, j = i;
            while (!seen[j]) {
                seen[j] = true;
                j = static_cast<std::size_t>(perm[j]);
                ++len;
            }
            if (len % 2 == 0) s = -s;
        }
        return s;
    }

    int det() const {
        std::vector<int> all(dim);
        for (std::size_t i = 0; i < dim; ++i) all[i] = static_cast<int>(i);
        return block_det(all);
    }

    bool operator==(const SignedPerm& o) const {
        if (dim != o.dim) return false;
        for (std::size_t j = 0; j < dim; ++j)
            if (row[j] != o.row[j] || sign[j] != o.sign[j]) return false;
        return true;
    }
};

/// One element of the deck group: affine map x -> L x + c on the cover, with
/// its sign character on the three bundle tags.
struct DeckElement {
    SignedPerm linear;
    Vec translation;
    std::array<int, 3> signs{1, 1, 1};

    static DeckElement identity(std::size_t dim) {
        DeckElement g;
        g.linear = SignedPerm::identity(dim);
        g.translation = Vec(dim);
        return g;
    }

    Vec apply(const Vec& p) const { return linear.apply(p) + translation; }
    Vec push(const Vec& v) const { return linear.apply(v); }

    int sign_char(BundleTag t) const { return signs[static_cast<std::size_t>(t)]; }

    /// this ∘ other
    DeckElement compose(const DeckElement& other) const {
        DeckElement c;
        c.linear = linear.compose(other.linear);
        c.translation = linear.apply(other.translation) + translation;
        for (int i = 0; i < 3; ++i) c.signs[static_cast<std::size_t>(i)] = signs[static_cast<std::size_t>(i)] * other.signs[static_cast<std::size_t>(i)];
        return c;
    }

    bool is_identity(double tol = 0) const {
        if (!(linear == SignedPerm::identity(linear.dim))) return false;
        for (std::size_t i = 0; i < translation.n; ++i)
            if (std::fabs(translation[i]) > tol) return false;
        return true;
    }
};

struct CanonicalizeResult {
    Vec point;
    DeckElement deck;
};

struct ModelSpace {
    enum class Kind { Circle, Torus2, KleinBottle, Sphere2Antipodal, Product };

    Kind kind = Kind::Circle;
    std::size_t cover_dim = 1;
    std::vector<DeckElement> generators;
    std::vector<std::string> generator_names;
    std::vector<int> base_coords;   // coordinates whose det gives the det_base tag
    std::vector<int> fiber_coords;  // coordinates whose det gives the det_fiber tag
    std::vector<std::pair<std::size_t, std::size_t>> sphere_blocks;  // (offset, len=3)
    std::vector<ModelSpace> factors;

    static int deck_sign(const DeckElement& g, BundleTag t) { return g.sign_char(t); }

    CanonicalizeResult canonicalize(const Vec& p) const {
        switch (kind) {
            case Kind::Circle:
            case Kind::Torus2: {
                DeckElement g = DeckElement::identity(cover_dim);
                Vec q = p;
                for (std::size_t i = 0; i < cover_dim; ++i) reduce_coord(q, g.translation, i);
                return {q, g};
            }
            case Kind::KleinBottle: {
                Vec q = p;
                long k = reduce_to_unit(q[0]);
                int flip = (k % 2 == 0) ? 1 : -1;
                q[1] *= flip;
                long m = reduce_to_unit(q[1]);
                DeckElement g = DeckElement::identity(2);
                g.linear.sign[1] = flip;
                g.translation = Vec{static_cast<double>(k), static_cast<double>(m)};
                g.signs = {1, flip, flip};
                return {q, g};
            }
            case Kind::Sphere2Antipodal: {
                std::size_t last = 3;
                for (std::size_t i = 3; i-- > 0;) {
                    if (std::fabs(p[i]) > 1e-12) {
                        last = i;
                        break;
                    }
                }
                if (last == 3) throw ValidationError("point", "sphere point is numerically zero");
                DeckElement g = DeckElement::identity(3);
                Vec q = p;
                if (p[last] < 0) {
                    for (std::size_t j = 0; j < 3; ++j) {
                        g.linear.sign[j] = -1;
                        q[j] = -q[j];
                    }
                    g.signs = {-1, 1, -1};
                }
                return {q, g};
            }
            case Kind::Product: {
                Vec q(cover_dim);
                DeckElement g = DeckElement::identity(cover_dim);
                std::size_t off = 0;
                for (const auto& f : factors) {
                    Vec sub(f.cover_dim);
                    for (std::size_t i = 0; i < f.cover_dim; ++i) sub[i] = p[off + i];
                    CanonicalizeResult r = f.canonicalize(sub);
                    for (std::size_t i = 0; i < f.cover_dim; ++i) {
                        q[off + i] = r.point[i];
                        g.translation[off + i] = r.deck.translation[i];
                        g.linear.row[off + i] = static_cast<int>(off) + r.deck.linear.row[i];
                        g.linear.sign[off + i] = r.deck.linear.sign[i];
                    }
                    for (int t = 0; t < 3; ++t) g.signs[static_cast<std::size_t>(t)] *= r.deck.signs[static_cast<std::size_t>(t)];
                    off += f.cover_dim;
                }
                return {q, g};
            }
        }
        throw Error("Internal", "unreachable");
    }

  private:
    static long reduce_to_unit(double& x) {
        long k = -static_cast<long>(std::floor(x));
        x += static_cast<double>(k);
        if (x >= 1.0) {
            x -= 1.0;
            --k;
        }
        if (x < 0.0) {
            x += 1.0;
            ++k;
        }
        return k;
    }

    static void reduce_coord(Vec& q, Vec& shift, std::size_t i) {
        double x = q[i];
        long k = reduce_to_unit(x);
        q[i] = x;
        shift[i] = static_cast<double>(k);
    }
};

// ----------------------------------------------------------------------------
// Catalog constructors
// ----------------------------------------------------------------------------

inline DeckElement translation_gen(std::size_t dim, std::size_t axis) {
    DeckElement g = DeckElement::identity(dim);
    g.translation[axis] = 1;
    return g;
}

inline ModelSpace make_circle() {
    ModelSpace m;
    m.kind = ModelSpace::Kind::Circle;
    m.cover_dim = 1;
    m.generators = {translation_gen(1, 0)};
    m.generator_names = {"shift"};
    m.fiber_coords = {0};
    return m;
}

inline ModelSpace make_torus2() {
    ModelSpace m;
    m.kind = ModelSpace::Kind::Torus2;
    m.cover_dim = 2;
    m.generators = {translation_gen(2, 0), translation_gen(2, 1)};
    m.generator_names = {"theta_shift", "phi_shift"};
    m.base_coords = {0};
    m.fiber_coords = {1};
    return m;
}

/// Deck group generated by the x-gluing (x, phi) -> (x+1, -phi) and the
/// phi translation; the gluing flips the fiber line and reverses ambient
/// orientation.
inline ModelSpace make_klein_bottle() {
    ModelSpace m;
    m.kind = ModelSpace::Kind::KleinBottle;
    m.cover_dim = 2;
    DeckElement glue = DeckElement::identity(2);
    glue.translation[0] = 1;
    glue.linear.sign[1] = -1;
    glue.signs = {1, -1, -1};
    m.generators = {glue, translation_gen(2, 1)};
    m.generator_names = {"x_glue", "phi_shift"};
    m.base_coords = {0};
    m.fiber_coords = {1};
    return m;
}

inline ModelSpace make_sphere2_antipodal() {
    ModelSpace m;
    m.kind = ModelSpace::Kind::Sphere2Antipodal;
    m.cover_dim = 3;
    DeckElement anti = DeckElement::identity(3);
    for (std::size_t j = 0; j < 3; ++j) anti.linear.sign[j] = -1;
    anti.signs = {-1, 1, -1};
    m.generators = {anti};
    m.generator_names = {"antipodal"};
    m.base_coords = {0, 1, 2};
    m.sphere_blocks = {{0, 3}};
    return m;
}

inline ModelSpace make_product(std::vector<ModelSpace> factors) {
    ModelSpace m;
    m.kind = ModelSpace::Kind::Product;
    m.cover_dim = 0;
    for (const auto& f : factors) m.cover_dim += f.cover_dim;
    if (m.cover_dim > Vec::kCap) throw ValidationError("model", "product cover dimension too large");
    std::size_t off = 0;
    for (const auto& f : factors) {
        for (const auto& g : f.generators) {
            DeckElement lifted = DeckElement::identity(m.cover_dim);
            for (std::size_t i = 0; i < f.cover_dim; ++i) {
                lifted.linear.row[off + i] = static_cast<int>(off) + g.linear.row[i];
                lifted.linear.sign[off + i] = g.linear.sign[i];
                lifted.translation[off + i] = g.translation[i];
            }
            lifted.signs = g.signs;
            m.generators.push_back(lifted);
        }
        for (const auto& n : f.generator_names) m.generator_names.push_back("f" + std::to_string(m.factors.size()) + "_" + n);
        for (int c : f.base_coords) m.base_coords.push_back(static_cast<int>(off) + c);
        for (int c : f.fiber_coords) m.fiber_coords.push_back(static_cast<int>(off) + c);
        for (auto [so, sl] : f.sphere_blocks) m.sphere_blocks.emplace_back(off + so, sl);
        m.factors.push_back(f);
        off += f.cover_dim;
    }
    return m;
}

/// Recompute a deck element's sign character from its linear part and the
/// model's tagged coordinate blocks (cross-check for the stored values).
inline std::array<int, 3> derive_signs(const ModelSpace& m, const DeckElement& g) {
    std::array<int, 3> s{1, 1, 1};
    s[0] = m.base_coords.empty() ? 1 : g.linear.block_det(m.base_coords);
    s[1] = m.fiber_coords.empty() ? 1 : g.linear.block_det(m.fiber_coords);
    s[2] = g.linear.det();
    return s;
}

}  // namespace folicheck
