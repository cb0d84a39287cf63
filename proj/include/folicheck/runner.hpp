#pragma once

// Pipeline orchestration behind the CLI subcommands: resolve a scenario,
// run perturbation search + locus extraction + pairing tables + degree
// machinery, assemble the canonical report, and drive the sweep / oracle /
// verify variants with their exit-code contract.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "folicheck/degree.hpp"
#include "folicheck/report.hpp"
#include "folicheck/scenario.hpp"
#include "folicheck/tangency.hpp"

namespace folicheck {

enum ExitCode : int {
    kExitPass = 0,
    kExitError = 1,
    kExitVerdictFailure = 2,
    kExitGenericityFailed = 3,
    kExitOracleDisagreement = 4,
};

struct RunOptions {
    std::string scenario;   // builtin id or path to a scenario file
    double eps = -1;        // >= 0 overrides the scenario value
    long long seed = -1;    // >= 0 overrides
    std::size_t grid = 0;   // nonzero overrides both 1d and 2d grids
    int max_tries = 0;      // nonzero overrides
    int p = 0, q = 0;       // torus winding parameters, torus_pq only
    std::string out_path;   // empty writes to stdout
    std::string format = "json";
};

inline Tolerances tolerances_for(const RunOptions& o) {
    Tolerances tol = Tolerances::from_env();
    if (o.grid) {
        tol.grid_1d = o.grid;
        tol.grid_2d = o.grid;
    }
    if (o.max_tries) tol.max_tries = o.max_tries;
    return tol;
}

inline Scenario resolve_scenario(const RunOptions& o) {
    Scenario s;
    if (std::filesystem::exists(o.scenario)) {
        std::ifstream in(o.scenario);
        if (!in) throw Error("io", "cannot read scenario file '" + o.scenario + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        s = load_scenario(buf.str());
        if (o.p || o.q) throw BadParams("--p/--q apply to the builtin torus_pq scenario only");
    } else {
        const auto& ids = builtin_ids();
        if (std::find(ids.begin(), ids.end(), o.scenario) == ids.end())
            throw UnknownScenario(o.scenario);
        if ((o.p || o.q) && o.scenario != "torus_pq")
            throw BadParams("--p/--q apply to the builtin torus_pq scenario only");
        BuiltinParams bp;
        if (o.p) bp.p = o.p;
        if (o.q) bp.q = o.q;
        s = builtin_scenario(o.scenario, bp);
    }
    if (o.eps >= 0) s.eps = o.eps;
    if (o.seed >= 0) s.seed = static_cast<std::uint64_t>(o.seed);
    return s;
}

// ----------------------------------------------------------------------------
// Single run
// ----------------------------------------------------------------------------

struct RunOutcome {
    Scenario scn;
    Tolerances tol;
    GenericResult gen;
    std::vector<W1Row> w1;
    bool w1_ok = false;
    std::optional<ParityCheck> parity;
    std::optional<PdClassCheck> pd;
    std::optional<WindingResult> winding;
    std::optional<Mod2Result> mod2;
    std::optional<CoveringCheck> covering;
    DegreeCriterion deg;
    bool locus_empty = true;
    bool pass = false;
};

inline RunOutcome run_single(Scenario scn, const Tolerances& tol) {
    RunOutcome out;
    out.scn = std::move(scn);
    out.tol = tol;
    out.gen = perturb_until_generic(out.scn.emb, out.scn.fol, out.scn.eps, out.scn.seed, tol);

    out.w1 = w1_identity_check(out.gen.section);
    out.w1_ok = true;
    for (const auto& row : out.w1) out.w1_ok = out.w1_ok && row.ok;

    if (out.scn.emb.domain.dim == 1) {
        out.parity = parity_check(out.gen.locus1(), out.gen.section);
        out.locus_empty = out.gen.locus1().zeros.empty();
    } else {
        out.pd = pd_class_check(out.gen.locus2(), out.gen.section);
        out.locus_empty = out.gen.locus2().curves.empty();
    }

    SurfaceMap map{&out.scn.emb, out.gen.pert.empty() ? nullptr : &out.gen.pert};
    const Foliation& fol = out.scn.fol;
    if (fol.kind == Foliation::Kind::SubmersionFibers && !fol.sphere_base) {
        std::size_t coord = static_cast<std::size_t>(fol.complement_coords.at(0));
        out.winding = winding_degree(map, coord);
        out.mod2 = mod2_degree_circle(map, coord);
        if (((out.winding->degree % 2) + 2) % 2 != out.mod2->parity)
            throw DomainError("winding parity disagrees with the mod-2 preimage count");
        if (out.locus_empty) out.covering = covering_check(map, coord, out.winding->degree, true);
        out.deg = degree_criterion_verdict(fol, out.locus_empty, out.mod2->parity, true,
                                           out.winding->degree);
    } else if (fol.kind == Foliation::Kind::SubmersionFibers) {
        out.mod2 = mod2_degree_sphere(map, fol.sphere_off);
        out.deg = degree_criterion_verdict(fol, out.locus_empty, out.mod2->parity, false, 0);
    } else {
        out.deg = degree_criterion_verdict(fol, out.locus_empty, 0, false, 0);
    }

    out.pass = out.w1_ok && out.deg.verdict != DegreeVerdict::Inconsistent;
    if (out.parity) out.pass = out.pass && out.parity->pass;
    if (out.pd) out.pass = out.pass && out.pd->pass;
    if (out.covering) out.pass = out.pass && out.covering->matches_degree;
    return out;
}

// ----------------------------------------------------------------------------
// Report assembly
// ----------------------------------------------------------------------------

inline JsonValue certificate_json(const GenericityCertificate& c) {
    JsonObject o;
    o["attempts"] = c.attempts;
    o["grid"] = c.grid;
    o["lipschitz"] = c.lipschitz;
    o["min_det_off_locus"] = c.min_det_off_locus;
    o["min_grad_on_locus"] = c.min_grad_on_locus ? JsonValue(*c.min_grad_on_locus) : JsonValue();
    o["sound"] = c.sound;
    return o;
}

inline JsonValue build_report(const RunOutcome& r) {
    JsonObject o;
    o["scenario"] = r.scn.id;
    o["n"] = r.scn.fol.codim;
    o["eps"] = r.scn.eps;
    o["seed"] = static_cast<long long>(r.scn.seed);
    {
        JsonObject t;
        t["delta_sep"] = r.tol.delta_sep;
        t["tau_nd"] = r.tol.tau_nd;
        o["tolerances"] = t;
    }
    o["transverse_everywhere"] = r.gen.transverse_everywhere;
    o["attempts"] = r.gen.attempts;

    if (r.scn.emb.domain.dim == 1) {
        const Locus1D& loc = r.gen.locus1();
        o["certificate"] = certificate_json(loc.cert);
        JsonArray zeros;
        for (const auto& z : loc.zeros) {
            JsonObject zo;
            zo["t"] = z.t;
            zo["det_derivative"] = z.det_derivative;
            zeros.push_back(zo);
        }
        JsonObject lo;
        lo["kind"] = "zeros";
        lo["zeros"] = zeros;
        o["locus"] = lo;
    } else {
        const Locus2D& loc = r.gen.locus2();
        o["certificate"] = certificate_json(loc.cert);
        JsonArray curves;
        for (const auto& c : loc.curves) {
            JsonObject co;
            co["points"] = c.pts.size();
            co["wrap_s"] = static_cast<long long>(c.wrap_s);
            co["wrap_t"] = static_cast<long long>(c.wrap_t);
            curves.push_back(co);
        }
        JsonObject lo;
        lo["kind"] = "curves";
        lo["curves"] = curves;
        o["locus"] = lo;
    }

    {
        JsonArray rows;
        for (const auto& w : r.w1) {
            JsonObject ro;
            ro["loop"] = w.loop;
            ro["ts"] = w.ts;
            ro["nu"] = w.nu;
            ro["line"] = w.line;
            ro["identity_ok"] = w.ok;
            rows.push_back(ro);
        }
        o["pairings"] = rows;
    }

    if (r.parity) {
        JsonObject po;
        po["count_mod2"] = r.parity->count_mod2;
        po["pairing"] = r.parity->pairing;
        po["pass"] = r.parity->pass;
        po["zero_count"] = r.parity->zero_count;
        o["parity"] = po;
    } else {
        o["parity"] = JsonValue();
    }

    if (r.pd) {
        JsonObject po;
        po["pass"] = r.pd->pass;
        JsonArray rows;
        for (const auto& row : r.pd->rows) {
            JsonObject ro;
            ro["loop"] = row.loop;
            ro["crossings"] = row.crossings;
            ro["crossing_parity"] = row.crossing_parity;
            ro["pairing"] = row.pairing;
            ro["pass"] = row.pass;
            rows.push_back(ro);
        }
        po["rows"] = rows;
        o["pd_class"] = po;
    } else {
        o["pd_class"] = JsonValue();
    }

    {
        JsonObject d;
        d["applicable"] = r.deg.applicable;
        d["verdict"] = verdict_name(r.deg.verdict);
        d["detail"] = r.deg.detail;
        d["integer_defined"] = r.deg.integer_defined;
        d["integer"] =
            r.deg.integer_defined ? JsonValue(static_cast<long long>(r.deg.integer_degree)) : JsonValue();
        d["mod2"] = r.mod2 ? JsonValue(r.mod2->parity) : JsonValue();
        if (r.covering) {
            JsonObject c;
            c["sheets"] = r.covering->sheets;
            c["counts_equal"] = r.covering->counts_equal;
            c["matches_degree"] = r.covering->matches_degree;
            c["witness_radius"] = r.covering->witness_radius;
            d["covering"] = c;
        } else {
            d["covering"] = JsonValue();
        }
        o["degree"] = d;
    }

    {
        JsonObject v;
        v["w1_identity"] = r.w1_ok;
        v["parity"] = r.parity ? JsonValue(r.parity->pass) : JsonValue();
        v["pd_class"] = r.pd ? JsonValue(r.pd->pass) : JsonValue();
        v["degree_criterion"] = verdict_name(r.deg.verdict);
        o["verdicts"] = v;
    }
    o["pass"] = r.pass;
    return o;
}

// ----------------------------------------------------------------------------
// CSV rows (sweeps, and check --format csv)
// ----------------------------------------------------------------------------

inline std::string csv_header() {
    return csv_row({"scenario", "seed", "eps", "status", "attempts", "count", "parity", "pairing",
                    "mod2_degree", "integer_degree", "verdict", "pass"});
}

inline std::string csv_outcome_row(const RunOutcome& r) {
    std::string count, parity, pairing;
    if (r.parity) {
        count = std::to_string(r.parity->zero_count);
        parity = std::to_string(r.parity->count_mod2);
        pairing = std::to_string(r.parity->pairing);
    } else if (r.pd) {
        count = std::to_string(r.gen.locus2().curves.size());
        for (const auto& row : r.pd->rows) {
            parity += std::to_string(row.crossing_parity);
            pairing += std::to_string(row.pairing);
        }
    }
    return csv_row({r.scn.id, std::to_string(r.scn.seed), JsonValue::format_double(r.scn.eps), "ok",
                    std::to_string(r.gen.attempts), count, parity, pairing,
                    r.mod2 ? std::to_string(r.mod2->parity) : "",
                    r.deg.integer_defined ? std::to_string(r.deg.integer_degree) : "",
                    verdict_name(r.deg.verdict), r.pass ? "true" : "false"});
}

inline std::string csv_failure_row(const std::string& id, std::uint64_t seed, double eps,
                                   const std::string& status) {
    return csv_row({id, std::to_string(seed), JsonValue::format_double(eps), status, "", "", "", "",
                    "", "", "", "false"});
}

// ----------------------------------------------------------------------------
// check
// ----------------------------------------------------------------------------

inline void write_output(const RunOptions& o, const std::string& payload) {
    if (o.out_path.empty()) {
        std::fputs(payload.c_str(), stdout);
    } else {
        std::ofstream f(o.out_path, std::ios::binary);
        if (!f) throw Error("io", "cannot write '" + o.out_path + "'");
        f << payload;
    }
}

inline int run_check(const RunOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    Scenario scn = resolve_scenario(opts);
    Tolerances tol = tolerances_for(opts);
    RunOutcome r = run_single(std::move(scn), tol);
    std::string payload;
    if (opts.format == "csv") {
        payload = csv_header() + csv_outcome_row(r);
    } else {
        payload = build_report(r).dump();
    }
    write_output(opts, payload);
    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0);
    std::fprintf(stderr, "wall_time_ms=%.1f\n", ms.count());
    return r.pass ? kExitPass : kExitVerdictFailure;
}

// ----------------------------------------------------------------------------
// sweep
// ----------------------------------------------------------------------------

struct SweepOptions {
    RunOptions base;
    std::vector<long long> seeds;  // empty falls back to the scenario seed
    std::vector<double> eps_list;  // empty falls back to the scenario eps
};

inline int run_sweep(const SweepOptions& so) {
    auto t0 = std::chrono::steady_clock::now();
    Scenario proto = resolve_scenario(so.base);
    Tolerances tol = tolerances_for(so.base);
    std::vector<long long> seeds = so.seeds;
    if (seeds.empty()) seeds.push_back(static_cast<long long>(proto.seed));
    std::vector<double> eps_list = so.eps_list;
    if (eps_list.empty()) eps_list.push_back(proto.eps);
    std::sort(seeds.begin(), seeds.end());
    std::sort(eps_list.begin(), eps_list.end());

    std::string out = csv_header();
    std::size_t ok = 0, failed = 0, inconsistent = 0;
    bool all_pass = true, parity_constant = true;
    std::string first_parity;
    bool have_parity = false;

    for (long long seed : seeds) {
        for (double eps : eps_list) {
            Scenario scn = proto;
            scn.seed = static_cast<std::uint64_t>(seed);
            scn.eps = eps;
            try {
                RunOutcome r = run_single(std::move(scn), tol);
                out += csv_outcome_row(r);
                ++ok;
                all_pass = all_pass && r.pass;
                if (r.deg.verdict == DegreeVerdict::Inconsistent) ++inconsistent;
                std::string parity;
                if (r.parity) parity = std::to_string(r.parity->count_mod2);
                else if (r.pd)
                    for (const auto& row : r.pd->rows) parity += std::to_string(row.crossing_parity);
                if (!have_parity) {
                    first_parity = parity;
                    have_parity = true;
                } else if (parity != first_parity) {
                    parity_constant = false;
                }
            } catch (const GenericityFailed&) {
                out += csv_failure_row(proto.id, static_cast<std::uint64_t>(seed), eps,
                                       "genericity_failed");
                ++failed;
                all_pass = false;
            } catch (const Error&) {
                out += csv_failure_row(proto.id, static_cast<std::uint64_t>(seed), eps, "error");
                ++failed;
                all_pass = false;
            }
        }
    }
    out += "# aggregate runs=" + std::to_string(ok + failed) + " ok=" + std::to_string(ok) +
           " failed=" + std::to_string(failed) +
           " parity_constant=" + (parity_constant ? "true" : "false") +
           " inconsistent=" + std::to_string(inconsistent) +
           " all_pass=" + (all_pass ? "true" : "false") + "\n";
    write_output(so.base, out);
    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0);
    std::fprintf(stderr, "wall_time_ms=%.1f\n", ms.count());
    if (failed || !all_pass) return kExitVerdictFailure;
    return kExitPass;
}

// ----------------------------------------------------------------------------
// oracle: independent dense-scan recomputation
// ----------------------------------------------------------------------------

/// Sign changes of the determinant section along one full period of a
/// parameter line, stepping a dense uniform grid through the seam.
inline std::size_t dense_line_sign_changes(const DetSection& ds, std::size_t axis, double offset,
                                           std::size_t samples) {
    std::size_t flips = 0;
    double prev = 0;
    for (std::size_t k = 0; k <= samples; ++k) {
        double u = (static_cast<double>(k) + 0.5) / static_cast<double>(samples);
        Vec p(ds.domain.dim);
        if (ds.domain.dim == 1) {
            p[0] = u;
        } else {
            p[axis] = u;
            p[1 - axis] = offset;
        }
        double v = ds.evaluate(p);
        if (k && (v > 0) != (prev > 0)) ++flips;
        prev = v;
    }
    return flips;
}

/// Dense preimage count of x_coord == c on the circle domain; sign changes of
/// the wrapped difference away from the branch cut.
inline std::size_t dense_preimage_count_circle(const SurfaceMap& map, std::size_t coord, double c,
                                               std::size_t samples) {
    std::size_t count = 0;
    double prev = 0;
    for (std::size_t k = 0; k <= samples; ++k) {
        double t = (static_cast<double>(k) + 0.5) / static_cast<double>(samples);
        Vec p = map.value(Vec{t});
        double g = circle_diff(p[coord], c);
        if (k && (g > 0) != (prev > 0) && std::fabs(g) < 0.25 && std::fabs(prev) < 0.25) ++count;
        prev = g;
    }
    return count;
}

/// Dense preimage count over a sphere base: connected components of the
/// angular-distance sublevel set on a wrapped parameter grid, each validated
/// by a near-zero minimum.
inline std::size_t dense_preimage_count_sphere(const SurfaceMap& map, std::size_t off, const Vec& c,
                                               std::size_t grid) {
    const double h = 1.0 / static_cast<double>(grid);
    std::vector<double> d(grid * grid);
    for (std::size_t i = 0; i < grid; ++i)
        for (std::size_t j = 0; j < grid; ++j) {
            Vec p = map.value(Vec{(i + 0.5) * h, (j + 0.5) * h});
            double dp = 0;
            for (std::size_t a = 0; a < 3; ++a) dp += p[off + a] * c[a];
            d[i * grid + j] = std::acos(std::min(1.0, std::fabs(dp)));
        }
    const double mark = 0.02;
    std::vector<int> comp(grid * grid, -1);
    std::size_t count = 0;
    for (std::size_t s = 0; s < grid * grid; ++s) {
        if (d[s] >= mark || comp[s] >= 0) continue;
        // flood fill with wrapping; keep the component's minimum
        double cmin = d[s];
        std::vector<std::size_t> stack{s};
        comp[s] = static_cast<int>(count);
        while (!stack.empty()) {
            std::size_t cidx = stack.back();
            stack.pop_back();
            cmin = std::min(cmin, d[cidx]);
            long ci = static_cast<long>(cidx / grid), cj = static_cast<long>(cidx % grid);
            const long G = static_cast<long>(grid);
            const long ni[4] = {(ci + 1) % G, (ci - 1 + G) % G, ci, ci};
            const long nj[4] = {cj, cj, (cj + 1) % G, (cj - 1 + G) % G};
            for (int a = 0; a < 4; ++a) {
                std::size_t n = static_cast<std::size_t>(ni[a]) * grid + static_cast<std::size_t>(nj[a]);
                if (d[n] < mark && comp[n] < 0) {
                    comp[n] = static_cast<int>(count);
                    stack.push_back(n);
                }
            }
        }
        // genuine zero, not a shallow dip: a true preimage lies within half a
        // cell diagonal of some node, and the sphere block moves at most ~2*pi
        // per unit parameter, so its node distance is below 8h
        if (cmin < std::max(1e-3, 8.0 * h)) ++count;
    }
    return count;
}

inline int run_oracle(const RunOptions& opts) {
    Scenario scn = resolve_scenario(opts);
    Tolerances tol = tolerances_for(opts);
    RunOutcome r = run_single(std::move(scn), tol);

    JsonObject o;
    o["scenario"] = r.scn.id;
    o["seed"] = static_cast<long long>(r.scn.seed);
    o["eps"] = r.scn.eps;
    bool agree = true;
    const std::size_t kDense = 100000;

    if (r.scn.emb.domain.dim == 1) {
        std::size_t dense = dense_line_sign_changes(r.gen.section, 0, 0, kDense);
        std::size_t pipeline = r.gen.locus1().zeros.size();
        JsonObject zc;
        zc["pipeline"] = pipeline;
        zc["dense"] = dense;
        zc["agree"] = (dense == pipeline);
        agree = agree && dense == pipeline;
        o["zero_count"] = zc;
        o["crossing_parities"] = JsonValue();
    } else {
        // parity of dense sign changes along one line per generator loop,
        // against the crossing-parity table
        JsonArray rows;
        for (std::size_t gi = 0; gi < 2; ++gi) {
            // the counting line for generator gi's row runs along generator
            // gi itself, with the other coordinate held at the offset
            std::size_t flips = dense_line_sign_changes(r.gen.section, gi, 0.3183, kDense);
            int dense_parity = static_cast<int>(flips % 2);
            int pipeline_parity = r.pd->rows[gi].crossing_parity;
            JsonObject ro;
            ro["loop"] = r.pd->rows[gi].loop;
            ro["pipeline"] = pipeline_parity;
            ro["dense"] = dense_parity;
            ro["agree"] = (dense_parity == pipeline_parity);
            agree = agree && dense_parity == pipeline_parity;
            rows.push_back(ro);
        }
        o["crossing_parities"] = rows;
        JsonObject zc;
        bool dense_nonempty = dense_line_sign_changes(r.gen.section, 0, 0.3183, 4096) > 0 ||
                              dense_line_sign_changes(r.gen.section, 1, 0.3183, 4096) > 0;
        zc["pipeline"] = !r.locus_empty;
        zc["dense"] = dense_nonempty;
        zc["agree"] = (dense_nonempty == !r.locus_empty);
        agree = agree && dense_nonempty == !r.locus_empty;
        o["locus_nonempty"] = zc;
        o["zero_count"] = JsonValue();
    }

    SurfaceMap map{&r.scn.emb, r.gen.pert.empty() ? nullptr : &r.gen.pert};
    const Foliation& fol = r.scn.fol;
    if (fol.kind == Foliation::Kind::SubmersionFibers && !fol.sphere_base) {
        std::size_t coord = static_cast<std::size_t>(fol.complement_coords.at(0));
        // first certified regular value from the same candidate ladder the
        // pipeline uses
        for (int j = 0; j < 24; ++j) {
            double c = 0.31 + 0.6180339887498949 * j;
            c -= std::floor(c);
            PreimageCount pc = count_preimages_circle(map, coord, c);
            if (!pc.regular || !pc.certified) continue;
            std::size_t dense = dense_preimage_count_circle(map, coord, c, kDense);
            JsonObject po;
            po["value"] = c;
            po["pipeline"] = pc.count;
            po["dense"] = dense;
            po["agree"] = (dense == pc.count);
            agree = agree && dense == pc.count;
            o["preimages"] = po;
            break;
        }
    } else if (fol.kind == Foliation::Kind::SubmersionFibers) {
        for (int j = 0; j < 24; ++j) {
            Vec c = sample_point(3, static_cast<std::size_t>(7 + j));
            double n = norm(c = c - Vec{0.5, 0.5, 0.5});
            if (n < 1e-3) continue;
            c = (1.0 / n) * c;
            PreimageCount pc = count_preimages_sphere(map, fol.sphere_off, c);
            if (!pc.regular || !pc.certified) continue;
            std::size_t dense = dense_preimage_count_sphere(map, fol.sphere_off, c, 512);
            JsonObject po;
            po["pipeline"] = pc.count;
            po["dense"] = dense;
            po["agree"] = (dense == pc.count);
            agree = agree && dense == pc.count;
            o["preimages"] = po;
            break;
        }
    } else {
        o["preimages"] = JsonValue();
    }
    if (!o.count("preimages")) o["preimages"] = JsonValue();

    o["agree"] = agree;
    write_output(opts, JsonValue(o).dump());
    return agree ? kExitPass : kExitOracleDisagreement;
}

// ----------------------------------------------------------------------------
// verify: every builtin against its own expectation block
// ----------------------------------------------------------------------------

inline std::string expectation_actual(const RunOutcome& r, const std::string& key) {
    auto b = [](bool v) { return v ? std::string("true") : std::string("false"); };
    if (key == "tangency_count")
        return r.parity ? std::to_string(r.parity->zero_count) : std::string("n/a");
    if (key == "locus_empty") return b(r.locus_empty);
    if (key == "parity_ok") return r.parity ? b(r.parity->pass) : std::string("n/a");
    if (key == "winding")
        return r.winding ? std::to_string(r.winding->degree) : std::string("n/a");
    if (key == "mod2_degree") return r.mod2 ? std::to_string(r.mod2->parity) : std::string("n/a");
    if (key == "verdict") return verdict_name(r.deg.verdict);
    if (key == "sheets")
        return r.covering ? std::to_string(r.covering->sheets) : std::string("n/a");
    if (key == "w1_identity_ok") return b(r.w1_ok);
    if (key == "integer_degree_defined") return b(r.deg.integer_defined);
    for (const auto& row : r.w1) {
        if (key == "w1_line_" + row.loop) return std::to_string(row.line);
        if (key == "w1_ts_" + row.loop) return std::to_string(row.ts);
        if (key == "w1_nu_" + row.loop) return std::to_string(row.nu);
    }
    if (r.pd) {
        for (const auto& row : r.pd->rows)
            if (key == "crossing_parity_" + row.loop) return std::to_string(row.crossing_parity);
    }
    return "n/a";
}

inline int run_verify(const RunOptions& opts) {
    Tolerances tol = tolerances_for(opts);
    std::string out;
    std::size_t checks = 0, failures = 0;
    for (const std::string& id : builtin_ids()) {
        Scenario scn = builtin_scenario(id);
        if (opts.eps >= 0) scn.eps = opts.eps;
        if (opts.seed >= 0) scn.seed = static_cast<std::uint64_t>(opts.seed);
        try {
            RunOutcome r = run_single(std::move(scn), tol);
            for (const auto& [key, expected] : r.scn.expect) {
                std::string actual = expectation_actual(r, key);
                ++checks;
                if (actual == expected) {
                    out += "[PASS] " + id + " " + key + " = " + actual + "\n";
                } else {
                    out += "[FAIL] " + id + " " + key + " expected " + expected + " got " + actual +
                           "\n";
                    ++failures;
                }
            }
        } catch (const Error& e) {
            out += "[FAIL] " + id + " run error: " + e.what() + "\n";
            ++failures;
            ++checks;
        }
    }
    out += "verify: " + std::to_string(checks) + " checks, " + std::to_string(failures) +
           " failures\n";
    write_output(opts, out);
    return failures ? kExitVerdictFailure : kExitPass;
}

inline int run_list(const RunOptions& opts) {
    std::string out;
    for (const std::string& id : builtin_ids()) {
        Scenario s = builtin_scenario(id);
        out += id + "  model=" + s.model_kind + "  foliation=" + s.foliation_id +
               "  dim=" + std::to_string(s.emb.domain.dim) +
               "  eps=" + JsonValue::format_double(s.eps) + "  seed=" + std::to_string(s.seed) +
               "\n";
    }
    write_output(opts, out);
    return kExitPass;
}

}  // namespace folicheck
