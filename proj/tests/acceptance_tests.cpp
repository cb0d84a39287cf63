// End-to-end acceptance suite. Drives the command-line binary (path in
// argv[1]) through its public subcommands, checks report contents and exit
// codes against independently known answers, and prints one pass/fail line
// per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "folicheck/expr.hpp"

#ifdef _WIN32
#error "acceptance driver assumes a POSIX shell"
#endif
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_dir;

double now_s() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

int run_cli(const std::string& args) {
    std::string cmd = "\"" + g_cli + "\" " + args + " >/dev/null 2>/dev/null";
    int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

bool has(const std::string& text, const std::string& needle) {
    return text.find(needle) != std::string::npos;
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

// Data rows of a sweep CSV: everything after the header that is not the
// trailing aggregate comment.
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;
            continue;
        }
        if (line.empty() || line[0] == '#') continue;
        rows.push_back(split_commas(line));
    }
    return rows;
}

// crossing parity for one generator row of a curve report; the loop name must
// be resolved inside the dual-class block, not the monodromy table
int crossing_parity_for(const std::string& json, const std::string& loop) {
    std::size_t pd = json.find("\"pd_class\":{");
    if (pd == std::string::npos) return -1;
    std::string anchor = "\"loop\":\"" + loop + "\"";
    std::size_t at = json.find(anchor, pd);
    if (at == std::string::npos) return -1;
    std::size_t open = json.rfind('{', at);
    std::size_t key = json.find("\"crossing_parity\":", open);
    if (key == std::string::npos || key > at + anchor.size() + 80) return -1;
    return std::atoi(json.c_str() + key + 18);
}

struct Criterion {
    int number;
    bool ok = true;
    std::string detail;
    double t0 = now_s();

    explicit Criterion(int n) : number(n) {}
    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
    bool finish(const std::string& label, double budget_s = 0) {
        double secs = now_s() - t0;
        if (budget_s > 0 && secs >= budget_s)
            require(false, "exceeded " + std::to_string(budget_s) + "s budget");
        std::printf("[%s] %d. %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", number, label.c_str(), secs,
                    ok ? "" : " -- ", ok ? "" : detail.c_str());
        return ok;
    }
};

// --------------------------------------------------------------------------
// 1. straight (2,3) torus line: certified transverse triple covering
// --------------------------------------------------------------------------

bool criterion_covering() {
    Criterion c(1);
    fs::path out = g_dir / "c1.json";
    int code = run_cli("check torus_pq --p 2 --q 3 --out " + out.string());
    c.require(code == 0, "exit code " + std::to_string(code));
    std::string r = slurp(out);
    c.require(has(r, "\"transverse_everywhere\":true"), "not transverse everywhere");
    c.require(has(r, "\"sound\":true"), "certificate not sound");
    c.require(has(r, "\"zeros\":[]"), "tangency locus not empty");
    c.require(has(r, "\"integer\":3"), "winding degree != 3");
    c.require(has(r, "\"mod2\":1"), "mod-2 degree != 1");
    c.require(has(r, "\"sheets\":3"), "sheet count != 3");
    c.require(has(r, "\"counts_equal\":true"), "sheet counts disagree between witnesses");
    c.require(has(r, "\"verdicts\":{\"degree_criterion\":\"transverse_covering\","
                     "\"parity\":true,\"pd_class\":null,\"w1_identity\":true}"),
              "verdict table not all-pass");
    c.require(has(r, "\"pass\":true"), "overall pass flag false");
    return c.finish("straight torus line is a certified 3-sheet covering, zero tangencies", 1.0);
}

// --------------------------------------------------------------------------
// 2. non-coorientable line field on the Klein bottle: odd tangency counts
// --------------------------------------------------------------------------

bool criterion_odd_parity() {
    Criterion c(2);
    fs::path out = g_dir / "c2.csv";
    int code =
        run_cli("sweep klein_nonTO --seed-count 100 --eps-list 0.01,0.05,0.1 --out " + out.string());
    c.require(code == 0, "sweep exit code " + std::to_string(code));
    auto rows = csv_rows(slurp(out));
    c.require(rows.size() == 300, "expected 300 rows, got " + std::to_string(rows.size()));
    for (const auto& row : rows) {
        if (row.size() < 12 || row[3] != "ok") {
            c.require(false, "non-ok row (seed " + (row.size() > 1 ? row[1] : "?") + ")");
            break;
        }
        long count = std::atol(row[5].c_str());
        if (count % 2 != 1) {
            c.require(false, "even count " + row[5] + " at seed " + row[1] + " eps " + row[2]);
            break;
        }
        if (row[7] != "1") {
            c.require(false, "pairing " + row[7] + " at seed " + row[1]);
            break;
        }
    }
    // monodromy sign table on the base loop: tangent rows 0, normal and
    // product rows 1, for every amplitude
    for (const char* eps : {"0.01", "0.05", "0.1"}) {
        fs::path jout = g_dir / "c2.json";
        int jc = run_cli(std::string("check klein_nonTO --eps ") + eps + " --seed 1 --out " +
                         jout.string());
        c.require(jc == 0, std::string("check exit at eps ") + eps);
        c.require(has(slurp(jout),
                      "{\"identity_ok\":true,\"line\":1,\"loop\":\"S\",\"nu\":1,\"ts\":0}"),
                  std::string("sign table wrong at eps ") + eps);
    }
    return c.finish("Klein-bottle line field forces odd tangency counts, sign table (0,1,1)",
                    30.0);
}

// --------------------------------------------------------------------------
// 3. projective-plane product: crossing parities locate the dual class
// --------------------------------------------------------------------------

bool criterion_crossing_parities() {
    Criterion c(3);
    for (int seed = 1; seed <= 25 && c.ok; ++seed) {
        fs::path out = g_dir / "c3.json";
        std::string base = "check rp2_product --eps 0.05 --seed " + std::to_string(seed);
        int code = run_cli(base + " --out " + out.string());
        c.require(code == 0, "exit " + std::to_string(code) + " at seed " + std::to_string(seed));
        std::string r = slurp(out);
        c.require(has(r, "\"curves\":[{"), "empty curve set at seed " + std::to_string(seed));
        c.require(crossing_parity_for(r, "loop_s") == 0,
                  "base-loop parity != 0 at seed " + std::to_string(seed));
        c.require(crossing_parity_for(r, "loop_t") == 1,
                  "fiber-loop parity != 1 at seed " + std::to_string(seed));
        c.require(has(r, "\"pd_class\":true"), "dual-class verdict failed");

        fs::path fine = g_dir / "c3_fine.json";
        code = run_cli(base + " --grid 512 --out " + fine.string());
        c.require(code == 0, "doubled-grid exit " + std::to_string(code));
        std::string rf = slurp(fine);
        c.require(crossing_parity_for(rf, "loop_s") == crossing_parity_for(r, "loop_s") &&
                      crossing_parity_for(rf, "loop_t") == crossing_parity_for(r, "loop_t"),
                  "parities unstable under grid doubling at seed " + std::to_string(seed));
    }
    return c.finish("projective product: curve set nonempty, crossing parities (0,1), grid-stable",
                    60.0);
}

// --------------------------------------------------------------------------
// 4. zero degree forces tangencies; the inconsistent cell never fires
// --------------------------------------------------------------------------

bool criterion_degree_forcing() {
    Criterion c(4);
    fs::path out = g_dir / "c4.csv";
    int code = run_cli("sweep torus_zero_winding --seed-count 100 --eps-list 0.05 --out " +
                       out.string());
    c.require(code == 0, "sweep exit code " + std::to_string(code));
    std::string text = slurp(out);
    auto rows = csv_rows(text);
    c.require(rows.size() == 100, "expected 100 rows, got " + std::to_string(rows.size()));
    for (const auto& row : rows) {
        if (row.size() < 12 || row[3] != "ok" || row[9] != "0" || row[10] != "confirmed" ||
            row[11] != "true") {
            c.require(false, "bad row at seed " + (row.size() > 1 ? row[1] : "?"));
            break;
        }
        long count = std::atol(row[5].c_str());
        if (count < 2 || count % 2 != 0) {
            c.require(false, "count " + row[5] + " at seed " + row[1]);
            break;
        }
    }
    // the (zero degree, certified-empty locus) cell must stay empty over the
    // whole catalog
    for (const char* id :
         {"torus_pq", "torus_zero_winding", "klein_nonTO", "rp2_product", "oriented_null"}) {
        fs::path agg = g_dir / "c4_catalog.csv";
        int sc = run_cli(std::string("sweep ") + id + " --seed-count 100 --eps-list 0.05 --out " +
                         agg.string());
        c.require(sc == 0, std::string("catalog sweep exit ") + std::to_string(sc) + " on " + id);
        c.require(has(slurp(agg), "inconsistent=0"), std::string("inconsistent runs on ") + id);
    }
    return c.finish("zero winding forces even tangency counts >= 2; no inconsistent cell in 500 "
                    "catalog runs",
                    30.0);
}

// --------------------------------------------------------------------------
// 5. orientable case: all pairings vanish, counts stay even
// --------------------------------------------------------------------------

bool criterion_orientable_null() {
    Criterion c(5);
    fs::path out = g_dir / "c5.csv";
    int code = run_cli("sweep oriented_null --seed-count 50 --eps-list 0.05 --out " + out.string());
    c.require(code == 0, "sweep exit code " + std::to_string(code));
    auto rows = csv_rows(slurp(out));
    c.require(rows.size() == 50, "expected 50 rows, got " + std::to_string(rows.size()));
    for (const auto& row : rows) {
        long count = std::atol(row[5].c_str());
        if (row[3] != "ok" || row[7] != "0" || count % 2 != 0) {
            c.require(false, "seed " + row[1] + ": count " + row[5] + " pairing " + row[7]);
            break;
        }
    }
    fs::path jout = g_dir / "c5.json";
    c.require(run_cli("check oriented_null --eps 0.05 --seed 1 --out " + jout.string()) == 0,
              "check exit nonzero");
    c.require(has(slurp(jout), "{\"identity_ok\":true,\"line\":0,\"loop\":\"S\",\"nu\":0,\"ts\":0}"),
              "monodromy table not identically zero");
    return c.finish("null-homotopic circle in the oriented torus: pairings 0, even counts");
}

// --------------------------------------------------------------------------
// 6. dense-scan oracle agreement across the catalog
// --------------------------------------------------------------------------

bool criterion_oracle_agreement() {
    Criterion c(6);
    for (const char* id :
         {"torus_pq", "torus_zero_winding", "klein_nonTO", "rp2_product", "oriented_null"}) {
        for (int seed = 1; seed <= 10 && c.ok; ++seed) {
            fs::path out = g_dir / "c6.json";
            int code = run_cli(std::string("oracle ") + id + " --eps 0.05 --seed " +
                               std::to_string(seed) + " --out " + out.string());
            c.require(code == 0, std::string(id) + " seed " + std::to_string(seed) + " exit " +
                                     std::to_string(code));
            c.require(slurp(out).rfind("{\"agree\":true,", 0) == 0,
                      std::string(id) + " oracle report disagrees");
        }
    }
    return c.finish("dense-scan oracle agrees on counts and parities, 5 scenarios x 10 seeds");
}

// --------------------------------------------------------------------------
// 7. forward-mode derivatives vs Richardson-extrapolated differences
// --------------------------------------------------------------------------

std::string random_expr(std::mt19937& rng, int depth) {
    std::uniform_real_distribution<double> coef(-1.5, 1.5);
    std::uniform_int_distribution<int> pick(0, 99);
    int r = pick(rng);
    if (depth <= 0 || r < 25) {
        switch (pick(rng) % 3) {
            case 0: return "t";
            case 1: return "s";
            default: {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.3f", coef(rng));
                return buf;
            }
        }
    }
    if (r < 45) return "sin(" + random_expr(rng, depth - 1) + ")";
    if (r < 60) return "cos(" + random_expr(rng, depth - 1) + ")";
    if (r < 67) return "exp(0.5*sin(" + random_expr(rng, depth - 1) + "))";
    if (r < 74) return "(" + random_expr(rng, depth - 1) + ")^" + (pick(rng) % 2 ? "2" : "3");
    if (r < 81)
        return "(" + random_expr(rng, depth - 1) + ")/(2 + cos(" + random_expr(rng, depth - 1) +
               "))";
    const char* op = r < 88 ? " + " : (r < 95 ? " * " : " - ");
    return "(" + random_expr(rng, depth - 1) + op + random_expr(rng, depth - 1) + ")";
}

bool criterion_derivatives() {
    Criterion c(7);
    std::mt19937 rng(20260815);
    std::uniform_real_distribution<double> point(0.05, 0.95);
    const double h = 1e-3;
    for (int i = 0; i < 1000 && c.ok; ++i) {
        std::string text = random_expr(rng, 4);
        folicheck::Expr e = folicheck::parse(text);
        folicheck::Env env;
        env.vars["t"] = point(rng);
        env.vars["s"] = point(rng);
        env.seeds["t"] = {1.0, 0.0};
        env.seeds["s"] = {0.0, 1.0};
        folicheck::EvalResult ad = folicheck::eval_dual(e, env);

        for (const char* var : {"t", "s"}) {
            folicheck::Env fd = env;
            fd.seeds.clear();
            double x = fd.vars[var];
            auto at = [&](double v) {
                fd.vars[var] = v;
                return folicheck::eval(e, fd);
            };
            double d1 = (at(x + h) - at(x - h)) / (2 * h);
            double d2 = (at(x + h / 2) - at(x - h / 2)) / h;
            double richardson = (4 * d2 - d1) / 3;
            double got = ad.gradient[var[0] == 't' ? 0 : 1];
            double tol = 1e-6 * std::max({1.0, std::fabs(richardson), std::fabs(got)});
            if (std::fabs(got - richardson) > tol) {
                char buf[160];
                std::snprintf(buf, sizeof buf, "d/d%s mismatch %.12g vs %.12g on %s", var, got,
                              richardson, text.c_str());
                c.require(false, buf);
                break;
            }
        }
    }
    return c.finish("dual-number derivatives match extrapolated differences on 1000 expressions");
}

// --------------------------------------------------------------------------
// 8. byte-identical reports for identical invocations
// --------------------------------------------------------------------------

bool criterion_determinism() {
    Criterion c(8);
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"check", "check rp2_product --eps 0.05 --seed 7"},
        {"sweep", "sweep klein_nonTO --seed-count 5 --eps-list 0.05"},
        {"oracle", "oracle torus_pq"},
        {"verify", "verify"},
        {"list", "list-scenarios"},
    };
    for (const auto& [name, args] : cases) {
        fs::path a = g_dir / ("c8_" + name + "_a");
        fs::path b = g_dir / ("c8_" + name + "_b");
        int ca = run_cli(args + " --out " + a.string());
        int cb = run_cli(args + " --out " + b.string());
        c.require(ca == cb, name + " exit codes differ");
        std::string first = slurp(a);
        c.require(!first.empty() && first == slurp(b), name + " reports differ between runs");
    }
    return c.finish("every subcommand emits byte-identical reports on repeated runs");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance_tests <path-to-cli>\n");
        return 2;
    }
    g_cli = argv[1];
    g_dir = fs::temp_directory_path() / "folicheck_acceptance";
    fs::create_directories(g_dir);

    bool ok = true;
    ok &= criterion_covering();
    ok &= criterion_odd_parity();
    ok &= criterion_crossing_parities();
    ok &= criterion_degree_forcing();
    ok &= criterion_orientable_null();
    ok &= criterion_oracle_agreement();
    ok &= criterion_derivatives();
    ok &= criterion_determinism();

    std::error_code ec;
    fs::remove_all(g_dir, ec);
    std::printf("%s\n", ok ? "acceptance: all criteria passed" : "acceptance: FAILURES");
    return ok ? 0 : 1;
}
