// Pipeline orchestration: scenario resolution with CLI-style overrides, the
// single-run outcome bundle, dense-scan oracles, report/sweep/verify drivers,
// and their exit codes.

#include <gtest/gtest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "folicheck/runner.hpp"

using namespace folicheck;
namespace fs = std::filesystem;

namespace {

std::string tmp_path(const std::string& name) {
    return (fs::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    ASSERT_TRUE(f.good()) << path;
    f << text;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    EXPECT_TRUE(f.good()) << path;
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

const char* kTorusFileText =
    "[model]\n"
    "kind = torus2\n"
    "[foliation]\n"
    "id = vertical_circles\n"
    "[embedding]\n"
    "domain = circle\n"
    "theta = 3*t\n"
    "phi = 2*t\n";

// theta vanishes to second order at two points, so at eps 0 every genericity
// attempt sees the same degenerate section.
const char* kDegenerateFileText =
    "[model]\n"
    "kind = torus2\n"
    "[foliation]\n"
    "id = vertical_circles\n"
    "[embedding]\n"
    "domain = circle\n"
    "theta = 0.1*sin(2*pi*t)^3\n"
    "phi = t\n";

Embedding doubly_covering_sphere_surface() {
    Embedding emb;
    std::vector<ModelSpace> f;
    f.push_back(make_circle());
    f.push_back(make_sphere2_antipodal());
    emb.target = std::make_shared<ModelSpace>(make_product(std::move(f)));
    emb.domain = ParamDomain::torus();
    emb.param_vars = {"s", "t"};
    emb.components = {parse("s"), parse("cos(pi*t)"), parse("sin(pi*t)*cos(2*pi*s)"),
                      parse("sin(pi*t)*sin(2*pi*s)")};
    validate_embedding(emb);
    return emb;
}

}  // namespace

TEST(Resolve, BuiltinWithOverrides) {
    RunOptions o;
    o.scenario = "torus_pq";
    o.eps = 0.1;
    o.seed = 9;
    o.p = 1;
    o.q = 5;
    Scenario s = resolve_scenario(o);
    EXPECT_DOUBLE_EQ(s.eps, 0.1);
    EXPECT_EQ(s.seed, 9u);
    EXPECT_TRUE(struct_equal(s.emb.components[0].root, parse("5*t").root));
    EXPECT_EQ(s.expect.at("winding"), "5");
}

TEST(Resolve, UnknownScenarioRejected) {
    RunOptions o;
    o.scenario = "definitely_not_a_scenario";
    EXPECT_THROW(resolve_scenario(o), UnknownScenario);
    o.scenario = "./no_such_file.scn";
    EXPECT_THROW(resolve_scenario(o), UnknownScenario);
}

TEST(Resolve, WindingFlagsGatedToTheTorusFamily) {
    RunOptions o;
    o.scenario = "klein_nonTO";
    o.p = 2;
    EXPECT_THROW(resolve_scenario(o), BadParams);
    o.scenario = "torus_pq";
    o.q = 4;  // gcd(2,4) != 1
    EXPECT_THROW(resolve_scenario(o), BadParams);
    o.q = 5;
    EXPECT_NO_THROW(resolve_scenario(o));
}

TEST(Resolve, ScenarioFileByPath) {
    std::string path = tmp_path("folicheck_resolve.scn");
    write_file(path, kTorusFileText);
    RunOptions o;
    o.scenario = path;
    Scenario from_file = resolve_scenario(o);
    EXPECT_TRUE(equivalent_scenarios(from_file, builtin_scenario("torus_pq")));
    o.p = 2;  // winding flags make no sense for file scenarios
    EXPECT_THROW(resolve_scenario(o), BadParams);
    fs::remove(path);
}

TEST(Resolve, GridAndRetryOverridesApplyOnTopOfDefaults) {
    RunOptions o;
    Tolerances base = tolerances_for(o);
    EXPECT_EQ(base.grid_1d, 512u);
    EXPECT_EQ(base.grid_2d, 256u);
    EXPECT_EQ(base.max_tries, 16);
    o.grid = 128;
    o.max_tries = 3;
    Tolerances t = tolerances_for(o);
    EXPECT_EQ(t.grid_1d, 128u);
    EXPECT_EQ(t.grid_2d, 128u);
    EXPECT_EQ(t.max_tries, 3);
}

TEST(Pipeline, TorusCoveringOutcome) {
    RunOutcome r = run_single(builtin_scenario("torus_pq"), Tolerances{});
    EXPECT_TRUE(r.pass);
    EXPECT_TRUE(r.gen.transverse_everywhere);
    EXPECT_TRUE(r.locus_empty);
    ASSERT_TRUE(r.parity.has_value());
    EXPECT_EQ(r.parity->zero_count, 0u);
    EXPECT_FALSE(r.pd.has_value());
    ASSERT_TRUE(r.winding.has_value());
    EXPECT_EQ(r.winding->degree, 3);
    ASSERT_TRUE(r.mod2.has_value());
    EXPECT_EQ(r.mod2->parity, 1);
    ASSERT_TRUE(r.covering.has_value());
    EXPECT_EQ(r.covering->sheets, 3u);
    EXPECT_TRUE(r.covering->matches_degree);
    EXPECT_STREQ(verdict_name(r.deg.verdict), "transverse_covering");
}

TEST(Pipeline, ZeroWindingOutcome) {
    RunOutcome r = run_single(builtin_scenario("torus_zero_winding"), Tolerances{});
    EXPECT_TRUE(r.pass);
    EXPECT_FALSE(r.locus_empty);
    ASSERT_TRUE(r.parity.has_value());
    EXPECT_EQ(r.parity->zero_count, 2u);
    EXPECT_EQ(r.parity->count_mod2, 0);
    ASSERT_TRUE(r.winding.has_value());
    EXPECT_EQ(r.winding->degree, 0);
    EXPECT_EQ(r.mod2->parity, 0);
    EXPECT_FALSE(r.covering.has_value());  // only empty loci get the covering check
    EXPECT_STREQ(verdict_name(r.deg.verdict), "confirmed");
}

TEST(Pipeline, LineFieldSkipsDegreeMachinery) {
    RunOutcome r = run_single(builtin_scenario("klein_nonTO"), Tolerances{});
    EXPECT_TRUE(r.pass);
    EXPECT_FALSE(r.winding.has_value());
    EXPECT_FALSE(r.mod2.has_value());
    EXPECT_FALSE(r.covering.has_value());
    EXPECT_FALSE(r.deg.applicable);
    EXPECT_STREQ(verdict_name(r.deg.verdict), "not_applicable");
    ASSERT_TRUE(r.parity.has_value());
    EXPECT_EQ(r.parity->zero_count, 1u);
    EXPECT_EQ(r.parity->pairing, 1);
    EXPECT_TRUE(r.parity->pass);
}

TEST(Pipeline, ProjectiveProductOutcome) {
    RunOutcome r = run_single(builtin_scenario("rp2_product"), Tolerances{});
    EXPECT_TRUE(r.pass);
    EXPECT_FALSE(r.locus_empty);
    EXPECT_FALSE(r.parity.has_value());
    ASSERT_TRUE(r.pd.has_value());
    ASSERT_EQ(r.pd->rows.size(), 2u);
    EXPECT_EQ(r.pd->rows[0].loop, "loop_s");
    EXPECT_EQ(r.pd->rows[0].crossing_parity, 0);
    EXPECT_EQ(r.pd->rows[1].loop, "loop_t");
    EXPECT_EQ(r.pd->rows[1].crossing_parity, 1);
    EXPECT_FALSE(r.winding.has_value());  // sphere base has no circle winding
    ASSERT_TRUE(r.mod2.has_value());
    EXPECT_EQ(r.mod2->parity, 0);
    EXPECT_STREQ(verdict_name(r.deg.verdict), "confirmed");
}

TEST(Pipeline, DegenerateScenarioSurfacesGenericityFailure) {
    std::string path = tmp_path("folicheck_degenerate.scn");
    write_file(path, kDegenerateFileText);
    RunOptions o;
    o.scenario = path;
    o.eps = 0.0;
    o.max_tries = 2;
    o.grid = 128;
    EXPECT_THROW(run_single(resolve_scenario(o), tolerances_for(o)), GenericityFailed);
    // run_check does not swallow it; the CLI entry point owns the exit mapping
    EXPECT_THROW(run_check(o), GenericityFailed);
    fs::remove(path);
}

TEST(OracleScan, DenseLineCountsMatchPipeline) {
    RunOutcome zw = run_single(builtin_scenario("torus_zero_winding"), Tolerances{});
    EXPECT_EQ(dense_line_sign_changes(zw.gen.section, 0, 0, 20000), zw.gen.locus1().zeros.size());

    RunOutcome kl = run_single(builtin_scenario("klein_nonTO"), Tolerances{});
    EXPECT_EQ(dense_line_sign_changes(kl.gen.section, 0, 0, 20000), 1u);

    RunOutcome rp = run_single(builtin_scenario("rp2_product"), Tolerances{});
    for (std::size_t gi = 0; gi < 2; ++gi) {
        std::size_t flips = dense_line_sign_changes(rp.gen.section, gi, 0.3183, 4096);
        EXPECT_EQ(static_cast<int>(flips % 2), rp.pd->rows[gi].crossing_parity) << gi;
    }
}

TEST(OracleScan, DensePreimagesMatchCertifiedCounts) {
    Scenario pq = builtin_scenario("torus_pq");
    SurfaceMap cover{&pq.emb, nullptr};
    PreimageCount pc = count_preimages_circle(cover, 0, 0.4);
    ASSERT_TRUE(pc.certified);
    EXPECT_EQ(pc.count, 3u);
    EXPECT_EQ(dense_preimage_count_circle(cover, 0, 0.4, 20000), pc.count);

    Scenario zw = builtin_scenario("torus_zero_winding");
    SurfaceMap wave{&zw.emb, nullptr};
    EXPECT_EQ(dense_preimage_count_circle(wave, 0, 0.5, 20000), 0u);
    EXPECT_EQ(dense_preimage_count_circle(wave, 0, 0.02, 20000), 2u);
}

TEST(OracleScan, SpherePreimagesBySublevelComponents) {
    Embedding emb = doubly_covering_sphere_surface();
    SurfaceMap map{&emb, nullptr};
    Vec c{0.3, 0.5, 0.8};
    double n = norm(c);
    for (std::size_t i = 0; i < 3; ++i) c[i] /= n;
    EXPECT_EQ(dense_preimage_count_sphere(map, 1, c, 256), 2u);

    Scenario rp = builtin_scenario("rp2_product");
    SurfaceMap band{&rp.emb, nullptr};  // unperturbed: image is a great circle
    EXPECT_EQ(dense_preimage_count_sphere(band, 1, Vec{0.0, 1.0, 0.0}, 256), 0u);
}

TEST(Reports, CheckWritesByteStableJson) {
    RunOptions o;
    o.scenario = "torus_pq";
    o.out_path = tmp_path("folicheck_check_a.json");
    EXPECT_EQ(run_check(o), kExitPass);
    std::string first = slurp(o.out_path);
    o.out_path = tmp_path("folicheck_check_b.json");
    EXPECT_EQ(run_check(o), kExitPass);
    std::string second = slurp(o.out_path);
    EXPECT_EQ(first, second);
    EXPECT_EQ(first.rfind("{\"attempts\":", 0), 0u);
    EXPECT_EQ(first.substr(first.size() - 2), "}\n");
    EXPECT_NE(first.find("\"pass\":true"), std::string::npos);
    EXPECT_EQ(first.find("wall_time"), std::string::npos);
    fs::remove(tmp_path("folicheck_check_a.json"));
    fs::remove(tmp_path("folicheck_check_b.json"));
}

TEST(Reports, CsvFormatProducesHeaderAndRow) {
    RunOptions o;
    o.scenario = "torus_zero_winding";
    o.format = "csv";
    o.out_path = tmp_path("folicheck_check.csv");
    EXPECT_EQ(run_check(o), kExitPass);
    std::string text = slurp(o.out_path);
    EXPECT_EQ(text.rfind("scenario,seed,eps,status,", 0), 0u);
    EXPECT_NE(text.find("\ntorus_zero_winding,1,0,ok,"), std::string::npos);
    fs::remove(o.out_path);
}

TEST(Reports, UnwritableOutputPathRaisesIoError) {
    RunOptions o;
    o.scenario = "torus_pq";
    o.out_path = "/nonexistent_dir_for_sure/report.json";
    try {
        run_check(o);
        FAIL() << "unwritable path accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind, "io");
    }
}

TEST(Sweeps, SortedRowsAggregateLineAndDeterminism) {
    SweepOptions so;
    so.base.scenario = "torus_zero_winding";
    so.base.out_path = tmp_path("folicheck_sweep_a.csv");
    so.seeds = {3, 1, 2};
    so.eps_list = {0.05};
    EXPECT_EQ(run_sweep(so), kExitPass);
    std::string first = slurp(so.base.out_path);

    std::size_t r1 = first.find("\ntorus_zero_winding,1,");
    std::size_t r2 = first.find("\ntorus_zero_winding,2,");
    std::size_t r3 = first.find("\ntorus_zero_winding,3,");
    ASSERT_NE(r1, std::string::npos);
    ASSERT_NE(r2, std::string::npos);
    ASSERT_NE(r3, std::string::npos);
    EXPECT_LT(r1, r2);
    EXPECT_LT(r2, r3);
    EXPECT_NE(first.find("# aggregate runs=3 ok=3 failed=0 parity_constant=true inconsistent=0 "
                         "all_pass=true"),
              std::string::npos);

    so.base.out_path = tmp_path("folicheck_sweep_b.csv");
    EXPECT_EQ(run_sweep(so), kExitPass);
    EXPECT_EQ(first, slurp(so.base.out_path));
    fs::remove(tmp_path("folicheck_sweep_a.csv"));
    fs::remove(tmp_path("folicheck_sweep_b.csv"));
}

TEST(Sweeps, GenericityFailuresRecordedPerRow) {
    std::string path = tmp_path("folicheck_degenerate_sweep.scn");
    write_file(path, kDegenerateFileText);
    SweepOptions so;
    so.base.scenario = path;
    so.base.out_path = tmp_path("folicheck_sweep_fail.csv");
    so.base.max_tries = 2;
    so.base.grid = 128;
    so.seeds = {1, 2};
    so.eps_list = {0.0};
    EXPECT_EQ(run_sweep(so), kExitVerdictFailure);
    std::string text = slurp(so.base.out_path);
    EXPECT_NE(text.find(",genericity_failed,"), std::string::npos);
    EXPECT_NE(text.find("# aggregate runs=2 ok=0 failed=2"), std::string::npos);
    EXPECT_NE(text.find("all_pass=false"), std::string::npos);
    fs::remove(path);
    fs::remove(so.base.out_path);
}

TEST(Verify, BuiltinExpectationsAllPass) {
    RunOptions o;
    o.out_path = tmp_path("folicheck_verify.txt");
    EXPECT_EQ(run_verify(o), kExitPass);
    std::string text = slurp(o.out_path);
    EXPECT_EQ(text.find("[FAIL]"), std::string::npos);
    EXPECT_NE(text.find("[PASS] torus_pq winding = 3"), std::string::npos);
    EXPECT_NE(text.find("[PASS] rp2_product crossing_parity_loop_t = 1"), std::string::npos);
    EXPECT_NE(text.find(" 0 failures"), std::string::npos);
    fs::remove(o.out_path);
}

TEST(Verify, ExpectationVocabularyCoversBothDomains) {
    RunOutcome torus = run_single(builtin_scenario("torus_pq"), Tolerances{});
    EXPECT_EQ(expectation_actual(torus, "winding"), "3");
    EXPECT_EQ(expectation_actual(torus, "sheets"), "3");
    EXPECT_EQ(expectation_actual(torus, "verdict"), "transverse_covering");
    EXPECT_EQ(expectation_actual(torus, "tangency_count"), "0");
    EXPECT_EQ(expectation_actual(torus, "locus_empty"), "true");
    EXPECT_EQ(expectation_actual(torus, "w1_line_S"), "0");
    EXPECT_EQ(expectation_actual(torus, "integer_degree_defined"), "true");
    EXPECT_EQ(expectation_actual(torus, "crossing_parity_loop_s"), "n/a");
    EXPECT_EQ(expectation_actual(torus, "never_a_key"), "n/a");

    RunOutcome rp = run_single(builtin_scenario("rp2_product"), Tolerances{});
    EXPECT_EQ(expectation_actual(rp, "crossing_parity_loop_t"), "1");
    EXPECT_EQ(expectation_actual(rp, "winding"), "n/a");
    EXPECT_EQ(expectation_actual(rp, "integer_degree_defined"), "false");
    EXPECT_EQ(expectation_actual(rp, "mod2_degree"), "0");
    EXPECT_EQ(expectation_actual(rp, "w1_line_loop_t"), "1");
}

TEST(OracleRun, AgreesOnRepresentativeBuiltins) {
    RunOptions o;
    o.scenario = "torus_pq";
    o.out_path = tmp_path("folicheck_oracle_1d.json");
    EXPECT_EQ(run_oracle(o), kExitPass);
    EXPECT_EQ(slurp(o.out_path).rfind("{\"agree\":true,", 0), 0u);
    fs::remove(o.out_path);

    o.scenario = "rp2_product";
    o.out_path = tmp_path("folicheck_oracle_2d.json");
    EXPECT_EQ(run_oracle(o), kExitPass);
    EXPECT_EQ(slurp(o.out_path).rfind("{\"agree\":true,", 0), 0u);
    fs::remove(o.out_path);
}

TEST(Lists, CatalogSummaryNamesEveryBuiltin) {
    RunOptions o;
    o.out_path = tmp_path("folicheck_list.txt");
    EXPECT_EQ(run_list(o), kExitPass);
    std::string text = slurp(o.out_path);
    for (const std::string& id : builtin_ids()) EXPECT_NE(text.find(id), std::string::npos) << id;
    EXPECT_NE(text.find("model=circle_x_rp2"), std::string::npos);
    fs::remove(o.out_path);
}
