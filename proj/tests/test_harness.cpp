#include <catch2/catch.hpp>

#include "qkzr/verify.hpp"

using namespace qkzr;

TEST_CASE("config serialization round trip", "[harness]") {
    RunConfig cfg;
    cfg.n = 2;
    cfg.q = {0.55, 0.01};
    cfg.kappa = {-1.3, 0.0};
    cfg.lambda = std::vector<cplx>{{0.3, 0.0}, {-0.1, 0.02}, {0.05, 0.0}};
    cfg.seed = 7;
    cfg.samples = 4;
    cfg.tol = 1e-9;
    cfg.suites = {"trig", "fusion"};
    const RunConfig back = config_from_json(config_to_json(cfg));
    CHECK(back.n == cfg.n);
    CHECK(back.q == cfg.q);
    CHECK(back.kappa == cfg.kappa);
    REQUIRE(back.lambda.has_value());
    CHECK((*back.lambda)[2] == (*cfg.lambda)[2]);
    CHECK(back.seed == cfg.seed);
    CHECK(back.samples == cfg.samples);
    CHECK(back.tol == cfg.tol);
    CHECK(back.suites == cfg.suites);
}

TEST_CASE("suite selection filters the checks", "[harness]") {
    RunConfig cfg;
    cfg.n = 1;
    cfg.kappa = {-1.0, 0.0};
    cfg.samples = 2;
    cfg.suites = {"trig"};
    const VerificationReport rep = run_suites(cfg);
    CHECK(!rep.checks.empty());
    for (const auto& c : rep.checks) CHECK(c.suite == "trig");
    CHECK_THROWS_AS([&] {
        RunConfig bad = cfg;
        bad.suites = {"nonsense"};
        run_suites(bad);
    }(), ConfigInvalid);
}

TEST_CASE("runs are deterministic in every residual field", "[harness]") {
    RunConfig cfg;
    cfg.n = 1;
    cfg.kappa = {-1.0, 0.0};
    cfg.samples = 3;
    cfg.suites = {"trig", "fusion"};
    const VerificationReport a = run_suites(cfg);
    const VerificationReport b = run_suites(cfg);
    REQUIRE(a.checks.size() == b.checks.size());
    for (size_t i = 0; i < a.checks.size(); ++i) {
        CHECK(a.checks[i].name == b.checks[i].name);
        CHECK(a.checks[i].residual == b.checks[i].residual);
        CHECK(a.checks[i].pass == b.checks[i].pass);
    }
}

TEST_CASE("a full desk-scale run passes every check", "[harness]") {
    RunConfig cfg;
    cfg.n = 1;
    cfg.kappa = default_kappa(1);
    cfg.samples = 2;
    const VerificationReport rep = run_suites(cfg);
    CHECK(rep.failed == 0);
    CHECK(rep.all_pass());
    // Truncation diagnostics flow into the records that use tracked values.
    bool saw_terms = false;
    for (const auto& c : rep.checks) saw_terms = saw_terms || c.max_terms_used > 0;
    CHECK(saw_terms);
}

TEST_CASE("parameter region is enforced before any check runs", "[harness]") {
    RunConfig cfg;
    cfg.q = {1.5, 0.0};
    CHECK_THROWS_AS(run_suites(cfg), RegionViolation);
}

TEST_CASE("report serialization carries anchors and truncation data", "[harness]") {
    RunConfig cfg;
    cfg.n = 1;
    cfg.kappa = {-1.0, 0.0};
    cfg.samples = 2;
    cfg.suites = {"fusion"};
    const VerificationReport rep = run_suites(cfg);
    const json j = report_to_json(rep);
    REQUIRE(j.contains("checks"));
    REQUIRE(!j["checks"].empty());
    for (const auto& c : j["checks"]) {
        CHECK(c.contains("anchor"));
        CHECK(c.contains("residual"));
        CHECK(c.contains("tolerance"));
        CHECK(c.contains("truncation"));
    }
    CHECK(j["summary"]["total"].get<int>() == static_cast<int>(rep.checks.size()));
    // The comparison record is present and marked report-only.
    bool found = false;
    for (const auto& c : rep.checks)
        if (c.name == "constant-term-comparison") found = c.report_only;
    CHECK(found);
}

TEST_CASE("passing and failing verdicts drive the summary", "[harness]") {
    RunConfig cfg;
    cfg.n = 1;
    cfg.kappa = {-1.0, 0.0};
    cfg.samples = 2;
    cfg.suites = {"trig"};
    const VerificationReport rep = run_suites(cfg);
    CHECK(rep.failed == 0);
    CHECK(rep.passed == static_cast<int>(rep.checks.size()));
    CHECK(rep.all_pass());
}
