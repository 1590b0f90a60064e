#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include <omp.h>

#include "psalg/verify.hpp"

using namespace psalg;

TEST_CASE("suite registry") {
    const auto& names = suiteNames();
    for (const char* expected :
         {"so_closure", "collapse", "conservation", "groenewold", "corrections", "cnb_fi",
          "cnb_leibniz", "v_invariance", "traces", "s2_qnb", "qnb_leibniz", "qnb_fi", "const_qnb",
          "odd_qnb", "s3_cnb", "s3_entwined", "dirac", "chiral", "spectra", "all"}) {
        CHECK(std::find(names.begin(), names.end(), expected) != names.end());
    }
    CHECK_THROWS_AS(runSuite("no_such_suite", 2, {}), UnknownSuiteError);
}

TEST_CASE("core suites pass") {
    RandomExprPolicy policy;
    CHECK(runSuite("corrections", 3, policy).passed());
    policy.seed = 7;
    CHECK(runSuite("collapse", 2, policy).passed());
    CHECK(runSuite("groenewold", 2, {}).passed());
    CHECK(runSuite("so_closure", 3, {}).passed());
    CHECK(runSuite("conservation", 2, {}).passed());
    CHECK(runSuite("spectra", 3, {}).passed());
    CHECK(runSuite("traces", 2, {}).passed());
    CHECK(runSuite("odd_qnb", 2, {}).passed());
    CHECK(runSuite("v_invariance", 3, {}).passed());
}

TEST_CASE("groenewold witness order is recorded") {
    SuiteReport report = runSuite("groenewold", 2, {});
    bool sawWitness = false;
    for (const auto& e : report.entries)
        if (e.id.rfind("witness_", 0) == 0) {
            sawWitness = true;
            CHECK(e.residualOrder == "2");
            CHECK(e.residual != "0");
        }
    CHECK(sawWitness);
}

TEST_CASE("reports are deterministic") {
    RandomExprPolicy policy;
    policy.seed = 12345;
    SuiteReport a = runSuite("collapse", 2, policy);
    SuiteReport b = runSuite("collapse", 2, policy);
    CHECK(renderReportText(a) == renderReportText(b));
    CHECK(renderReportJson(a) == renderReportJson(b));

    policy.seed = 54321;
    SuiteReport c = runSuite("collapse", 2, policy);
    // Different seeds change the test functions but not the identity count.
    CHECK(c.entries.size() == a.entries.size());
}

TEST_CASE("reports are identical for any worker count") {
    RandomExprPolicy policy;
    policy.seed = 777;
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    SuiteReport serial = runSuite("collapse", 2, policy);
    omp_set_num_threads(std::max(2, saved));
    SuiteReport parallel = runSuite("collapse", 2, policy);
    omp_set_num_threads(saved);
    CHECK(renderReportText(serial) == renderReportText(parallel));
}

TEST_CASE("report text shape") {
    SuiteReport report = runSuite("spectra", 2, {});
    std::string text = renderReportText(report);
    CHECK(text.find("suite: spectra") != std::string::npos);
    CHECK(text.find("result: PASS") != std::string::npos);
    CHECK(text.find("ms") == std::string::npos);  // timings only with the flag

    std::string withTimes = renderReportText(report, true);
    CHECK(withTimes.find("ms") != std::string::npos);

    std::string json = renderReportJson(report);
    CHECK(json.find("\"schemaVersion\": 1") != std::string::npos);
    CHECK(json.find("\"passed\": true") != std::string::npos);
}
