#include "doctest.h"

#include "codasim/errors.hpp"
#include "codasim/verify.hpp"

using namespace codasim;

TEST_SUITE("verify") {

TEST_CASE("the case registry is populated") {
    const auto names = verificationCaseNames();
    REQUIRE(names.size() >= 6);
    for (const auto& n : names) CHECK(!n.empty());
}

TEST_CASE("every verification case passes") {
    for (const auto& name : verificationCaseNames()) {
        CAPTURE(name);
        const CaseReport report = runVerificationCase(name);
        if (!report.passed()) MESSAGE(formatReport(report));
        CHECK(report.passed());
    }
}

TEST_CASE("unknown case names are rejected") {
    CHECK_THROWS_AS((void)runVerificationCase("no-such-case"), SimulationError);
}

} // TEST_SUITE
