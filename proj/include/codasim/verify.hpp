#ifndef CODASIM_VERIFY_HPP
#define CODASIM_VERIFY_HPP

#include <string>
#include <vector>

// Bundled verification cases: small buildings with independently computed
// reference solutions (closed-form resistance networks, brute-force strip
// integration, nested bisection).  Each case builds its model in code, runs
// it, and reports measured-vs-limit checks.  The CLI exposes them under
// `cases`; the test suite runs them all.

namespace codasim {

struct CheckResult {
    std::string name;
    double measured = 0;
    double limit = 0; // the check passes when measured <= limit
    bool passed = false;
    std::string note; // what the numbers mean
};

struct CaseReport {
    std::string caseName;
    std::string summary;
    std::vector<CheckResult> checks;
    double elapsedSeconds = 0;

    bool passed() const {
        for (const CheckResult& c : checks)
            if (!c.passed) return false;
        return !checks.empty();
    }
};

const std::vector<std::string>& verificationCaseNames();

// Throws SimulationError for unknown names; individual checks never throw,
// they fail.
CaseReport runVerificationCase(const std::string& name);

std::string formatReport(const CaseReport& report);

} // namespace codasim

#endif
