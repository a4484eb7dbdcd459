#ifndef DSB_REPORT_HPP
#define DSB_REPORT_HPP

#include <string>

#include <json.hpp>

#include "dsb/scenario.hpp"

namespace dsb {

inline constexpr const char* kToolName = "dsb-workbench";
inline constexpr const char* kToolVersion = "0.1.0";

// Exit code contract (exhaustive; also documented in the README):
//   0  every asserted check passed
//   1  an asserted check failed (pipelines, audits, butler checklist)
//   2  evidence-only outcome (sampled search found nothing; not a proof)
//   3  violation certificates found (an exact disproof; a finding, not an error)
//   64 scenario parse or usage error
//   65 resource-guard refusal
//   66 I/O failure
//   70 internal certification mismatch (a bug in the tool)
enum ExitCode : int {
    exit_pass = 0,
    exit_check_failed = 1,
    exit_evidence_only = 2,
    exit_violations = 3,
    exit_usage = 64,
    exit_guard = 65,
    exit_io = 66,
    exit_internal = 70,
};

struct Report {
    nlohmann::json json;  // deterministic given the scenario (keys sorted, no wall-clock)
    std::string text;
    int exit_code = exit_pass;
    long long elapsed_ms = 0;  // console-only; never written into the report files
};

// Writes <path>.json and <path>.txt; both byte-stable for identical scenarios.
void emit_report(const Report& rep, const std::string& path);

Report run_scenario(const Scenario& sc);

}  // namespace dsb

#endif
