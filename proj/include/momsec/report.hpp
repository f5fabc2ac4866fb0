#pragma once

#include <map>
#include <string>
#include <vector>

#include "momsec/model.hpp"
#include "momsec/residual.hpp"

namespace momsec {

/// Aggregated outcome of one suite run.
struct RunReport {
    std::string suite;                        // requested suite name
    std::vector<CheckResult> checks;          // sorted by (suite, id)
    std::map<std::string, bool> suite_verdicts;  // per owning sub-suite
    bool overall_pass = true;                 // advisory checks do not count
    int exit_code = 0;                        // 0 on pass, 1 on failure
};

/// Computes per-suite verdicts, the overall flag, and the exit code.
/// Advisory checks are reported but never fail a suite.
RunReport summarize(const std::string& suite, std::vector<CheckResult> checks);

/// Human-readable rendering: one line per check, then suite verdicts and the
/// overall verdict.
std::string render_text(const RunReport& report);

/// Machine-readable rendering, schema "report-v1". Identical inputs and
/// options produce byte-identical output except for the timestamp field.
std::string render_json(const RunReport& report, const Options& options,
                        const std::string& input_text);

/// FNV-1a 64-bit digest of a byte string, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

/// The tool version recorded in reports.
extern const char* const kToolVersion;

}  // namespace momsec
