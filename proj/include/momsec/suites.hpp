#pragma once

#include <string>
#include <vector>

#include "momsec/model.hpp"
#include "momsec/residual.hpp"

namespace momsec {

/// Static description of one check id, used by the explain command.
struct CheckInfo {
    std::string id;
    std::string suite;        // suite whose run emits the check
    std::string formula;      // the sampled residual, in coordinates
    std::string description;  // one-line prose summary
    bool advisory = false;    // reported but never fails a suite
};

/// Every check id a report can contain, grouped by suite. Short aliases
/// (s1..s3, p1..p3) resolve to their momentum-* entries via find_check.
const std::vector<CheckInfo>& check_registry();

/// Looks a check up by id or alias; returns nullptr when unknown.
const CheckInfo* find_check(const std::string& name);

/// The selectable suite names, in canonical order ("all" last).
const std::vector<std::string>& suite_names();

/// True when name selects a known suite.
bool is_suite(const std::string& name);

/// Runs one suite against a loaded problem. Each result carries the name of
/// the sub-suite that owns it, and results are sorted by (suite, id).
/// Throws MissingInputError when the document lacks a block the suite needs;
/// the "all" suite never throws and instead skips inapplicable parts.
std::vector<CheckResult> run_suite(const Problem& problem,
                                   const std::string& suite);

}  // namespace momsec
