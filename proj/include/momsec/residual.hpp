#pragma once

#include <span>
#include <string>
#include <vector>

#include "momsec/chart.hpp"
#include "momsec/expr.hpp"

namespace momsec {

/// One symbolic residual component together with a label identifying which
/// tensor slot it came from (e.g. "a=1 b=2 i=1").
struct LabeledExpr {
    std::string label;
    Expr expr;
};

/// Outcome of sampling a family of residual expressions over a chart.
struct CheckResult {
    std::string id;
    std::string suite;
    std::string formula;
    double max_residual = 0.0;
    std::vector<double> worst_point;
    std::string worst_field;
    double tolerance = 0.0;
    int points = 0;
    bool passed = true;
    bool advisory = false;
    std::string note;
};

/// Evaluates every residual at every plan point and reports the maximum
/// absolute value with its witness. Evaluation domain errors mark the check
/// failed (infinite residual) with an explanatory note rather than throwing.
CheckResult evaluate_residuals(std::string id, std::string formula,
                               const Chart& chart, const SamplePlan& plan,
                               double tolerance,
                               std::span<const LabeledExpr> residuals,
                               bool advisory = false);

/// Merges results of split plans covering the same check: residual maxima
/// aggregate by max, point counts add.
CheckResult merge_results(const CheckResult& a, const CheckResult& b);

}  // namespace momsec
