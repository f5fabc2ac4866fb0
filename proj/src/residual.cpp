#include "momsec/residual.hpp"

#include <cmath>
#include <limits>

namespace momsec {

CheckResult evaluate_residuals(std::string id, std::string formula,
                               const Chart& chart, const SamplePlan& plan,
                               double tolerance,
                               std::span<const LabeledExpr> residuals,
                               bool advisory) {
    CheckResult result;
    result.id = std::move(id);
    result.formula = std::move(formula);
    result.tolerance = tolerance;
    result.points = plan.count;
    result.advisory = advisory;
    result.worst_point.assign(chart.dim(), 0.0);

    bool first = true;
    for (int j = 0; j < plan.count; ++j) {
        const std::vector<double> point = sample_point(chart, plan, j);
        Env env;
        env.reserve(chart.dim());
        for (std::size_t i = 0; i < chart.dim(); ++i)
            env[chart.names[i]] = point[i];
        for (const LabeledExpr& r : residuals) {
            double value;
            try {
                value = std::abs(r.expr.eval(env));
            } catch (const EvalError& e) {
                result.max_residual = std::numeric_limits<double>::infinity();
                result.worst_point = point;
                result.worst_field = r.label;
                result.passed = false;
                result.note = std::string("evaluation error: ") + e.what();
                return result;
            }
            if (first || value > result.max_residual) {
                result.max_residual = value;
                result.worst_point = point;
                result.worst_field = r.label;
                first = false;
            }
        }
    }
    result.passed = result.max_residual <= tolerance;
    return result;
}

CheckResult merge_results(const CheckResult& a, const CheckResult& b) {
    CheckResult out = a.max_residual >= b.max_residual ? a : b;
    out.points = a.points + b.points;
    out.passed = a.passed && b.passed;
    if (out.note.empty()) out.note = a.note.empty() ? b.note : a.note;
    return out;
}

}  // namespace momsec
