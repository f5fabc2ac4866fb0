#include "momsec/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cstddef>
#include <vector>

namespace momsec {

namespace {

std::string idx(std::size_t i) { return std::to_string(i + 1); }

}  // namespace

CheckResult check_closed(const Chart& chart, const ExprMatrix& omega,
                         const SamplePlan& plan, double tolerance) {
    const std::size_t n = chart.dim();
    std::vector<LabeledExpr> residuals;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                const Expr r = omega[j][k].derivative(chart.names[i]) +
                               omega[k][i].derivative(chart.names[j]) +
                               omega[i][j].derivative(chart.names[k]);
                residuals.push_back(
                    {"i=" + idx(i) + " j=" + idx(j) + " k=" + idx(k), r});
            }
    CheckResult result = evaluate_residuals(
        "omega-closed", "d_i w_jk + d_j w_ki + d_k w_ij = 0", chart, plan,
        tolerance, residuals);
    if (residuals.empty())
        result.note = "vacuous: no 3-form components in dimension " +
                      std::to_string(n);
    return result;
}

CheckResult check_poisson(const Chart& chart, const ExprMatrix& pi,
                          const SamplePlan& plan, double tolerance) {
    const std::size_t n = chart.dim();
    std::vector<LabeledExpr> residuals;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                Expr r;
                for (std::size_t l = 0; l < n; ++l)
                    r = r + pi[i][l] * pi[j][k].derivative(chart.names[l]) +
                        pi[j][l] * pi[k][i].derivative(chart.names[l]) +
                        pi[k][l] * pi[i][j].derivative(chart.names[l]);
                residuals.push_back(
                    {"i=" + idx(i) + " j=" + idx(j) + " k=" + idx(k), r});
            }
    CheckResult result = evaluate_residuals(
        "pi-jacobi", "pi^{il} d_l pi^{jk} + cyclic(i,j,k) = 0", chart, plan,
        tolerance, residuals);
    if (residuals.empty())
        result.note = "vacuous: no trivector components in dimension " +
                      std::to_string(n);
    return result;
}

CheckResult rank_diagnostic(const Chart& chart, const ExprMatrix& pi,
                            const SamplePlan& plan) {
    const std::size_t n = chart.dim();
    CheckResult result;
    result.id = "pi-rank";
    result.formula = "rank of pi^{ij} over sample points";
    result.tolerance = 0.5;
    result.points = plan.count;
    result.advisory = true;
    result.worst_point.assign(n, 0.0);

    int min_rank = -1;
    int max_rank = -1;
    for (int j = 0; j < plan.count; ++j) {
        const Env env = sample_env(chart, plan, j);
        Eigen::MatrixXd m(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) m(r, c) = pi[r][c].eval(env);
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        const double sigma_max = svd.singularValues().size() > 0
                                     ? svd.singularValues()(0)
                                     : 0.0;
        const double threshold = 1e-9 * std::max(1.0, sigma_max);
        int rank = 0;
        for (Eigen::Index s = 0; s < svd.singularValues().size(); ++s)
            if (svd.singularValues()(s) > threshold) ++rank;
        if (min_rank < 0 || rank < min_rank) {
            min_rank = rank;
            result.worst_point = sample_point(chart, plan, j);
        }
        max_rank = std::max(max_rank, rank);
    }
    result.max_residual = static_cast<double>(max_rank - min_rank);
    result.passed = result.max_residual <= result.tolerance;
    result.note = "rank min=" + std::to_string(min_rank) +
                  " max=" + std::to_string(max_rank) + " over " +
                  std::to_string(plan.count) + " points";
    return result;
}

VectorField sharp(const ExprMatrix& pi, const OneForm& alpha) {
    const std::size_t n = pi.size();
    VectorField out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Expr acc;
        for (std::size_t j = 0; j < n; ++j) acc = acc + pi[i][j] * alpha[j];
        out[i] = acc;
    }
    return out;
}

OneForm flat(const ExprMatrix& omega, const VectorField& v) {
    const std::size_t n = omega.size();
    OneForm out(n);
    for (std::size_t j = 0; j < n; ++j) {
        Expr acc;
        for (std::size_t i = 0; i < n; ++i) acc = acc + v[i] * omega[i][j];
        out[j] = acc;
    }
    return out;
}

Expr bivector_pairing(const ExprMatrix& pi, const OneForm& alpha,
                      const OneForm& beta) {
    Expr acc;
    for (std::size_t i = 0; i < pi.size(); ++i)
        for (std::size_t j = 0; j < pi.size(); ++j)
            acc = acc + pi[i][j] * alpha[i] * beta[j];
    return acc;
}

Expr form_pairing(const ExprMatrix& omega, const VectorField& u,
                  const VectorField& v) {
    Expr acc;
    for (std::size_t i = 0; i < omega.size(); ++i)
        for (std::size_t j = 0; j < omega.size(); ++j)
            acc = acc + omega[i][j] * u[i] * v[j];
    return acc;
}

OneForm differential(const Chart& chart, const Expr& f) {
    OneForm out(chart.dim());
    for (std::size_t i = 0; i < chart.dim(); ++i)
        out[i] = f.derivative(chart.names[i]);
    return out;
}

Expr poisson_bracket(const Chart& chart, const ExprMatrix& pi, const Expr& f,
                     const Expr& g) {
    return bivector_pairing(pi, differential(chart, f),
                            differential(chart, g));
}

OneForm koszul_bracket(const Chart& chart, const ExprMatrix& pi,
                       const OneForm& alpha, const OneForm& beta) {
    const std::size_t n = chart.dim();
    OneForm out(n);
    for (std::size_t j = 0; j < n; ++j) {
        Expr acc;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l)
                acc = acc +
                      pi[k][l] * alpha[j].derivative(chart.names[k]) * beta[l] +
                      pi[k][l] * alpha[k] * beta[j].derivative(chart.names[l]) +
                      pi[k][l].derivative(chart.names[j]) * alpha[k] * beta[l];
        out[j] = acc;
    }
    return out;
}

}  // namespace momsec
