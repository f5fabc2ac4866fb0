#include "momsec/momentum.hpp"

#include <stdexcept>
#include <string>

namespace momsec {

namespace {

std::string idx(std::size_t i) { return std::to_string(i + 1); }

/// Components (a; i < j) of the induced derivative of an antisymmetric
/// chart 2-tensor.
std::vector<LabeledExpr> induced_two_tensor_residuals(const LieAlgebroid& A,
                                                      const Connection& conn,
                                                      const ExprMatrix& t,
                                                      bool contravariant) {
    const std::size_t r = A.rank, n = A.dim();
    MixedTensor phi;
    phi.m_degree = 2;
    phi.m_contravariant = contravariant;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            phi.coefficients[{{}, {i, j}}] = t[i][j];
    const MixedTensor dphi = a_exterior_covariant_derivative(A, conn, phi);
    std::vector<LabeledExpr> residuals;
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                residuals.push_back(
                    {"a=" + idx(a) + " i=" + idx(i) + " j=" + idx(j),
                     dphi.component({a}, {i, j})});
    return residuals;
}

/// rho_a(mu_b) - rho_b(mu_a) - C^c_ab mu_c.
Expr frame_bracket_pairing(const LieAlgebroid& A, const Section& mu,
                           std::size_t a, std::size_t b) {
    Expr acc;
    for (std::size_t i = 0; i < A.dim(); ++i)
        acc = acc + A.rho[a][i] * mu[b].derivative(A.chart.names[i]) -
              A.rho[b][i] * mu[a].derivative(A.chart.names[i]);
    for (std::size_t c = 0; c < A.rank; ++c)
        acc = acc - A.C[a][b][c] * mu[c];
    return acc;
}

}  // namespace

CheckResult check_s1(const LieAlgebroid& A, const Connection& conn,
                     const ExprMatrix& omega, const SamplePlan& plan,
                     double tol) {
    return evaluate_residuals(
        "momentum-s1", "(D_a w)_ij = 0 (induced derivative of the 2-form)",
        A.chart, plan, tol,
        induced_two_tensor_residuals(A, conn, omega, false));
}

CheckResult check_p1(const LieAlgebroid& A, const Connection& conn,
                     const ExprMatrix& pi, const SamplePlan& plan,
                     double tol) {
    return evaluate_residuals(
        "momentum-p1", "(D_a pi)^ij = 0 (induced derivative of the bivector)",
        A.chart, plan, tol, induced_two_tensor_residuals(A, conn, pi, true));
}

CheckResult check_s2(const LieAlgebroid& A, const Connection& conn,
                     const ExprMatrix& omega, const Section& mu,
                     const SamplePlan& plan, double tol) {
    const std::size_t r = A.rank, n = A.dim();
    const ExprMatrix gm = dual_covariant_derivative(A, conn, mu);
    std::vector<LabeledExpr> residuals;
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t i = 0; i < n; ++i) {
            Expr acc = gm[i][a];
            for (std::size_t j = 0; j < n; ++j)
                acc = acc + A.rho[a][j] * omega[j][i];
            residuals.push_back({"a=" + idx(a) + " i=" + idx(i), acc});
        }
    return evaluate_residuals("momentum-s2",
                              "grad_i mu_a + rho_a^j w_ji = 0", A.chart, plan,
                              tol, residuals);
}

CheckResult check_s3(const LieAlgebroid& A, const Connection& conn,
                     const ExprMatrix& omega, const Section& mu,
                     const SamplePlan& plan, double tol) {
    (void)conn;  // the bracket pairing uses only the algebroid data
    const std::size_t r = A.rank, n = A.dim();
    std::vector<LabeledExpr> residuals;
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = a + 1; b < r; ++b) {
            Expr acc = frame_bracket_pairing(A, mu, a, b);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    acc = acc - omega[i][j] * A.rho[a][i] * A.rho[b][j];
            residuals.push_back({"a=" + idx(a) + " b=" + idx(b), acc});
        }
    CheckResult result = evaluate_residuals(
        "momentum-s3",
        "rho_a(mu_b) - rho_b(mu_a) - C^c_ab mu_c - w(rho_a, rho_b) = 0",
        A.chart, plan, tol, residuals);
    if (residuals.empty()) result.note = "vacuous: rank 1";
    return result;
}

CheckResult check_p2(const LieAlgebroid& A, const Connection& conn,
                     const ExprMatrix& pi, const Section& mu,
                     const SamplePlan& plan, double tol) {
    const std::size_t r = A.rank, n = A.dim();
    const ExprMatrix gm = dual_covariant_derivative(A, conn, mu);
    std::vector<LabeledExpr> residuals;
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t i = 0; i < n; ++i) {
            Expr acc = A.rho[a][i];
            for (std::size_t j = 0; j < n; ++j)
                acc = acc - pi[i][j] * gm[j][a];
            residuals.push_back({"a=" + idx(a) + " i=" + idx(i), acc});
        }
    return evaluate_residuals("momentum-p2",
                              "rho_a^i - pi^ij grad_j mu_a = 0", A.chart,
                              plan, tol, residuals);
}

CheckResult check_p3(const LieAlgebroid& A, const Connection& conn,
                     const ExprMatrix& pi, const Section& mu,
                     const SamplePlan& plan, double tol) {
    const std::size_t r = A.rank, n = A.dim();
    const ExprMatrix gm = dual_covariant_derivative(A, conn, mu);
    std::vector<LabeledExpr> residuals;
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = a + 1; b < r; ++b) {
            Expr acc = frame_bracket_pairing(A, mu, a, b);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    acc = acc + pi[i][j] * gm[i][a] * gm[j][b];
            residuals.push_back({"a=" + idx(a) + " b=" + idx(b), acc});
        }
    CheckResult result = evaluate_residuals(
        "momentum-p3",
        "rho_a(mu_b) - rho_b(mu_a) - C^c_ab mu_c "
        "+ pi^ij grad_i mu_a grad_j mu_b = 0",
        A.chart, plan, tol, residuals);
    if (residuals.empty()) result.note = "vacuous: rank 1";
    return result;
}

CheckResult basic_curvature_kernel(const LieAlgebroid& A,
                                   const Connection& conn,
                                   const ExprMatrix& pi, const Section& mu,
                                   const SamplePlan& plan, double tol) {
    const std::size_t r = A.rank, n = A.dim();
    const ExprQuad S = basic_curvature(A, conn);
    std::vector<LabeledExpr> residuals;
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = a + 1; b < r; ++b)
            for (std::size_t i = 0; i < n; ++i) {
                Expr acc;
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t c = 0; c < r; ++c)
                        acc = acc + pi[i][j] * S[a][b][c][j] * mu[c];
                residuals.push_back(
                    {"a=" + idx(a) + " b=" + idx(b) + " i=" + idx(i), acc});
            }
    CheckResult result =
        evaluate_residuals("basic-curvature-kernel",
                           "pi^ij S^c_jab mu_c = 0", A.chart, plan, tol,
                           residuals);
    if (residuals.empty()) result.note = "vacuous: rank 1";
    return result;
}

CheckResult basic_curvature_pairing(const LieAlgebroid& A,
                                    const Connection& conn, const Section& mu,
                                    const SamplePlan& plan, double tol) {
    const std::size_t r = A.rank, n = A.dim();
    const ExprQuad S = basic_curvature(A, conn);
    std::vector<LabeledExpr> residuals;
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = a + 1; b < r; ++b)
            for (std::size_t j = 0; j < n; ++j) {
                Expr acc;
                for (std::size_t c = 0; c < r; ++c)
                    acc = acc + S[a][b][c][j] * mu[c];
                residuals.push_back(
                    {"a=" + idx(a) + " b=" + idx(b) + " j=" + idx(j), acc});
            }
    CheckResult result = evaluate_residuals(
        "basic-curvature-pairing", "S^c_jab mu_c = 0", A.chart, plan, tol,
        residuals, /*advisory=*/true);
    if (residuals.empty()) result.note = "vacuous: rank 1";
    return result;
}

std::vector<CheckResult> identity_chain(const LieAlgebroid& A,
                                        const Connection& conn,
                                        const ExprMatrix& pi,
                                        const Section& mu,
                                        const SamplePlan& plan, double tol) {
    const std::size_t r = A.rank, n = A.dim();
    const ExprMatrix gm = dual_covariant_derivative(A, conn, mu);
    const ExprCube g2 = dual_second_derivative(A, conn, mu);
    const ExprCube T = a_torsion(A, conn);
    const ExprQuad S = basic_curvature(A, conn);
    const auto name = [](std::size_t i) { return std::to_string(i + 1); };

    // Inner expression of the covariant substituted identity at chart index j:
    // pi^kl grad_k grad_j mu_a grad_l mu_b + pi^kl grad_k mu_a grad_l grad_j
    // mu_b + d_j pi^kl grad_k mu_a grad_l mu_b - T^c_ab grad_j mu_c.
    auto covariant_inner = [&](std::size_t j, std::size_t a, std::size_t b) {
        Expr acc;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l)
                acc = acc + pi[k][l] * g2[k][j][a] * gm[l][b] +
                      pi[k][l] * gm[k][a] * g2[l][j][b] +
                      pi[k][l].derivative(A.chart.names[j]) * gm[k][a] *
                          gm[l][b];
        for (std::size_t c = 0; c < r; ++c)
            acc = acc - T[a][b][c] * gm[j][c];
        return acc;
    };

    std::vector<CheckResult> out;

    {  // Raw substituted anchor identity (partial derivatives throughout).
        std::vector<LabeledExpr> residuals;
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = a + 1; b < r; ++b)
                for (std::size_t i = 0; i < n; ++i) {
                    Expr acc;
                    for (std::size_t j = 0; j < n; ++j) {
                        Expr inner;
                        for (std::size_t k = 0; k < n; ++k)
                            for (std::size_t l = 0; l < n; ++l)
                                inner =
                                    inner +
                                    pi[k][l] *
                                        gm[j][a].derivative(
                                            A.chart.names[k]) *
                                        gm[l][b] +
                                    pi[k][l] * gm[k][a] *
                                        gm[j][b].derivative(
                                            A.chart.names[l]) +
                                    pi[k][l].derivative(A.chart.names[j]) *
                                        gm[k][a] * gm[l][b];
                        for (std::size_t c = 0; c < r; ++c)
                            inner = inner + A.C[a][b][c] * gm[j][c];
                        acc = acc + pi[i][j] * inner;
                    }
                    residuals.push_back({"a=" + name(a) + " b=" + name(b) +
                                             " i=" + name(i),
                                         acc});
                }
        out.push_back(evaluate_residuals(
            "anchor-substitution",
            "pi^ij (pi^kl d_k grad_j mu_a grad_l mu_b + pi^kl grad_k mu_a "
            "d_l grad_j mu_b + d_j pi^kl grad_k mu_a grad_l mu_b "
            "+ C^c_ab grad_j mu_c) = 0",
            A.chart, plan, tol, residuals));
    }

    {  // The bracket-pairing identity with the gradient pairing substituted.
        std::vector<LabeledExpr> residuals;
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = a + 1; b < r; ++b) {
                Expr acc;
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        acc = acc +
                              pi[i][j] * gm[j][a] *
                                  mu[b].derivative(A.chart.names[i]) -
                              pi[i][j] * gm[j][b] *
                                  mu[a].derivative(A.chart.names[i]) +
                              pi[i][j] * gm[i][a] * gm[j][b];
                for (std::size_t c = 0; c < r; ++c)
                    acc = acc - A.C[a][b][c] * mu[c];
                residuals.push_back({"a=" + name(a) + " b=" + name(b), acc});
            }
        out.push_back(evaluate_residuals(
            "p3-substituted",
            "pi^ij grad_j mu_a d_i mu_b - pi^ij grad_j mu_b d_i mu_a "
            "+ pi^ij grad_i mu_a grad_j mu_b - C^c_ab mu_c = 0",
            A.chart, plan, tol, residuals));
    }

    {  // Covariant form of the substituted anchor identity.
        std::vector<LabeledExpr> residuals;
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = a + 1; b < r; ++b)
                for (std::size_t i = 0; i < n; ++i) {
                    Expr acc;
                    for (std::size_t j = 0; j < n; ++j)
                        acc = acc + pi[i][j] * covariant_inner(j, a, b);
                    residuals.push_back({"a=" + name(a) + " b=" + name(b) +
                                             " i=" + name(i),
                                         acc});
                }
        out.push_back(evaluate_residuals(
            "anchor-substitution-covariant",
            "pi^ij (pi^kl grad_k grad_j mu_a grad_l mu_b + pi^kl grad_k mu_a "
            "grad_l grad_j mu_b + d_j pi^kl grad_k mu_a grad_l mu_b "
            "- T^c_ab grad_j mu_c) = 0",
            A.chart, plan, tol, residuals));
    }

    {  // Torsion pairing.
        std::vector<LabeledExpr> residuals;
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = a + 1; b < r; ++b) {
                Expr acc;
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t l = 0; l < n; ++l)
                        acc = acc + pi[k][l] * gm[k][a] * gm[l][b];
                for (std::size_t c = 0; c < r; ++c)
                    acc = acc - T[a][b][c] * mu[c];
                residuals.push_back({"a=" + name(a) + " b=" + name(b), acc});
            }
        out.push_back(evaluate_residuals(
            "torsion-pairing",
            "pi^kl grad_k mu_a grad_l mu_b - T^c_ab mu_c = 0", A.chart, plan,
            tol, residuals));
    }

    {  // Derivative of the torsion pairing against the basic curvature.
        std::vector<LabeledExpr> residuals;
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = a + 1; b < r; ++b)
                for (std::size_t j = 0; j < n; ++j) {
                    Expr acc = covariant_inner(j, a, b);
                    for (std::size_t c = 0; c < r; ++c)
                        acc = acc - S[a][b][c][j] * mu[c];
                    residuals.push_back({"a=" + name(a) + " b=" + name(b) +
                                             " j=" + name(j),
                                         acc});
                }
        out.push_back(evaluate_residuals(
            "torsion-pairing-derivative",
            "grad_j (pi^kl grad_k mu_a grad_l mu_b - T^c_ab mu_c) expanded: "
            "covariant inner expression - S^c_jab mu_c = 0",
            A.chart, plan, tol, residuals));
    }

    {  // Sharped version of the previous identity.
        std::vector<LabeledExpr> residuals;
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = a + 1; b < r; ++b)
                for (std::size_t i = 0; i < n; ++i) {
                    Expr acc;
                    for (std::size_t j = 0; j < n; ++j) {
                        Expr inner = covariant_inner(j, a, b);
                        for (std::size_t c = 0; c < r; ++c)
                            inner = inner - S[a][b][c][j] * mu[c];
                        acc = acc + pi[i][j] * inner;
                    }
                    residuals.push_back({"a=" + name(a) + " b=" + name(b) +
                                             " i=" + name(i),
                                         acc});
                }
        out.push_back(evaluate_residuals(
            "torsion-pairing-derivative-sharp",
            "pi^ij (covariant inner expression - S^c_jab mu_c) = 0", A.chart,
            plan, tol, residuals));
    }

    {  // Koszul bracket compatibility of the gradients.
        std::vector<LabeledExpr> residuals;
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = a + 1; b < r; ++b) {
                OneForm ga(n), gb(n);
                for (std::size_t i = 0; i < n; ++i) {
                    ga[i] = gm[i][a];
                    gb[i] = gm[i][b];
                }
                const OneForm kb = koszul_bracket(A.chart, pi, ga, gb);
                for (std::size_t j = 0; j < n; ++j) {
                    Expr acc = kb[j];
                    for (std::size_t c = 0; c < r; ++c)
                        acc = acc + A.C[a][b][c] * gm[j][c];
                    residuals.push_back({"a=" + name(a) + " b=" + name(b) +
                                             " j=" + name(j),
                                         acc});
                }
            }
        out.push_back(evaluate_residuals(
            "koszul-compatibility",
            "[grad mu_a, grad mu_b]_pi + C^c_ab grad mu_c = 0", A.chart, plan,
            tol, residuals));
    }

    for (CheckResult& result : out)
        if (A.rank < 2 && result.note.empty()) result.note = "vacuous: rank 1";
    return out;
}

HamiltonianVerdict presymplectic_hamiltonian_verdict(
    const LieAlgebroid& A, const Connection& conn, const ExprMatrix& omega,
    const Section& mu, const SamplePlan& plan, double tol) {
    HamiltonianVerdict verdict;
    verdict.conditions.push_back(check_s1(A, conn, omega, plan, tol));
    verdict.conditions.push_back(check_s2(A, conn, omega, mu, plan, tol));
    verdict.conditions.push_back(check_s3(A, conn, omega, mu, plan, tol));
    for (const CheckResult& c : verdict.conditions)
        if (!c.advisory && !c.passed) verdict.overall_pass = false;
    return verdict;
}

HamiltonianVerdict poisson_hamiltonian_verdict(const LieAlgebroid& A,
                                               const Connection& conn,
                                               const ExprMatrix& pi,
                                               const Section& mu,
                                               const SamplePlan& plan,
                                               double tol) {
    HamiltonianVerdict verdict;
    verdict.conditions.push_back(check_p1(A, conn, pi, plan, tol));
    verdict.conditions.push_back(check_p2(A, conn, pi, mu, plan, tol));
    verdict.conditions.push_back(check_p3(A, conn, pi, mu, plan, tol));
    verdict.conditions.push_back(
        basic_curvature_kernel(A, conn, pi, mu, plan, tol));
    verdict.conditions.push_back(
        basic_curvature_pairing(A, conn, mu, plan, tol));
    for (const CheckResult& c : verdict.conditions)
        if (!c.advisory && !c.passed) verdict.overall_pass = false;
    return verdict;
}

std::pair<CheckResult, CheckResult> trivial_bundle_reduction(
    const LieAlgebroid& A, const ExprMatrix& omega, const Section& mu,
    const SamplePlan& plan, double tol) {
    const std::size_t r = A.rank, n = A.dim();
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b)
            for (std::size_t c = 0; c < r; ++c)
                if (!A.C[a][b][c].is_constant())
                    throw std::invalid_argument(
                        "trivial_bundle_reduction needs constant structure "
                        "functions");

    std::vector<LabeledExpr> gradient;
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t i = 0; i < n; ++i) {
            Expr acc = mu[a].derivative(A.chart.names[i]);
            for (std::size_t j = 0; j < n; ++j)
                acc = acc + A.rho[a][j] * omega[j][i];
            gradient.push_back({"a=" + idx(a) + " i=" + idx(i), acc});
        }

    std::vector<LabeledExpr> equivariance;
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) {
            Expr acc;
            for (std::size_t i = 0; i < n; ++i)
                acc = acc + A.rho[a][i] * mu[b].derivative(A.chart.names[i]);
            for (std::size_t c = 0; c < r; ++c)
                acc = acc - A.C[a][b][c] * mu[c];
            equivariance.push_back({"a=" + idx(a) + " b=" + idx(b), acc});
        }

    return {evaluate_residuals("reduction-gradient",
                               "d_i mu_a + rho_a^j w_ji = 0", A.chart, plan,
                               tol, gradient),
            evaluate_residuals("reduction-equivariance",
                               "rho_a(mu_b) - C^c_ab mu_c = 0", A.chart, plan,
                               tol, equivariance)};
}

}  // namespace momsec
