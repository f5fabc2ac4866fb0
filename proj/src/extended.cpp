#include "momsec/extended.hpp"

#include <utility>

#include "momsec/courant.hpp"
#include "momsec/geometry.hpp"

namespace momsec {

namespace {

std::string idx(std::size_t i) { return std::to_string(i + 1); }

Expr directional(const Chart& chart, const std::vector<Expr>& u,
                 const Expr& f) {
    Expr out;
    for (std::size_t k = 0; k < chart.dim(); ++k)
        out = out + u[k] * f.derivative(chart.names[k]);
    return out;
}

}  // namespace

ExtendedSection am_bracket(const Chart& chart, const ExprMatrix& omega,
                           const ExtendedSection& a,
                           const ExtendedSection& b) {
    ExtendedSection out;
    out.main = lie_bracket(chart, a.main, b.main);
    out.scalar = directional(chart, a.main, b.scalar) -
                 directional(chart, b.main, a.scalar) -
                 form_pairing(omega, a.main, b.main);
    return out;
}

ExtendedSection tstar_r_bracket(const Chart& chart, const ExprMatrix& pi,
                                const ExtendedSection& a,
                                const ExtendedSection& b) {
    ExtendedSection out;
    out.main = koszul_bracket(chart, pi, a.main, b.main);
    out.scalar = bivector_pairing(pi, a.main, b.main) -
                 directional(chart, sharp(pi, a.main), b.scalar) +
                 directional(chart, sharp(pi, b.main), a.scalar);
    return out;
}

LieAlgebroid am_algebroid(const Chart& chart, const ExprMatrix& omega) {
    const std::size_t n = chart.dim();
    LieAlgebroid A{chart, n + 1, zero_matrix(n + 1, n),
                   zero_cube(n + 1, n + 1, n + 1)};
    for (std::size_t i = 0; i < n; ++i) {
        A.rho[i][i] = Expr::constant(1.0);
        for (std::size_t j = 0; j < n; ++j)
            A.C[i][j][n] = Expr() - omega[i][j];
    }
    return A;
}

LieAlgebroid tstar_r_algebroid(const Chart& chart, const ExprMatrix& pi) {
    const std::size_t n = chart.dim();
    LieAlgebroid A{chart, n + 1, zero_matrix(n + 1, n),
                   zero_cube(n + 1, n + 1, n + 1)};
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t i = 0; i < n; ++i) {
            A.rho[a][i] = pi[a][i];
            for (std::size_t j = 0; j < n; ++j)
                A.C[a][i][j] = pi[a][i].derivative(chart.names[j]);
            A.C[a][i][n] = pi[a][i];
        }
    return A;
}

CheckResult bundle_morphism_check(std::string id, std::string formula,
                                  const LieAlgebroid& source,
                                  const LieAlgebroid& target,
                                  const ExprMatrix& Phi,
                                  const SamplePlan& plan, double tol) {
    const std::size_t n = source.dim();
    std::vector<LabeledExpr> residuals;

    for (std::size_t a = 0; a < source.rank; ++a)
        for (std::size_t i = 0; i < n; ++i) {
            Expr r = Expr() - source.rho[a][i];
            for (std::size_t b = 0; b < target.rank; ++b)
                r = r + Phi[b][a] * target.rho[b][i];
            residuals.push_back({"anchor a=" + idx(a) + " i=" + idx(i), r});
        }

    std::vector<Section> columns(source.rank);
    for (std::size_t a = 0; a < source.rank; ++a) {
        columns[a].reserve(target.rank);
        for (std::size_t b = 0; b < target.rank; ++b)
            columns[a].push_back(Phi[b][a]);
    }
    for (std::size_t a = 0; a < source.rank; ++a)
        for (std::size_t b = a + 1; b < source.rank; ++b) {
            const Section image =
                bracket_sections(target, columns[a], columns[b]);
            for (std::size_t c = 0; c < target.rank; ++c) {
                Expr r = Expr() - image[c];
                for (std::size_t cp = 0; cp < source.rank; ++cp)
                    r = r + source.C[a][b][cp] * Phi[c][cp];
                residuals.push_back(
                    {"bracket a=" + idx(a) + " b=" + idx(b) + " c=" + idx(c),
                     r});
            }
        }
    return evaluate_residuals(std::move(id), std::move(formula), source.chart,
                              plan, tol, residuals);
}

CheckResult anchor_morphism_check(const LieAlgebroid& A,
                                  const SamplePlan& plan, double tol) {
    const std::size_t n = A.dim();
    ExprMatrix Phi = zero_matrix(n, A.rank);
    for (std::size_t a = 0; a < A.rank; ++a)
        for (std::size_t i = 0; i < n; ++i) Phi[i][a] = A.rho[a][i];
    return bundle_morphism_check(
        "anchor-morphism",
        "the anchor is a morphism into the tangent algebroid", A,
        tangent_algebroid(A.chart), Phi, plan, tol);
}

CheckResult tm_r_morphism_check(const LieAlgebroid& A, const ExprMatrix& omega,
                                const Section& mu, const SamplePlan& plan,
                                double tol) {
    const std::size_t n = A.dim();
    ExprMatrix Phi = zero_matrix(n + 1, A.rank);
    for (std::size_t a = 0; a < A.rank; ++a) {
        for (std::size_t i = 0; i < n; ++i) Phi[i][a] = A.rho[a][i];
        Phi[n][a] = mu[a];
    }
    return bundle_morphism_check(
        "morphism-tm-r", "e_a -> (rho_a, mu_a) is a morphism into TM + R", A,
        am_algebroid(A.chart, omega), Phi, plan, tol);
}

CheckResult cotangent_morphism_check(const LieAlgebroid& A,
                                     const Connection& conn,
                                     const ExprMatrix& pi, const Section& mu,
                                     const SamplePlan& plan, double tol) {
    const std::size_t n = A.dim();
    const ExprMatrix gm = dual_covariant_derivative(A, conn, mu);
    ExprMatrix Phi = zero_matrix(n, A.rank);
    for (std::size_t a = 0; a < A.rank; ++a)
        for (std::size_t j = 0; j < n; ++j) Phi[j][a] = Expr() - gm[j][a];
    return bundle_morphism_check(
        "morphism-cotangent",
        "e_a -> -grad mu_a is a morphism into the bivector algebroid", A,
        cotangent_algebroid(A.chart, pi), Phi, plan, tol);
}

CheckResult tstar_r_morphism_check(const LieAlgebroid& A,
                                   const Connection& conn,
                                   const ExprMatrix& pi, const Section& mu,
                                   const SamplePlan& plan, double tol) {
    const std::size_t n = A.dim();
    const ExprMatrix gm = dual_covariant_derivative(A, conn, mu);
    ExprMatrix Phi = zero_matrix(n + 1, A.rank);
    for (std::size_t a = 0; a < A.rank; ++a) {
        for (std::size_t j = 0; j < n; ++j) Phi[j][a] = Expr() - gm[j][a];
        Phi[n][a] = mu[a];
    }
    return bundle_morphism_check(
        "morphism-tstar-r",
        "e_a -> (-grad mu_a, mu_a) is a morphism into T*M + R", A,
        tstar_r_algebroid(A.chart, pi), Phi, plan, tol);
}

CheckResult graph_omega_membership(const LieAlgebroid& A,
                                   const Connection& conn,
                                   const ExprMatrix& omega, const Section& mu,
                                   const SamplePlan& plan, double tol) {
    const std::size_t n = A.dim();
    const ExprMatrix gm = dual_covariant_derivative(A, conn, mu);
    std::vector<LabeledExpr> residuals;
    for (std::size_t a = 0; a < A.rank; ++a)
        for (std::size_t i = 0; i < n; ++i) {
            Expr r = gm[i][a];
            for (std::size_t j = 0; j < n; ++j)
                r = r + A.rho[a][j] * omega[j][i];
            residuals.push_back({"a=" + idx(a) + " i=" + idx(i), r});
        }
    return evaluate_residuals(
        "morphism-graph-omega",
        "(rho_a, -grad mu_a) lies in the graph of the 2-form", A.chart, plan,
        tol, residuals);
}

CheckResult graph_pi_membership(const LieAlgebroid& A, const Connection& conn,
                                const ExprMatrix& pi, const Section& mu,
                                const SamplePlan& plan, double tol) {
    const std::size_t n = A.dim();
    const ExprMatrix gm = dual_covariant_derivative(A, conn, mu);
    std::vector<LabeledExpr> residuals;
    for (std::size_t a = 0; a < A.rank; ++a)
        for (std::size_t i = 0; i < n; ++i) {
            Expr r = A.rho[a][i];
            for (std::size_t j = 0; j < n; ++j)
                r = r - pi[i][j] * gm[j][a];
            residuals.push_back({"a=" + idx(a) + " i=" + idx(i), r});
        }
    return evaluate_residuals(
        "morphism-graph-pi",
        "(rho_a, -grad mu_a) lies in the graph of the bivector", A.chart,
        plan, tol, residuals);
}

}  // namespace momsec
