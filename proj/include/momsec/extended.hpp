#pragma once

#include <string>
#include <vector>

#include "momsec/algebroid.hpp"
#include "momsec/chart.hpp"
#include "momsec/connection.hpp"
#include "momsec/expr.hpp"
#include "momsec/residual.hpp"
#include "momsec/tensors.hpp"

namespace momsec {

/// A section of TM + R or T*M + R: main components (vector-field or 1-form
/// coefficients) plus a scalar component.
struct ExtendedSection {
    std::vector<Expr> main;
    Expr scalar;
};

/// Bracket on sections of TM + R attached to an antisymmetric 2-form:
/// [(u, f), (v, g)] = ([u, v], u(g) - v(f) - w(u, v)).
ExtendedSection am_bracket(const Chart& chart, const ExprMatrix& omega,
                           const ExtendedSection& a, const ExtendedSection& b);

/// Bracket on sections of T*M + R attached to a bivector:
/// [(alpha, f), (beta, g)] =
///   ([alpha, beta]_pi, -(pi# alpha)(g) + (pi# beta)(f) + pi(alpha, beta)).
ExtendedSection tstar_r_bracket(const Chart& chart, const ExprMatrix& pi,
                                const ExtendedSection& a,
                                const ExtendedSection& b);

/// TM + R as a rank n+1 algebroid over the chart: frame (d_1, .., d_n, 1),
/// anchor the projection, C[i][j][n] = -w_ij for i, j < n. Satisfies the
/// axioms exactly when w is closed.
LieAlgebroid am_algebroid(const Chart& chart, const ExprMatrix& omega);

/// T*M + R as a rank n+1 algebroid: frame (dx^1, .., dx^n, 1),
/// rho[a][i] = pi^{ai}, C[a][b][j] = d_j pi^{ab}, C[a][b][n] = pi^{ab}.
/// Satisfies the axioms exactly when pi is Poisson.
LieAlgebroid tstar_r_algebroid(const Chart& chart, const ExprMatrix& pi);

/// Checks that the bundle map with columns Phi[.][a] (image of source frame
/// section a, over the identity of the shared chart) is an algebroid
/// morphism: residuals are the anchor match sum_b Phi[b][a] rho_B[b][i] -
/// rho_A[a][i] and the bracket match sum_c' C_A^c'_ab Phi[c][c'] -
/// [Phi e_a, Phi e_b]_B^c.
CheckResult bundle_morphism_check(std::string id, std::string formula,
                                  const LieAlgebroid& source,
                                  const LieAlgebroid& target,
                                  const ExprMatrix& Phi,
                                  const SamplePlan& plan, double tol);

/// The anchor as a candidate morphism into the tangent algebroid; passes
/// exactly when the anchor/bracket compatibility axiom holds.
CheckResult anchor_morphism_check(const LieAlgebroid& A,
                                  const SamplePlan& plan, double tol);

/// e_a -> (rho_a, mu_a) into TM + R of the 2-form; the scalar bracket
/// residual reproduces the bracket condition on the momentum section.
CheckResult tm_r_morphism_check(const LieAlgebroid& A, const ExprMatrix& omega,
                                const Section& mu, const SamplePlan& plan,
                                double tol);

/// e_a -> -grad mu_a into the bivector algebroid of pi; the anchor residual
/// reproduces the anchor-gradient condition and the bracket residual the
/// Koszul compatibility of the momentum gradients.
CheckResult cotangent_morphism_check(const LieAlgebroid& A,
                                     const Connection& conn,
                                     const ExprMatrix& pi, const Section& mu,
                                     const SamplePlan& plan, double tol);

/// e_a -> (-grad mu_a, mu_a) into T*M + R of pi.
CheckResult tstar_r_morphism_check(const LieAlgebroid& A,
                                   const Connection& conn,
                                   const ExprMatrix& pi, const Section& mu,
                                   const SamplePlan& plan, double tol);

/// Membership of (rho_a, -grad mu_a) in the graph of the 2-form, per frame
/// section: residuals grad_i mu_a + rho_a^j w_ji.
CheckResult graph_omega_membership(const LieAlgebroid& A,
                                   const Connection& conn,
                                   const ExprMatrix& omega, const Section& mu,
                                   const SamplePlan& plan, double tol);

/// Membership of (rho_a, -grad mu_a) in the graph of the bivector, per frame
/// section: residuals rho_a^i - pi^{ij} grad_j mu_a.
CheckResult graph_pi_membership(const LieAlgebroid& A, const Connection& conn,
                                const ExprMatrix& pi, const Section& mu,
                                const SamplePlan& plan, double tol);

}  // namespace momsec
