#pragma once

#include <utility>
#include <vector>

#include "momsec/algebroid.hpp"
#include "momsec/connection.hpp"
#include "momsec/geometry.hpp"
#include "momsec/residual.hpp"
#include "momsec/tensors.hpp"

namespace momsec {

/// Per-condition reports plus the combined verdict (advisory reports do not
/// affect the overall flag).
struct HamiltonianVerdict {
    std::vector<CheckResult> conditions;
    bool overall_pass = true;
};

/// momentum-s1: the induced derivative of the 2-form along every frame
/// section vanishes, (D_a w)_ij = 0.
CheckResult check_s1(const LieAlgebroid& A, const Connection& conn,
                     const ExprMatrix& omega, const SamplePlan& plan,
                     double tol);

/// momentum-s2: grad_i mu_a + rho_a^j w_ji = 0.
CheckResult check_s2(const LieAlgebroid& A, const Connection& conn,
                     const ExprMatrix& omega, const Section& mu,
                     const SamplePlan& plan, double tol);

/// momentum-s3: rho_a(mu_b) - rho_b(mu_a) - C^c_ab mu_c
///              - w_ij rho_a^i rho_b^j = 0 for a < b.
CheckResult check_s3(const LieAlgebroid& A, const Connection& conn,
                     const ExprMatrix& omega, const Section& mu,
                     const SamplePlan& plan, double tol);

/// momentum-p1: the induced derivative of the bivector vanishes,
/// (D_a pi)^ij = 0.
CheckResult check_p1(const LieAlgebroid& A, const Connection& conn,
                     const ExprMatrix& pi, const SamplePlan& plan, double tol);

/// momentum-p2: rho_a^i - pi^ij grad_j mu_a = 0.
CheckResult check_p2(const LieAlgebroid& A, const Connection& conn,
                     const ExprMatrix& pi, const Section& mu,
                     const SamplePlan& plan, double tol);

/// momentum-p3: rho_a(mu_b) - rho_b(mu_a) - C^c_ab mu_c
///              + pi^ij grad_i mu_a grad_j mu_b = 0 for a < b.
CheckResult check_p3(const LieAlgebroid& A, const Connection& conn,
                     const ExprMatrix& pi, const Section& mu,
                     const SamplePlan& plan, double tol);

/// basic-curvature-kernel: pi^ij S^c_jab mu_c = 0; holds whenever the axioms
/// and all Poisson momentum conditions hold.
CheckResult basic_curvature_kernel(const LieAlgebroid& A,
                                   const Connection& conn,
                                   const ExprMatrix& pi, const Section& mu,
                                   const SamplePlan& plan, double tol);

/// basic-curvature-pairing (advisory): the unsharped contraction
/// S^c_jab mu_c = 0, reported so the user sees whether the stronger
/// condition holds.
CheckResult basic_curvature_pairing(const LieAlgebroid& A,
                                    const Connection& conn, const Section& mu,
                                    const SamplePlan& plan, double tol);

/// The seven-step identity chain relating the momentum conditions to torsion,
/// basic curvature, and the Koszul bracket.  All reports pass on data
/// satisfying the axioms and P1-P3.
std::vector<CheckResult> identity_chain(const LieAlgebroid& A,
                                        const Connection& conn,
                                        const ExprMatrix& pi,
                                        const Section& mu,
                                        const SamplePlan& plan, double tol);

/// S1 + S2 + S3.
HamiltonianVerdict presymplectic_hamiltonian_verdict(
    const LieAlgebroid& A, const Connection& conn, const ExprMatrix& omega,
    const Section& mu, const SamplePlan& plan, double tol);

/// P1 + P2 + P3 + basic-curvature-kernel (+ the advisory pairing report).
HamiltonianVerdict poisson_hamiltonian_verdict(const LieAlgebroid& A,
                                               const Connection& conn,
                                               const ExprMatrix& pi,
                                               const Section& mu,
                                               const SamplePlan& plan,
                                               double tol);

/// For action algebroids (constant structure functions, trivial connection):
/// the plain gradient condition d_i mu_a + rho_a^j w_ji = 0
/// ("reduction-gradient") and the equivariance condition
/// rho_a(mu_b) - C^c_ab mu_c = 0 over ordered pairs
/// ("reduction-equivariance").  Throws std::invalid_argument when a structure
/// function is not constant.
std::pair<CheckResult, CheckResult> trivial_bundle_reduction(
    const LieAlgebroid& A, const ExprMatrix& omega, const Section& mu,
    const SamplePlan& plan, double tol);

}  // namespace momsec
