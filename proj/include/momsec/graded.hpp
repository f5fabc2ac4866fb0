#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "momsec/algebroid.hpp"
#include "momsec/chart.hpp"
#include "momsec/connection.hpp"
#include "momsec/expr.hpp"
#include "momsec/residual.hpp"
#include "momsec/tensors.hpp"

namespace momsec {

/// A graded fiber coordinate over a chart. Coordinates of odd degree
/// anticommute; even ones commute.
struct GradedCoordinate {
    std::string name;
    int degree = 0;
};

/// A chart extended by graded fiber coordinates, with the constant pairing
/// table of the canonical bracket on generators. Degree-0 coordinates live in
/// the base chart and appear only inside coefficients.
struct GradedSpace {
    static constexpr std::size_t no_pairing = static_cast<std::size_t>(-1);

    Chart base;
    std::vector<GradedCoordinate> fibers;

    /// pair_sign[i][j] is the constant value of the bracket of fibers i, j.
    std::vector<std::vector<double>> pair_sign;

    /// For fibers conjugate to a base coordinate: the base index, or npos.
    std::vector<std::size_t> base_pairing;

    /// Sign of the pairing with the base: bracket(fiber, f) =
    /// deriv_sign * df/dx_{base_pairing}.
    std::vector<double> deriv_sign;

    bool odd(std::size_t fiber) const { return fibers[fiber].degree % 2 != 0; }

    /// Index of a fiber coordinate by name; throws std::invalid_argument.
    std::size_t fiber_index(const std::string& name) const;
};

/// A polynomial in the graded fiber coordinates with coefficients in the
/// base coordinates: monomials are sorted factor lists of fiber indices
/// (repeats allowed for even fibers only).
struct GradedPolynomial {
    std::map<std::vector<std::size_t>, Expr> terms;

    bool empty() const { return terms.empty(); }
};

/// Sorts a factor list into canonical order, returning the Koszul sign
/// (odd-odd transpositions count -1) or 0 when an odd factor repeats.
int canonicalize_factors(const GradedSpace& space,
                         std::vector<std::size_t>& factors);

/// Parity (0 or 1) of a factor list.
int factor_parity(const GradedSpace& space,
                  const std::vector<std::size_t>& factors);

/// Parity of a polynomial; requires all monomials to share it (throws
/// std::invalid_argument on mixed parity; an empty polynomial is even).
int polynomial_parity(const GradedSpace& space, const GradedPolynomial& p);

GradedPolynomial gp_scalar(Expr coefficient);
GradedPolynomial gp_coordinate(const GradedSpace& space, std::size_t fiber);
GradedPolynomial gp_monomial(const GradedSpace& space, Expr coefficient,
                             std::vector<std::size_t> factors);
GradedPolynomial gp_add(const GradedPolynomial& a, const GradedPolynomial& b);
GradedPolynomial gp_subtract(const GradedPolynomial& a,
                             const GradedPolynomial& b);
GradedPolynomial gp_multiply(const GradedSpace& space,
                             const GradedPolynomial& a,
                             const GradedPolynomial& b);

/// The canonical bracket determined by the pairing table, extended to
/// polynomials by the graded Leibniz rules
///   {F, GH} = {F, G} H + (-1)^{|F||G|} G {F, H},
///   {FG, H} = F {G, H} + (-1)^{|G||H|} {F, H} G.
GradedPolynomial gp_bracket(const GradedSpace& space,
                            const GradedPolynomial& a,
                            const GradedPolynomial& b);

/// An odd derivation: one polynomial component per base coordinate and per
/// fiber coordinate, acting by left derivatives.
struct GradedDerivation {
    std::vector<GradedPolynomial> base_components;
    std::vector<GradedPolynomial> fiber_components;
};

/// Applies an odd derivation to a polynomial.
GradedPolynomial apply_derivation(const GradedSpace& space,
                                  const GradedDerivation& Q,
                                  const GradedPolynomial& p);

/// The graded phase space carrying the bivector generator: base coordinates
/// x^i with conjugates xi_i (degree 2), odd pairs (eta^i, y_i) and (s, t).
GradedSpace m_side_space(const Chart& base);

/// The graded phase space of a rank-r bundle: conjugates xi_i, odd pairs
/// (q^a, p_a) and (s, t).
GradedSpace n_side_space(const Chart& base, std::size_t rank);

/// Shifted-bundle function space (coordinates q^a only, no pairings).
GradedSpace shifted_bundle_space(const Chart& base, std::size_t rank);

/// Shifted dual-extension function space (coordinates y_i and t).
GradedSpace shifted_dual_space(const Chart& base);

/// Degree-3 generator of a bivector:
/// pi^{ij} xi_i y_j - (1/2) d_i pi^{jk} y_j y_k eta^i
/// - (1/2) pi^{jk} y_j y_k s.
GradedPolynomial theta_m(const GradedSpace& space, const ExprMatrix& pi);

/// Degree-3 generator of an anchored bracket:
/// rho^i_a xi_i q^a + (1/2) C^c_ab q^a q^b p_c.
GradedPolynomial theta_n(const GradedSpace& space, const LieAlgebroid& A);

/// Derived brackets: {{U, Theta}, V} on the bivector side and
/// -{{F, Theta}, G} on the bundle side.
GradedPolynomial m_derived_bracket(const GradedSpace& space,
                                   const GradedPolynomial& theta,
                                   const GradedPolynomial& u,
                                   const GradedPolynomial& v);
GradedPolynomial n_derived_bracket(const GradedSpace& space,
                                   const GradedPolynomial& theta,
                                   const GradedPolynomial& f,
                                   const GradedPolynomial& g);

/// Homological field of the shifted bundle:
/// Q = rho^i_a q^a d_{x^i} - (1/2) C^c_ab q^a q^b d_{q^c}; squares to zero
/// exactly when the algebroid axioms hold.
GradedDerivation shifted_bundle_field(const GradedSpace& space,
                                      const LieAlgebroid& A);

/// Homological field of the shifted dual extension:
/// Q = pi^{ij} y_j d_{x^i} + (1/2) d_k pi^{ij} y_i y_j d_{y_k}
///   + (1/2) pi^{ij} y_i y_j d_t; squares to zero exactly when pi is Poisson.
GradedDerivation shifted_dual_field(const GradedSpace& space,
                                    const ExprMatrix& pi);

/// Substitutes p_a -> -grad_i mu_a eta^i + mu_a s into a polynomial of the
/// bundle-side space whose monomials contain only p factors; the result
/// lives on the bivector-side space. Throws std::invalid_argument on other
/// fiber factors.
GradedPolynomial momentum_substitution(const GradedSpace& n_space,
                                       const GradedSpace& m_space,
                                       const LieAlgebroid& A,
                                       const Connection& conn,
                                       const Section& mu,
                                       const GradedPolynomial& p);

/// id "master-equation-m": all coefficients of {Theta_M, Theta_M} vanish.
CheckResult master_equation_m(const Chart& chart, const ExprMatrix& pi,
                              const SamplePlan& plan, double tol);

/// id "master-equation-n": all coefficients of {Theta_N, Theta_N} vanish.
CheckResult master_equation_n(const LieAlgebroid& A, const SamplePlan& plan,
                              double tol);

/// id "homological-a1": Q^2 vanishes on every generator.
CheckResult homological_a1_check(const LieAlgebroid& A, const SamplePlan& plan,
                                 double tol);

/// id "homological-tstar-r": Q^2 vanishes on every generator.
CheckResult homological_tstar_r_check(const Chart& chart, const ExprMatrix& pi,
                                      const SamplePlan& plan, double tol);

/// id "derived-bracket-reproduction-m": on seeded polynomial pairs
/// (alpha_i eta^i + f s), the derived bracket reproduces the T*M + R
/// bracket coefficientwise.
CheckResult derived_reproduction_m(const Chart& chart, const ExprMatrix& pi,
                                   const SamplePlan& plan, double tol);

/// id "derived-bracket-reproduction-n": on seeded polynomial pairs
/// (a^c p_c + f s), the derived bracket reproduces the section bracket with
/// the anchor-action scalar part.
CheckResult derived_reproduction_n(const LieAlgebroid& A,
                                   const SamplePlan& plan, double tol);

/// id "graded-poisson-map": momentum substitution intertwines the two
/// derived brackets on the family of x-monomials (degree <= 2) times
/// p-monomials (degree <= 2).
CheckResult graded_poisson_map_check(const LieAlgebroid& A,
                                     const Connection& conn,
                                     const ExprMatrix& pi, const Section& mu,
                                     const SamplePlan& plan, double tol);

}  // namespace momsec
