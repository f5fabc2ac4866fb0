#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "momsec/chart.hpp"
#include "momsec/expr.hpp"
#include "momsec/residual.hpp"
#include "momsec/tensors.hpp"

namespace momsec {

/// A section u + alpha of TM + T*M over a chart: vector components u^i and
/// covector components alpha_i in the coordinate frame.
struct GeneralizedSection {
    std::vector<Expr> vec;
    std::vector<Expr> form;
};

/// Builds a totally antisymmetric 3-tensor from components on strictly
/// increasing index triples; unspecified triples are zero.
ExprCube three_form_from_increasing(
    std::size_t n,
    const std::vector<std::pair<std::array<std::size_t, 3>, Expr>>& entries);

/// Exterior derivative of an antisymmetric 2-tensor, as a totally
/// antisymmetric 3-tensor: (dB)_ijk = d_i B_jk - d_j B_ik + d_k B_ij.
ExprCube two_form_differential(const Chart& chart, const ExprMatrix& B);

/// Symmetric pairing <u + alpha, v + beta> = beta(u) + alpha(v).
Expr generalized_pairing(const GeneralizedSection& a,
                         const GeneralizedSection& b);

/// Lie bracket of vector fields, [u, v]^i = u^k d_k v^i - v^k d_k u^i.
std::vector<Expr> lie_bracket(const Chart& chart, const std::vector<Expr>& u,
                              const std::vector<Expr>& v);

/// Bracket on sections of TM + T*M twisted by the antisymmetric 3-tensor H:
/// [[u + alpha, v + beta]] = [u, v] + L_u beta - i_v d(alpha) + i_u i_v H.
GeneralizedSection dorfman_bracket(const Chart& chart, const ExprCube& H,
                                   const GeneralizedSection& a,
                                   const GeneralizedSection& b);

/// The derivation f -> (0, df) entering the self-pairing axiom.
GeneralizedSection pairing_differential(const Chart& chart, const Expr& f);

/// Deterministic polynomial of degree <= 2 in the chart coordinates with
/// half-integer coefficients in [-2, 2]; `counter` advances per coefficient
/// so successive calls with the same seed produce independent polynomials.
Expr random_polynomial(const Chart& chart, std::uint64_t seed,
                       std::uint64_t& counter);

/// Generalized section whose 2*dim components are random_polynomial draws.
GeneralizedSection random_generalized_section(const Chart& chart,
                                              std::uint64_t seed,
                                              std::uint64_t& counter);

/// Residual checks of the bracket/pairing/anchor axioms of the twisted
/// structure on TM + T*M, sampled on seeded polynomial section triples:
/// courant-jacobi, courant-anchor, courant-leibniz, courant-self-pairing,
/// courant-invariance, and the advisory h-closed diagnostic. With a
/// non-closed twist exactly courant-jacobi fails.
std::vector<CheckResult> check_courant(const Chart& chart, const ExprCube& H,
                                       const SamplePlan& plan, double tol);

/// A frame of generalized sections spanning a candidate maximally isotropic
/// involutive subbundle.
struct DiracFrame {
    std::vector<GeneralizedSection> sections;
};

/// Graph frame of an antisymmetric 2-tensor: s_i = (d_i, w_i.), the i-th
/// coordinate field paired with its flat.
DiracFrame graph_omega_frame(const Chart& chart, const ExprMatrix& omega);

/// Graph frame of an antisymmetric bivector: s_a = (pi^{a.}, dx^a).
DiracFrame graph_pi_frame(const Chart& chart, const ExprMatrix& pi);

/// Frame-level subbundle checks: dirac-isotropy (symbolic pairing of all
/// frame pairs), dirac-involutivity (per-point least-squares membership of
/// every frame bracket in the frame span), and the advisory dirac-frame-rank
/// column-rank diagnostic.
std::vector<CheckResult> check_dirac(const Chart& chart, const ExprCube& H,
                                     const DiracFrame& frame,
                                     const SamplePlan& plan, double tol);

/// Bracket closure of the bivector graph on seeded polynomial 1-forms:
/// [[L(alpha), L(beta)]] = L([alpha, beta]_pi) with L(alpha) =
/// (alpha_j pi^{j.}, alpha). Holds exactly when pi is Poisson.
CheckResult graph_pi_closure(const Chart& chart, const ExprMatrix& pi,
                             const SamplePlan& plan, double tol);

/// Bracket closure of the 2-form graph on seeded polynomial vector fields:
/// [[u + w(u), v + w(v)]] = [u, v] + w([u, v]). Holds exactly when w is
/// closed.
CheckResult graph_omega_closure(const Chart& chart, const ExprMatrix& omega,
                                const SamplePlan& plan, double tol);

/// Outcome of the forward compatibility check of Dirac frames under a map.
struct DiracMorphismResult {
    CheckResult existence;           // id "dirac-morphism"
    double min_singular_value = 0.0; /// smallest singular value of the
                                     /// stacked frame matrix over all points
    bool unique = false;             /// solutions unique at every point
};

/// For each sample point x and each target frame section (v, beta) at the
/// image of x, least-squares solve for source frame coefficients c such that
/// the source covector part matches the pullback J^T beta and the pushed
/// vector part matches v. Existence requires every residual below tol;
/// uniqueness requires the stacked matrix [source forms; J * source vectors]
/// to have full column rank at every point.
DiracMorphismResult dirac_morphism_check(const SmoothMap& map,
                                         const DiracFrame& source_frame,
                                         const DiracFrame& target_frame,
                                         const SamplePlan& plan, double tol);

}  // namespace momsec
