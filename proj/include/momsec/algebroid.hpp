#pragma once

#include <map>
#include <vector>

#include "momsec/chart.hpp"
#include "momsec/residual.hpp"
#include "momsec/tensors.hpp"

namespace momsec {

/// Anchored bracket data over a chart: rank-r bundle with anchor components
/// rho[a][i] (the i-th coefficient of the image of frame section a) and
/// structure functions C[a][b][c] (the c-th coefficient of the bracket of
/// frame sections a and b). C is antisymmetric in (a, b).
struct LieAlgebroid {
    Chart chart;
    std::size_t rank = 0;
    ExprMatrix rho;  // rho[a][i], a < rank, i < chart.dim()
    ExprCube C;      // C[a][b][c]

    std::size_t dim() const { return chart.dim(); }
};

/// A section of the bundle: components over the frame, u[a].
using Section = std::vector<Expr>;

/// An antisymmetric form on the bundle: degree m with coefficients stored on
/// strictly increasing index tuples.
struct AForm {
    int degree = 0;
    std::map<std::vector<std::size_t>, Expr> coefficients;

    /// Coefficient on an arbitrary index tuple: sign of the sorting
    /// permutation times the stored coefficient; zero on repeated indices.
    Expr component(std::vector<std::size_t> indices) const;
};

/// Enforces C[b][a][c] = -C[a][b][c] and zero diagonal from the entries with
/// a < b (other entries of the input are ignored).
ExprCube antisymmetrize_structure(const ExprCube& C);

/// Residuals of the anchor/bracket compatibility, one per (a<b, i):
/// rho_a^j d_j rho_b^i - rho_b^j d_j rho_a^i - C^c_ab rho_c^i.
std::vector<LabeledExpr> anchor_compatibility_residuals(const LieAlgebroid& A);

/// Residuals of the Jacobi identity of the structure functions, one per
/// (a<b<c, d): cyclic sum of C^e_ab C^d_ec - rho_c(C^d_ab).
std::vector<LabeledExpr> jacobi_residuals(const LieAlgebroid& A);

/// Runs both axiom families; returns {anchor-compat, structure-jacobi}.
std::vector<CheckResult> check_axioms(const LieAlgebroid& A,
                                      const SamplePlan& plan, double tol);

/// Bracket of sections: [u,v]^c = u^a rho_a^i d_i v^c - v^a rho_a^i d_i u^c
/// + C^c_ab u^a v^b.
Section bracket_sections(const LieAlgebroid& A, const Section& u,
                         const Section& v);

/// Image vector field of a section: (rho u)^i = u^a rho_a^i.
VectorField section_anchor(const LieAlgebroid& A, const Section& u);

/// Differential on forms:
/// (d eta)(a_0..a_m) = sum_j (-1)^j rho_{a_j}(eta(..hat j..))
///                   + sum_{i<j} (-1)^{i+j} eta([a_i,a_j], ..hat i hat j..).
/// Degree above the rank yields the zero form.
AForm a_differential(const LieAlgebroid& A, const AForm& eta);

/// Constructors.
LieAlgebroid tangent_algebroid(const Chart& chart);
/// Constant-coefficient Lie algebra acting through rho; C must be constant.
LieAlgebroid action_algebroid(const Chart& chart, ExprMatrix rho, ExprCube C);
/// The bracket-of-exact-one-forms algebroid of a bivector pi (pi[i][j]
/// antisymmetric): rho[a][i] = pi[a][i], C[a][b][c] = d_c pi[a][b].
LieAlgebroid cotangent_algebroid(const Chart& chart, const ExprMatrix& pi);

}  // namespace momsec
