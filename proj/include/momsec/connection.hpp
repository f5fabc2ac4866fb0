#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "momsec/algebroid.hpp"
#include "momsec/tensors.hpp"

namespace momsec {

/// Connection coefficients on the algebroid frame: grad_i e_a = w[a][b][i] e_b.
struct Connection {
    ExprCube omega;

    std::size_t rank() const { return omega.size(); }
};

/// The zero-coefficient connection.
Connection trivial_connection(std::size_t rank, std::size_t dim);

/// Dual covariant derivative of a covector section:
/// out[i][a] = grad_i mu_a = d_i mu_a - w[a][b][i] mu_b.
ExprMatrix dual_covariant_derivative(const LieAlgebroid& A,
                                     const Connection& conn,
                                     const Section& mu);

/// Iterated dual derivative: out[k][j][a] = grad_k grad_j mu_a, where the
/// chart index j is not corrected (no connection on the chart indices).
ExprCube dual_second_derivative(const LieAlgebroid& A, const Connection& conn,
                                const Section& mu);

/// Covariant derivative of the anchor: out[a][j][i] = grad_j rho_a^i
/// = d_j rho_a^i - w[a][b][j] rho_b^i.  This is the correction tensor for the
/// induced derivative on chart indices.
ExprCube anchor_covariant_derivative(const LieAlgebroid& A,
                                     const Connection& conn);

/// Induced derivative along frame section a of a vector field:
/// out^i = rho_a^j d_j v^i - v^j grad_j rho_a^i.
VectorField induced_vector_derivative(const LieAlgebroid& A,
                                      const Connection& conn, std::size_t a,
                                      const VectorField& v);

/// Induced derivative along a general section (function-linear in e).
VectorField induced_vector_derivative(const LieAlgebroid& A,
                                      const Connection& conn, const Section& e,
                                      const VectorField& v);

/// Induced derivative along frame section a of a 1-form:
/// out_i = rho_a^j d_j alpha_i + grad_i rho_a^j alpha_j.
OneForm induced_one_form_derivative(const LieAlgebroid& A,
                                    const Connection& conn, std::size_t a,
                                    const OneForm& alpha);

OneForm induced_one_form_derivative(const LieAlgebroid& A,
                                    const Connection& conn, const Section& e,
                                    const OneForm& alpha);

/// An antisymmetric frame-index form with values in antisymmetric chart
/// tensors (forms when m_contravariant is false, multivectors when true).
/// Keys hold strictly increasing index tuples; component() resolves general
/// tuples with permutation signs, returning zero on repeated indices.
struct MixedTensor {
    int a_degree = 0;
    int m_degree = 0;
    bool m_contravariant = false;
    std::map<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>,
             Expr>
        coefficients;

    Expr component(std::vector<std::size_t> a_indices,
                   std::vector<std::size_t> m_indices) const;
};

/// Exterior covariant derivative raising the frame degree by one:
/// (D phi)(e_0..e_m) = sum_j (-1)^j D_{e_j} phi(..no j..)
///                     + sum_{i<j} (-1)^{i+j} phi([e_i,e_j], ..no i,j..),
/// where D_{e_j} acts on the chart part through the induced derivative.
MixedTensor a_exterior_covariant_derivative(const LieAlgebroid& A,
                                            const Connection& conn,
                                            const MixedTensor& phi);

/// Torsion: out[a][b][c] = T^c_{ab}
/// = -C^c_{ab} + rho_a^i w[b][c][i] - rho_b^i w[a][c][i].
ExprCube a_torsion(const LieAlgebroid& A, const Connection& conn);

/// Frame curvature: out[a][c][i][j] = coefficient of e_c in [grad_i, grad_j] e_a
/// = d_i w^c_{aj} - d_j w^c_{ai} + w^d_{aj} w^c_{di} - w^d_{ai} w^c_{dj}.
ExprQuad curvature(const Chart& chart, const Connection& conn);

/// out[a][b][c][i] = grad_i T^c_{ab}
/// = d_i T^c_{ab} + w^c_{di} T^d_{ab} - w^d_{ai} T^c_{db} - w^d_{bi} T^c_{ad}.
ExprQuad covariant_torsion_derivative(const LieAlgebroid& A,
                                      const Connection& conn);

/// Basic curvature, expanded local formula (primary implementation):
/// out[a][b][c][i] = S^c_{iab}.  Antisymmetric in (a, b).
ExprQuad basic_curvature(const LieAlgebroid& A, const Connection& conn);

/// Basic curvature assembled from torsion and curvature instead:
/// grad_i T^c_{ab} + rho_b^j R[a][c][i][j] - rho_a^j R[b][c][i][j].
/// Algebraically identical to basic_curvature; kept as a cross-check path.
ExprQuad basic_curvature_reference(const LieAlgebroid& A,
                                   const Connection& conn);

}  // namespace momsec
