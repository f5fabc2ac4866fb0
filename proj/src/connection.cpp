#include "momsec/connection.hpp"

#include <functional>

namespace momsec {

namespace {

/// Strictly increasing index tuples of the given length over {0..limit-1}.
std::vector<std::vector<std::size_t>> increasing_tuples(std::size_t length,
                                                        std::size_t limit) {
    std::vector<std::vector<std::size_t>> out;
    if (length > limit) return out;
    std::vector<std::size_t> tuple(length);
    for (std::size_t i = 0; i < length; ++i) tuple[i] = i;
    while (true) {
        out.push_back(tuple);
        if (length == 0) break;
        std::size_t k = length;
        while (k > 0 && tuple[k - 1] == limit - (length - (k - 1))) --k;
        if (k == 0) break;
        ++tuple[k - 1];
        for (std::size_t i = k; i < length; ++i) tuple[i] = tuple[i - 1] + 1;
    }
    return out;
}

}  // namespace

Connection trivial_connection(std::size_t rank, std::size_t dim) {
    return Connection{zero_cube(rank, rank, dim)};
}

ExprMatrix dual_covariant_derivative(const LieAlgebroid& A,
                                     const Connection& conn,
                                     const Section& mu) {
    const std::size_t r = A.rank, n = A.dim();
    ExprMatrix out = zero_matrix(n, r);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < r; ++a) {
            Expr acc = mu[a].derivative(A.chart.names[i]);
            for (std::size_t b = 0; b < r; ++b)
                acc = acc - conn.omega[a][b][i] * mu[b];
            out[i][a] = acc;
        }
    return out;
}

ExprCube dual_second_derivative(const LieAlgebroid& A, const Connection& conn,
                                const Section& mu) {
    const std::size_t r = A.rank, n = A.dim();
    const ExprMatrix gm = dual_covariant_derivative(A, conn, mu);
    ExprCube out = zero_cube(n, n, r);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t a = 0; a < r; ++a) {
                Expr acc = gm[j][a].derivative(A.chart.names[k]);
                for (std::size_t b = 0; b < r; ++b)
                    acc = acc - conn.omega[a][b][k] * gm[j][b];
                out[k][j][a] = acc;
            }
    return out;
}

ExprCube anchor_covariant_derivative(const LieAlgebroid& A,
                                     const Connection& conn) {
    const std::size_t r = A.rank, n = A.dim();
    ExprCube out = zero_cube(r, n, n);
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) {
                Expr acc = A.rho[a][i].derivative(A.chart.names[j]);
                for (std::size_t b = 0; b < r; ++b)
                    acc = acc - conn.omega[a][b][j] * A.rho[b][i];
                out[a][j][i] = acc;
            }
    return out;
}

VectorField induced_vector_derivative(const LieAlgebroid& A,
                                      const Connection& conn, std::size_t a,
                                      const VectorField& v) {
    const std::size_t n = A.dim();
    const ExprCube D = anchor_covariant_derivative(A, conn);
    VectorField out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Expr acc;
        for (std::size_t j = 0; j < n; ++j)
            acc = acc + A.rho[a][j] * v[i].derivative(A.chart.names[j]) -
                  v[j] * D[a][j][i];
        out[i] = acc;
    }
    return out;
}

VectorField induced_vector_derivative(const LieAlgebroid& A,
                                      const Connection& conn, const Section& e,
                                      const VectorField& v) {
    const std::size_t n = A.dim();
    VectorField out(n);
    for (std::size_t a = 0; a < A.rank; ++a) {
        const VectorField frame = induced_vector_derivative(A, conn, a, v);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = out[i] + e[a] * frame[i];
    }
    return out;
}

OneForm induced_one_form_derivative(const LieAlgebroid& A,
                                    const Connection& conn, std::size_t a,
                                    const OneForm& alpha) {
    const std::size_t n = A.dim();
    const ExprCube D = anchor_covariant_derivative(A, conn);
    OneForm out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Expr acc;
        for (std::size_t j = 0; j < n; ++j)
            acc = acc + A.rho[a][j] * alpha[i].derivative(A.chart.names[j]) +
                  D[a][i][j] * alpha[j];
        out[i] = acc;
    }
    return out;
}

OneForm induced_one_form_derivative(const LieAlgebroid& A,
                                    const Connection& conn, const Section& e,
                                    const OneForm& alpha) {
    const std::size_t n = A.dim();
    OneForm out(n);
    for (std::size_t a = 0; a < A.rank; ++a) {
        const OneForm frame = induced_one_form_derivative(A, conn, a, alpha);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = out[i] + e[a] * frame[i];
    }
    return out;
}

Expr MixedTensor::component(std::vector<std::size_t> a_indices,
                            std::vector<std::size_t> m_indices) const {
    const int a_sign = sort_indices(a_indices);
    if (a_sign == 0) return Expr();
    const int m_sign = sort_indices(m_indices);
    if (m_sign == 0) return Expr();
    auto it = coefficients.find({a_indices, m_indices});
    if (it == coefficients.end()) return Expr();
    return a_sign * m_sign == 1 ? it->second : -it->second;
}

MixedTensor a_exterior_covariant_derivative(const LieAlgebroid& A,
                                            const Connection& conn,
                                            const MixedTensor& phi) {
    const std::size_t r = A.rank, n = A.dim();
    const ExprCube D = anchor_covariant_derivative(A, conn);

    MixedTensor out;
    out.a_degree = phi.a_degree + 1;
    out.m_degree = phi.m_degree;
    out.m_contravariant = phi.m_contravariant;
    if (static_cast<std::size_t>(out.a_degree) > r) return out;

    // Induced derivative along frame index a of the chart part at a strictly
    // increasing chart tuple, for a fixed frame tuple of phi.
    auto derive = [&](std::size_t a, const std::vector<std::size_t>& frame,
                      const std::vector<std::size_t>& chart_tuple) {
        Expr acc;
        const Expr base = phi.component(frame, chart_tuple);
        for (std::size_t j = 0; j < n; ++j)
            acc = acc + A.rho[a][j] * base.derivative(A.chart.names[j]);
        for (std::size_t s = 0; s < chart_tuple.size(); ++s) {
            std::vector<std::size_t> swapped = chart_tuple;
            for (std::size_t m = 0; m < n; ++m) {
                swapped[s] = m;
                const Expr value = phi.component(frame, swapped);
                if (phi.m_contravariant)
                    acc = acc - value * D[a][m][chart_tuple[s]];
                else
                    acc = acc + D[a][chart_tuple[s]][m] * value;
            }
        }
        return acc;
    };

    for (const auto& atuple :
         increasing_tuples(static_cast<std::size_t>(out.a_degree), r))
        for (const auto& mtuple : increasing_tuples(
                 static_cast<std::size_t>(out.m_degree), n)) {
            Expr acc;
            for (std::size_t j = 0; j < atuple.size(); ++j) {
                std::vector<std::size_t> rest;
                for (std::size_t k = 0; k < atuple.size(); ++k)
                    if (k != j) rest.push_back(atuple[k]);
                const Expr term = derive(atuple[j], rest, mtuple);
                acc = (j % 2 == 0) ? acc + term : acc - term;
            }
            for (std::size_t u = 0; u < atuple.size(); ++u)
                for (std::size_t v = u + 1; v < atuple.size(); ++v) {
                    std::vector<std::size_t> rest;
                    for (std::size_t k = 0; k < atuple.size(); ++k)
                        if (k != u && k != v) rest.push_back(atuple[k]);
                    for (std::size_t c = 0; c < r; ++c) {
                        if (A.C[atuple[u]][atuple[v]][c].is_zero()) continue;
                        std::vector<std::size_t> inserted;
                        inserted.push_back(c);
                        inserted.insert(inserted.end(), rest.begin(),
                                        rest.end());
                        const Expr term = A.C[atuple[u]][atuple[v]][c] *
                                          phi.component(inserted, mtuple);
                        acc = ((u + v) % 2 == 0) ? acc + term : acc - term;
                    }
                }
            out.coefficients[{atuple, mtuple}] = acc;
        }
    return out;
}

ExprCube a_torsion(const LieAlgebroid& A, const Connection& conn) {
    const std::size_t r = A.rank, n = A.dim();
    ExprCube out = zero_cube(r, r, r);
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b)
            for (std::size_t c = 0; c < r; ++c) {
                Expr acc = -A.C[a][b][c];
                for (std::size_t i = 0; i < n; ++i)
                    acc = acc + A.rho[a][i] * conn.omega[b][c][i] -
                          A.rho[b][i] * conn.omega[a][c][i];
                out[a][b][c] = acc;
            }
    return out;
}

ExprQuad curvature(const Chart& chart, const Connection& conn) {
    const std::size_t r = conn.rank(), n = chart.dim();
    ExprQuad out = zero_quad(r, r, n, n);
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t c = 0; c < r; ++c)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    Expr acc = conn.omega[a][c][j].derivative(chart.names[i]) -
                               conn.omega[a][c][i].derivative(chart.names[j]);
                    for (std::size_t d = 0; d < r; ++d)
                        acc = acc + conn.omega[a][d][j] * conn.omega[d][c][i] -
                              conn.omega[a][d][i] * conn.omega[d][c][j];
                    out[a][c][i][j] = acc;
                }
    return out;
}

ExprQuad covariant_torsion_derivative(const LieAlgebroid& A,
                                      const Connection& conn) {
    const std::size_t r = A.rank, n = A.dim();
    const ExprCube T = a_torsion(A, conn);
    ExprQuad out = zero_quad(r, r, r, n);
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b)
            for (std::size_t c = 0; c < r; ++c)
                for (std::size_t i = 0; i < n; ++i) {
                    Expr acc = T[a][b][c].derivative(A.chart.names[i]);
                    for (std::size_t d = 0; d < r; ++d)
                        acc = acc + conn.omega[d][c][i] * T[a][b][d] -
                              conn.omega[a][d][i] * T[d][b][c] -
                              conn.omega[b][d][i] * T[a][d][c];
                    out[a][b][c][i] = acc;
                }
    return out;
}

ExprQuad basic_curvature(const LieAlgebroid& A, const Connection& conn) {
    const std::size_t r = A.rank, n = A.dim();
    const auto& w = conn.omega;
    ExprQuad out = zero_quad(r, r, r, n);
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b)
            for (std::size_t c = 0; c < r; ++c)
                for (std::size_t i = 0; i < n; ++i) {
                    Expr acc = -A.C[a][b][c].derivative(A.chart.names[i]);
                    for (std::size_t d = 0; d < r; ++d)
                        acc = acc - w[d][c][i] * A.C[a][b][d] +
                              w[a][d][i] * A.C[d][b][c] +
                              w[b][d][i] * A.C[a][d][c];
                    for (std::size_t j = 0; j < n; ++j)
                        acc = acc +
                              A.rho[a][j] *
                                  w[b][c][i].derivative(A.chart.names[j]) -
                              A.rho[b][j] *
                                  w[a][c][i].derivative(A.chart.names[j]) +
                              A.rho[a][j].derivative(A.chart.names[i]) *
                                  w[b][c][j] -
                              A.rho[b][j].derivative(A.chart.names[i]) *
                                  w[a][c][j];
                    for (std::size_t d = 0; d < r; ++d)
                        for (std::size_t j = 0; j < n; ++j)
                            acc = acc -
                                  w[a][d][i] * A.rho[d][j] * w[b][c][j] +
                                  w[b][d][i] * A.rho[d][j] * w[a][c][j];
                    out[a][b][c][i] = acc;
                }
    return out;
}

ExprQuad basic_curvature_reference(const LieAlgebroid& A,
                                   const Connection& conn) {
    const std::size_t r = A.rank, n = A.dim();
    const ExprQuad gT = covariant_torsion_derivative(A, conn);
    const ExprQuad R = curvature(A.chart, conn);
    ExprQuad out = zero_quad(r, r, r, n);
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b)
            for (std::size_t c = 0; c < r; ++c)
                for (std::size_t i = 0; i < n; ++i) {
                    Expr acc = gT[a][b][c][i];
                    for (std::size_t j = 0; j < n; ++j)
                        acc = acc + A.rho[b][j] * R[a][c][i][j] -
                              A.rho[a][j] * R[b][c][i][j];
                    out[a][b][c][i] = acc;
                }
    return out;
}

}  // namespace momsec
