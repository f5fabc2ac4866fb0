#include "momsec/algebroid.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace momsec {

namespace {

std::string idx(std::size_t i) { return std::to_string(i + 1); }

}  // namespace

ExprMatrix zero_matrix(std::size_t rows, std::size_t cols) {
    return ExprMatrix(rows, std::vector<Expr>(cols));
}

ExprCube zero_cube(std::size_t a, std::size_t b, std::size_t c) {
    return ExprCube(a, zero_matrix(b, c));
}

ExprQuad zero_quad(std::size_t a, std::size_t b, std::size_t c,
                   std::size_t d) {
    return ExprQuad(a, zero_cube(b, c, d));
}

ExprMatrix antisymmetric_from_upper(
    std::size_t n,
    const std::vector<std::pair<std::pair<std::size_t, std::size_t>, Expr>>&
        upper) {
    ExprMatrix m = zero_matrix(n, n);
    for (const auto& [ij, value] : upper) {
        const auto [i, j] = ij;
        if (i >= j || j >= n)
            throw std::invalid_argument(
                "antisymmetric_from_upper: index not strictly upper");
        m[i][j] = value;
        m[j][i] = -value;
    }
    return m;
}

int sort_indices(std::vector<std::size_t>& indices) {
    // Insertion sort with a parity count; repeated indices give sign 0.
    int sign = 1;
    for (std::size_t i = 1; i < indices.size(); ++i)
        for (std::size_t j = i; j > 0 && indices[j - 1] >= indices[j]; --j) {
            if (indices[j - 1] == indices[j]) return 0;
            std::swap(indices[j - 1], indices[j]);
            sign = -sign;
        }
    return sign;
}

Expr AForm::component(std::vector<std::size_t> indices) const {
    const int sign = sort_indices(indices);
    if (sign == 0) return Expr();
    auto it = coefficients.find(indices);
    if (it == coefficients.end()) return Expr();
    return sign == 1 ? it->second : -it->second;
}

ExprCube antisymmetrize_structure(const ExprCube& C) {
    const std::size_t r = C.size();
    ExprCube out = zero_cube(r, r, r);
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = a + 1; b < r; ++b)
            for (std::size_t c = 0; c < r; ++c) {
                out[a][b][c] = C[a][b][c];
                out[b][a][c] = -C[a][b][c];
            }
    return out;
}

std::vector<LabeledExpr> anchor_compatibility_residuals(const LieAlgebroid& A) {
    const std::size_t r = A.rank, n = A.dim();
    std::vector<LabeledExpr> out;
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = a + 1; b < r; ++b)
            for (std::size_t i = 0; i < n; ++i) {
                Expr residual;
                for (std::size_t j = 0; j < n; ++j)
                    residual = residual +
                               A.rho[a][j] *
                                   A.rho[b][i].derivative(A.chart.names[j]) -
                               A.rho[b][j] *
                                   A.rho[a][i].derivative(A.chart.names[j]);
                for (std::size_t c = 0; c < r; ++c)
                    residual = residual - A.C[a][b][c] * A.rho[c][i];
                out.push_back({"a=" + idx(a) + " b=" + idx(b) + " i=" + idx(i),
                               residual});
            }
    return out;
}

std::vector<LabeledExpr> jacobi_residuals(const LieAlgebroid& A) {
    const std::size_t r = A.rank, n = A.dim();
    // One cyclic contribution: C^e_ab C^d_ec - rho_c(C^d_ab).
    auto term = [&](std::size_t a, std::size_t b, std::size_t c,
                    std::size_t d) {
        Expr t;
        for (std::size_t e = 0; e < r; ++e)
            t = t + A.C[a][b][e] * A.C[e][c][d];
        for (std::size_t i = 0; i < n; ++i)
            t = t - A.rho[c][i] * A.C[a][b][d].derivative(A.chart.names[i]);
        return t;
    };
    std::vector<LabeledExpr> out;
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = a + 1; b < r; ++b)
            for (std::size_t c = b + 1; c < r; ++c)
                for (std::size_t d = 0; d < r; ++d)
                    out.push_back({"a=" + idx(a) + " b=" + idx(b) +
                                       " c=" + idx(c) + " d=" + idx(d),
                                   term(a, b, c, d) + term(b, c, a, d) +
                                       term(c, a, b, d)});
    return out;
}

std::vector<CheckResult> check_axioms(const LieAlgebroid& A,
                                      const SamplePlan& plan, double tol) {
    const auto anchor = anchor_compatibility_residuals(A);
    const auto jacobi = jacobi_residuals(A);
    std::vector<CheckResult> out;
    out.push_back(evaluate_residuals(
        "anchor-compat",
        "rho_a^j d_j rho_b^i - rho_b^j d_j rho_a^i - C^c_ab rho_c^i",
        A.chart, plan, tol, anchor));
    out.push_back(evaluate_residuals(
        "structure-jacobi",
        "cyclic sum over (a,b,c) of C^e_ab C^d_ec - rho_c(C^d_ab)", A.chart,
        plan, tol, jacobi));
    return out;
}

Section bracket_sections(const LieAlgebroid& A, const Section& u,
                         const Section& v) {
    const std::size_t r = A.rank, n = A.dim();
    if (u.size() != r || v.size() != r)
        throw std::invalid_argument("bracket_sections: component count");
    Section out(r);
    for (std::size_t c = 0; c < r; ++c) {
        Expr acc;
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t i = 0; i < n; ++i)
                acc = acc +
                      u[a] * A.rho[a][i] * v[c].derivative(A.chart.names[i]) -
                      v[a] * A.rho[a][i] * u[c].derivative(A.chart.names[i]);
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < r; ++b)
                acc = acc + A.C[a][b][c] * u[a] * v[b];
        out[c] = acc;
    }
    return out;
}

VectorField section_anchor(const LieAlgebroid& A, const Section& u) {
    const std::size_t n = A.dim();
    VectorField out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Expr acc;
        for (std::size_t a = 0; a < A.rank; ++a)
            acc = acc + u[a] * A.rho[a][i];
        out[i] = acc;
    }
    return out;
}

AForm a_differential(const LieAlgebroid& A, const AForm& eta) {
    const std::size_t r = A.rank, n = A.dim();
    AForm out;
    out.degree = eta.degree + 1;
    if (static_cast<std::size_t>(out.degree) > r) return out;  // zero form

    // Iterate over strictly increasing tuples of length degree+1.
    std::vector<std::size_t> tuple(out.degree);
    for (int k = 0; k < out.degree; ++k) tuple[k] = k;
    const auto advance = [&]() -> bool {
        int k = out.degree - 1;
        while (k >= 0 && tuple[k] == r - (out.degree - k)) --k;
        if (k < 0) return false;
        ++tuple[k];
        for (int j = k + 1; j < out.degree; ++j) tuple[j] = tuple[j - 1] + 1;
        return true;
    };

    do {
        Expr acc;
        // Anchor terms.
        for (int j = 0; j < out.degree; ++j) {
            std::vector<std::size_t> rest;
            for (int k = 0; k < out.degree; ++k)
                if (k != j) rest.push_back(tuple[k]);
            const Expr coeff = eta.component(rest);
            Expr derivative_term;
            for (std::size_t i = 0; i < n; ++i)
                derivative_term =
                    derivative_term +
                    A.rho[tuple[j]][i] * coeff.derivative(A.chart.names[i]);
            acc = acc + (j % 2 == 0 ? derivative_term : -derivative_term);
        }
        // Bracket insertion terms.
        for (int i = 0; i < out.degree; ++i)
            for (int j = i + 1; j < out.degree; ++j) {
                std::vector<std::size_t> rest;
                for (int k = 0; k < out.degree; ++k)
                    if (k != i && k != j) rest.push_back(tuple[k]);
                Expr inserted;
                for (std::size_t c = 0; c < r; ++c) {
                    std::vector<std::size_t> args{c};
                    args.insert(args.end(), rest.begin(), rest.end());
                    inserted =
                        inserted + A.C[tuple[i]][tuple[j]][c] * eta.component(args);
                }
                acc = acc + ((i + j) % 2 == 0 ? inserted : -inserted);
            }
        out.coefficients[tuple] = acc;
    } while (advance());
    return out;
}

LieAlgebroid tangent_algebroid(const Chart& chart) {
    const std::size_t n = chart.dim();
    LieAlgebroid A{chart, n, zero_matrix(n, n), zero_cube(n, n, n)};
    for (std::size_t i = 0; i < n; ++i) A.rho[i][i] = Expr::constant(1.0);
    return A;
}

LieAlgebroid action_algebroid(const Chart& chart, ExprMatrix rho, ExprCube C) {
    for (const auto& plane : C)
        for (const auto& row : plane)
            for (const Expr& entry : row)
                if (!entry.is_constant())
                    throw std::invalid_argument(
                        "action_algebroid: structure functions must be constant");
    LieAlgebroid A{chart, rho.size(), std::move(rho),
                   antisymmetrize_structure(C)};
    return A;
}

LieAlgebroid cotangent_algebroid(const Chart& chart, const ExprMatrix& pi) {
    const std::size_t n = chart.dim();
    LieAlgebroid A{chart, n, zero_matrix(n, n), zero_cube(n, n, n)};
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t i = 0; i < n; ++i) A.rho[a][i] = pi[a][i];
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                A.C[a][b][c] = pi[a][b].derivative(chart.names[c]);
    return A;
}

}  // namespace momsec
