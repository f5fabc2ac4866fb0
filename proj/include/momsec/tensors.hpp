#pragma once

#include <vector>

#include "momsec/expr.hpp"

namespace momsec {

/// Componentwise tensor aliases. Indices are 0-based throughout; the
/// documentation of each producing function states the index roles.
using VectorField = std::vector<Expr>;              // v[i]
using OneForm = std::vector<Expr>;                  // alpha[i]
using ExprMatrix = std::vector<std::vector<Expr>>;  // t[i][j]
using ExprCube = std::vector<ExprMatrix>;           // t[i][j][k]
using ExprQuad = std::vector<ExprCube>;             // t[i][j][k][l]

ExprMatrix zero_matrix(std::size_t rows, std::size_t cols);
ExprCube zero_cube(std::size_t a, std::size_t b, std::size_t c);
ExprQuad zero_quad(std::size_t a, std::size_t b, std::size_t c, std::size_t d);

/// Insertion-sorts an index tuple in place, returning the permutation sign
/// (+1 or -1), or 0 when an index repeats.
int sort_indices(std::vector<std::size_t>& indices);

/// Builds an antisymmetric matrix from its strict upper triangle,
/// upper[{i,j}] for i < j (missing entries are zero).
ExprMatrix antisymmetric_from_upper(
    std::size_t n,
    const std::vector<std::pair<std::pair<std::size_t, std::size_t>, Expr>>&
        upper);

}  // namespace momsec
