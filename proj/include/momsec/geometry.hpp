#pragma once

#include <string>

#include "momsec/chart.hpp"
#include "momsec/expr.hpp"
#include "momsec/residual.hpp"
#include "momsec/tensors.hpp"

namespace momsec {

/// Checks closedness of an antisymmetric 2-form: the residuals are the
/// components d_i w_jk + d_j w_ki + d_k w_ij for i < j < k.  On a
/// 2-dimensional chart the check is vacuous and passes.
CheckResult check_closed(const Chart& chart, const ExprMatrix& omega,
                         const SamplePlan& plan, double tolerance);

/// Checks the Poisson condition on an antisymmetric bivector: the residuals
/// are pi^{il} d_l pi^{jk} + cyclic(i,j,k) for i < j < k.  Vacuous and passing
/// on a 2-dimensional chart.
CheckResult check_poisson(const Chart& chart, const ExprMatrix& pi,
                          const SamplePlan& plan, double tolerance);

/// Advisory diagnostic: evaluates pi at every sample point and reports the
/// minimum and maximum numerical rank.  Passes when the rank is constant
/// across the sampled points; the residual is max rank - min rank.
CheckResult rank_diagnostic(const Chart& chart, const ExprMatrix& pi,
                            const SamplePlan& plan);

/// (pi # alpha)^i = pi^{ij} alpha_j.
VectorField sharp(const ExprMatrix& pi, const OneForm& alpha);

/// (omega b v)_j = v^i omega_{ij}.
OneForm flat(const ExprMatrix& omega, const VectorField& v);

/// pi(alpha, beta) = pi^{ij} alpha_i beta_j.
Expr bivector_pairing(const ExprMatrix& pi, const OneForm& alpha,
                      const OneForm& beta);

/// omega(u, v) = omega_{ij} u^i v^j.
Expr form_pairing(const ExprMatrix& omega, const VectorField& u,
                  const VectorField& v);

/// Coordinate differential df as a 1-form.
OneForm differential(const Chart& chart, const Expr& f);

/// Poisson bracket {f, g} = pi(df, dg).
Expr poisson_bracket(const Chart& chart, const ExprMatrix& pi, const Expr& f,
                     const Expr& g);

/// Koszul bracket of 1-forms:
/// ([alpha, beta]_pi)_j =
///   pi^{kl} d_k alpha_j beta_l + pi^{kl} alpha_k d_l beta_j
///   + d_j pi^{kl} alpha_k beta_l.
OneForm koszul_bracket(const Chart& chart, const ExprMatrix& pi,
                       const OneForm& alpha, const OneForm& beta);

}  // namespace momsec
