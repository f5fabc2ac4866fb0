#include "momsec/courant.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "momsec/geometry.hpp"

namespace momsec {

namespace {

std::string idx(std::size_t i) { return std::to_string(i + 1); }

GeneralizedSection minus(const GeneralizedSection& a,
                         const GeneralizedSection& b) {
    GeneralizedSection out;
    out.vec.reserve(a.vec.size());
    out.form.reserve(a.form.size());
    for (std::size_t i = 0; i < a.vec.size(); ++i)
        out.vec.push_back(a.vec[i] - b.vec[i]);
    for (std::size_t i = 0; i < a.form.size(); ++i)
        out.form.push_back(a.form[i] - b.form[i]);
    return out;
}

GeneralizedSection scale(const Expr& f, const GeneralizedSection& a) {
    GeneralizedSection out;
    out.vec.reserve(a.vec.size());
    out.form.reserve(a.form.size());
    for (const Expr& c : a.vec) out.vec.push_back(f * c);
    for (const Expr& c : a.form) out.form.push_back(f * c);
    return out;
}

void push_section_residuals(std::vector<LabeledExpr>& residuals,
                            const std::string& prefix,
                            const GeneralizedSection& s) {
    for (std::size_t i = 0; i < s.vec.size(); ++i)
        residuals.push_back({prefix + " vec i=" + idx(i), s.vec[i]});
    for (std::size_t i = 0; i < s.form.size(); ++i)
        residuals.push_back({prefix + " form i=" + idx(i), s.form[i]});
}

Expr directional(const Chart& chart, const std::vector<Expr>& u,
                 const Expr& f) {
    Expr out;
    for (std::size_t k = 0; k < chart.dim(); ++k)
        out = out + u[k] * f.derivative(chart.names[k]);
    return out;
}

}  // namespace

ExprCube three_form_from_increasing(
    std::size_t n,
    const std::vector<std::pair<std::array<std::size_t, 3>, Expr>>& entries) {
    ExprCube H = zero_cube(n, n, n);
    for (const auto& [t, value] : entries) {
        const auto [i, j, k] = t;
        if (!(i < j && j < k) || k >= n)
            throw std::invalid_argument(
                "three_form_from_increasing: indices must be strictly "
                "increasing and in range");
        H[i][j][k] = value;
        H[j][k][i] = value;
        H[k][i][j] = value;
        H[j][i][k] = Expr::constant(0.0) - value;
        H[i][k][j] = Expr::constant(0.0) - value;
        H[k][j][i] = Expr::constant(0.0) - value;
    }
    return H;
}

ExprCube two_form_differential(const Chart& chart, const ExprMatrix& B) {
    const std::size_t n = chart.dim();
    ExprCube H = zero_cube(n, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                H[i][j][k] = B[j][k].derivative(chart.names[i]) -
                             B[i][k].derivative(chart.names[j]) +
                             B[i][j].derivative(chart.names[k]);
    return H;
}

Expr generalized_pairing(const GeneralizedSection& a,
                         const GeneralizedSection& b) {
    Expr out;
    for (std::size_t i = 0; i < a.vec.size(); ++i)
        out = out + a.vec[i] * b.form[i] + b.vec[i] * a.form[i];
    return out;
}

std::vector<Expr> lie_bracket(const Chart& chart, const std::vector<Expr>& u,
                              const std::vector<Expr>& v) {
    const std::size_t n = chart.dim();
    std::vector<Expr> out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            out[i] = out[i] + u[k] * v[i].derivative(chart.names[k]) -
                     v[k] * u[i].derivative(chart.names[k]);
    return out;
}

GeneralizedSection dorfman_bracket(const Chart& chart, const ExprCube& H,
                                   const GeneralizedSection& a,
                                   const GeneralizedSection& b) {
    const std::size_t n = chart.dim();
    GeneralizedSection out;
    out.vec = lie_bracket(chart, a.vec, b.vec);
    out.form.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        Expr s;
        for (std::size_t k = 0; k < n; ++k) {
            // (L_u beta)_j = u^k d_k beta_j + d_j u^k beta_k
            s = s + a.vec[k] * b.form[j].derivative(chart.names[k]) +
                a.vec[k].derivative(chart.names[j]) * b.form[k];
            // (i_v d alpha)_j = v^k (d_k alpha_j - d_j alpha_k)
            s = s - b.vec[k] * (a.form[j].derivative(chart.names[k]) -
                                a.form[k].derivative(chart.names[j]));
        }
        if (!H.empty())
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k) {
                    if (H[i][k][j].is_zero()) continue;
                    // (i_u i_v H)_j = v^i u^k H_ikj
                    s = s + b.vec[i] * a.vec[k] * H[i][k][j];
                }
        out.form[j] = s;
    }
    return out;
}

GeneralizedSection pairing_differential(const Chart& chart, const Expr& f) {
    GeneralizedSection out;
    out.vec.assign(chart.dim(), Expr());
    out.form.reserve(chart.dim());
    for (const std::string& name : chart.names)
        out.form.push_back(f.derivative(name));
    return out;
}

Expr random_polynomial(const Chart& chart, std::uint64_t seed,
                       std::uint64_t& counter) {
    const auto coefficient = [&]() {
        ++counter;
        const std::uint64_t w =
            splitmix64(seed + counter * 0x9E3779B97F4A7C15ULL);
        return 0.5 * (static_cast<double>(w % 9) - 4.0);
    };
    Expr p = Expr::constant(coefficient());
    const std::size_t n = chart.dim();
    for (std::size_t i = 0; i < n; ++i) {
        p = p + Expr::constant(coefficient()) * Expr::variable(chart.names[i]);
        for (std::size_t j = i; j < n; ++j)
            p = p + Expr::constant(coefficient()) *
                        Expr::variable(chart.names[i]) *
                        Expr::variable(chart.names[j]);
    }
    return p;
}

GeneralizedSection random_generalized_section(const Chart& chart,
                                              std::uint64_t seed,
                                              std::uint64_t& counter) {
    GeneralizedSection out;
    out.vec.reserve(chart.dim());
    out.form.reserve(chart.dim());
    for (std::size_t i = 0; i < chart.dim(); ++i)
        out.vec.push_back(random_polynomial(chart, seed, counter));
    for (std::size_t i = 0; i < chart.dim(); ++i)
        out.form.push_back(random_polynomial(chart, seed, counter));
    return out;
}

std::vector<CheckResult> check_courant(const Chart& chart, const ExprCube& H,
                                       const SamplePlan& plan, double tol) {
    const std::size_t n = chart.dim();
    constexpr int kTrials = 3;
    std::vector<LabeledExpr> jacobi, anchor, leibniz, self_pairing, invariance;

    for (int t = 0; t < kTrials; ++t) {
        std::uint64_t counter = 0;
        const std::uint64_t seed =
            splitmix64(plan.seed ^ (0xC0DEULL + static_cast<std::uint64_t>(t)));
        const GeneralizedSection e1 =
            random_generalized_section(chart, seed, counter);
        const GeneralizedSection e2 =
            random_generalized_section(chart, seed, counter);
        const GeneralizedSection e3 =
            random_generalized_section(chart, seed, counter);
        const Expr f = random_polynomial(chart, seed, counter);
        const std::string prefix = "t=" + std::to_string(t + 1);

        const GeneralizedSection b12 = dorfman_bracket(chart, H, e1, e2);
        const GeneralizedSection b13 = dorfman_bracket(chart, H, e1, e3);
        const GeneralizedSection b23 = dorfman_bracket(chart, H, e2, e3);

        // Jacobi in Leibniz form for the non-skew bracket.
        push_section_residuals(
            jacobi, prefix,
            minus(minus(dorfman_bracket(chart, H, e1, b23),
                        dorfman_bracket(chart, H, b12, e3)),
                  dorfman_bracket(chart, H, e2, b13)));

        // Anchor compatibility as derivations on a test function.
        anchor.push_back(
            {prefix,
             directional(chart, b12.vec, f) -
                 directional(chart, e1.vec, directional(chart, e2.vec, f)) +
                 directional(chart, e2.vec, directional(chart, e1.vec, f))});

        // Leibniz rule in the second slot.
        push_section_residuals(
            leibniz, prefix,
            minus(minus(dorfman_bracket(chart, H, e1, scale(f, e2)),
                        scale(f, b12)),
                  scale(directional(chart, e1.vec, f), e2)));

        // Symmetric part against the pairing differential.
        push_section_residuals(
            self_pairing, prefix,
            minus(dorfman_bracket(chart, H, e3, e3),
                  scale(Expr::constant(0.5),
                        pairing_differential(
                            chart, generalized_pairing(e3, e3)))));

        // Invariance of the pairing under the bracket flow.
        invariance.push_back(
            {prefix, directional(chart, e1.vec, generalized_pairing(e2, e3)) -
                         generalized_pairing(b12, e3) -
                         generalized_pairing(e2, b13)});
    }

    std::vector<CheckResult> out;
    out.push_back(evaluate_residuals(
        "courant-jacobi",
        "[[e1,[[e2,e3]]]] - [[[[e1,e2]],e3]] - [[e2,[[e1,e3]]]] = 0", chart,
        plan, tol, jacobi));
    out.push_back(evaluate_residuals(
        "courant-anchor", "a([[e1,e2]]) f = a(e1) a(e2) f - a(e2) a(e1) f",
        chart, plan, tol, anchor));
    out.push_back(evaluate_residuals(
        "courant-leibniz", "[[e1, f e2]] = f [[e1,e2]] + (a(e1) f) e2", chart,
        plan, tol, leibniz));
    out.push_back(evaluate_residuals("courant-self-pairing",
                                     "[[e,e]] = (1/2) D <e,e>", chart, plan,
                                     tol, self_pairing));
    out.push_back(evaluate_residuals(
        "courant-invariance",
        "a(e1) <e2,e3> = <[[e1,e2]],e3> + <e2,[[e1,e3]]>", chart, plan, tol,
        invariance));

    std::vector<LabeledExpr> closed;
    if (!H.empty())
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t k = j + 1; k < n; ++k)
                    for (std::size_t l = k + 1; l < n; ++l) {
                        const Expr r = H[j][k][l].derivative(chart.names[i]) -
                                       H[i][k][l].derivative(chart.names[j]) +
                                       H[i][j][l].derivative(chart.names[k]) -
                                       H[i][j][k].derivative(chart.names[l]);
                        closed.push_back({"i=" + idx(i) + " j=" + idx(j) +
                                              " k=" + idx(k) + " l=" + idx(l),
                                          r});
                    }
    CheckResult h_closed = evaluate_residuals("h-closed", "dH = 0", chart,
                                              plan, tol, closed, true);
    if (closed.empty())
        h_closed.note = "vacuous: no 4-form components in dimension " +
                        std::to_string(n);
    out.push_back(h_closed);
    return out;
}

DiracFrame graph_omega_frame(const Chart& chart, const ExprMatrix& omega) {
    const std::size_t n = chart.dim();
    DiracFrame frame;
    frame.sections.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        frame.sections[i].vec.assign(n, Expr());
        frame.sections[i].vec[i] = Expr::constant(1.0);
        frame.sections[i].form.reserve(n);
        for (std::size_t j = 0; j < n; ++j)
            frame.sections[i].form.push_back(omega[i][j]);
    }
    return frame;
}

DiracFrame graph_pi_frame(const Chart& chart, const ExprMatrix& pi) {
    const std::size_t n = chart.dim();
    DiracFrame frame;
    frame.sections.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
        frame.sections[a].vec.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            frame.sections[a].vec.push_back(pi[a][i]);
        frame.sections[a].form.assign(n, Expr());
        frame.sections[a].form[a] = Expr::constant(1.0);
    }
    return frame;
}

std::vector<CheckResult> check_dirac(const Chart& chart, const ExprCube& H,
                                     const DiracFrame& frame,
                                     const SamplePlan& plan, double tol) {
    const std::size_t n = chart.dim();
    const std::size_t r = frame.sections.size();

    std::vector<LabeledExpr> isotropy;
    for (std::size_t p = 0; p < r; ++p)
        for (std::size_t q = p; q < r; ++q)
            isotropy.push_back(
                {"p=" + idx(p) + " q=" + idx(q),
                 generalized_pairing(frame.sections[p], frame.sections[q])});

    std::vector<CheckResult> out;
    out.push_back(evaluate_residuals("dirac-isotropy",
                                     "<s_p, s_q> = 0 for all frame pairs",
                                     chart, plan, tol, isotropy));

    // Brackets of all frame pairs, computed once symbolically.
    std::vector<std::vector<GeneralizedSection>> brackets(r);
    for (std::size_t p = 0; p < r; ++p) {
        brackets[p].resize(r);
        for (std::size_t q = p + 1; q < r; ++q)
            brackets[p][q] = dorfman_bracket(chart, H, frame.sections[p],
                                             frame.sections[q]);
    }

    CheckResult involutivity;
    involutivity.id = "dirac-involutivity";
    involutivity.formula =
        "[[s_p, s_q]] lies in the frame span (least squares)";
    involutivity.tolerance = tol;
    involutivity.points = plan.count;

    CheckResult rank;
    rank.id = "dirac-frame-rank";
    rank.formula = "the frame has full column rank at sample points";
    rank.tolerance = 0.5;
    rank.points = plan.count;
    rank.advisory = true;
    std::size_t min_rank = r, max_rank = 0;

    for (int s = 0; s < plan.count; ++s) {
        const Env env = sample_env(chart, plan, s);
        const std::vector<double> point = sample_point(chart, plan, s);
        Eigen::MatrixXd M(2 * n, r);
        for (std::size_t c = 0; c < r; ++c) {
            for (std::size_t i = 0; i < n; ++i) {
                M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                    frame.sections[c].vec[i].eval(env);
                M(static_cast<Eigen::Index>(n + i),
                  static_cast<Eigen::Index>(c)) =
                    frame.sections[c].form[i].eval(env);
            }
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(
            M, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const double sigma_max = svd.singularValues().size()
                                     ? svd.singularValues()(0)
                                     : 0.0;
        svd.setThreshold(1e-9 * std::max(1.0, sigma_max) /
                         (sigma_max > 0.0 ? sigma_max : 1.0));
        const std::size_t point_rank = static_cast<std::size_t>(svd.rank());
        min_rank = std::min(min_rank, point_rank);
        max_rank = std::max(max_rank, point_rank);

        for (std::size_t p = 0; p < r; ++p)
            for (std::size_t q = p + 1; q < r; ++q) {
                Eigen::VectorXd b(2 * n);
                for (std::size_t i = 0; i < n; ++i) {
                    b(static_cast<Eigen::Index>(i)) =
                        brackets[p][q].vec[i].eval(env);
                    b(static_cast<Eigen::Index>(n + i)) =
                        brackets[p][q].form[i].eval(env);
                }
                const Eigen::VectorXd c = svd.solve(b);
                const double residual =
                    (M * c - b).lpNorm<Eigen::Infinity>();
                if (residual > involutivity.max_residual) {
                    involutivity.max_residual = residual;
                    involutivity.worst_point = point;
                    involutivity.worst_field = "p=" + idx(p) + " q=" + idx(q);
                }
            }
    }
    involutivity.passed = involutivity.max_residual <= tol;
    out.push_back(involutivity);

    rank.max_residual = static_cast<double>(r - min_rank);
    rank.passed = min_rank == r;
    rank.note = "column rank min=" + std::to_string(min_rank) +
                " max=" + std::to_string(max_rank) + " of " +
                std::to_string(r) + " sections";
    out.push_back(rank);
    return out;
}

CheckResult graph_pi_closure(const Chart& chart, const ExprMatrix& pi,
                             const SamplePlan& plan, double tol) {
    const std::size_t n = chart.dim();
    const ExprCube H;  // untwisted
    const auto lift = [&](const OneForm& alpha) {
        GeneralizedSection s;
        s.vec.assign(n, Expr());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                s.vec[i] = s.vec[i] + alpha[j] * pi[j][i];
        s.form = alpha;
        return s;
    };

    constexpr int kTrials = 3;
    std::vector<LabeledExpr> residuals;
    for (int t = 0; t < kTrials; ++t) {
        std::uint64_t counter = 0;
        const std::uint64_t seed = splitmix64(
            plan.seed ^ (0x9A7BULL + static_cast<std::uint64_t>(t)));
        OneForm alpha(n), beta(n);
        for (std::size_t i = 0; i < n; ++i)
            alpha[i] = random_polynomial(chart, seed, counter);
        for (std::size_t i = 0; i < n; ++i)
            beta[i] = random_polynomial(chart, seed, counter);
        const GeneralizedSection lhs =
            dorfman_bracket(chart, H, lift(alpha), lift(beta));
        const GeneralizedSection rhs =
            lift(koszul_bracket(chart, pi, alpha, beta));
        push_section_residuals(residuals, "t=" + std::to_string(t + 1),
                               minus(lhs, rhs));
    }
    return evaluate_residuals("graph-bracket-closure",
                              "[[L(alpha), L(beta)]] = L([alpha, beta]_pi)",
                              chart, plan, tol, residuals);
}

CheckResult graph_omega_closure(const Chart& chart, const ExprMatrix& omega,
                                const SamplePlan& plan, double tol) {
    const std::size_t n = chart.dim();
    const ExprCube H;  // untwisted
    const auto lift = [&](const VectorField& u) {
        GeneralizedSection s;
        s.vec = u;
        s.form = flat(omega, u);
        return s;
    };

    constexpr int kTrials = 3;
    std::vector<LabeledExpr> residuals;
    for (int t = 0; t < kTrials; ++t) {
        std::uint64_t counter = 0;
        const std::uint64_t seed = splitmix64(
            plan.seed ^ (0x03E6AULL + static_cast<std::uint64_t>(t)));
        VectorField u(n), v(n);
        for (std::size_t i = 0; i < n; ++i)
            u[i] = random_polynomial(chart, seed, counter);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = random_polynomial(chart, seed, counter);
        const GeneralizedSection lhs =
            dorfman_bracket(chart, H, lift(u), lift(v));
        const GeneralizedSection rhs = lift(lie_bracket(chart, u, v));
        push_section_residuals(residuals, "t=" + std::to_string(t + 1),
                               minus(lhs, rhs));
    }
    return evaluate_residuals(
        "graph-bracket-closure",
        "[[u + w(u), v + w(v)]] = [u,v] + w([u,v])", chart, plan, tol,
        residuals);
}

DiracMorphismResult dirac_morphism_check(const SmoothMap& map,
                                         const DiracFrame& source_frame,
                                         const DiracFrame& target_frame,
                                         const SamplePlan& plan, double tol) {
    const std::size_t m = map.source.dim();
    const std::size_t n = map.target.dim();
    const std::size_t r = source_frame.sections.size();
    const std::vector<std::vector<Expr>> J = map.jacobian();

    DiracMorphismResult result;
    result.existence.id = "dirac-morphism";
    result.existence.formula =
        "each target frame section matches a pushed source combination "
        "(covectors pull back, vectors push forward)";
    result.existence.tolerance = tol;
    result.existence.points = plan.count;
    result.min_singular_value = std::numeric_limits<double>::infinity();

    for (int s = 0; s < plan.count; ++s) {
        const Env env = sample_env(map.source, plan, s);
        const std::vector<double> point = sample_point(map.source, plan, s);
        const Env image = map.image_env(env);

        Eigen::MatrixXd Jval(n, m);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < m; ++i)
                Jval(static_cast<Eigen::Index>(k),
                     static_cast<Eigen::Index>(i)) = J[k][i].eval(env);

        Eigen::MatrixXd A(m + n, r);
        for (std::size_t c = 0; c < r; ++c) {
            Eigen::VectorXd u(m);
            for (std::size_t i = 0; i < m; ++i) {
                A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                    source_frame.sections[c].form[i].eval(env);
                u(static_cast<Eigen::Index>(i)) =
                    source_frame.sections[c].vec[i].eval(env);
            }
            A.block(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(c),
                    static_cast<Eigen::Index>(n), 1) = Jval * u;
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(
            A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd& sigma = svd.singularValues();
        const double sigma_min =
            sigma.size() ? sigma(sigma.size() - 1) : 0.0;
        result.min_singular_value =
            std::min(result.min_singular_value, sigma_min);

        for (std::size_t k = 0; k < target_frame.sections.size(); ++k) {
            Eigen::VectorXd beta(n), v(n);
            for (std::size_t i = 0; i < n; ++i) {
                beta(static_cast<Eigen::Index>(i)) =
                    target_frame.sections[k].form[i].eval(image);
                v(static_cast<Eigen::Index>(i)) =
                    target_frame.sections[k].vec[i].eval(image);
            }
            Eigen::VectorXd b(m + n);
            b.head(static_cast<Eigen::Index>(m)) = Jval.transpose() * beta;
            b.tail(static_cast<Eigen::Index>(n)) = v;
            const Eigen::VectorXd c = svd.solve(b);
            const double residual = (A * c - b).lpNorm<Eigen::Infinity>();
            if (residual > result.existence.max_residual) {
                result.existence.max_residual = residual;
                result.existence.worst_point = point;
                result.existence.worst_field = "k=" + idx(k);
            }
        }
    }
    result.existence.passed = result.existence.max_residual <= tol;
    result.unique = result.min_singular_value > 1e-8;
    return result;
}

}  // namespace momsec
