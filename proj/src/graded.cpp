#include "momsec/graded.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "momsec/courant.hpp"
#include "momsec/extended.hpp"
#include "momsec/geometry.hpp"

namespace momsec {

namespace {

GradedPolynomial gp_negate(const GradedPolynomial& p) {
    GradedPolynomial out;
    for (const auto& [factors, coeff] : p.terms) {
        out.terms.emplace(factors, (-1.0) * coeff);
    }
    return out;
}

void accumulate(GradedPolynomial& into, const std::vector<std::size_t>& key,
                const Expr& coeff) {
    if (coeff.is_zero()) return;
    auto it = into.terms.find(key);
    if (it == into.terms.end()) {
        into.terms.emplace(key, coeff);
        return;
    }
    it->second = it->second + coeff;
    if (it->second.is_zero()) into.terms.erase(it);
}

/// Bracket of a single generator with a monomial:
/// {z, d W} = {z, d} W + d {z, W},
/// {z, w1 R} = {z, w1} R + (-1)^{|z||w1|} w1 {z, R}.
GradedPolynomial generator_bracket(const GradedSpace& space, std::size_t z,
                                   const Expr& d,
                                   const std::vector<std::size_t>& ws) {
    GradedPolynomial out;
    if (space.base_pairing[z] != GradedSpace::no_pairing) {
        Expr dd = d.derivative(space.base.names[space.base_pairing[z]]);
        if (!dd.is_zero()) {
            out = gp_add(out,
                         gp_monomial(space, space.deriv_sign[z] * dd, ws));
        }
    }
    double sign = 1.0;
    for (std::size_t t = 0; t < ws.size(); ++t) {
        const double ps = space.pair_sign[z][ws[t]];
        if (ps != 0.0) {
            std::vector<std::size_t> rest;
            rest.reserve(ws.size() - 1);
            for (std::size_t u = 0; u < ws.size(); ++u) {
                if (u != t) rest.push_back(ws[u]);
            }
            out = gp_add(out, gp_monomial(space, (sign * ps) * d, rest));
        }
        if (space.odd(z) && space.odd(ws[t])) sign = -sign;
    }
    return out;
}

/// Bracket of monomials {c Z, d W} through the Leibniz rules
/// {c z R, H} = (c z) {R, H} + (-1)^{|R||H|} {c z, H} R and
/// {c z, H} = c {z, H} + (-1)^{|z||H|} {c, H} z.
GradedPolynomial monomial_bracket(const GradedSpace& space, const Expr& c,
                                  const std::vector<std::size_t>& zs,
                                  const Expr& d,
                                  const std::vector<std::size_t>& ws) {
    if (zs.empty()) {
        // {c, d W}: the even coefficient pairs only with conjugates of the
        // base, with no parity signs.
        GradedPolynomial out;
        for (std::size_t t = 0; t < ws.size(); ++t) {
            const std::size_t bp = space.base_pairing[ws[t]];
            if (bp == GradedSpace::no_pairing) continue;
            Expr dc = c.derivative(space.base.names[bp]);
            if (dc.is_zero()) continue;
            std::vector<std::size_t> rest;
            rest.reserve(ws.size() - 1);
            for (std::size_t u = 0; u < ws.size(); ++u) {
                if (u != t) rest.push_back(ws[u]);
            }
            out = gp_add(out, gp_monomial(
                                  space,
                                  (-space.deriv_sign[ws[t]]) * dc * d, rest));
        }
        return out;
    }

    const std::size_t z = zs.front();
    const std::vector<std::size_t> rest(zs.begin() + 1, zs.end());
    const int rest_parity = factor_parity(space, rest);
    const int h_parity = factor_parity(space, ws);
    const int z_parity = space.odd(z) ? 1 : 0;

    GradedPolynomial out = gp_multiply(
        space, gp_monomial(space, c, {z}),
        monomial_bracket(space, Expr::constant(1.0), rest, d, ws));

    GradedPolynomial cz_h =
        gp_multiply(space, gp_scalar(c), generator_bracket(space, z, d, ws));
    GradedPolynomial ch_z =
        gp_multiply(space, monomial_bracket(space, c, {}, d, ws),
                    gp_coordinate(space, z));
    if ((z_parity * h_parity) % 2 != 0) ch_z = gp_negate(ch_z);
    cz_h = gp_add(cz_h, ch_z);

    GradedPolynomial tail = gp_multiply(
        space, cz_h, gp_monomial(space, Expr::constant(1.0), rest));
    if ((rest_parity * h_parity) % 2 != 0) tail = gp_negate(tail);
    return gp_add(out, tail);
}

void check_fiber_names(const GradedSpace& space) {
    for (const auto& fiber : space.fibers) {
        for (const auto& base_name : space.base.names) {
            if (fiber.name == base_name) {
                throw std::invalid_argument(
                    "graded fiber name collides with a base coordinate: " +
                    fiber.name);
            }
        }
    }
}

std::vector<LabeledExpr> coefficient_residuals(const GradedSpace& space,
                                               const GradedPolynomial& p,
                                               const std::string& prefix) {
    std::vector<LabeledExpr> out;
    for (const auto& [factors, coeff] : p.terms) {
        if (coeff.is_zero()) continue;
        std::string label = prefix;
        if (factors.empty()) {
            label += "1";
        } else {
            for (std::size_t t = 0; t < factors.size(); ++t) {
                if (t != 0) label += ' ';
                label += space.fibers[factors[t]].name;
            }
        }
        out.push_back({label, coeff});
    }
    return out;
}

void ensure_nonempty(std::vector<LabeledExpr>& residuals) {
    if (residuals.empty()) {
        residuals.push_back({"identically zero", Expr::constant(0.0)});
    }
}

}  // namespace

std::size_t GradedSpace::fiber_index(const std::string& name) const {
    for (std::size_t i = 0; i < fibers.size(); ++i) {
        if (fibers[i].name == name) return i;
    }
    throw std::invalid_argument("unknown graded coordinate: " + name);
}

int canonicalize_factors(const GradedSpace& space,
                         std::vector<std::size_t>& factors) {
    int sign = 1;
    for (std::size_t i = 1; i < factors.size(); ++i) {
        std::size_t j = i;
        while (j > 0 && factors[j - 1] > factors[j]) {
            if (space.odd(factors[j - 1]) && space.odd(factors[j])) {
                sign = -sign;
            }
            std::swap(factors[j - 1], factors[j]);
            --j;
        }
    }
    for (std::size_t i = 1; i < factors.size(); ++i) {
        if (factors[i] == factors[i - 1] && space.odd(factors[i])) return 0;
    }
    return sign;
}

int factor_parity(const GradedSpace& space,
                  const std::vector<std::size_t>& factors) {
    int parity = 0;
    for (std::size_t f : factors) {
        if (space.odd(f)) parity ^= 1;
    }
    return parity;
}

int polynomial_parity(const GradedSpace& space, const GradedPolynomial& p) {
    int parity = 0;
    bool first = true;
    for (const auto& [factors, coeff] : p.terms) {
        const int mp = factor_parity(space, factors);
        if (first) {
            parity = mp;
            first = false;
        } else if (mp != parity) {
            throw std::invalid_argument("polynomial has mixed parity");
        }
    }
    return parity;
}

GradedPolynomial gp_scalar(Expr coefficient) {
    GradedPolynomial out;
    if (!coefficient.is_zero()) {
        out.terms.emplace(std::vector<std::size_t>{}, std::move(coefficient));
    }
    return out;
}

GradedPolynomial gp_coordinate(const GradedSpace& space, std::size_t fiber) {
    return gp_monomial(space, Expr::constant(1.0), {fiber});
}

GradedPolynomial gp_monomial(const GradedSpace& space, Expr coefficient,
                             std::vector<std::size_t> factors) {
    GradedPolynomial out;
    if (coefficient.is_zero()) return out;
    const int sign = canonicalize_factors(space, factors);
    if (sign == 0) return out;
    out.terms.emplace(std::move(factors), sign < 0
                                              ? (-1.0) * coefficient
                                              : std::move(coefficient));
    return out;
}

GradedPolynomial gp_add(const GradedPolynomial& a, const GradedPolynomial& b) {
    GradedPolynomial out = a;
    for (const auto& [factors, coeff] : b.terms) {
        accumulate(out, factors, coeff);
    }
    return out;
}

GradedPolynomial gp_subtract(const GradedPolynomial& a,
                             const GradedPolynomial& b) {
    return gp_add(a, gp_negate(b));
}

GradedPolynomial gp_multiply(const GradedSpace& space,
                             const GradedPolynomial& a,
                             const GradedPolynomial& b) {
    GradedPolynomial out;
    for (const auto& [za, ca] : a.terms) {
        for (const auto& [zb, cb] : b.terms) {
            std::vector<std::size_t> factors = za;
            factors.insert(factors.end(), zb.begin(), zb.end());
            const int sign = canonicalize_factors(space, factors);
            if (sign == 0) continue;
            accumulate(out, factors,
                       sign < 0 ? (-1.0) * (ca * cb) : ca * cb);
        }
    }
    return out;
}

GradedPolynomial gp_bracket(const GradedSpace& space,
                            const GradedPolynomial& a,
                            const GradedPolynomial& b) {
    GradedPolynomial out;
    for (const auto& [za, ca] : a.terms) {
        for (const auto& [zb, cb] : b.terms) {
            out = gp_add(out, monomial_bracket(space, ca, za, cb, zb));
        }
    }
    return out;
}

GradedPolynomial apply_derivation(const GradedSpace& space,
                                  const GradedDerivation& Q,
                                  const GradedPolynomial& p) {
    GradedPolynomial out;
    for (const auto& [ws, c] : p.terms) {
        for (std::size_t i = 0; i < space.base.dim(); ++i) {
            if (Q.base_components[i].empty()) continue;
            Expr dc = c.derivative(space.base.names[i]);
            if (dc.is_zero()) continue;
            out = gp_add(out, gp_multiply(space, Q.base_components[i],
                                          gp_monomial(space, dc, ws)));
        }
        double sign = 1.0;
        for (std::size_t t = 0; t < ws.size(); ++t) {
            const GradedPolynomial& comp = Q.fiber_components[ws[t]];
            if (!comp.empty()) {
                const std::vector<std::size_t> prefix(ws.begin(),
                                                      ws.begin() + t);
                const std::vector<std::size_t> suffix(ws.begin() + t + 1,
                                                      ws.end());
                GradedPolynomial term = gp_multiply(
                    space, gp_monomial(space, sign * c, prefix), comp);
                term = gp_multiply(
                    space, term,
                    gp_monomial(space, Expr::constant(1.0), suffix));
                out = gp_add(out, term);
            }
            if (space.odd(ws[t])) sign = -sign;
        }
    }
    return out;
}

GradedSpace m_side_space(const Chart& base) {
    const std::size_t n = base.dim();
    GradedSpace space;
    space.base = base;
    for (std::size_t i = 0; i < n; ++i) {
        space.fibers.push_back({"eta" + std::to_string(i + 1), 1});
    }
    for (std::size_t i = 0; i < n; ++i) {
        space.fibers.push_back({"y" + std::to_string(i + 1), 1});
    }
    space.fibers.push_back({"s", 1});
    space.fibers.push_back({"t", 1});
    for (std::size_t i = 0; i < n; ++i) {
        space.fibers.push_back({"xi" + std::to_string(i + 1), 2});
    }
    const std::size_t f = space.fibers.size();
    space.pair_sign.assign(f, std::vector<double>(f, 0.0));
    space.base_pairing.assign(f, GradedSpace::no_pairing);
    space.deriv_sign.assign(f, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        space.pair_sign[i][n + i] = 1.0;      // {eta^i, y_i}
        space.pair_sign[n + i][i] = 1.0;      // {y_i, eta^i}
        space.base_pairing[2 * n + 2 + i] = i;
        space.deriv_sign[2 * n + 2 + i] = -1.0;  // {xi_i, f} = -d_i f
    }
    space.pair_sign[2 * n][2 * n + 1] = 1.0;  // {s, t}
    space.pair_sign[2 * n + 1][2 * n] = 1.0;  // {t, s}
    check_fiber_names(space);
    return space;
}

GradedSpace n_side_space(const Chart& base, std::size_t rank) {
    const std::size_t n = base.dim();
    GradedSpace space;
    space.base = base;
    for (std::size_t a = 0; a < rank; ++a) {
        space.fibers.push_back({"q" + std::to_string(a + 1), 1});
    }
    for (std::size_t a = 0; a < rank; ++a) {
        space.fibers.push_back({"p" + std::to_string(a + 1), 1});
    }
    space.fibers.push_back({"s", 1});
    space.fibers.push_back({"t", 1});
    for (std::size_t i = 0; i < n; ++i) {
        space.fibers.push_back({"xi" + std::to_string(i + 1), 2});
    }
    const std::size_t f = space.fibers.size();
    space.pair_sign.assign(f, std::vector<double>(f, 0.0));
    space.base_pairing.assign(f, GradedSpace::no_pairing);
    space.deriv_sign.assign(f, 0.0);
    for (std::size_t a = 0; a < rank; ++a) {
        space.pair_sign[a][rank + a] = 1.0;  // {q^a, p_a}
        space.pair_sign[rank + a][a] = 1.0;  // {p_a, q^a}
    }
    space.pair_sign[2 * rank][2 * rank + 1] = 1.0;
    space.pair_sign[2 * rank + 1][2 * rank] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        space.base_pairing[2 * rank + 2 + i] = i;
        space.deriv_sign[2 * rank + 2 + i] = -1.0;
    }
    check_fiber_names(space);
    return space;
}

GradedSpace shifted_bundle_space(const Chart& base, std::size_t rank) {
    GradedSpace space;
    space.base = base;
    for (std::size_t a = 0; a < rank; ++a) {
        space.fibers.push_back({"q" + std::to_string(a + 1), 1});
    }
    space.pair_sign.assign(rank, std::vector<double>(rank, 0.0));
    space.base_pairing.assign(rank, GradedSpace::no_pairing);
    space.deriv_sign.assign(rank, 0.0);
    check_fiber_names(space);
    return space;
}

GradedSpace shifted_dual_space(const Chart& base) {
    const std::size_t n = base.dim();
    GradedSpace space;
    space.base = base;
    for (std::size_t i = 0; i < n; ++i) {
        space.fibers.push_back({"y" + std::to_string(i + 1), 1});
    }
    space.fibers.push_back({"t", 1});
    space.pair_sign.assign(n + 1, std::vector<double>(n + 1, 0.0));
    space.base_pairing.assign(n + 1, GradedSpace::no_pairing);
    space.deriv_sign.assign(n + 1, 0.0);
    check_fiber_names(space);
    return space;
}

GradedPolynomial theta_m(const GradedSpace& space, const ExprMatrix& pi) {
    const std::size_t n = space.base.dim();
    const auto eta = [&](std::size_t i) { return i; };
    const auto y = [&](std::size_t i) { return n + i; };
    const std::size_t s = 2 * n;
    const auto xi = [&](std::size_t i) { return 2 * n + 2 + i; };

    GradedPolynomial out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out = gp_add(out, gp_monomial(space, pi[i][j], {xi(i), y(j)}));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                Expr dpi = pi[j][k].derivative(space.base.names[i]);
                out = gp_add(out, gp_monomial(space, -0.5 * dpi,
                                              {y(j), y(k), eta(i)}));
            }
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            out = gp_add(out,
                         gp_monomial(space, -0.5 * pi[j][k], {y(j), y(k), s}));
        }
    }
    return out;
}

GradedPolynomial theta_n(const GradedSpace& space, const LieAlgebroid& A) {
    const std::size_t r = A.rank;
    const std::size_t n = A.dim();
    const auto q = [&](std::size_t a) { return a; };
    const auto p = [&](std::size_t a) { return r + a; };
    const auto xi = [&](std::size_t i) { return 2 * r + 2 + i; };

    GradedPolynomial out;
    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t i = 0; i < n; ++i) {
            out = gp_add(out, gp_monomial(space, A.rho[a][i], {xi(i), q(a)}));
        }
    }
    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t b = 0; b < r; ++b) {
            for (std::size_t c = 0; c < r; ++c) {
                out = gp_add(out, gp_monomial(space, 0.5 * A.C[a][b][c],
                                              {q(a), q(b), p(c)}));
            }
        }
    }
    return out;
}

GradedPolynomial m_derived_bracket(const GradedSpace& space,
                                   const GradedPolynomial& theta,
                                   const GradedPolynomial& u,
                                   const GradedPolynomial& v) {
    return gp_bracket(space, gp_bracket(space, u, theta), v);
}

GradedPolynomial n_derived_bracket(const GradedSpace& space,
                                   const GradedPolynomial& theta,
                                   const GradedPolynomial& f,
                                   const GradedPolynomial& g) {
    return gp_negate(gp_bracket(space, gp_bracket(space, f, theta), g));
}

GradedDerivation shifted_bundle_field(const GradedSpace& space,
                                      const LieAlgebroid& A) {
    const std::size_t r = A.rank;
    const std::size_t n = A.dim();
    GradedDerivation Q;
    Q.base_components.resize(n);
    Q.fiber_components.resize(space.fibers.size());
    for (std::size_t i = 0; i < n; ++i) {
        GradedPolynomial comp;
        for (std::size_t a = 0; a < r; ++a) {
            comp = gp_add(comp, gp_monomial(space, A.rho[a][i], {a}));
        }
        Q.base_components[i] = comp;
    }
    for (std::size_t c = 0; c < r; ++c) {
        GradedPolynomial comp;
        for (std::size_t a = 0; a < r; ++a) {
            for (std::size_t b = 0; b < r; ++b) {
                comp = gp_add(comp,
                              gp_monomial(space, -0.5 * A.C[a][b][c], {a, b}));
            }
        }
        Q.fiber_components[c] = comp;
    }
    return Q;
}

GradedDerivation shifted_dual_field(const GradedSpace& space,
                                    const ExprMatrix& pi) {
    const std::size_t n = space.base.dim();
    GradedDerivation Q;
    Q.base_components.resize(n);
    Q.fiber_components.resize(space.fibers.size());
    for (std::size_t i = 0; i < n; ++i) {
        GradedPolynomial comp;
        for (std::size_t j = 0; j < n; ++j) {
            comp = gp_add(comp, gp_monomial(space, pi[i][j], {j}));
        }
        Q.base_components[i] = comp;
    }
    for (std::size_t k = 0; k < n; ++k) {
        GradedPolynomial comp;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                Expr dpi = pi[i][j].derivative(space.base.names[k]);
                comp = gp_add(comp, gp_monomial(space, 0.5 * dpi, {i, j}));
            }
        }
        Q.fiber_components[k] = comp;
    }
    GradedPolynomial tcomp;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            tcomp = gp_add(tcomp, gp_monomial(space, 0.5 * pi[i][j], {i, j}));
        }
    }
    Q.fiber_components[n] = tcomp;
    return Q;
}

GradedPolynomial momentum_substitution(const GradedSpace& n_space,
                                       const GradedSpace& m_space,
                                       const LieAlgebroid& A,
                                       const Connection& conn,
                                       const Section& mu,
                                       const GradedPolynomial& p) {
    const std::size_t r = A.rank;
    const std::size_t n = A.dim();
    const ExprMatrix gm = dual_covariant_derivative(A, conn, mu);
    const std::size_t s_idx = m_space.fiber_index("s");

    std::vector<GradedPolynomial> subs(r);
    for (std::size_t a = 0; a < r; ++a) {
        GradedPolynomial image;
        for (std::size_t i = 0; i < n; ++i) {
            image = gp_add(image,
                           gp_monomial(m_space, (-1.0) * gm[i][a],
                                       {m_space.fiber_index(
                                           "eta" + std::to_string(i + 1))}));
        }
        image = gp_add(image, gp_monomial(m_space, mu[a], {s_idx}));
        subs[a] = image;
    }

    std::vector<std::size_t> p_index(n_space.fibers.size(),
                                     GradedSpace::no_pairing);
    for (std::size_t a = 0; a < r; ++a) {
        p_index[n_space.fiber_index("p" + std::to_string(a + 1))] = a;
    }

    GradedPolynomial out;
    for (const auto& [factors, coeff] : p.terms) {
        GradedPolynomial image = gp_scalar(coeff);
        for (std::size_t f : factors) {
            if (p_index[f] == GradedSpace::no_pairing) {
                throw std::invalid_argument(
                    "momentum substitution requires a polynomial in the dual "
                    "fiber coordinates");
            }
            image = gp_multiply(m_space, image, subs[p_index[f]]);
        }
        out = gp_add(out, image);
    }
    return out;
}

CheckResult master_equation_m(const Chart& chart, const ExprMatrix& pi,
                              const SamplePlan& plan, double tol) {
    const GradedSpace space = m_side_space(chart);
    const GradedPolynomial th = theta_m(space, pi);
    auto residuals =
        coefficient_residuals(space, gp_bracket(space, th, th), "");
    ensure_nonempty(residuals);
    return evaluate_residuals("master-equation-m", "{Theta_M, Theta_M} = 0",
                              chart, plan, tol, residuals);
}

CheckResult master_equation_n(const LieAlgebroid& A, const SamplePlan& plan,
                              double tol) {
    const GradedSpace space = n_side_space(A.chart, A.rank);
    const GradedPolynomial th = theta_n(space, A);
    auto residuals =
        coefficient_residuals(space, gp_bracket(space, th, th), "");
    ensure_nonempty(residuals);
    return evaluate_residuals("master-equation-n", "{Theta_N, Theta_N} = 0",
                              A.chart, plan, tol, residuals);
}

namespace {

CheckResult homological_check(const std::string& id,
                              const std::string& formula,
                              const GradedSpace& space,
                              const GradedDerivation& Q,
                              const SamplePlan& plan, double tol) {
    std::vector<LabeledExpr> residuals;
    for (std::size_t i = 0; i < space.base.dim(); ++i) {
        auto part = coefficient_residuals(
            space, apply_derivation(space, Q, Q.base_components[i]),
            "Q^2 " + space.base.names[i] + ": ");
        residuals.insert(residuals.end(), part.begin(), part.end());
    }
    for (std::size_t z = 0; z < space.fibers.size(); ++z) {
        auto part = coefficient_residuals(
            space, apply_derivation(space, Q, Q.fiber_components[z]),
            "Q^2 " + space.fibers[z].name + ": ");
        residuals.insert(residuals.end(), part.begin(), part.end());
    }
    ensure_nonempty(residuals);
    return evaluate_residuals(id, formula, space.base, plan, tol, residuals);
}

}  // namespace

CheckResult homological_a1_check(const LieAlgebroid& A, const SamplePlan& plan,
                                 double tol) {
    const GradedSpace space = shifted_bundle_space(A.chart, A.rank);
    return homological_check("homological-a1",
                             "Q^2 = 0 on the shifted bundle", space,
                             shifted_bundle_field(space, A), plan, tol);
}

CheckResult homological_tstar_r_check(const Chart& chart, const ExprMatrix& pi,
                                      const SamplePlan& plan, double tol) {
    const GradedSpace space = shifted_dual_space(chart);
    return homological_check("homological-tstar-r",
                             "Q^2 = 0 on the shifted dual extension", space,
                             shifted_dual_field(space, pi), plan, tol);
}

CheckResult derived_reproduction_m(const Chart& chart, const ExprMatrix& pi,
                                   const SamplePlan& plan, double tol) {
    const GradedSpace space = m_side_space(chart);
    const GradedPolynomial th = theta_m(space, pi);
    const std::size_t n = chart.dim();
    const std::size_t s_idx = space.fiber_index("s");

    const auto embed = [&](const OneForm& alpha, const Expr& f) {
        GradedPolynomial u;
        for (std::size_t i = 0; i < n; ++i) {
            u = gp_add(u, gp_monomial(space, alpha[i], {i}));
        }
        return gp_add(u, gp_monomial(space, f, {s_idx}));
    };

    std::vector<LabeledExpr> residuals;
    for (int trial = 0; trial < 3; ++trial) {
        const std::uint64_t seed = splitmix64(
            plan.seed ^ (0xD1ADu + static_cast<std::uint64_t>(trial)));
        std::uint64_t counter = 0;
        OneForm alpha, beta;
        for (std::size_t i = 0; i < n; ++i) {
            alpha.push_back(random_polynomial(chart, seed, counter));
        }
        Expr f = random_polynomial(chart, seed, counter);
        for (std::size_t i = 0; i < n; ++i) {
            beta.push_back(random_polynomial(chart, seed, counter));
        }
        Expr g = random_polynomial(chart, seed, counter);

        const GradedPolynomial derived =
            m_derived_bracket(space, th, embed(alpha, f), embed(beta, g));
        const ExtendedSection expected =
            tstar_r_bracket(chart, pi, {alpha, f}, {beta, g});
        auto part = coefficient_residuals(
            space,
            gp_subtract(derived, embed(expected.main, expected.scalar)),
            "t=" + std::to_string(trial + 1) + ": ");
        residuals.insert(residuals.end(), part.begin(), part.end());
    }
    ensure_nonempty(residuals);
    return evaluate_residuals(
        "derived-bracket-reproduction-m",
        "{{U, Theta_M}, V} matches the dual extension bracket on degree-1 "
        "functions",
        chart, plan, tol, residuals);
}

CheckResult derived_reproduction_n(const LieAlgebroid& A,
                                   const SamplePlan& plan, double tol) {
    const Chart& chart = A.chart;
    const GradedSpace space = n_side_space(chart, A.rank);
    const GradedPolynomial th = theta_n(space, A);
    const std::size_t r = A.rank;
    const std::size_t n = A.dim();
    const std::size_t s_idx = space.fiber_index("s");

    const auto embed = [&](const Section& u, const Expr& f) {
        GradedPolynomial out;
        for (std::size_t a = 0; a < r; ++a) {
            out = gp_add(out, gp_monomial(space, u[a], {r + a}));
        }
        return gp_add(out, gp_monomial(space, f, {s_idx}));
    };

    std::vector<LabeledExpr> residuals;
    for (int trial = 0; trial < 3; ++trial) {
        const std::uint64_t seed = splitmix64(
            plan.seed ^ (0xD1BEu + static_cast<std::uint64_t>(trial)));
        std::uint64_t counter = 0;
        Section a, b;
        for (std::size_t c = 0; c < r; ++c) {
            a.push_back(random_polynomial(chart, seed, counter));
        }
        Expr f = random_polynomial(chart, seed, counter);
        for (std::size_t c = 0; c < r; ++c) {
            b.push_back(random_polynomial(chart, seed, counter));
        }
        Expr g = random_polynomial(chart, seed, counter);

        const GradedPolynomial derived =
            n_derived_bracket(space, th, embed(a, f), embed(b, g));

        const Section bracket = bracket_sections(A, a, b);
        const VectorField va = section_anchor(A, a);
        const VectorField vb = section_anchor(A, b);
        Expr scalar = Expr::constant(0.0);
        for (std::size_t i = 0; i < n; ++i) {
            scalar = scalar + va[i] * g.derivative(chart.names[i]) -
                     vb[i] * f.derivative(chart.names[i]);
        }

        auto part = coefficient_residuals(
            space, gp_subtract(derived, embed(bracket, scalar)),
            "t=" + std::to_string(trial + 1) + ": ");
        residuals.insert(residuals.end(), part.begin(), part.end());
    }
    ensure_nonempty(residuals);
    return evaluate_residuals(
        "derived-bracket-reproduction-n",
        "-{{F, Theta_N}, G} matches the section bracket with anchor-action "
        "scalar part",
        chart, plan, tol, residuals);
}

CheckResult graded_poisson_map_check(const LieAlgebroid& A,
                                     const Connection& conn,
                                     const ExprMatrix& pi, const Section& mu,
                                     const SamplePlan& plan, double tol) {
    const Chart& chart = A.chart;
    const std::size_t r = A.rank;
    const std::size_t n = A.dim();
    const GradedSpace n_space = n_side_space(chart, r);
    const GradedSpace m_space = m_side_space(chart);
    const GradedPolynomial th_n = theta_n(n_space, A);
    const GradedPolynomial th_m = theta_m(m_space, pi);

    std::vector<Expr> x_monomials = {Expr::constant(1.0)};
    for (std::size_t i = 0; i < n; ++i) {
        x_monomials.push_back(Expr::variable(chart.names[i]));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            x_monomials.push_back(Expr::variable(chart.names[i]) *
                                  Expr::variable(chart.names[j]));
        }
    }
    std::vector<std::vector<std::size_t>> p_monomials = {{}};
    for (std::size_t a = 0; a < r; ++a) p_monomials.push_back({r + a});
    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t b = a + 1; b < r; ++b) {
            p_monomials.push_back({r + a, r + b});
        }
    }

    std::vector<GradedPolynomial> family;
    std::vector<GradedPolynomial> family_image;
    for (const auto& xm : x_monomials) {
        for (const auto& pm : p_monomials) {
            GradedPolynomial member = gp_monomial(n_space, xm, pm);
            family_image.push_back(momentum_substitution(
                n_space, m_space, A, conn, mu, member));
            family.push_back(std::move(member));
        }
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t j = i; j < family.size(); ++j) {
            pairs.emplace_back(i, j);
        }
    }
    const std::size_t cap = 200;
    const std::size_t stride =
        pairs.size() > cap ? (pairs.size() + cap - 1) / cap : 1;

    std::vector<LabeledExpr> residuals;
    for (std::size_t k = 0; k < pairs.size(); k += stride) {
        const auto [i, j] = pairs[k];
        const GradedPolynomial lhs = momentum_substitution(
            n_space, m_space, A, conn, mu,
            n_derived_bracket(n_space, th_n, family[i], family[j]));
        const GradedPolynomial rhs = m_derived_bracket(
            m_space, th_m, family_image[i], family_image[j]);
        auto part = coefficient_residuals(
            m_space, gp_subtract(lhs, rhs),
            "pair (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                "): ");
        residuals.insert(residuals.end(), part.begin(), part.end());
    }
    ensure_nonempty(residuals);
    return evaluate_residuals(
        "graded-poisson-map",
        "substituting p_a -> -grad_i mu_a eta^i + mu_a s intertwines the "
        "derived brackets",
        chart, plan, tol, residuals);
}

}  // namespace momsec
