#include "momsec/suites.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "momsec/algebroid.hpp"
#include "momsec/courant.hpp"
#include "momsec/dualpoisson.hpp"
#include "momsec/extended.hpp"
#include "momsec/geometry.hpp"
#include "momsec/graded.hpp"
#include "momsec/momentum.hpp"

namespace momsec {

namespace {

std::pair<double, double> fiber_box(const Problem& p) {
    return {p.options.pbox[0], p.options.pbox[1]};
}

void tag(std::vector<CheckResult>& out, CheckResult result,
         const std::string& suite) {
    result.suite = suite;
    out.push_back(std::move(result));
}

void tag(std::vector<CheckResult>& out, std::vector<CheckResult> batch,
         const std::string& suite) {
    for (CheckResult& result : batch) tag(out, std::move(result), suite);
}

std::vector<CheckResult> run_axioms(const Problem& p) {
    std::vector<CheckResult> out;
    tag(out, check_axioms(p.algebroid, p.plan(), p.options.tol), "axioms");
    return out;
}

std::vector<CheckResult> run_geometry(const Problem& p, bool lenient) {
    std::vector<CheckResult> out;
    if (p.presymplectic) {
        tag(out,
            check_closed(p.chart, *p.presymplectic, p.plan(), p.options.tol),
            "geometry");
    }
    if (p.poisson) {
        tag(out, check_poisson(p.chart, *p.poisson, p.plan(), p.options.tol),
            "geometry");
        tag(out, rank_diagnostic(p.chart, *p.poisson, p.plan()), "geometry");
    }
    if (out.empty() && !lenient) {
        throw MissingInputError(
            "geometry suite needs a presymplectic or poisson block");
    }
    return out;
}

std::vector<CheckResult> run_hamiltonian_symplectic(const Problem& p) {
    if (!p.presymplectic || !p.momentum) {
        throw MissingInputError(
            "hamiltonian-symplectic suite needs presymplectic and momentum "
            "blocks");
    }
    std::vector<CheckResult> out;
    tag(out,
        presymplectic_hamiltonian_verdict(p.algebroid, p.connection,
                                          *p.presymplectic, *p.momentum,
                                          p.plan(), p.options.tol)
            .conditions,
        "hamiltonian-symplectic");
    return out;
}

std::vector<CheckResult> run_hamiltonian_poisson(const Problem& p) {
    if (!p.poisson || !p.momentum) {
        throw MissingInputError(
            "hamiltonian-poisson suite needs poisson and momentum blocks");
    }
    std::vector<CheckResult> out;
    tag(out,
        poisson_hamiltonian_verdict(p.algebroid, p.connection, *p.poisson,
                                    *p.momentum, p.plan(), p.options.tol)
            .conditions,
        "hamiltonian-poisson");
    return out;
}

std::vector<CheckResult> run_identities(const Problem& p) {
    if (!p.poisson || !p.momentum) {
        throw MissingInputError(
            "identities suite needs poisson and momentum blocks");
    }
    std::vector<CheckResult> out;
    tag(out,
        identity_chain(p.algebroid, p.connection, *p.poisson, *p.momentum,
                       p.plan(), p.options.tol),
        "identities");
    return out;
}

std::vector<CheckResult> run_courant(const Problem& p) {
    std::vector<CheckResult> out;
    const ExprCube H = p.hflux ? *p.hflux : ExprCube{};
    tag(out, check_courant(p.chart, H, p.plan(), p.options.tol), "courant");
    return out;
}

std::vector<CheckResult> run_dirac(const Problem& p) {
    if (!p.dirac_kind) {
        throw MissingInputError(
            "dirac suite needs a dirac block naming the frame kind");
    }
    const ExprCube H = p.hflux ? *p.hflux : ExprCube{};
    std::vector<CheckResult> out;
    if (*p.dirac_kind == "graph-omega") {
        if (!p.presymplectic) {
            throw MissingInputError(
                "dirac kind graph-omega needs a presymplectic block");
        }
        const DiracFrame frame = graph_omega_frame(p.chart, *p.presymplectic);
        tag(out, check_dirac(p.chart, H, frame, p.plan(), p.options.tol),
            "dirac");
        tag(out,
            graph_omega_closure(p.chart, *p.presymplectic, p.plan(),
                                p.options.tol),
            "dirac");
    } else {
        if (!p.poisson) {
            throw MissingInputError(
                "dirac kind graph-pi needs a poisson block");
        }
        const DiracFrame frame = graph_pi_frame(p.chart, *p.poisson);
        tag(out, check_dirac(p.chart, H, frame, p.plan(), p.options.tol),
            "dirac");
        tag(out,
            graph_pi_closure(p.chart, *p.poisson, p.plan(), p.options.tol),
            "dirac");
    }
    return out;
}

std::vector<CheckResult> run_morphisms(const Problem& p) {
    const SamplePlan plan = p.plan();
    const double tol = p.options.tol;
    std::vector<CheckResult> out;
    tag(out, anchor_morphism_check(p.algebroid, plan, tol), "morphisms");
    tag(out, dual_map_equivalence(p.algebroid, plan, tol, fiber_box(p)),
        "morphisms");
    if (p.poisson && p.momentum) {
        tag(out,
            dirac_map_equivalence(p.algebroid, p.connection, *p.poisson,
                                  *p.momentum, plan, tol, fiber_box(p)),
            "morphisms");
        tag(out,
            cotangent_morphism_check(p.algebroid, p.connection, *p.poisson,
                                     *p.momentum, plan, tol),
            "morphisms");
        tag(out,
            tstar_r_morphism_check(p.algebroid, p.connection, *p.poisson,
                                   *p.momentum, plan, tol),
            "morphisms");
        tag(out,
            graph_pi_membership(p.algebroid, p.connection, *p.poisson,
                                *p.momentum, plan, tol),
            "morphisms");
        tag(out,
            poisson_map_momentum_check(p.algebroid, p.connection, *p.poisson,
                                       *p.momentum, plan, tol, fiber_box(p)),
            "morphisms");
    } else {
        tag(out, dirac_map_equivalence(p.algebroid, plan, tol, fiber_box(p)),
            "morphisms");
    }
    if (p.presymplectic && p.momentum) {
        tag(out,
            tm_r_morphism_check(p.algebroid, *p.presymplectic, *p.momentum,
                                plan, tol),
            "morphisms");
        tag(out,
            graph_omega_membership(p.algebroid, p.connection, *p.presymplectic,
                                   *p.momentum, plan, tol),
            "morphisms");
    }
    return out;
}

std::vector<CheckResult> run_graded(const Problem& p) {
    const SamplePlan plan = p.plan();
    const double tol = p.options.tol;
    std::vector<CheckResult> out;
    tag(out, master_equation_n(p.algebroid, plan, tol), "graded");
    tag(out, homological_a1_check(p.algebroid, plan, tol), "graded");
    tag(out, derived_reproduction_n(p.algebroid, plan, tol), "graded");
    if (p.poisson) {
        tag(out, master_equation_m(p.chart, *p.poisson, plan, tol), "graded");
        tag(out, homological_tstar_r_check(p.chart, *p.poisson, plan, tol),
            "graded");
        tag(out, derived_reproduction_m(p.chart, *p.poisson, plan, tol),
            "graded");
    }
    if (p.poisson && p.momentum) {
        tag(out,
            graded_poisson_map_check(p.algebroid, p.connection, *p.poisson,
                                     *p.momentum, plan, tol),
            "graded");
    }
    return out;
}

std::vector<CheckResult> run_all(const Problem& p) {
    std::vector<CheckResult> out;
    auto append = [&out](std::vector<CheckResult> batch) {
        for (CheckResult& r : batch) out.push_back(std::move(r));
    };
    append(run_axioms(p));
    append(run_geometry(p, /*lenient=*/true));
    if (p.presymplectic && p.momentum) append(run_hamiltonian_symplectic(p));
    if (p.poisson && p.momentum) {
        append(run_hamiltonian_poisson(p));
        append(run_identities(p));
    }
    append(run_courant(p));
    const bool dirac_ready =
        p.dirac_kind && ((*p.dirac_kind == "graph-omega" && p.presymplectic) ||
                         (*p.dirac_kind == "graph-pi" && p.poisson));
    if (dirac_ready) append(run_dirac(p));
    append(run_morphisms(p));
    append(run_graded(p));
    return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{
        "axioms",     "geometry",  "hamiltonian-symplectic",
        "hamiltonian-poisson",     "identities",
        "courant",    "dirac",     "morphisms",
        "graded",     "all"};
    return names;
}

bool is_suite(const std::string& name) {
    const auto& names = suite_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<CheckResult> run_suite(const Problem& problem,
                                   const std::string& suite) {
    std::vector<CheckResult> out;
    try {
        if (suite == "axioms") {
            out = run_axioms(problem);
        } else if (suite == "geometry") {
            out = run_geometry(problem, /*lenient=*/false);
        } else if (suite == "hamiltonian-symplectic") {
            out = run_hamiltonian_symplectic(problem);
        } else if (suite == "hamiltonian-poisson") {
            out = run_hamiltonian_poisson(problem);
        } else if (suite == "identities") {
            out = run_identities(problem);
        } else if (suite == "courant") {
            out = run_courant(problem);
        } else if (suite == "dirac") {
            out = run_dirac(problem);
        } else if (suite == "morphisms") {
            out = run_morphisms(problem);
        } else if (suite == "graded") {
            out = run_graded(problem);
        } else if (suite == "all") {
            out = run_all(problem);
        } else {
            throw SchemaError("unknown suite: " + suite);
        }
    } catch (const std::invalid_argument& e) {
        // Construction-level conflicts (for example a chart coordinate
        // colliding with a generated fiber name) are input problems.
        throw SchemaError(e.what());
    }
    std::sort(out.begin(), out.end(),
              [](const CheckResult& a, const CheckResult& b) {
                  return std::tie(a.suite, a.id) < std::tie(b.suite, b.id);
              });
    return out;
}

const std::vector<CheckInfo>& check_registry() {
    static const std::vector<CheckInfo> registry{
        {"anchor-compat", "axioms",
         "rho_a^j d_j rho_b^i - rho_b^j d_j rho_a^i - C^c_ab rho_c^i = 0",
         "the anchor sends frame brackets to vector-field brackets"},
        {"structure-jacobi", "axioms",
         "cyclic sum over (a,b,c) of C^e_ab C^d_ec - rho_c(C^d_ab) = 0",
         "the structure functions satisfy the Jacobi identity"},

        {"omega-closed", "geometry", "d_i w_jk + d_j w_ki + d_k w_ij = 0",
         "the 2-form is closed"},
        {"pi-jacobi", "geometry", "pi^{il} d_l pi^{jk} + cyclic(i,j,k) = 0",
         "the bivector satisfies the Poisson condition"},
        {"pi-rank", "geometry", "rank of pi^{ij} over sample points",
         "advisory: the bivector has constant numerical rank", true},

        {"momentum-s1", "hamiltonian-symplectic",
         "(D_a w)_ij = 0 (induced derivative of the 2-form)",
         "the connection preserves the 2-form along every frame section"},
        {"momentum-s2", "hamiltonian-symplectic",
         "grad_i mu_a + rho_a^j w_ji = 0",
         "the momentum gradient is the flat of the anchor"},
        {"momentum-s3", "hamiltonian-symplectic",
         "rho_a(mu_b) - rho_b(mu_a) - C^c_ab mu_c - w(rho_a, rho_b) = 0",
         "the momentum section intertwines brackets up to the 2-form"},

        {"momentum-p1", "hamiltonian-poisson",
         "(D_a pi)^ij = 0 (induced derivative of the bivector)",
         "the connection preserves the bivector along every frame section"},
        {"momentum-p2", "hamiltonian-poisson",
         "rho_a^i - pi^ij grad_j mu_a = 0",
         "the anchor is the sharp of the momentum gradient"},
        {"momentum-p3", "hamiltonian-poisson",
         "rho_a(mu_b) - rho_b(mu_a) - C^c_ab mu_c "
         "+ pi^ij grad_i mu_a grad_j mu_b = 0",
         "the momentum section intertwines brackets up to the bivector"},
        {"basic-curvature-kernel", "hamiltonian-poisson",
         "pi^ij S^c_jab mu_c = 0",
         "the sharped basic-curvature pairing with the momentum vanishes"},
        {"basic-curvature-pairing", "hamiltonian-poisson",
         "S^c_jab mu_c = 0",
         "advisory: the unsharped basic-curvature pairing vanishes", true},

        {"anchor-substitution", "identities",
         "pi^ij (pi^kl d_k grad_j mu_a grad_l mu_b + pi^kl grad_k mu_a "
         "d_l grad_j mu_b + d_j pi^kl grad_k mu_a grad_l mu_b "
         "+ C^c_ab grad_j mu_c) = 0",
         "expanding the bracket condition after the anchor substitution"},
        {"p3-substituted", "identities",
         "pi^ij grad_j mu_a d_i mu_b - pi^ij grad_j mu_b d_i mu_a "
         "+ pi^ij grad_i mu_a grad_j mu_b - C^c_ab mu_c = 0",
         "the bracket condition with the anchor eliminated"},
        {"anchor-substitution-covariant", "identities",
         "pi^ij (pi^kl grad_k grad_j mu_a grad_l mu_b + pi^kl grad_k mu_a "
         "grad_l grad_j mu_b + d_j pi^kl grad_k mu_a grad_l mu_b "
         "- T^c_ab grad_j mu_c) = 0",
         "the expanded bracket condition in covariant form with torsion"},
        {"torsion-pairing", "identities",
         "pi^kl grad_k mu_a grad_l mu_b - T^c_ab mu_c = 0",
         "the bivector pairing of gradients matches the torsion pairing"},
        {"torsion-pairing-derivative", "identities",
         "grad_j (pi^kl grad_k mu_a grad_l mu_b - T^c_ab mu_c) expanded: "
         "covariant inner expression - S^c_jab mu_c = 0",
         "differentiating the torsion pairing produces the basic curvature"},
        {"torsion-pairing-derivative-sharp", "identities",
         "pi^ij (covariant inner expression - S^c_jab mu_c) = 0",
         "the sharped derivative of the torsion pairing"},
        {"koszul-compatibility", "identities",
         "[grad mu_a, grad mu_b]_pi + C^c_ab grad mu_c = 0",
         "momentum gradients close under the Koszul bracket"},

        {"courant-jacobi", "courant",
         "[[e1,[[e2,e3]]]] - [[[[e1,e2]],e3]] - [[e2,[[e1,e3]]]] = 0",
         "the twisted bracket satisfies the Leibniz-Jacobi identity"},
        {"courant-anchor", "courant",
         "a([[e1,e2]]) f = a(e1) a(e2) f - a(e2) a(e1) f",
         "the anchor sends brackets to commutators of derivations"},
        {"courant-leibniz", "courant",
         "[[e1, f e2]] = f [[e1,e2]] + (a(e1) f) e2",
         "the bracket is a derivation in its second slot"},
        {"courant-self-pairing", "courant", "[[e,e]] = (1/2) D <e,e>",
         "the bracket's symmetric part is the pairing differential"},
        {"courant-invariance", "courant",
         "a(e1) <e2,e3> = <[[e1,e2]],e3> + <e2,[[e1,e3]]>",
         "the pairing is invariant under the bracket"},
        {"h-closed", "courant", "dH = 0",
         "advisory: the twist 3-form is closed", true},

        {"dirac-isotropy", "dirac", "<s_p, s_q> = 0 for all frame pairs",
         "the frame spans an isotropic subbundle"},
        {"dirac-involutivity", "dirac",
         "[[s_p, s_q]] lies in the frame span (least squares)",
         "the frame span is closed under the twisted bracket"},
        {"dirac-frame-rank", "dirac",
         "the frame has full column rank at sample points",
         "advisory: the frame is linearly independent where sampled", true},
        {"graph-bracket-closure", "dirac",
         "[[L(alpha), L(beta)]] = L([alpha, beta]_pi) for the bivector "
         "graph; [[u + w(u), v + w(v)]] = [u,v] + w([u,v]) for the 2-form "
         "graph",
         "graph sections close onto the graph of the induced bracket"},

        {"anchor-morphism", "morphisms",
         "sum_b Phi^b_a rho_B[b] - rho_A[a] = 0 and the bracket match, for "
         "Phi the anchor into the tangent algebroid",
         "the anchor is an algebroid morphism into the tangent algebroid"},
        {"morphism-tm-r", "morphisms",
         "e_a -> (rho_a, mu_a) is a morphism into TM + R of the 2-form",
         "the anchor-momentum pair intertwines brackets over TM + R"},
        {"morphism-cotangent", "morphisms",
         "e_a -> -grad mu_a is a morphism into the bivector algebroid",
         "momentum gradients intertwine brackets over the cotangent"},
        {"morphism-tstar-r", "morphisms",
         "e_a -> (-grad mu_a, mu_a) is a morphism into T*M + R of the "
         "bivector",
         "the gradient-momentum pair intertwines brackets over T*M + R"},
        {"morphism-graph-omega", "morphisms",
         "grad_i mu_a + rho_a^j w_ji = 0 per frame section",
         "(rho_a, -grad mu_a) lies in the graph of the 2-form"},
        {"morphism-graph-pi", "morphisms",
         "rho_a^i - pi^ij grad_j mu_a = 0 per frame section",
         "(rho_a, -grad mu_a) lies in the graph of the bivector"},
        {"poisson-map-momentum", "morphisms",
         "{psi_K, psi_L}_source - pi_target^{KL} o psi = 0 for "
         "psi(x, v) = (x, -grad_i mu_a v^i)",
         "the dual momentum-gradient map is a Poisson map onto the dual "
         "bundle"},
        {"dual-map-equivalence", "morphisms",
         "verdict(anchor morphism) == verdict(dual-anchor Poisson map)",
         "the bundle-level and dual-level anchor verdicts agree"},
        {"dirac-map-equivalence", "morphisms",
         "verdict(Poisson map) == verdict(graph-frame Dirac morphism)",
         "the Poisson-map and Dirac-frame verdicts of the same map agree"},

        {"master-equation-n", "graded", "{Theta_N, Theta_N} = 0",
         "the degree-3 generator on the shifted bundle squares to zero"},
        {"master-equation-m", "graded", "{Theta_M, Theta_M} = 0",
         "the degree-3 generator on the big graded space squares to zero"},
        {"homological-a1", "graded", "Q^2 = 0 on the shifted bundle",
         "the induced odd vector field on the shifted bundle squares to "
         "zero"},
        {"homological-tstar-r", "graded",
         "Q^2 = 0 on the shifted dual extension",
         "the induced odd vector field on the shifted dual squares to zero"},
        {"derived-bracket-reproduction-n", "graded",
         "-{{F, Theta_N}, G} matches the section bracket with anchor-action "
         "scalar part",
         "the derived bracket reproduces the algebroid bracket"},
        {"derived-bracket-reproduction-m", "graded",
         "{{U, Theta_M}, V} matches the dual extension bracket on degree-1 "
         "functions",
         "the derived bracket reproduces the T*M + R bracket"},
        {"graded-poisson-map", "graded",
         "substituting p_a -> -grad_i mu_a eta^i + mu_a s intertwines the "
         "derived brackets",
         "the momentum substitution is a map of derived brackets"},
    };
    return registry;
}

const CheckInfo* find_check(const std::string& name) {
    static const std::vector<std::pair<std::string, std::string>> aliases{
        {"s1", "momentum-s1"}, {"s2", "momentum-s2"}, {"s3", "momentum-s3"},
        {"p1", "momentum-p1"}, {"p2", "momentum-p2"}, {"p3", "momentum-p3"},
    };
    std::string target = name;
    for (const auto& [alias, id] : aliases) {
        if (name == alias) {
            target = id;
            break;
        }
    }
    for (const CheckInfo& info : check_registry()) {
        if (info.id == target) return &info;
    }
    return nullptr;
}

}  // namespace momsec
