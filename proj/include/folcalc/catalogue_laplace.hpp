#pragma once

// Laplacian and Weitzenboeck entries of the identity catalogue.

#include "folcalc/catalogue.hpp"

namespace folcalc {
namespace cat {

// ------------------------------------------------------------- sample helpers

/// Random combinations of a kernel basis; empty when the kernel is trivial.
inline std::vector<BasicForm> kernel_samples(const ModelPtr& m, OperatorId id, const std::vector<Bidegree>& dom,
                                             std::uint64_t seed, int count) {
    std::vector<BasicForm> out;
    std::vector<BasicForm> basis;
    for (const auto& bd : dom) {
        const auto A = assemble(id, m, bd);
        const auto K = kernel(A);
        for (int i = 0; i < K.dim(); ++i) basis.push_back(K.form(m, i));
    }
    if (basis.empty()) return out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int k = 0; k < count; ++k) {
        BasicForm phi = BasicForm::zero(m);
        for (const auto& b : basis) phi += cplx(nd(rng), nd(rng)) * b;
        out.push_back(std::move(phi));
    }
    return out;
}

inline VectorXc flatten(const BasicForm& f) {
    Eigen::Index n = 0;
    for (int b = 0; b < f.num_blocks(); ++b) n += f.block(b).size();
    VectorXc v(n);
    n = 0;
    for (int b = 0; b < f.num_blocks(); ++b) {
        v.segment(n, f.block(b).size()) = f.block(b);
        n += f.block(b).size();
    }
    return v;
}

/// Bandwidth that keeps pointwise products inside the band limit.
inline int product_bandwidth(const ModelFoliation& m) { return std::max(1, m.band_limit / 2); }

inline BasicForm pin(const BasicForm& a, const BasicForm& b) { return pointwise_inner(a, b); }

/// Sum over a of |nabla_{bar V_a} phi|^2 + |nabla_{V_a} phi|^2.
inline BasicForm gradient_energy(const BasicForm& phi) {
    const auto& f = phi.context()->frame();
    const int n = f.n();
    BasicForm out(phi.context());
    for (int i = 0; i < 2 * n; ++i) {
        const BasicForm g = nabla_constant(f.frame_vector(i), phi);
        out += pin(g, g);
    }
    return out;
}

/// Constant-coefficient pointwise operator applied to a form.
inline BasicForm apply_pointwise(const MatrixXc& lam, const BasicForm& phi) {
    return apply_blockwise(phi, [&](BlockOperators& B) { return B.lift(lam); });
}

/// sum_a R^Q(bar V_a, V_a) at the exterior-algebra level.
inline MatrixXc rq_pair_sum(const FrameData& f) {
    MatrixXc out = MatrixXc::Zero(f.algebra().dim(), f.algebra().dim());
    for (int a = 0; a < f.n(); ++a) out += f.curvature(f.frame_vector(f.n() + a), f.frame_vector(a));
    return out;
}

/// sum_a omega^a ^ (nabla_{V_a} H^{1,0}) int, at the exterior-algebra level.
inline MatrixXc h10_gradient_term(const FrameData& f) {
    const auto& alg = f.algebra();
    MatrixXc out = MatrixXc::Zero(alg.dim(), alg.dim());
    for (int a = 0; a < f.n(); ++a)
        out += alg.eps(a) * alg.interior(f.nabla_vector(f.frame_vector(a), f.H10()));
    return out;
}

/// Pointwise-identity driver: samples forms, evaluates both sides as functions.
inline CustomOutcome pointwise_identity(const ModelPtr& m, const std::vector<BasicForm>& samples,
                                        const std::function<std::pair<BasicForm, BasicForm>(const BasicForm&)>& sides) {
    CustomOutcome o;
    for (const auto& phi : samples) {
        const auto [l, r] = sides(phi);
        CustomOutcome one = compare(flatten(l), flatten(r));
        one.abs_residual /= std::max(1e-300, phi.norm_sq());
        absorb(o, one);
    }
    (void)m;
    return o;
}

inline std::vector<BasicForm> random_samples(const ModelPtr& m, const std::string& id, std::uint64_t seed, int count,
                                             std::vector<Bidegree> (*dom)(int)) {
    std::vector<BasicForm> out;
    const auto bds = dom ? dom(m->n) : all_bidegrees(m->n);
    for (int k = 0; k < count; ++k)
        out.push_back(random_form(m, {bds[static_cast<size_t>(k) % bds.size()]}, detail::mix_seed(seed, id, m->name, k),
                                  product_bandwidth(*m)));
    return out;
}

// --------------------------------------------------------------- laplacians

inline std::vector<IdentitySpec> laplacian_entries() {
    const std::string S = "laplacians";
    std::vector<IdentitySpec> v;
    const Expr dB = op(OperatorId::partial_B), dbB = op(OperatorId::partialbar_B);
    const Expr box = op(OperatorId::box_B), boxbar = op(OperatorId::boxbar_B), Lap = op(OperatorId::Delta_B);
    const Expr iH10 = iota("H^{1,0} int", H10(), {{-1, 0}});
    const Expr iH01 = iota("H^{0,1} int", H01(), {{0, -1}});
    const Expr ik = iota("kappa# int", ksharp());
    const Expr iJk = iota("(J kappa)# int", Jksharp());

    v.push_back(eq("LaplaceForm1", {"LaplaceForm1", "formulaLemma"}, S, box,
                   boxbar + dB * iH10 + iH10 * dB - dbB * iH01 - iH01 * dbB));
    v.push_back(eq("LaplaceForm2", {"LaplaceForm2", "formulaLemma"}, S, Lap,
                   box + boxbar + dB * iH01 + iH01 * dB + dbB * iH10 + iH10 * dbB));
    v.push_back(eq("realop", {"realop", "formulaLemma"}, S,
                   op(OperatorId::partialbar_T_star) * dbB + dbB * op(OperatorId::partialbar_T_star) -
                       op(OperatorId::partial_T_star) * dB - dB * op(OperatorId::partial_T_star),
                   zero()));

    {
        auto e = eq("LaplaceBoxLaplaceForm", {"LaplaceBoxLaplaceForm", "Laplacefcns"}, S, Lap, cplx(2.0) * boxbar);
        e.expected_fail_nontaut = true;
        v.push_back(e);
        auto e2 = eq("LaplaceBoxLaplaceForm.box", {"LaplaceBoxLaplaceForm"}, S, Lap, cplx(2.0) * box);
        e2.expected_fail_nontaut = true;
        v.push_back(e2);
    }

    const Expr lie = op(OperatorId::lie_H10);
    v.push_back(eq("CorLaplaceType.r0", {"CorLaplaceType", "FirstCorForm"}, S, Lap,
                   cplx(2.0) * boxbar + lie - iH01 * dbB, Applicability::kaehler, type_r0));
    v.push_back(eq("CorLaplaceType.rn", {"CorLaplaceType", "2CorForm"}, S, Lap,
                   cplx(2.0) * boxbar + dB * ik + ik * dB - dbB * iH01, Applicability::kaehler, type_rn));
    v.push_back(eq("CorLaplaceType.0s", {"CorLaplaceType", "neededCorForm"}, S, Lap,
                   cplx(2.0) * boxbar + paren(dB - dbB) * iH01 + iH01 * paren(dB - dbB) + iH10 * dB,
                   Applicability::kaehler, type_0s));
    v.push_back(eq("CorLaplaceType.ns", {"CorLaplaceType", "3CorForm"}, S, Lap,
                   cplx(2.0) * boxbar - I() * (iJk * dbB) - I() * (dbB * iJk) + dB * iH10, Applicability::kaehler,
                   type_ns));

    const Expr DJk = nab("nabla_{(J kappa)#}", Jksharp());
    v.push_back(eq("Laplacefcns.box", {"Laplacefcns"}, S, box, boxbar - I() * DJk, Applicability::kaehler, type_00));
    v.push_back(eq("Laplacefcns.sum", {"Laplacefcns"}, S, Lap, box + boxbar, Applicability::any, type_00));
    v.push_back(eq("Laplacefcns.realop", {"Laplacefcns"}, S, op(OperatorId::partialbar_T_star) * dbB,
                   op(OperatorId::partial_T_star) * dB, Applicability::kaehler, type_00));
    const Expr sb = op(OperatorId::star_bar);
    v.push_back(eq("starBarLaplaceForm", {"starBarLaplaceForm"}, S, sb * boxbar, op(OperatorId::box_T) * sb));
    v.push_back(eq("starBarLaplaceForm.box", {"starBarLaplaceForm"}, S, sb * box, op(OperatorId::boxbar_T) * sb));

    v.push_back(custom(
        "transholoLem", {"transholoLem"}, S,
        "Z of type (1,0) is holomorphic iff dbar Z int + Z int dbar = 0 (checked on H^{1,0}, V_1 and f V_1)",
        [](const ModelPtr& m, std::uint64_t seed, int) {
            const auto& f = ModelContext::of(m)->frame();
            std::vector<std::pair<std::string, ComplexVectorField>> Zs;
            Zs.emplace_back("H^{1,0}", ComplexVectorField::constant(m, f.H10()));
            Zs.emplace_back("V_1", ComplexVectorField::constant(m, f.frame_vector(0)));
            std::vector<BasicForm> comps(2 * m->n, BasicForm::zero(m));
            comps[0] = random_form(m, Bidegree{0, 0}, detail::mix_seed(seed, "transholoLem", m->name, 0), 1);
            Zs.emplace_back("f V_1", ComplexVectorField(comps, ComplexVectorField::Type::t10));
            CustomOutcome o;
            for (const auto& [name, Z] : Zs) {
                // the lemma concerns basic fields
                const BasicForm probe =
                    interior(Z, random_form(m, {Bidegree{1, 0}, Bidegree{0, 1}}, detail::mix_seed(seed, "probe", name, 0), 1));
                if (!probe.is_basic()) {
                    o.note += (o.note.empty() ? "" : ", ") + name + " not basic, skipped";
                    continue;
                }
                const auto rep = is_transversally_holomorphic(Z);
                if (!rep.verdicts_agree) {
                    o.residual = 1.0;
                    o.abs_residual = std::max(o.abs_residual, std::abs(rep.operator_residual - rep.direct_residual));
                }
                o.note += (o.note.empty() ? "" : ", ") + name + (rep.holomorphic ? " holomorphic" : " not holomorphic");
                ++o.samples;
            }
            return o;
        }));

    v.push_back(custom(
        "kappaHoloProp", {"kappaHoloProp"}, S,
        "kappa# automorphic and phi holomorphic of type (r,0): box_B phi = Delta_B phi and (partial_B partial_T* + partial_T* partial_B) phi = 0",
        [](const ModelPtr& m, std::uint64_t seed, int ens) {
            const auto& f = ModelContext::of(m)->frame();
            CustomOutcome o;
            if (!is_transversally_holomorphic(ComplexVectorField::constant(m, f.H10())).holomorphic) {
                o.applicable = false;
                o.note = "kappa# is not transversally automorphic";
                return o;
            }
            const auto samples = kernel_samples(m, OperatorId::partialbar_B, type_r0(m->n), seed, ens);
            for (const auto& phi : samples) {
                absorb(o, compare(flatten(apply(OperatorId::box_B, phi)), flatten(apply(OperatorId::Delta_B, phi))));
                const BasicForm z = apply(OperatorId::partial_B, apply(OperatorId::partial_T_star, phi)) +
                                    apply(OperatorId::partial_T_star, apply(OperatorId::partial_B, phi));
                absorb(o, compare(flatten(z), VectorXc::Zero(flatten(z).size())));
            }
            o.note = std::to_string(samples.size()) + " holomorphic (r,0) samples";
            return o;
        }));

    v.push_back(custom("(r,0)Prop", {"(r,0)Prop"}, S, "phi holomorphic of type (r,0): Delta_B phi = L_{H^{1,0}} phi",
                       [](const ModelPtr& m, std::uint64_t seed, int ens) {
                           CustomOutcome o;
                           const auto samples = kernel_samples(m, OperatorId::partialbar_B, type_r0(m->n), seed, ens);
                           for (const auto& phi : samples)
                               absorb(o, compare(flatten(apply(OperatorId::Delta_B, phi)),
                                                 flatten(apply(OperatorId::lie_H10, phi))));
                           o.note = std::to_string(samples.size()) + " holomorphic (r,0) samples";
                           return o;
                       }));

    v.push_back(custom("basicholo(r,0)", {"basicholo(r,0)"}, S,
                       "minimal case: on type (r,0), ker Delta_B = ker dbar_B",
                       [](const ModelPtr& m, std::uint64_t, int) {
                           CustomOutcome o;
                           for (int r = 0; r <= m->n; ++r) {
                               const auto H = kernel(assemble(OperatorId::Delta_B, m, Bidegree{r, 0}));
                               const auto K = kernel(assemble(OperatorId::partialbar_B, m, Bidegree{r, 0}));
                               absorb(o, compare(VectorXc::Constant(1, double(H.dim())),
                                                 VectorXc::Constant(1, double(K.dim()))));
                               // every harmonic form is holomorphic
                               for (int i = 0; i < H.dim(); ++i) {
                                   const BasicForm h = H.form(m, i);
                                   const BasicForm z = apply(OperatorId::partialbar_B, h);
                                   absorb(o, compare(flatten(z), VectorXc::Zero(flatten(z).size())));
                               }
                               o.note += "h^{" + std::to_string(r) + ",0}=" + std::to_string(H.dim()) + " ";
                           }
                           return o;
                       },
                       Applicability::minimal_kaehler));
    return v;
}

// ------------------------------------------------------------- weitzenboeck

inline std::vector<IdentitySpec> weitzenboeck_entries() {
    const std::string S = "weitzenboeck";
    std::vector<IdentitySpec> v;
    const Expr rough = op(OperatorId::roughT), roughbar = op(OperatorId::roughbarT);
    const Expr box = op(OperatorId::box_B), boxbar = op(OperatorId::boxbar_B);

    // sum_a R(bar V_a, V_a) and friends, built from the frame curvature
    const Expr rq = term("sum_a R(bar V_a, V_a)", kKeep, [](BlockOperators& B) -> MatrixXc {
        return B.lift(rq_pair_sum(B.frame()));
    });
    const Expr rq_rev = term("sum_a R(V_a, bar V_a)", kKeep, [](BlockOperators& B) -> MatrixXc {
        return -B.lift(rq_pair_sum(B.frame()));
    });
    v.push_back(eq("DeltaTSquareForm", {"DeltaTSquareForm"}, S, rough,
                   roughbar + nab("nabla_{H^{0,1} - H^{1,0}}", [](const FrameData& f) -> VectorXc {
                       return f.H01() - f.H10();
                   }) + rq));

    // rough Laplacians as sums of squares: the frame need not be basic, so the
    // adjoint of nabla_{bar V_a} is taken on the full space and projected once
    const auto sum_sq = [](bool bar) {
        return term(bar ? "sum_a (nabla_{V_a})^* nabla_{V_a}" : "sum_a (nabla_{bar V_a})^* nabla_{bar V_a}", kKeep,
                    [bar](BlockOperators& B) -> MatrixXc {
                        const int n = B.frame().n();
                        MatrixXc out = MatrixXc::Zero(B.full_dim(), B.full_dim());
                        for (int a = 0; a < n; ++a) {
                            const MatrixXc N = B.nabla_frame(bar ? a : n + a);
                            out += N.adjoint() * N;
                        }
                        VectorXc p = VectorXc::Zero(B.full_dim());
                        for (int i : B.basic_indices()) p[i] = 1.0;
                        return p.asDiagonal() * out;
                    });
    };
    v.push_back(eq("RoughDefs", {"RoughDefs"}, S, rough, sum_sq(false)));
    v.push_back(eq("RoughDefs.bar", {"RoughDefs"}, S, roughbar, sum_sq(true)));
    v.push_back(eq("RoughSelfAdjoint", {"RoughSelfAdjoint"}, S, adjoint(rough), rough));
    v.push_back(eq("RoughSelfAdjoint.bar", {"RoughSelfAdjoint"}, S, adjoint(roughbar), roughbar));
    v.push_back(custom("RoughSelfAdjoint.positive", {"RoughSelfAdjoint"}, S,
                       "<nabla_T* nabla_T phi, phi> = sum_a ||nabla_{bar V_a} phi||^2 >= 0",
                       [](const ModelPtr& m, std::uint64_t seed, int ens) {
                           const auto& f = ModelContext::of(m)->frame();
                           CustomOutcome o;
                           for (int k = 0; k < ens; ++k) {
                               const auto bds = all_bidegrees(m->n);
                               const BasicForm phi =
                                   random_form(m, {bds[k % bds.size()]}, detail::mix_seed(seed, "rough+", m->name, k));
                               for (bool bar : {false, true}) {
                                   const cplx l = inner(apply(bar ? OperatorId::roughbarT : OperatorId::roughT, phi), phi);
                                   double r = 0;
                                   for (int a = 0; a < m->n; ++a)
                                       r += nabla_constant(f.frame_vector(bar ? a : m->n + a), phi).norm_sq();
                                   absorb(o, compare(VectorXc::Constant(1, l), VectorXc::Constant(1, r)));
                               }
                           }
                           return o;
                       }));

    // boxBar: sum_{a,b} bar w^a ^ bar V_b int R(V_b, bar V_a) + sum_a bar w^a ^ (nabla_{bar V_a} H^{0,1}) int
    const Expr curvbar = term("sum bar w^a ^ bar V_b int R(V_b, bar V_a)", kKeep, [](BlockOperators& B) -> MatrixXc {
        const auto& f = B.frame();
        const int n = f.n();
        MatrixXc out = MatrixXc::Zero(B.full_dim(), B.full_dim());
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                out += B.eps(n + a) * B.iota(n + b) * B.curvature(f.frame_vector(b), f.frame_vector(n + a));
        return out;
    });
    const Expr gradbar = term("sum bar w^a ^ (nabla_{bar V_a} H^{0,1}) int", kKeep, [](BlockOperators& B) -> MatrixXc {
        const auto& f = B.frame();
        const int n = f.n();
        MatrixXc out = MatrixXc::Zero(B.full_dim(), B.full_dim());
        for (int a = 0; a < n; ++a)
            out += B.eps(n + a) * B.interior(f.nabla_vector(f.frame_vector(n + a), f.H01()));
        return out;
    });
    const Expr curvhol = term("sum w^a ^ V_b int R(bar V_b, V_a)", kKeep, [](BlockOperators& B) -> MatrixXc {
        const auto& f = B.frame();
        const int n = f.n();
        MatrixXc out = MatrixXc::Zero(B.full_dim(), B.full_dim());
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                out += B.eps(a) * B.iota(b) * B.curvature(f.frame_vector(n + b), f.frame_vector(a));
        return out;
    });
    const Expr gradhol = term("sum w^a ^ (nabla_{V_a} H^{1,0}) int", kKeep, [](BlockOperators& B) -> MatrixXc {
        return B.lift(h10_gradient_term(B.frame()));
    });
    v.push_back(eq("boxBar", {"boxBar", "WeitzenbockKahler"}, S, boxbar, rough + curvbar + gradbar));
    v.push_back(eq("boxAfterBoxBar", {"boxAfterBoxBar", "WeitzenbockKahler"}, S, box, roughbar + curvhol + gradhol));

    v.push_back(eq("boxBarT", {"boxBarT"}, S, boxbar, rough, Applicability::kaehler, type_r0));
    v.push_back(eq("conjBoxBarT", {"conjBoxBarT"}, S, box, roughbar, Applicability::kaehler, type_0s));

    const Expr div01 = scalar("div(H^{0,1})", [](const FrameData& f) { return f.divergence(f.H01()); });
    const Expr div10 = scalar("div(H^{1,0})", [](const FrameData& f) { return f.divergence(f.H10()); });
    const Expr DJk = nab("nabla_{(J kappa)#}", Jksharp());
    v.push_back(eq("boxBarrn1", {"boxBarrn1"}, S, boxbar, rough + rq_rev + div01, Applicability::kaehler, type_rn));
    // sign of the (J kappa)# term fixed by i J kappa# = H^{0,1} - H^{1,0}; the opposite
    // sign fails on the Carriere model (see identities_test)
    v.push_back(eq("boxBarrn2", {"boxBarrn2"}, S, boxbar, roughbar + I() * DJk + div01, Applicability::kaehler, type_rn));
    v.push_back(eq("boxBarrn2Conj", {"boxBarrn2Conj"}, S, box, rough - I() * DJk + div10, Applicability::kaehler,
                   type_ns));

    // the anti-holomorphic pairing that reduces to sum_a R(V_a, bar V_a) on (r,n)
    v.push_back(eq("RQForm", {"RQForm"}, S, curvbar, rq_rev, Applicability::kaehler, type_rn));

    v.push_back(custom(
        "LaplaceBDeltaTProp", {"LaplaceBDeltaTProp"}, S,
        "1/2 Delta_B |phi|^2 = <nabla_T* nabla_T phi, phi> + <phi, bar nabla_T* bar nabla_T phi> - sum(|nabla_{bar V_a} phi|^2 + |nabla_{V_a} phi|^2) + 1/2 (H^{1,0} - H^{0,1}) |phi|^2",
        [](const ModelPtr& m, std::uint64_t seed, int ens) {
            const auto& f = ModelContext::of(m)->frame();
            return pointwise_identity(m, random_samples(m, "LaplaceBDeltaTProp", seed, ens, nullptr),
                                      [&](const BasicForm& phi) {
                                          const BasicForm n2 = pin(phi, phi);
                                          const BasicForm l = 0.5 * apply(OperatorId::Delta_B, n2);
                                          const BasicForm r = pin(apply(OperatorId::roughT, phi), phi) +
                                                              pin(phi, apply(OperatorId::roughbarT, phi)) -
                                                              gradient_energy(phi) +
                                                              0.5 * nabla_constant(f.H10() - f.H01(), n2);
                                          return std::make_pair(l, r);
                                      });
        }));

    v.push_back(custom(
        "Laplacer0Cor", {"Laplacer0Cor"}, S,
        "type (r,0): -1/2 Delta_B |phi|^2 = -<boxbar phi, phi> - <phi, boxbar phi> + sum(|nabla phi|^2) + sum <phi, R(bar V_a, V_a) phi> - 1/2 <nabla_{H^{1,0}-H^{0,1}} phi, phi> - 1/2 <phi, nabla_{H^{1,0}-H^{0,1}} phi>",
        [](const ModelPtr& m, std::uint64_t seed, int ens) {
            const auto& f = ModelContext::of(m)->frame();
            const MatrixXc R = rq_pair_sum(f);
            return pointwise_identity(m, random_samples(m, "Laplacer0Cor", seed, ens, type_r0),
                                      [&](const BasicForm& phi) {
                                          const BasicForm bb = apply(OperatorId::boxbar_B, phi);
                                          const BasicForm dh = nabla_constant(f.H10() - f.H01(), phi);
                                          const BasicForm l = -0.5 * apply(OperatorId::Delta_B, pin(phi, phi));
                                          const BasicForm r = -1.0 * pin(bb, phi) - pin(phi, bb) + gradient_energy(phi) +
                                                              pin(phi, apply_pointwise(R, phi)) - 0.5 * pin(dh, phi) -
                                                              0.5 * pin(phi, dh);
                                          return std::make_pair(l, r);
                                      });
        }));

    const auto harmonic_r0 = [](const ModelPtr& m, std::uint64_t seed, int ens) {
        std::vector<Bidegree> dom;
        for (int r = 0; r <= m->n; ++r) dom.push_back({r, 0});
        return kernel_samples(m, OperatorId::Delta_B, dom, seed, ens);
    };
    v.push_back(custom(
        "Laplacer0Cor2", {"Laplacer0Cor2"}, S,
        "harmonic (r,0): -1/2 Delta_B |phi|^2 = sum(|nabla phi|^2) + <phi, sum R(bar V_a, V_a) phi> + 1/2 sum {<w^a ^ (nabla_{V_a} H^{1,0}) int phi, phi> + conj}",
        [harmonic_r0](const ModelPtr& m, std::uint64_t seed, int ens) {
            const auto& f = ModelContext::of(m)->frame();
            const MatrixXc R = rq_pair_sum(f), G = h10_gradient_term(f);
            const auto samples = harmonic_r0(m, seed, ens);
            CustomOutcome o = pointwise_identity(m, samples, [&](const BasicForm& phi) {
                const BasicForm g = apply_pointwise(G, phi);
                const BasicForm l = -0.5 * apply(OperatorId::Delta_B, pin(phi, phi));
                const BasicForm r =
                    gradient_energy(phi) + pin(phi, apply_pointwise(R, phi)) + 0.5 * (pin(g, phi) + pin(phi, g));
                return std::make_pair(l, r);
            });
            o.note = std::to_string(samples.size()) + " harmonic (r,0) samples";
            return o;
        }));

    v.push_back(custom(
        "AnotherLaplaceCor", {"AnotherLaplaceCor", "10Remark"}, S,
        "harmonic (r,0): the curvature term equals sum_i Ric(E_{a_i}, E_{a_i}) |phi|^2",
        [harmonic_r0](const ModelPtr& m, std::uint64_t seed, int ens) {
            const auto& f = ModelContext::of(m)->frame();
            const auto& alg = f.algebra();
            const MatrixXc G = h10_gradient_term(f);
            // Ricci weight of each (r,0) monomial
            MatrixXc Ric = MatrixXc::Zero(alg.dim(), alg.dim());
            for (int mask = 0; mask < alg.dim(); ++mask) {
                double w = 0;
                for (int a = 0; a < m->n; ++a)
                    if (mask & (1 << a)) w += m->curvature.ricci(a, a);
                Ric(mask, mask) = w;
            }
            const auto samples = harmonic_r0(m, seed, ens);
            CustomOutcome o = pointwise_identity(m, samples, [&](const BasicForm& phi) {
                const BasicForm g = apply_pointwise(G, phi);
                const BasicForm l = -0.5 * apply(OperatorId::Delta_B, pin(phi, phi));
                const BasicForm r =
                    gradient_energy(phi) + pin(phi, apply_pointwise(Ric, phi)) + 0.5 * (pin(g, phi) + pin(phi, g));
                return std::make_pair(l, r);
            });
            o.note = std::to_string(samples.size()) + " harmonic (r,0) samples";
            return o;
        }));

    v.push_back(custom("10Remark", {"10Remark"}, S,
                       "sum_a R(bar V_a, V_a) is Hermitian on (1,0) forms with eigenvalue Ric(E_a, E_a) on omega^a",
                       [](const ModelPtr& m, std::uint64_t, int) {
                           const auto& f = ModelContext::of(m)->frame();
                           const auto& alg = f.algebra();
                           const MatrixXc R = rq_pair_sum(f);
                           const int n = m->n;
                           MatrixXc P(n, n);
                           for (int a = 0; a < n; ++a)
                               for (int b = 0; b < n; ++b) P(a, b) = R(1 << a, 1 << b);
                           CustomOutcome o = compare(P.reshaped(), P.adjoint().reshaped());
                           VectorXc got(n), want(n);
                           for (int a = 0; a < n; ++a) {
                               got[a] = (alg.generator(a).adjoint() * (R * alg.generator(a)))(0, 0);
                               want[a] = m->curvature.ricci(a, a);
                           }
                           absorb(o, compare(got, want));
                           return o;
                       }));
    return v;
}

}  // namespace cat
}  // namespace folcalc
