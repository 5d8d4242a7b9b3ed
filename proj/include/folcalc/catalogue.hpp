#pragma once

// The identity catalogue, one function per suite.

#include "folcalc/identities.hpp"

namespace folcalc {
namespace cat {

using namespace expr;
using VecFn = std::function<VectorXc(const FrameData&)>;
using Shifts = std::vector<std::pair<int, int>>;

const Shifts kLower = {{-1, 0}, {0, -1}};
const Shifts kRaise = {{1, 0}, {0, 1}};
const Shifts kKeep = {{0, 0}};

/// Fixed generic complex vector used for pointwise identities in X.
inline VectorXc probe_vector(const FrameData& f, int salt = 0) {
    VectorXc X(f.N());
    for (int i = 0; i < f.N(); ++i) X[i] = cplx(std::cos(1.3 * i + 0.4 + salt), std::sin(0.7 * i + 1.1 + 2.0 * salt));
    return X;
}

inline Expr iota(std::string t, VecFn X, Shifts sh = kLower) {
    return term(std::move(t), std::move(sh), [X](BlockOperators& B) -> MatrixXc { return B.interior(X(B.frame())); });
}
inline Expr eps(std::string t, VecFn lam, Shifts sh = kRaise) {
    return term(std::move(t), std::move(sh), [lam](BlockOperators& B) -> MatrixXc { return B.wedge(lam(B.frame())); });
}
inline Expr nab(std::string t, VecFn X) {
    return term(std::move(t), kKeep, [X](BlockOperators& B) -> MatrixXc { return B.nabla(X(B.frame())); });
}
inline Expr curv(std::string t, VecFn X, VecFn Y) {
    return term(std::move(t), kKeep,
                [X, Y](BlockOperators& B) -> MatrixXc { return B.curvature(X(B.frame()), Y(B.frame())); });
}
inline Expr scalar(std::string t, std::function<cplx(const FrameData&)> c) {
    return term(std::move(t), kKeep, [c](BlockOperators& B) -> MatrixXc { return c(B.frame()) * B.identity(); });
}

inline VecFn H10() { return [](const FrameData& f) { return f.H10(); }; }
inline VecFn H01() { return [](const FrameData& f) { return f.H01(); }; }
inline VecFn ksharp() { return [](const FrameData& f) { return f.kappa_sharp(); }; }
inline VecFn Jksharp() { return [](const FrameData& f) { return f.Jkappa_sharp(); }; }
inline VecFn frame_vec(int i) { return [i](const FrameData& f) { return f.frame_vector(i); }; }

/// Diagonal operator counting holomorphic (r) or antiholomorphic (s) degree.
inline Expr number_op(bool anti) {
    return term(anti ? "N_s" : "N_r", kKeep, [anti](BlockOperators& B) -> MatrixXc {
        const auto& alg = B.frame().algebra();
        MatrixXc D = MatrixXc::Zero(alg.dim(), alg.dim());
        for (int m = 0; m < alg.dim(); ++m) {
            const auto bd = alg.bidegree(static_cast<std::uint32_t>(m));
            D(m, m) = anti ? bd.s : bd.r;
        }
        return B.lift(D);
    });
}

/// (-1)^degree.
inline Expr parity() {
    return term("(-1)^deg", kKeep, [](BlockOperators& B) -> MatrixXc {
        const auto& alg = B.frame().algebra();
        MatrixXc D = MatrixXc::Zero(alg.dim(), alg.dim());
        for (int m = 0; m < alg.dim(); ++m) D(m, m) = alg.degree(static_cast<std::uint32_t>(m)) % 2 ? -1.0 : 1.0;
        return B.lift(D);
    });
}

/// d from structure constants only.
inline Expr d_struct() {
    return term("d(structure)", kRaise, [](BlockOperators& B) -> MatrixXc { return B.d_structure(); });
}

/// Basic-space Hermitian adjoint P E^H P; the per-block bases are orthonormal.
inline Expr adjoint(const Expr& e) {
    return {e.text + "^H",
            [img = e.image](Bidegree in, int n) {
                std::set<Bidegree> out;
                for (const auto& b : all_bidegrees(n))
                    if (img(b, n).count(in)) out.insert(b);
                return out;
            },
            [bld = e.build](BlockOperators& B) -> MatrixXc {
                VectorXc p = VectorXc::Zero(B.full_dim());
                for (int i : B.basic_indices()) p[i] = 1.0;
                return p.asDiagonal() * bld(B).adjoint() * p.asDiagonal();
            }};
}

/// Pointwise Hermitian adjoint (no basic projection), for algebraic operators.
inline Expr pointwise_adjoint(const Expr& e) {
    Expr a = adjoint(e);
    a.build = [bld = e.build](BlockOperators& B) -> MatrixXc { return bld(B).adjoint(); };
    return a;
}

inline IdentitySpec eq(std::string id, std::vector<std::string> refs, std::string suite, Expr l, Expr r,
                       Applicability a = Applicability::any, std::vector<Bidegree> (*dom)(int) = nullptr) {
    IdentitySpec s;
    s.id = std::move(id);
    s.refs = std::move(refs);
    s.suite = std::move(suite);
    s.statement = l.text + " = " + r.text;
    s.applies = a;
    s.domain = dom;
    s.lhs = std::move(l);
    s.rhs = std::move(r);
    return s;
}

inline IdentitySpec custom(std::string id, std::vector<std::string> refs, std::string suite, std::string statement,
                           std::function<CustomOutcome(const ModelPtr&, std::uint64_t, int)> f,
                           Applicability a = Applicability::any, double thr = 1e-9) {
    IdentitySpec s;
    s.id = std::move(id);
    s.refs = std::move(refs);
    s.suite = std::move(suite);
    s.statement = std::move(statement);
    s.applies = a;
    s.custom = std::move(f);
    s.threshold = thr;
    return s;
}

inline std::vector<Bidegree> type_r0(int n) {
    std::vector<Bidegree> v;
    for (int r = 0; r <= n; ++r) v.push_back({r, 0});
    return v;
}
inline std::vector<Bidegree> type_0s(int n) {
    std::vector<Bidegree> v;
    for (int s = 0; s <= n; ++s) v.push_back({0, s});
    return v;
}
inline std::vector<Bidegree> type_rn(int n) {
    std::vector<Bidegree> v;
    for (int r = 0; r <= n; ++r) v.push_back({r, n});
    return v;
}
inline std::vector<Bidegree> type_ns(int n) {
    std::vector<Bidegree> v;
    for (int s = 0; s <= n; ++s) v.push_back({n, s});
    return v;
}
inline std::vector<Bidegree> type_00(int) { return {{0, 0}}; }
inline std::vector<Bidegree> type_1form(int) { return {{1, 0}, {0, 1}}; }

inline cplx I() { return cplx(0.0, 1.0); }

/// Residual of two vectors under the catalogue normalization.
inline CustomOutcome compare(const VectorXc& l, const VectorXc& r, int samples = 1) {
    CustomOutcome o;
    o.residual = detail::residual_of(l, r);
    o.abs_residual = (l - r).norm();
    o.samples = samples;
    return o;
}

inline void absorb(CustomOutcome& acc, const CustomOutcome& o) {
    acc.residual = std::max(acc.residual, o.residual);
    acc.abs_residual = std::max(acc.abs_residual, o.abs_residual);
    acc.samples += o.samples;
    if (!o.note.empty()) acc.note += (acc.note.empty() ? "" : "; ") + o.note;
}

// ---------------------------------------------------------------- structure

inline std::vector<IdentitySpec> structure_entries() {
    const std::string S = "structure";
    std::vector<IdentitySpec> v;
    const auto kappa = [](const FrameData& f) { return f.kappa_form(); };
    const auto k10 = [](const FrameData& f) { return f.kappa10(); };
    const auto k01 = [](const FrameData& f) { return f.kappa01(); };

    v.push_back(eq("dBdTFormulas", {"dBdTFormulas"}, S, op(OperatorId::d_T),
                   op(OperatorId::d_B) - eps("eps(kappa_B)", kappa)));
    v.push_back(eq("dBdTFormulas.structure", {"dBdTFormulas"}, S, op(OperatorId::d_B), d_struct()));
    v.push_back(eq("dBdTFormulas.split", {"dBdTFormulas", "kappaComponents"}, S, op(OperatorId::d_T),
                   op(OperatorId::partial_T) + op(OperatorId::partialbar_T)));

    // frame formulas for the Dolbeault pieces against the type components of d
    {
        Expr sum = zero();
        Expr sumh = zero();
        for (int a = 0; a < 4; ++a) {
            const auto pick = [a](bool anti) {
                return term("", kKeep, [a, anti](BlockOperators& B) -> MatrixXc {
                    const int n = B.frame().n();
                    if (a >= n) return MatrixXc::Zero(B.full_dim(), B.full_dim());
                    return B.eps(anti ? n + a : a) * B.nabla_frame(anti ? n + a : a);
                });
            };
            sum = sum + pick(true);
            sumh = sumh + pick(false);
        }
        sum.text = "sum_a bar omega^a ^ nabla_{bar V_a}";
        sum.image = shifts({{0, 1}});
        sumh.text = "sum_a omega^a ^ nabla_{V_a}";
        sumh.image = shifts({{1, 0}});
        Expr dbar = comm(number_op(true), d_struct());
        dbar.text = "(0,1) part of d";
        dbar.image = shifts({{0, 1}});
        Expr dhol = comm(number_op(false), d_struct());
        dhol.text = "(1,0) part of d";
        dhol.image = shifts({{1, 0}});
        v.push_back(eq("partialBForm", {"partialBForm"}, S, sum, dbar));
        v.push_back(eq("partialBForm.holomorphic", {"partialBForm"}, S, sumh, dhol));
        v.push_back(eq("partialBForm.engine", {"partialBForm"}, S, op(OperatorId::partialbar_B), dbar));
    }

    {
        Expr half = eps("1/2 (kappa + i J kappa)", [](const FrameData& f) -> VectorXc {
            const VectorXc k = f.kappa_form();
            return 0.5 * (k + I() * (f.Jop() * k));
        });
        v.push_back(eq("kappaComponents", {"kappaComponents"}, S, eps("eps(kappa^{1,0})", k10, {{1, 0}}), half));
        v.push_back(eq("kappaComponents.conj", {"kappaComponents"}, S, eps("eps(kappa^{0,1})", k01, {{0, 1}}),
                       eps("eps(conj kappa^{1,0})",
                           [](const FrameData& f) -> VectorXc {
                               // kappa^{1,0} is a 1-form: conjugate mask by mask
                               const VectorXc k = f.kappa10();
                               VectorXc out = VectorXc::Zero(k.size());
                               for (int m = 0; m < k.size(); ++m)
                                   if (k[m] != cplx{})
                                       out[f.conj_mask(m)] += std::conj(k[m]) * f.conj_sign(m);
                               return out;
                           })));
    }

    v.push_back(eq("H10Defn", {"H10Defn"}, S, iota("H^{1,0} int", H10(), {{-1, 0}}),
                   cplx(0.5) * iota("kappa# int", ksharp()) - cplx(0.0, 0.5) * iota("(J kappa)# int", Jksharp())));
    v.push_back(eq("H10Defn.conj", {"H10Defn"}, S, iota("H^{0,1} int", H01(), {{0, -1}}),
                   iota("conj(H^{1,0}) int", [](const FrameData& f) { return f.conj_vector(f.H10()); })));

    // adjoints
    const auto sb = op(OperatorId::star_bar);
    v.push_back(eq("deltab", {"deltab", "deltabtformulas"}, S, op(OperatorId::delta_B),
                   cplx(-1.0) * (sb * op(OperatorId::d_T) * sb)));
    v.push_back(eq("deltab.T", {"deltab", "deltabtformulas"}, S, op(OperatorId::delta_T),
                   cplx(-1.0) * (sb * op(OperatorId::d_B) * sb)));
    v.push_back(eq("deltab.kappa", {"deltab"}, S, op(OperatorId::delta_B),
                   op(OperatorId::delta_T) + iota("kappa# int", ksharp())));
    v.push_back(eq("deltab.gram", {"deltab"}, S, op(OperatorId::delta_B), adjoint(d_struct())));
    v.push_back(eq("deltab.split", {"deltab"}, S, op(OperatorId::delta_B),
                   op(OperatorId::partial_B_star) + op(OperatorId::partialbar_B_star)));

    v.push_back(eq("starBarDeltaForm1", {"starBarDeltaForm1"}, S, op(OperatorId::partial_T_star),
                   cplx(-1.0) * (sb * op(OperatorId::partialbar_B) * sb)));
    v.push_back(eq("starBarDeltaForm1.bar", {"starBarDeltaForm1"}, S, op(OperatorId::partialbar_T_star),
                   cplx(-1.0) * (sb * op(OperatorId::partial_B) * sb)));
    v.push_back(eq("starBarDeltaForm2", {"starBarDeltaForm2"}, S, op(OperatorId::partial_B_star),
                   cplx(-1.0) * (sb * op(OperatorId::partialbar_T) * sb)));
    v.push_back(eq("starBarDeltaForm2.bar", {"starBarDeltaForm2"}, S, op(OperatorId::partialbar_B_star),
                   cplx(-1.0) * (sb * op(OperatorId::partial_T) * sb)));

    // frame-formula adjoints against Gram adjoints
    {
        Expr pts = zero(), pbts = zero();
        for (int a = 0; a < 4; ++a) {
            pts = pts + term("", {{-1, 0}}, [a](BlockOperators& B) -> MatrixXc {
                      const int n = B.frame().n();
                      if (a >= n) return MatrixXc::Zero(B.full_dim(), B.full_dim());
                      return -(B.iota(a) * B.nabla_frame(n + a));
                  });
            pbts = pbts + term("", {{0, -1}}, [a](BlockOperators& B) -> MatrixXc {
                       const int n = B.frame().n();
                       if (a >= n) return MatrixXc::Zero(B.full_dim(), B.full_dim());
                       return -(B.iota(n + a) * B.nabla_frame(a));
                   });
        }
        pts.text = "-sum_a V_a int nabla_{bar V_a}";
        pts.image = shifts({{-1, 0}});
        pbts.text = "-sum_a bar V_a int nabla_{V_a}";
        pbts.image = shifts({{0, -1}});
        v.push_back(eq("partialBadjointFormulasProp.T", {"partialBadjointFormulasProp"}, S, pts,
                       adjoint(op(OperatorId::partial_T))));
        v.push_back(eq("partialBadjointFormulasProp.Tbar", {"partialBadjointFormulasProp"}, S, pbts,
                       adjoint(op(OperatorId::partialbar_T))));
        v.push_back(eq("partialBadjointFormulasProp.B", {"partialBadjointFormulasProp"}, S,
                       pts + iota("H^{1,0} int", H10(), {{-1, 0}}), adjoint(op(OperatorId::partial_B))));
        v.push_back(eq("partialBadjointFormulasProp.Bbar", {"partialBadjointFormulasProp"}, S,
                       pbts + iota("H^{0,1} int", H01(), {{0, -1}}), adjoint(op(OperatorId::partialbar_B))));
    }

    // interior products of complex vectors
    const VecFn X = [](const FrameData& f) { return probe_vector(f); };
    const VecFn Xflat = [](const FrameData& f) { return f.flat(probe_vector(f)); };
    const VecFn Xflat_h = [](const FrameData& f) { return f.flat(f.conj_vector(probe_vector(f))); };
    v.push_back(eq("cpxIntProd", {"cpxIntProd"}, S, pointwise_adjoint(eps("eps(X^flat)", Xflat_h)), iota("X int", X)));
    v.push_back(eq("cpxIntProd.dual", {"cpxIntProd"}, S, pointwise_adjoint(iota("X int", X)), eps("eps(X^flat)", Xflat_h)));
    v.push_back(eq("starBarIntProd", {"starBarIntProd"}, S, sb * eps("eps(X^flat)", Xflat) * sb, iota("X int", X)));
    v.push_back(eq("starBarIntProd.interior", {"starBarIntProd"}, S, sb * iota("X int", X) * sb,
                   cplx(-1.0) * eps("eps(X^flat)", Xflat)));

    v.push_back(eq("LaplaceDefs.B", {"LaplaceDefs"}, S, op(OperatorId::Delta_B),
                   d_struct() * adjoint(d_struct()) + adjoint(d_struct()) * d_struct()));
    v.push_back(eq("LaplaceDefs.T", {"LaplaceDefs"}, S, op(OperatorId::Delta_T) * sb, sb * op(OperatorId::Delta_B)));
    v.push_back(eq("boxLaplaceDef", {"boxLaplaceDef"}, S, op(OperatorId::boxbar_B),
                   op(OperatorId::partialbar_B) * adjoint(op(OperatorId::partialbar_B)) +
                       adjoint(op(OperatorId::partialbar_B)) * op(OperatorId::partialbar_B)));
    v.push_back(eq("boxLaplaceDef.holomorphic", {"boxLaplaceDef"}, S, op(OperatorId::box_B),
                   op(OperatorId::partial_B) * adjoint(op(OperatorId::partial_B)) +
                       adjoint(op(OperatorId::partial_B)) * op(OperatorId::partial_B)));

    // J on forms: sum_a J theta^a ^ E_a int, with (J theta)(X) = -theta(JX)
    {
        Expr jsum = term("sum_a J theta^a ^ E_a int", kKeep, [](BlockOperators& B) -> MatrixXc {
            const auto& alg = B.frame().algebra();
            const Eigen::MatrixXd Jm = alg.J_matrix();
            MatrixXc lam = MatrixXc::Zero(alg.dim(), alg.dim());
            for (int a = 0; a < alg.generators(); ++a) {
                VectorXc jt = VectorXc::Zero(alg.generators());
                for (int b = 0; b < alg.generators(); ++b) jt[b] = -Jm(a, b);
                lam += alg.left_mult(alg.covector(jt)) * alg.iota_real(a);
            }
            return B.lift(lam);
        });
        v.push_back(eq("JonForms", {"JonForms"}, S, op(OperatorId::J_op), jsum));
        v.push_back(eq("JonForms.type", {"JonForms"}, S, op(OperatorId::J_op),
                       I() * (number_op(true) - number_op(false))));
        v.push_back(eq("JonForms.skew", {"JonForms"}, S, adjoint(op(OperatorId::J_op)),
                       cplx(-1.0) * op(OperatorId::J_op)));
    }

    v.push_back(custom("KaehlerLocal", {"KaehlerLocal"}, S,
                       "omega = -1/2 sum theta^a ^ J theta^a and omega(X,Y) = g(X, JY)",
                       [](const ModelPtr& m, std::uint64_t, int) {
                           const auto& f = ModelContext::of(m)->frame();
                           const auto& alg = f.algebra();
                           const Eigen::MatrixXd Jm = alg.J_matrix();
                           const int N = alg.generators();
                           VectorXc w = VectorXc::Zero(alg.dim());
                           for (int a = 0; a < N; ++a) {
                               VectorXc jt = VectorXc::Zero(N);
                               for (int b = 0; b < N; ++b) jt[b] = -Jm(a, b);
                               w -= 0.5 * alg.wedge(alg.real_covector(a), alg.covector(jt));
                           }
                           CustomOutcome o = compare(f.kaehler_form(), w);
                           // omega(E_a, E_b) = g(E_a, J E_b) = J(a, b)
                           VectorXc ev = VectorXc::Zero(N * N), want = VectorXc::Zero(N * N);
                           for (int a = 0; a < N; ++a)
                               for (int b = 0; b < N; ++b) {
                                   VectorXc Ea = VectorXc::Zero(N), Eb = VectorXc::Zero(N);
                                   Ea[a] = 1.0;
                                   Eb[b] = 1.0;
                                   ev[a * N + b] = (alg.interior(alg.vector_components(Eb)) *
                                                    (alg.interior(alg.vector_components(Ea)) * f.kaehler_form()))[0];
                                   want[a * N + b] = Jm(a, b);
                               }
                           absorb(o, compare(ev, want));
                           return o;
                       }));

    v.push_back(custom("ComplexFrames", {"ComplexFrames"}, S,
                       "omega^a(V_b) = delta_ab, omega^a(bar V_b) = 0, J V_a = i V_a, omega^a = (theta^a + i J-partner)/sqrt 2",
                       [](const ModelPtr& m, std::uint64_t, int) {
                           const auto& f = ModelContext::of(m)->frame();
                           const auto& alg = f.algebra();
                           const int n = m->n, N = 2 * n;
                           VectorXc got = VectorXc::Zero(N * N + 2 * N), want = VectorXc::Zero(N * N + 2 * N);
                           for (int i = 0; i < N; ++i)
                               for (int j = 0; j < N; ++j) {
                                   got[i * N + j] = (alg.interior(f.frame_vector(j)) * alg.generator(i))[0];
                                   want[i * N + j] = i == j ? 1.0 : 0.0;
                               }
                           for (int a = 0; a < n; ++a) {
                               got[N * N + a] = (f.J_vector(f.frame_vector(a)) - I() * f.frame_vector(a)).norm();
                               got[N * N + n + a] =
                                   (alg.generator(a) -
                                    (alg.real_covector(a) + I() * alg.real_covector(a + n)) / std::sqrt(2.0))
                                       .norm();
                           }
                           return compare(got, want);
                       }));

    v.push_back(custom("TransDivThm", {"TransDivThm"}, S, "int div(X) = int g(X, kappa#) for basic fields X",
                       [](const ModelPtr& m, std::uint64_t seed, int ens) {
                           auto ctx = ModelContext::of(m);
                           const auto& f = ctx->frame();
                           const auto& alg = f.algebra();
                           const int N = f.N();
                           const VectorXc kr = alg.vector_real(f.kappa_sharp());
                           CustomOutcome o;
                           for (int k = 0; k < std::max(1, ens / 10); ++k) {
                               cplx lhs{}, rhs{};
                               for (int c = 0; c < N; ++c) {
                                   const BasicForm fc = random_form(m, Bidegree{0, 0},
                                                                    detail::mix_seed(seed, "TransDivThm", m->name, k * 16 + c));
                                   VectorXc Ec = VectorXc::Zero(N);
                                   Ec[c] = 1.0;
                                   const VectorXc E = alg.vector_components(Ec);
                                   // div(f E_c) = E_c(f) + f div(E_c)
                                   const BasicForm dfc = apply_blockwise(
                                       fc, [c](BlockOperators& B) -> const MatrixXc& { return B.nabla_real(c); });
                                   lhs += dfc.integrate() + f.divergence(E) * fc.integrate();
                                   rhs += kr[c] * fc.integrate();
                               }
                               absorb(o, compare(VectorXc::Constant(1, lhs), VectorXc::Constant(1, rhs)));
                           }
                           return o;
                       }));

    v.push_back(eq("WeitzThm", {"WeitzThm"}, S, op(OperatorId::Delta_B),
                   op(OperatorId::rough_tr) + op(OperatorId::A_kappa) + op(OperatorId::F_curv)));

    v.push_back(custom("WeitzThm.ricci", {"WeitzThm"}, S, "F(phi)# = Ric^Q(phi#) on 1-forms",
                       [](const ModelPtr& m, std::uint64_t, int) {
                           const auto& f = ModelContext::of(m)->frame();
                           const auto& alg = f.algebra();
                           const int N = f.N();
                           MatrixXc F = MatrixXc::Zero(alg.dim(), alg.dim());
                           for (int a = 0; a < N; ++a)
                               for (int b = 0; b < N; ++b)
                                   F += alg.left_mult(alg.real_covector(a)) * alg.iota_real(b) * f.curv_real(b, a);
                           CustomOutcome o;
                           for (int c = 0; c < N; ++c) {
                               const VectorXc got = F * alg.real_covector(c);
                               VectorXc want = VectorXc::Zero(alg.dim());
                               for (int d = 0; d < N; ++d) want += m->curvature.ricci(c, d) * alg.real_covector(d);
                               absorb(o, compare(got, want));
                           }
                           o.samples = N;
                           return o;
                       },
                       Applicability::any, 1e-11));

    v.push_back(custom("eq1-19", {"eq1-19"}, S,
                       "<R(w1^w2), w3^w4> = g(R(w1#,w2#)w4#, w3#) is a symmetric operator whose partial traces give Ric",
                       [](const ModelPtr& m, std::uint64_t, int) {
                           const auto& cd = m->curvature;
                           const Eigen::MatrixXd R = cd.curvature_operator();
                           CustomOutcome o = compare(R.cast<cplx>().reshaped(), R.transpose().cast<cplx>().reshaped());
                           const int d = cd.R.dim();
                           // Ric(a,a) = sum_b <R(th^a ^ th^b), th^a ^ th^b>
                           VectorXc got(d), want(d);
                           for (int a = 0; a < d; ++a) {
                               double s = 0;
                               for (int b = 0; b < d; ++b)
                                   if (b != a) s += cd.R(a, b, b, a);
                               got[a] = s;
                               want[a] = cd.ricci(a, a);
                           }
                           absorb(o, compare(got, want));
                           return o;
                       }));

    v.push_back(custom("eq1-22", {"eq1-22"}, S, "<F(phi),phi> >= r(q-r) C |phi|^2 with C the least eigenvalue of R",
                       [](const ModelPtr& m, std::uint64_t seed, int ens) {
                           auto ctx = ModelContext::of(m);
                           const Eigen::MatrixXd R = m->curvature.curvature_operator();
                           const double C = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(R).eigenvalues().minCoeff();
                           const int q = 2 * m->n;
                           CustomOutcome o;
                           double tightest = 1e300;
                           for (int k = 0; k < ens; ++k) {
                               const int r = 1 + k % (q - 1);
                               const BasicForm phi =
                                   random_form(m, bidegrees_of_degree(m->n, r), detail::mix_seed(seed, "eq1-22", m->name, k));
                               const double lhs = inner(apply(OperatorId::F_curv, phi), phi).real();
                               const double rhs = r * (q - r) * C * phi.norm_sq();
                               const double slack = (lhs - rhs) / phi.norm_sq();
                               tightest = std::min(tightest, slack);
                               if (slack < 0) {
                                   o.residual = std::max(o.residual, -slack / (1 + std::abs(lhs) + std::abs(rhs)));
                                   o.abs_residual = std::max(o.abs_residual, -slack);
                               }
                               ++o.samples;
                           }
                           std::ostringstream s;
                           s << "C = " << C << ", min slack " << tightest;
                           o.note = s.str();
                           return o;
                       }));
    return v;
}

// -------------------------------------------------------------- commutators

inline std::vector<IdentitySpec> commutator_entries() {
    const std::string S = "commutators";
    std::vector<IdentitySpec> v;
    const Expr L = op(OperatorId::L), Lam = op(OperatorId::Lambda), J = op(OperatorId::J_op);
    const VecFn X = [](const FrameData& f) { return probe_vector(f, 3); };
    const VecFn Xflat = [](const FrameData& f) { return f.flat(probe_vector(f, 3)); };
    const VecFn JXflat = [](const FrameData& f) { return f.flat(f.J_vector(probe_vector(f, 3))); };
    const VecFn JX = [](const FrameData& f) { return f.J_vector(probe_vector(f, 3)); };

    v.push_back(eq("LComm1.L", {"LComm1"}, S, comm(L, iota("X int", X)), eps("eps((JX)^flat)", JXflat)));
    v.push_back(eq("LComm1.Lambda", {"LComm1"}, S, comm(Lam, eps("eps(X^flat)", Xflat)),
                   cplx(-1.0) * iota("(JX) int", JX)));
    v.push_back(eq("LComm1.L.eps", {"LComm1"}, S, comm(L, eps("eps(X^flat)", Xflat)), zero()));
    v.push_back(eq("LComm1.Lambda.int", {"LComm1"}, S, comm(Lam, iota("X int", X)), zero()));
    v.push_back(eq("LComm1.adjoint", {"LComm1"}, S, Lam, adjoint(L)));
    v.push_back(eq("LComm1.star", {"LComm1"}, S, Lam, parity() * op(OperatorId::star_bar) * L * op(OperatorId::star_bar)));

    v.push_back(eq("LProp.LJ", {"LProp"}, S, comm(L, J), zero()));
    v.push_back(eq("LProp.LambdaJ", {"LProp"}, S, comm(Lam, J), zero()));
    v.push_back(eq("LProp.Ld", {"LProp"}, S, comm(L, op(OperatorId::d_B)), zero()));
    v.push_back(eq("LProp.Lambdadelta", {"LProp"}, S, comm(Lam, op(OperatorId::delta_B)), zero()));

    v.push_back(eq("LCor.1", {"LCor"}, S, comm(L, op(OperatorId::partial_B)), zero()));
    v.push_back(eq("LCor.2", {"LCor"}, S, comm(L, op(OperatorId::partialbar_B)), zero()));
    v.push_back(eq("LCor.3", {"LCor"}, S, comm(Lam, op(OperatorId::partial_B_star)), zero()));
    v.push_back(eq("LCor.4", {"LCor"}, S, comm(Lam, op(OperatorId::partialbar_B_star)), zero()));
    v.push_back(eq("LCor.5", {"LCor"}, S, comm(L, op(OperatorId::partial_B_star)),
                   cplx(0, -1) * op(OperatorId::partialbar_T)));
    v.push_back(eq("LCor.6", {"LCor"}, S, comm(L, op(OperatorId::partialbar_B_star)),
                   cplx(0, 1) * op(OperatorId::partial_T)));
    v.push_back(eq("LCor.7", {"LCor"}, S, comm(Lam, op(OperatorId::partial_B)),
                   cplx(0, -1) * op(OperatorId::partialbar_T_star)));
    v.push_back(eq("LCor.8", {"LCor"}, S, comm(Lam, op(OperatorId::partialbar_B)),
                   cplx(0, 1) * op(OperatorId::partial_T_star)));
    return v;
}

}  // namespace cat
}  // namespace folcalc
