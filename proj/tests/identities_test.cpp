#include "folcalc/verify.hpp"

#include <gtest/gtest.h>

using namespace folcalc;
using namespace folcalc::cat;

namespace {

ModelPtr carriere(int band = 16) { return build_carriere({{{2, 1}, {1, 1}}}, band); }

const IdentitySpec& entry(const std::string& id) {
    for (const auto& s : catalogue())
        if (s.id == id) return s;
    throw std::runtime_error("no entry " + id);
}

IdentityReport run_one(const std::string& id, const ModelPtr& m, int ens = 6) { return run_entry(entry(id), m, 3, ens); }

CustomOutcome eval(const IdentitySpec& s, const ModelPtr& m, int ens = 6) {
    return s.custom ? s.custom(m, 3, ens) : evaluate_operator_identity(s, m, 3, ens);
}

}  // namespace

TEST(Catalogue, EveryInScopeLabelIsCited) {
    const auto missing = uncovered_labels();
    EXPECT_TRUE(missing.empty()) << "first uncovered label: " << (missing.empty() ? "" : missing.front());
}

TEST(Catalogue, IdsUniqueAndSuitesKnown) {
    std::set<std::string> ids;
    const auto& names = suite_names();
    for (const auto& s : catalogue()) {
        EXPECT_TRUE(ids.insert(s.id).second) << s.id;
        EXPECT_NE(std::find(names.begin(), names.end(), s.suite), names.end()) << s.id;
        EXPECT_FALSE(s.refs.empty()) << s.id;
        EXPECT_TRUE(s.custom || (s.lhs && s.rhs)) << s.id;
    }
}

TEST(Catalogue, EveryEntryTypeChecks) {
    for (int n : {1, 2})
        for (const auto& s : catalogue()) EXPECT_NO_THROW(type_check(s, n)) << s.id;
}

TEST(Catalogue, TypeCheckRejectsMismatchedSides) {
    const auto s = eq("bad", {"x"}, "structure", expr::op(OperatorId::partial_B), expr::op(OperatorId::partialbar_B));
    EXPECT_THROW(
        {
            try {
                type_check(s, 1);
            } catch (const FolcalcError& e) {
                EXPECT_EQ(e.code, "TypeCheckFailed");
                throw;
            }
        },
        FolcalcError);
}

TEST(Catalogue, OnlyMarkedEntriesMayExpectFailure) {
    const std::set<std::string> marked = {"KSerreForm", "SerreFails.hodge", "LaplaceBoxLaplaceForm",
                                          "LaplaceBoxLaplaceForm.box"};
    for (const auto& s : catalogue()) EXPECT_EQ(s.expected_fail_nontaut, marked.count(s.id) == 1) << s.id;
}

TEST(RunSuite, UnknownSuiteAndModel) {
    try {
        run_suite(std::vector<std::string>{"flat1"}, "nosuch", 1, 1);
        FAIL();
    } catch (const FolcalcError& e) {
        EXPECT_EQ(e.code, "UnknownSuite");
    }
    try {
        run_suite(std::vector<std::string>{"nosuchmodel"}, "structure", 1, 1);
        FAIL();
    } catch (const FolcalcError& e) {
        EXPECT_EQ(e.code, "UnknownModel");
    }
}

TEST(RunSuite, EachEntryOncePerModelOrderedById) {
    const std::vector<ModelPtr> ms = {build_flat_product(1, 2), build_hopf_transverse(2)};
    const auto r = run_suite(ms, "commutators", 1, 2, 3);
    const auto entries = suite_entries("commutators");
    ASSERT_EQ(r.size(), entries.size() * 2);
    for (size_t i = 0; i < entries.size(); ++i) {
        EXPECT_EQ(r[2 * i].id, entries[i]->id);
        EXPECT_EQ(r[2 * i].model, "flat1");
        EXPECT_EQ(r[2 * i + 1].model, "hopf");
    }
    for (size_t i = 1; i < entries.size(); ++i) EXPECT_LT(entries[i - 1]->id, entries[i]->id);
    EXPECT_TRUE(all_expected(r));
}

TEST(RunSuite, ReportsAreDeterministicAcrossThreadCounts) {
    const std::vector<ModelPtr> ms = {carriere(8), build_flat_product(1, 2)};
    const auto a = report_json(run_suite(ms, "laplacians", 11, 3, 1), "laplacians").dump();
    const auto b = report_json(run_suite(ms, "laplacians", 11, 3, 4), "laplacians").dump();
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.find("wall_ms"), std::string::npos);
    EXPECT_NE(report_json(run_suite(ms, "laplacians", 11, 1, 2), "laplacians", true).dump().find("wall_ms"),
              std::string::npos);
}

TEST(RunSuite, NotApplicableIsListed) {
    const auto r = run_suite({build_flat_product(1, 2)}, "cohomology", 1, 1);
    bool seen = false;
    for (const auto& x : r)
        if (x.id == "KaehlerExactMeanCurv") {
            seen = true;
            EXPECT_EQ(x.verdict, "not-applicable");
        }
    EXPECT_TRUE(seen);
}

// verdict rules on synthetic outcomes
TEST(Verdict, ExpectedFailNeedsLargeDiscrepancy) {
    const auto& s = entry("KSerreForm");
    const auto m = carriere(4);
    IdentityReport r;
    decide(s, m, CustomOutcome{1.0, 1.0, 1, "", true}, r);
    EXPECT_EQ(r.verdict, "expected-fail");
    decide(s, m, CustomOutcome{1e-3, 1e-3, 1, "", true}, r);
    EXPECT_EQ(r.verdict, "fail");
    r = {};
    decide(s, m, CustomOutcome{0.0, 0.0, 1, "", true}, r);
    EXPECT_EQ(r.verdict, "fail");
    EXPECT_NE(r.note.find("did not occur"), std::string::npos);
    r = {};
    decide(s, build_flat_product(1, 2), CustomOutcome{1.0, 1.0, 1, "", true}, r);
    EXPECT_EQ(r.verdict, "fail");
}

TEST(Laplacians, TautCharacterisationOnFlatAndCarriere) {
    EXPECT_EQ(run_one("LaplaceBoxLaplaceForm", build_flat_product(1, 4)).verdict, "pass");
    const auto r = run_one("LaplaceBoxLaplaceForm", carriere());
    EXPECT_EQ(r.verdict, "expected-fail");
    EXPECT_GT(r.abs_residual, 0.1);
}

// on functions the difference is -i nabla_{(J kappa)#}, and basic functions on
// the Carriere model depend on t only, which (J kappa)# does not see
TEST(Laplacians, FunctionLevelDifferenceVanishesOnCarriere) {
    auto s = eq("fn", {"x"}, "laplacians", expr::op(OperatorId::Delta_B),
                cplx(2.0) * expr::op(OperatorId::boxbar_B), Applicability::any, type_00);
    EXPECT_LT(eval(s, carriere()).abs_residual, 1e-9);
}

TEST(Weitzenboeck, LiteralBoxBarrn2SignFailsOnCarriere) {
    const Expr DJk = nab("nabla_{(J kappa)#}", Jksharp());
    const Expr div01 = scalar("div", [](const FrameData& f) { return f.divergence(f.H01()); });
    const Expr div10 = scalar("div", [](const FrameData& f) { return f.divergence(f.H10()); });
    const auto lit = eq("lit", {"x"}, "weitzenboeck", expr::op(OperatorId::boxbar_B),
                        expr::op(OperatorId::roughbarT) - I() * DJk + div01, Applicability::kaehler, type_rn);
    const auto litc = eq("litc", {"x"}, "weitzenboeck", expr::op(OperatorId::box_B),
                         expr::op(OperatorId::roughT) + I() * DJk + div10, Applicability::kaehler, type_ns);
    EXPECT_GT(eval(lit, carriere()).abs_residual, 0.1);
    EXPECT_GT(eval(litc, carriere()).abs_residual, 0.1);
    EXPECT_LT(eval(lit, build_flat_product(1, 4)).residual, 1e-12);
    EXPECT_LT(eval(entry("boxBarrn2"), carriere()).residual, 1e-12);
    EXPECT_LT(eval(entry("boxBarrn2Conj"), carriere()).residual, 1e-12);
}

TEST(Weitzenboeck, LiteralRQFormFails) {
    const Expr lit = term("sum w^a ^ V_b int R(V_b, bar V_a)", kKeep, [](BlockOperators& B) -> MatrixXc {
        const auto& f = B.frame();
        const int n = f.n();
        MatrixXc o = MatrixXc::Zero(B.full_dim(), B.full_dim());
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) o += B.eps(a) * B.iota(b) * B.curvature(f.frame_vector(b), f.frame_vector(n + a));
        return o;
    });
    const Expr rq = term("sum R(V_a, bar V_a)", kKeep, [](BlockOperators& B) -> MatrixXc {
        return -B.lift(rq_pair_sum(B.frame()));
    });
    const auto s = eq("lit", {"x"}, "weitzenboeck", lit, rq, Applicability::kaehler, type_rn);
    EXPECT_GT(eval(s, carriere()).residual, 0.1);
    EXPECT_GT(eval(s, build_hopf_transverse(3)).residual, 0.1);
    EXPECT_EQ(run_one("RQForm", carriere()).verdict, "pass");
    EXPECT_EQ(run_one("RQForm", build_hopf_transverse(3)).verdict, "pass");
}

TEST(Weitzenboeck, HopfBoxBarHasCurvatureTerm) {
    const auto m = build_hopf_transverse(3);
    EXPECT_EQ(run_one("boxBar", m).verdict, "pass");
    // the curvature term alone is nonzero on (0,1) forms
    const Expr curv = term("c", kKeep, [](BlockOperators& B) -> MatrixXc {
        const auto& f = B.frame();
        return B.eps(1) * B.iota(1) * B.curvature(f.frame_vector(0), f.frame_vector(1));
    });
    const auto s = eq("c", {"x"}, "weitzenboeck", curv, expr::zero(), Applicability::any, type_1form);
    EXPECT_GT(eval(s, m).abs_residual, 1.0);
}

TEST(Dualities, SerreCorNeedsDbarT) {
    const auto m = carriere();
    EXPECT_EQ(cohomology_dim(m, OperatorId::partialbar_B, 0, 1, {0, 1}), 1);
    EXPECT_EQ(cohomology_dim(m, OperatorId::partialbar_T, 0, 1, {1, 0}), 1);
    EXPECT_EQ(cohomology_dim(m, OperatorId::partial_T, 1, 0, {1, 0}), 0);
    EXPECT_EQ(run_one("SerreCor", m).verdict, "pass");
}

TEST(Cohomology, KodairaSerreFamilyOnCarriere) {
    const auto m = carriere();
    EXPECT_EQ(run_one("KSerreForm", m).verdict, "expected-fail");
    EXPECT_EQ(run_one("SerreFails.hodge", m).verdict, "expected-fail");
    EXPECT_EQ(run_one("SerreFails", m).verdict, "pass");
    for (auto t : {build_flat_product(1, 4), build_hopf_transverse(3)}) {
        EXPECT_EQ(run_one("KSerreForm", t).verdict, "pass");
        EXPECT_EQ(run_one("SerreFails.hodge", t).verdict, "pass");
    }
}

TEST(Cohomology, VanishingOnlyOnHopf) {
    EXPECT_EQ(run_one("VanishingThm", build_hopf_transverse(3)).verdict, "pass");
    EXPECT_EQ(run_one("VanishingCor", build_hopf_transverse(3)).verdict, "pass");
    EXPECT_EQ(run_one("VanishingThm", build_flat_product(1, 2)).verdict, "not-applicable");
}

TEST(Holomorphy, KappaFieldOnlyHolomorphicWhenTaut) {
    const auto r = run_one("transholoLem", carriere());
    EXPECT_EQ(r.verdict, "pass");
    EXPECT_NE(r.note.find("H^{1,0} not holomorphic"), std::string::npos);
    EXPECT_EQ(run_one("kappaHoloProp", carriere()).verdict, "not-applicable");
    EXPECT_EQ(run_one("kappaHoloProp", build_flat_product(1, 4)).verdict, "pass");
}

TEST(Pointwise, LaplaceOfSquareNormOnAllModels) {
    for (auto m : {carriere(), build_flat_product(1, 4), build_hopf_transverse(4)}) {
        EXPECT_EQ(run_one("LaplaceBDeltaTProp", m).verdict, "pass") << m->name;
        EXPECT_EQ(run_one("Laplacer0Cor", m).verdict, "pass") << m->name;
    }
}
