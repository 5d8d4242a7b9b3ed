#include "folcalc/cohomology.hpp"

#include <gtest/gtest.h>

using namespace folcalc;

namespace {

using Table = std::vector<std::vector<int>>;

const double kC = std::log((3.0 + std::sqrt(5.0)) / 2.0);

ModelPtr carriere(int band = 16) { return build_carriere({{{2, 1}, {1, 1}}}, band); }

int binom(int n, int k) { return k < 0 || k > n ? 0 : (k == 0 ? 1 : binom(n - 1, k - 1) * n / k); }

}  // namespace

TEST(Betti, CarriereTable) {
    const auto t = betti_table(carriere());
    EXPECT_EQ(t.hB_rs, (Table{{1, 1}, {0, 0}}));
    EXPECT_EQ(t.hB, (std::vector<int>{1, 1, 0}));
    for (int k = 0; k <= 2; ++k) EXPECT_EQ(t.hB[k], t.dolbeault_sum(k));
    EXPECT_GT(t.min_gap(), 1e4);
}

// Harmonic forms on a flat torus are exactly the constant-coefficient forms.
TEST(Betti, FlatTablesAreBinomial) {
    for (auto m : {build_flat_product(1, 4), build_flat_product(2, 1)}) {
        const auto t = betti_table(m);
        const int n = m->n;
        for (int r = 0; r <= n; ++r)
            for (int s = 0; s <= n; ++s) {
                EXPECT_EQ(t.hB_rs[r][s], binom(n, r) * binom(n, s));
                EXPECT_EQ(t.hT_rs[r][s], binom(n, r) * binom(n, s));
            }
        for (int k = 0; k <= 2 * n; ++k) EXPECT_EQ(t.hB[k], binom(2 * n, k));
        EXPECT_GT(t.min_gap(), 1e4);
    }
}

TEST(Betti, HopfTable) {
    const auto t = betti_table(build_hopf_transverse(6));
    EXPECT_EQ(t.hB_rs, (Table{{1, 0}, {0, 1}}));
    EXPECT_EQ(t.hB, (std::vector<int>{1, 0, 1}));
    EXPECT_GT(t.min_gap(), 1e4);
}

TEST(Betti, StabilityAudit) {
    const auto t = betti_table(carriere(8), 1e-8, true);
    ASSERT_TRUE(t.audit_band.has_value());
    EXPECT_EQ(*t.audit_band, 16);
    EXPECT_EQ(audit_band(*build_hopf_transverse(6)), 10);
}

TEST(Betti, HarmonicRepresentativesAreClosedAndCoclosed) {
    for (auto m : {carriere(8), build_flat_product(1, 2), build_hopf_transverse(4)})
        for (int k = 0; k <= 2; ++k)
            for (const auto& h : harmonic_forms(m, OperatorId::Delta_B, bidegrees_of_degree(1, k))) {
                EXPECT_LT(apply(OperatorId::d_B, h).norm(), 1e-10) << m->name;
                EXPECT_LT(apply(OperatorId::delta_B, h).norm(), 1e-10) << m->name;
            }
}

// The explicit class Y1* - i Y2* spans H^{0,1} on the Carrière model: its
// difference from the harmonic representative is dbar-exact.
TEST(Betti, CarriereDolbeaultGenerator) {
    auto m = carriere(8);
    const auto& alg = *m->algebra;
    const BasicForm g = BasicForm::constant(m, alg.real_covector(0) - I_unit * alg.real_covector(1));
    ASSERT_TRUE(g.bidegrees(1e-14) == std::vector<Bidegree>({Bidegree{0, 1}}));
    EXPECT_LT(apply(OperatorId::partialbar_B, g).norm(), 1e-12);
    const auto h = harmonic_forms(m, OperatorId::boxbar_B, {{0, 1}});
    ASSERT_EQ(h.size(), 1u);
    const BasicForm rep = (inner(g, h[0]) / inner(h[0], h[0])) * h[0];
    EXPECT_GT(rep.norm(), 0.1);
    EXPECT_LT(exactness_solve(g - rep, OperatorId::partialbar_B).residual, 1e-10);
}

TEST(Duality, TwistedDualitiesHoldEverywhere) {
    for (auto m : {carriere(), build_flat_product(1, 3), build_hopf_transverse(4)})
        for (auto k : {DualityKind::twisted_de_rham, DualityKind::twisted_serre}) {
            const auto r = duality_check(m, k);
            EXPECT_EQ(r.verdict, "pass") << m->name << " " << to_string(k) << "\n" << to_text(r);
            EXPECT_LT(r.max_residual(), 1e-10);
        }
}

TEST(Duality, KodairaSerre) {
    const auto c = duality_check(carriere(), DualityKind::kodaira_serre);
    EXPECT_EQ(c.verdict, "expected-fail");
    bool saw = false;
    for (const auto& p : c.pairs)
        if (p.from == "B:(0,0)") {
            saw = true;
            EXPECT_EQ(p.dim_from, 1);
            EXPECT_EQ(p.dim_to, 0);
        }
    EXPECT_TRUE(saw);
    for (auto m : {build_flat_product(1, 3), build_hopf_transverse(4)})
        EXPECT_EQ(duality_check(m, DualityKind::kodaira_serre).verdict, "pass") << m->name;
}

TEST(Vanishing, Verdicts) {
    const auto h = vanishing_check(build_hopf_transverse(6));
    EXPECT_TRUE(h.ricci_positive);
    EXPECT_TRUE(h.F_positive);
    EXPECT_EQ(h.verdict, "pass");
    for (const auto& c : h.checks) EXPECT_EQ(c.observed, 0) << c.name;
    const auto c = vanishing_check(carriere());
    EXPECT_EQ(c.verdict, "hypotheses-not-met");
    EXPECT_NEAR(c.ricci_max, -kC * kC, 1e-12);
    const auto f = vanishing_check(build_flat_product(1, 3));
    EXPECT_EQ(f.verdict, "hypotheses-not-met");
}

TEST(Obstruction, CarriereSamples) {
    const auto r = mean_curvature_obstruction(carriere(32), 10, 5);
    EXPECT_TRUE(r.pass);
    EXPECT_LT(r.max_mean_deviation, 1e-8);
    EXPECT_LT(r.max_coefficient_mismatch, 1e-10);
    EXPECT_GT(r.min_dbar_norm, 0.0);
    EXPECT_THROW(mean_curvature_obstruction(build_flat_product(1, 2), 1, 0), FolcalcError);
}

TEST(Output, JsonAndText) {
    const auto t = betti_table(carriere(8));
    const auto j = to_json(t);
    EXPECT_EQ(j["h_B_rs"], nlohmann::json::parse("[[1,1],[0,0]]"));
    const auto txt = to_text(t);
    EXPECT_NE(txt.find("Dolbeault"), std::string::npos);
    const auto d = to_json(duality_check(carriere(8), DualityKind::kodaira_serre));
    EXPECT_EQ(d["verdict"], "expected-fail");
}
