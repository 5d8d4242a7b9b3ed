#include "folcalc/operators.hpp"

#include <gtest/gtest.h>

using namespace folcalc;

namespace {

const double kC = std::log((3.0 + std::sqrt(5.0)) / 2.0);

ModelPtr carriere(int band = 4) { return build_carriere({{{2, 1}, {1, 1}}}, band); }

VectorXc gen(const ModelPtr& m, int j) { return m->algebra->generator(j); }

double dist(const BasicForm& a, const BasicForm& b) { return (a - b).norm(); }

}  // namespace

TEST(Forms, FrameProducts) {
    auto flat = build_flat_product(1, 2);
    const BasicForm w = wedge(BasicForm::constant(flat, gen(flat, 0)), BasicForm::constant(flat, gen(flat, 1)));
    EXPECT_TRUE(w.bidegrees() == std::vector<Bidegree>({Bidegree{1, 1}}));
    EXPECT_NEAR(std::abs(w.at(flat->spectrum->constant().block, 3, 0) - 1.0), 0.0, 1e-15);

    auto car = carriere();
    const auto& fd = ModelContext::of(car)->frame();
    const BasicForm om = BasicForm::constant(car, fd.kaehler_form());
    EXPECT_EQ(wedge(om, om).norm(), 0.0);
    // omega = Y2* ^ Y1*
    const VectorXc y21 = car->algebra->wedge(car->algebra->real_covector(1), car->algebra->real_covector(0));
    EXPECT_LT((fd.kaehler_form() - y21).norm(), 1e-15);
}

TEST(Forms, InteriorPairing) {
    auto flat = build_flat_product(1, 2);
    auto V1 = ComplexVectorField::constant(flat, VectorXc::Unit(2, 0));
    const BasicForm one = BasicForm::constant(flat, flat->algebra->one());
    EXPECT_LT(dist(interior(V1, BasicForm::constant(flat, gen(flat, 0))), one), 1e-15);
    EXPECT_EQ(interior(V1, BasicForm::constant(flat, gen(flat, 1))).norm(), 0.0);
}

TEST(Forms, WedgeAdjointOfInterior) {
    auto m = build_flat_product(2, 1);
    auto V1 = ComplexVectorField::constant(m, VectorXc::Unit(4, 0));
    const BasicForm w1 = BasicForm::constant(m, gen(m, 0));
    for (int s = 0; s < 10; ++s) {
        const BasicForm f = random_form(m, all_bidegrees(2), 100 + s);
        const BasicForm psi = random_form(m, all_bidegrees(2), 200 + s);
        const cplx lhs = inner(wedge(w1, f), psi);
        const cplx rhs = inner(f, interior(V1, psi));
        EXPECT_LT(std::abs(lhs - rhs) / (1.0 + std::abs(lhs)), 1e-12);
    }
}

TEST(Forms, InnerProducts) {
    auto flat = build_flat_product(1, 2);
    const BasicForm w1 = BasicForm::constant(flat, gen(flat, 0));
    const BasicForm wb1 = BasicForm::constant(flat, gen(flat, 1));
    EXPECT_NEAR(std::abs(inner(w1, w1) - 1.0), 0.0, 1e-15);
    EXPECT_EQ(std::abs(inner(w1, wb1)), 0.0);

    auto car = carriere();
    const auto& fd = ModelContext::of(car)->frame();
    const BasicForm k = BasicForm::constant(car, fd.kappa_form());
    EXPECT_NEAR(inner(k, k).real(), kC * kC, 1e-14);
    EXPECT_NEAR(inner(k, k).imag(), 0.0, 1e-15);
}

TEST(Forms, PositiveDefiniteAndOrthogonal) {
    for (auto m : {carriere(), build_flat_product(1, 2), build_hopf_transverse(3)}) {
        for (int s = 0; s < 200; ++s) {
            const BasicForm a = random_form(m, all_bidegrees(1), s);
            EXPECT_GT(inner(a, a).real(), 0.0);
            EXPECT_LT(std::abs(inner(a, a).imag()), 1e-12);
        }
        const BasicForm a = random_form(m, Bidegree{1, 0}, 1);
        const BasicForm b = random_form(m, Bidegree{0, 1}, 2);
        EXPECT_EQ(std::abs(inner(a, b)), 0.0);
    }
}

TEST(Forms, Conjugation) {
    auto flat = build_flat_product(1, 2);
    EXPECT_LT(dist(conj(BasicForm::constant(flat, gen(flat, 0))), BasicForm::constant(flat, gen(flat, 1))), 1e-15);
    for (auto m : {carriere(), build_flat_product(2, 1), build_hopf_transverse(3)}) {
        const int n = m->n;
        const BasicForm a = random_form(m, all_bidegrees(n), 5);
        const BasicForm b = random_form(m, all_bidegrees(n), 6);
        EXPECT_LT(dist(conj(conj(a)), a), 1e-13 * a.norm());
        EXPECT_LT(dist(conj(wedge(a, b)), wedge(conj(a), conj(b))), 1e-11 * (1 + wedge(a, b).norm()));
        const BasicForm c = random_form(m, Bidegree{n, 0}, 9);
        EXPECT_TRUE(conj(c).bidegrees() == std::vector<Bidegree>({Bidegree{0, n}}));
    }
    auto car = carriere();
    const auto& fd = ModelContext::of(car)->frame();
    EXPECT_LT(dist(conj(BasicForm::constant(car, fd.kappa10())), BasicForm::constant(car, fd.kappa01())), 1e-15);
}

TEST(Forms, InteriorIsAntiderivation) {
    // band headroom for triple products of bandwidth-1 data
    for (auto m : {carriere(), build_flat_product(2, 3), build_hopf_transverse(3)}) {
        const int n = m->n;
        const auto xi = random_form(m, {Bidegree{1, 0}, Bidegree{0, 1}}, 3, 1);
        const auto X = ComplexVectorField::sharp(xi);
        for (int s = 0; s < 3; ++s) {
            const BasicForm a = random_form(m, Bidegree{1, 0}, 10 + s, 1);
            const BasicForm b = random_form(m, all_bidegrees(n), 20 + s, 1);
            const BasicForm lhs = interior(X, wedge(a, b));
            const BasicForm rhs = wedge(interior(X, a), b) - wedge(a, interior(X, b));
            EXPECT_FALSE(lhs.truncated() || rhs.truncated());
            EXPECT_LT(dist(lhs, rhs), 1e-12 * (1.0 + lhs.norm()));
        }
    }
}

TEST(Forms, RandomEnsemble) {
    auto m = carriere(8);
    const auto bd = std::vector<Bidegree>{{1, 0}};
    EXPECT_EQ(dist(random_form(m, bd, 42), random_form(m, bd, 42)), 0.0);
    auto flat = build_flat_product(1, 2);
    EXPECT_GT(random_form(flat, Bidegree{1, 0}, 1).norm(), 0.0);
    double mean = 0.0;
    const int dim = random_form_dim(m, bd);
    for (int s = 0; s < 100; ++s) mean += random_form(m, bd, s).norm_sq() / dim;
    EXPECT_NEAR(mean / 100.0, 1.0, 0.2);
    EXPECT_THROW(random_form(m, bd, 1, 9), FolcalcError);
}

TEST(Forms, JsonRoundTrip) {
    for (auto m : {carriere(), build_hopf_transverse(3)}) {
        const BasicForm a = random_form(m, all_bidegrees(1), 77);
        const BasicForm b = BasicForm::from_json(m, a.to_json());
        EXPECT_EQ(dist(a, b), 0.0);
    }
}
