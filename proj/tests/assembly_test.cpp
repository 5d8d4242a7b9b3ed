#include "folcalc/assembly.hpp"

#include <gtest/gtest.h>

using namespace folcalc;

namespace {

const double kC = std::log((3.0 + std::sqrt(5.0)) / 2.0);
const double kPi = std::acos(-1.0);

ModelPtr carriere(int band = 4) { return build_carriere({{{2, 1}, {1, 1}}}, band); }

std::vector<double> block_eigenvalues(const MatrixBlock& b) {
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(b.M);
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

}  // namespace

// df = Y2(f) theta^2 and theta^2 = -i(omega - bar omega)/sqrt 2, with Y2 = d/dt on e^{2 pi i k t}.
TEST(Assembly, CarriereFunctionDifferential) {
    auto m = carriere(5);
    const auto D = assemble(OperatorId::d_B, m, Bidegree{0, 0});
    const auto& sp = dynamic_cast<const FourierLattice&>(*m->spectrum);
    for (const auto& b : D.blocks) {
        const double k = sp.mode(b.block)[0];
        ASSERT_EQ(b.cols.size(), 1u);
        ASSERT_EQ(b.rows.size(), 2u);
        for (size_t i = 0; i < b.rows.size(); ++i) {
            const double want = (b.rows[i] == 1 ? 1.0 : -1.0) * 2.0 * kPi * k / std::sqrt(2.0);
            EXPECT_NEAR(std::abs(b.M(i, 0) - want), 0.0, 1e-12);
        }
    }
}

// -f'' - c f' from the metric, plus the mean curvature term c f'.
TEST(Assembly, CarriereFunctionLaplacian) {
    auto m = carriere(6);
    const auto& sp = dynamic_cast<const FourierLattice&>(*m->spectrum);
    const auto D = assemble(OperatorId::Delta_B, m, Bidegree{0, 0});
    for (const auto& b : D.blocks) {
        const double k = sp.mode(b.block)[0];
        EXPECT_NEAR(std::abs(b.M(0, 0) - 4.0 * kPi * kPi * k * k), 0.0, 1e-9);
    }
}

TEST(Assembly, FlatLaplacianAllDegrees) {
    for (auto m : {build_flat_product(1, 3), build_flat_product(2, 1)}) {
        const auto& sp = dynamic_cast<const FourierLattice&>(*m->spectrum);
        for (const auto& bd : all_bidegrees(m->n)) {
            const auto D = assemble(OperatorId::Delta_B, m, bd);
            for (const auto& b : D.blocks) {
                double k2 = 0;
                for (int v : sp.mode(b.block)) k2 += double(v) * v;
                MatrixXc want = MatrixXc::Zero(b.rows.size(), b.cols.size());
                for (size_t i = 0; i < b.rows.size(); ++i)
                    for (size_t j = 0; j < b.cols.size(); ++j)
                        if (b.rows[i] == b.cols[j]) want(i, j) = 4.0 * kPi * kPi * k2;
                EXPECT_LT((b.M - want).cwiseAbs().maxCoeff(), 1e-9);
            }
        }
    }
}

// Basic functions on the Hopf fibration are functions on the round sphere of
// radius 1/2: eigenvalues 4 j (j + 1) with multiplicity 2j + 1.
TEST(Assembly, HopfFunctionSpectrum) {
    auto m = build_hopf_transverse(6);
    const auto D = assemble(OperatorId::Delta_B, m, Bidegree{0, 0});
    std::map<long, int> mult;
    for (const auto& b : D.blocks)
        for (double e : block_eigenvalues(b)) {
            const double j = (-1.0 + std::sqrt(1.0 + e)) / 2.0;
            ASSERT_NEAR(j, std::round(j), 1e-9) << e;
            ++mult[std::lround(j)];
        }
    ASSERT_FALSE(mult.empty());
    for (auto [j, c] : mult) EXPECT_EQ(c, 2 * j + 1) << "j=" << j;
    EXPECT_GE(mult.size(), 3u);
}

TEST(Assembly, AdjointPairsAgreeWithGramAdjoint) {
    const std::vector<std::pair<OperatorId, OperatorId>> pairs = {
        {OperatorId::partialbar_B, OperatorId::partialbar_B_star},
        {OperatorId::partial_B, OperatorId::partial_B_star},
        {OperatorId::d_B, OperatorId::delta_B},
    };
    for (auto m : {carriere(3), build_flat_product(1, 2), build_hopf_transverse(3)}) {
        for (auto [op, adj] : pairs)
            for (const auto& bd : all_bidegrees(m->n)) {
                // d_B mixes types, so it is taken on whole degrees
                const auto dom = op == OperatorId::d_B ? bidegrees_of_degree(m->n, bd.total()) : std::vector<Bidegree>{bd};
                const auto A = assemble(op, m, dom);
                if (A.codomain.empty()) continue;
                const auto B = assemble_custom(m, std::string(operator_info(adj).name), A.codomain, A.domain,
                                               [adj](BlockOperators& X) -> MatrixXc { return X.op(adj); });
                EXPECT_LT(matrix_distance(gram_adjoint(A), B), 1e-12) << m->name << " " << bd.str();
            }
    }
}

TEST(Assembly, KernelCountsAndGap) {
    auto m = carriere(8);
    const auto K = kernel(assemble(OperatorId::Delta_B, m, Bidegree{0, 0}));
    EXPECT_EQ(K.dim(), 1);
    EXPECT_GT(K.gap_ratio(), 1e4);
    EXPECT_TRUE(K.warnings.empty());
    const BasicForm h = K.form(m, 0);
    EXPECT_NEAR(h.norm(), 1.0, 1e-12);
    EXPECT_LT(apply(OperatorId::Delta_B, h).norm(), 1e-10);
    EXPECT_THROW(kernel(assemble(OperatorId::Delta_B, m, Bidegree{0, 0}), 0.0), std::invalid_argument);
}

TEST(Assembly, ExactnessOfKaehlerForm) {
    auto mc = carriere(6);
    const BasicForm w = BasicForm::constant(mc, ModelContext::of(mc)->frame().kaehler_form());
    const auto r = exactness_solve(w, OperatorId::d_B);
    EXPECT_LT(r.residual, 1e-12);
    EXPECT_LT((apply(OperatorId::d_B, r.primitive) - w).norm(), 1e-12);
    for (auto m : {build_flat_product(1, 3), build_hopf_transverse(4)}) {
        const BasicForm v = BasicForm::constant(m, ModelContext::of(m)->frame().kaehler_form());
        EXPECT_GT(exactness_solve(v, OperatorId::d_B).residual, 0.1 * v.norm()) << m->name;
    }
}

TEST(Assembly, HodgeDecomposition) {
    for (auto m : {carriere(4), build_flat_product(1, 2), build_hopf_transverse(3)}) {
        const auto bds = bidegrees_of_degree(m->n, 1);
        const BasicForm phi = random_form(m, bds, 11);
        const auto d = hodge_decompose(phi, OperatorId::d_B, OperatorId::delta_B, OperatorId::Delta_B, bds);
        EXPECT_LT(d.reconstruction, 1e-10) << m->name;
        EXPECT_LT(d.orthogonality, 1e-10) << m->name;
    }
}

TEST(Assembly, ComposeMatchesProduct) {
    auto m = build_hopf_transverse(3);
    const auto A = assemble(OperatorId::partialbar_B, m, Bidegree{0, 0});
    const auto B = assemble(OperatorId::partialbar_B_star, m, Bidegree{0, 1});
    const auto BA = compose(B, A);
    const auto box = assemble_custom(m, "boxbar_B", {{0, 0}}, {{0, 0}},
                                     [](BlockOperators& X) -> MatrixXc { return X.op(OperatorId::boxbar_B); });
    EXPECT_LT(matrix_distance(BA, box), 1e-12);
    EXPECT_THROW(compose(A, A), FolcalcError);
}

TEST(Assembly, RejectsBadBidegree) {
    auto m = carriere(2);
    try {
        assemble(OperatorId::d_B, m, Bidegree{2, 0});
        FAIL();
    } catch (const FolcalcError& e) {
        EXPECT_EQ(e.code, "BidegreeMismatch");
    }
    EXPECT_THROW(assemble(OperatorId::pointwise_norm_sq, m, Bidegree{0, 0}), FolcalcError);
}

TEST(Assembly, CacheAndExport) {
    auto& cache = BlockCache::instance();
    auto m = build_flat_product(1, 2);
    const auto A = assemble(OperatorId::Delta_B, m, Bidegree{1, 0});
    const size_t hits = cache.hits();
    const auto B = assemble(OperatorId::Delta_B, m, Bidegree{1, 0});
    EXPECT_GT(cache.hits(), hits);
    EXPECT_EQ(matrix_distance(A, B), 0.0);

    const auto dir = std::filesystem::temp_directory_path() / "folcalc_export_test";
    std::filesystem::create_directories(dir);
    export_matrix(A, dir / "lap");
    std::ifstream js(dir / "lap.json");
    const auto side = nlohmann::json::parse(js);
    EXPECT_EQ(side["blocks"].size(), A.blocks.size());
    std::ifstream bin(dir / "lap.bin", std::ios::binary);
    for (const auto& b : A.blocks) {
        MatrixXc M;
        ASSERT_TRUE(detail::read_matrix(bin, M));
        EXPECT_EQ((M - b.M).cwiseAbs().maxCoeff(), 0.0);
    }
    std::filesystem::remove_all(dir);
}

TEST(Assembly, ConcurrentAssemblyIsConsistent) {
    auto m = build_hopf_transverse(4);
    std::vector<OperatorMatrix> out(4);
    std::vector<std::thread> th;
    for (int i = 0; i < 4; ++i)
        th.emplace_back([&, i] { out[i] = assemble(OperatorId::Delta_B, m, Bidegree{1, 0}); });
    for (auto& t : th) t.join();
    for (int i = 1; i < 4; ++i) EXPECT_EQ(matrix_distance(out[0], out[i]), 0.0);
}
