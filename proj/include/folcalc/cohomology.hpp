#pragma once

// Betti tables as harmonic-space dimensions, duality and vanishing checks,
// and the mean-curvature obstruction on the Carrière model.

#include "folcalc/assembly.hpp"

#include <future>
#include <iomanip>
#include <random>

namespace folcalc {

struct KernelAudit {
    int dim = 0;
    double gap = 0.0;  // smallest kept / largest discarded singular value
    double sigma_max = 0.0;
    double threshold = 0.0;
    std::vector<std::string> warnings;
};

inline nlohmann::json to_json(const KernelAudit& a) {
    return {{"dim", a.dim},
            {"gap", std::isfinite(a.gap) ? nlohmann::json(a.gap) : nlohmann::json("inf")},
            {"sigma_max", a.sigma_max},
            {"threshold", a.threshold},
            {"warnings", a.warnings}};
}

struct BettiTable {
    std::string model;
    int band = 0;
    int n = 0;
    std::vector<int> hB, hT;                  // by degree 0..2n
    std::vector<std::vector<int>> hB_rs, hT_rs;  // [r][s]
    std::map<std::string, KernelAudit> audit;  // keyed "B:k", "T:k", "B:(r,s)", "T:(r,s)"
    std::optional<int> audit_band;             // set when the stability audit ran

    int q() const { return 2 * n; }
    double min_gap() const {
        double g = std::numeric_limits<double>::infinity();
        for (const auto& [k, a] : audit) g = std::min(g, a.gap);
        return g;
    }
    int dolbeault_sum(int k) const {
        int s = 0;
        for (int r = 0; r <= n; ++r)
            if (k - r >= 0 && k - r <= n) s += hB_rs[r][k - r];
        return s;
    }
    bool same_numbers(const BettiTable& o) const { return hB == o.hB && hT == o.hT && hB_rs == o.hB_rs && hT_rs == o.hT_rs; }
};

inline KernelAudit audit_of(const KernelBasis& k) {
    return {k.dim(), k.gap_ratio(), k.sigma_max, k.threshold, k.warnings};
}

inline OperatorMatrix assemble_square(OperatorId id, const ModelPtr& m, const std::vector<Bidegree>& dom) {
    return assemble_custom(m, std::string(operator_info(id).name), dom, dom,
                           [id](BlockOperators& B) -> MatrixXc { return B.op(id); });
}

/// Kernel of a Laplacian on the given bidegrees (rows restricted to the same set).
inline KernelBasis harmonic_space(const ModelPtr& m, OperatorId lap, const std::vector<Bidegree>& dom, double tol = 1e-8) {
    return kernel(assemble(lap, m, dom), tol);
}

inline std::vector<BasicForm> harmonic_forms(const ModelPtr& m, OperatorId lap, const std::vector<Bidegree>& dom,
                                             double tol = 1e-8) {
    const auto k = harmonic_space(m, lap, dom, tol);
    std::vector<BasicForm> out;
    for (int i = 0; i < k.dim(); ++i) out.push_back(k.form(m, i));
    return out;
}

/// Band used by the stability audit.  Fourier models double; the Hopf model
/// grows by four spins (doubling it is needlessly slow).
inline int audit_band(const ModelFoliation& m) {
    if (m.family == "hopf") return m.band_limit + 4;
    return 2 * m.band_limit;
}

BettiTable betti_table(const ModelPtr& m, double tol = 1e-8, bool audit = false);

namespace detail {

inline BettiTable betti_table_once(const ModelPtr& m, double tol) {
    BettiTable t;
    t.model = m->name;
    t.band = m->band_limit;
    t.n = m->n;
    const int n = m->n;
    t.hB.assign(2 * n + 1, 0);
    t.hT.assign(2 * n + 1, 0);
    t.hB_rs.assign(n + 1, std::vector<int>(n + 1, 0));
    t.hT_rs.assign(n + 1, std::vector<int>(n + 1, 0));

    struct Job {
        std::string key;
        OperatorId lap;
        std::vector<Bidegree> dom;
        int* slot;
    };
    std::vector<Job> jobs;
    for (int k = 0; k <= 2 * n; ++k) {
        jobs.push_back({"B:" + std::to_string(k), OperatorId::Delta_B, bidegrees_of_degree(n, k), &t.hB[k]});
        jobs.push_back({"T:" + std::to_string(k), OperatorId::Delta_T, bidegrees_of_degree(n, k), &t.hT[k]});
    }
    for (int r = 0; r <= n; ++r)
        for (int s = 0; s <= n; ++s) {
            const Bidegree b{r, s};
            jobs.push_back({"B:" + b.str(), OperatorId::boxbar_B, {b}, &t.hB_rs[r][s]});
            jobs.push_back({"T:" + b.str(), OperatorId::boxbar_T, {b}, &t.hT_rs[r][s]});
        }
    std::vector<std::future<KernelAudit>> fut;
    for (const auto& j : jobs)
        fut.push_back(std::async(std::launch::async, [&m, &j, tol] { return audit_of(harmonic_space(m, j.lap, j.dom, tol)); }));
    for (size_t i = 0; i < jobs.size(); ++i) {
        const KernelAudit a = fut[i].get();
        *jobs[i].slot = a.dim;
        t.audit[jobs[i].key] = a;
    }
    return t;
}

}  // namespace detail

inline BettiTable betti_table(const ModelPtr& m, double tol, bool audit) {
    BettiTable t = detail::betti_table_once(m, tol);
    if (audit) {
        const int ab = audit_band(*m);
        const BettiTable u = detail::betti_table_once(with_band(*m, ab), tol);
        t.audit_band = ab;
        if (!t.same_numbers(u))
            throw FolcalcError("StabilityCheckFailed", m->name + ": Betti numbers change between band " +
                                                           std::to_string(m->band_limit) + " and " + std::to_string(ab));
    }
    return t;
}

inline nlohmann::json to_json(const BettiTable& t) {
    nlohmann::json a = nlohmann::json::object();
    for (const auto& [k, v] : t.audit) a[k] = to_json(v);
    nlohmann::json j = {{"schema", "folcalc.betti/1"},
                        {"model", t.model},
                        {"band", t.band},
                        {"n", t.n},
                        {"h_B", t.hB},
                        {"h_T", t.hT},
                        {"h_B_rs", t.hB_rs},
                        {"h_T_rs", t.hT_rs},
                        {"min_gap", std::isfinite(t.min_gap()) ? nlohmann::json(t.min_gap()) : nlohmann::json("inf")},
                        {"kernels", a}};
    if (t.audit_band) j["audit_band"] = *t.audit_band;
    return j;
}

inline std::string to_text(const BettiTable& t) {
    std::ostringstream o;
    o << "model " << t.model << "  band " << t.band << "\n\n";
    o << "Dolbeault h_B^{r,s}  (rows r, columns s)\n";
    o << std::setw(6) << "";
    for (int s = 0; s <= t.n; ++s) o << std::setw(6) << ("s=" + std::to_string(s));
    o << "\n";
    for (int r = 0; r <= t.n; ++r) {
        o << std::setw(6) << ("r=" + std::to_string(r));
        for (int s = 0; s <= t.n; ++s) o << std::setw(6) << t.hB_rs[r][s];
        o << "\n";
    }
    o << "\nTwisted h_T^{r,s}\n";
    for (int r = 0; r <= t.n; ++r) {
        o << std::setw(6) << ("r=" + std::to_string(r));
        for (int s = 0; s <= t.n; ++s) o << std::setw(6) << t.hT_rs[r][s];
        o << "\n";
    }
    o << "\n" << std::setw(6) << "k" << std::setw(8) << "h_B^k" << std::setw(8) << "h_T^k" << std::setw(12) << "sum h^{r,s}"
      << "\n";
    for (int k = 0; k <= t.q(); ++k)
        o << std::setw(6) << k << std::setw(8) << t.hB[k] << std::setw(8) << t.hT[k] << std::setw(12) << t.dolbeault_sum(k)
          << "\n";
    o << "\nsmallest spectral gap " << std::scientific << std::setprecision(2) << t.min_gap() << "\n";
    if (t.audit_band) o << "stable under band " << t.band << " -> " << *t.audit_band << "\n";
    return o.str();
}

// ---------------------------------------------------------------- dualities

enum class DualityKind { twisted_de_rham, twisted_serre, kodaira_serre };

inline std::string to_string(DualityKind k) {
    switch (k) {
        case DualityKind::twisted_de_rham: return "twisted-deRham";
        case DualityKind::twisted_serre: return "twisted-Serre";
        case DualityKind::kodaira_serre: return "Kodaira-Serre";
    }
    return "?";
}

inline DualityKind duality_kind_from(const std::string& s) {
    if (s == "twisted-deRham") return DualityKind::twisted_de_rham;
    if (s == "twisted-Serre") return DualityKind::twisted_serre;
    if (s == "Kodaira-Serre") return DualityKind::kodaira_serre;
    throw FolcalcError("UnknownDuality", s);
}

struct DualityPair {
    std::string from, to;
    int dim_from = 0, dim_to = 0;
    double map_residual = std::numeric_limits<double>::quiet_NaN();  // NaN when no explicit map
    int map_rank = -1;
    bool equal() const { return dim_from == dim_to; }
};

struct DualityReport {
    DualityKind kind;
    std::string model;
    std::vector<DualityPair> pairs;
    std::string verdict;  // pass | fail | expected-fail
    std::string note;

    double max_residual() const {
        double r = 0.0;
        for (const auto& p : pairs)
            if (!std::isnan(p.map_residual)) r = std::max(r, p.map_residual);
        return r;
    }
};

namespace detail {

inline int span_rank(const std::vector<BasicForm>& v, double tol = 1e-8) {
    if (v.empty()) return 0;
    MatrixXc G(v.size(), v.size());
    for (size_t i = 0; i < v.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) G(i, j) = inner(v[i], v[j]);
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(G);
    const double top = es.eigenvalues().maxCoeff();
    int r = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) r += es.eigenvalues()[i] > tol * std::max(top, 1e-300);
    return r;
}

// residual of membership of `img` in ker(lap) on `target`: Laplacian residual and
// distance to the computed kernel, relative to the image norm
inline double membership(const BasicForm& img, OperatorId lap, const std::vector<BasicForm>& ker) {
    const double nrm = std::max(img.norm(), 1e-300);
    BasicForm proj(img.context());
    for (const auto& h : ker) proj += inner(img, h) * h;
    const double lap_res = apply(lap, img).norm() / nrm;
    return std::max(lap_res, (img - proj).norm() / nrm);
}

}  // namespace detail

inline DualityReport duality_check(const ModelPtr& m, DualityKind kind, double tol = 1e-8) {
    DualityReport rep{kind, m->name, {}, "pass", ""};
    const int n = m->n;
    const int q = 2 * n;
    switch (kind) {
        case DualityKind::twisted_de_rham: {
            for (int r = 0; r <= q; ++r) {
                const auto hb = harmonic_forms(m, OperatorId::Delta_B, bidegrees_of_degree(n, r), tol);
                const auto ht = harmonic_forms(m, OperatorId::Delta_T, bidegrees_of_degree(n, q - r), tol);
                DualityPair p{"B:" + std::to_string(r), "T:" + std::to_string(q - r), int(hb.size()), int(ht.size())};
                std::vector<BasicForm> imgs;
                double res = 0.0;
                for (const auto& h : hb) {
                    imgs.push_back(apply(OperatorId::star_bar, h));
                    res = std::max(res, detail::membership(imgs.back(), OperatorId::Delta_T, ht));
                }
                p.map_residual = res;
                p.map_rank = detail::span_rank(imgs);
                if (!p.equal() || p.map_rank != p.dim_from || res > 1e-10) rep.verdict = "fail";
                rep.pairs.push_back(p);
            }
            rep.note = "star_bar carries Delta_B-harmonic r-forms into ker Delta_T in degree q-r";
            break;
        }
        case DualityKind::twisted_serre: {
            for (int r = 0; r <= n; ++r)
                for (int s = 0; s <= n; ++s) {
                    const Bidegree a{r, s}, b{n - r, n - s};
                    const auto hb = harmonic_forms(m, OperatorId::boxbar_B, {a}, tol);
                    const auto ht = harmonic_forms(m, OperatorId::boxbar_T, {b}, tol);
                    DualityPair p{"B:" + a.str(), "T:" + b.str(), int(hb.size()), int(ht.size())};
                    std::vector<BasicForm> imgs;
                    double res = 0.0;
                    for (const auto& h : hb) {
                        // sharp = star_bar after conjugation
                        imgs.push_back(apply(OperatorId::star_bar, conj(h)));
                        const auto& im = imgs.back();
                        res = std::max(res, detail::membership(im, OperatorId::boxbar_T, ht));
                        res = std::max(res, im.nonbasic_part() / std::max(im.norm(), 1e-300));
                        res = std::max(res, (im - im.component(b)).norm() / std::max(im.norm(), 1e-300));
                    }
                    p.map_residual = res;
                    p.map_rank = detail::span_rank(imgs);
                    if (!p.equal() || p.map_rank != p.dim_from || res > 1e-10) rep.verdict = "fail";
                    rep.pairs.push_back(p);
                }
            rep.note = "sharp = star_bar o conj carries ker boxbar_B on (r,s) into ker boxbar_T on (n-r,n-s)";
            break;
        }
        case DualityKind::kodaira_serre: {
            const BettiTable t = betti_table(m, tol);
            bool all_equal = true;
            for (int r = 0; r <= n; ++r)
                for (int s = 0; s <= n; ++s) {
                    if (std::make_pair(r, s) > std::make_pair(n - r, n - s)) continue;
                    DualityPair p{"B:" + Bidegree{r, s}.str(), "B:" + Bidegree{n - r, n - s}.str(), t.hB_rs[r][s],
                                  t.hB_rs[n - r][n - s]};
                    all_equal &= p.equal();
                    rep.pairs.push_back(p);
                }
            if (all_equal) {
                rep.verdict = "pass";
                rep.note = m->is_taut ? "taut: untwisted duality holds" : "holds on this model despite nonzero mean curvature";
            } else if (!m->is_taut) {
                rep.verdict = "expected-fail";
                rep.note = "nontaut: the untwisted duality fails, as predicted when the mean curvature class is nonzero";
            } else {
                rep.verdict = "fail";
                rep.note = "taut model violates the untwisted duality";
            }
            break;
        }
    }
    return rep;
}

inline nlohmann::json to_json(const DualityReport& r) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : r.pairs) {
        nlohmann::json j = {{"from", p.from}, {"to", p.to}, {"dim_from", p.dim_from}, {"dim_to", p.dim_to}, {"equal", p.equal()}};
        if (!std::isnan(p.map_residual)) {
            j["map_residual"] = p.map_residual;
            j["map_rank"] = p.map_rank;
        }
        pairs.push_back(j);
    }
    return {{"schema", "folcalc.duality/1"}, {"kind", to_string(r.kind)}, {"model", r.model},
            {"verdict", r.verdict},          {"note", r.note},               {"pairs", pairs}};
}

inline std::string to_text(const DualityReport& r) {
    std::ostringstream o;
    o << to_string(r.kind) << " on " << r.model << ": " << r.verdict << "\n";
    o << std::left << std::setw(10) << "from" << std::setw(10) << "to" << std::right << std::setw(6) << "dim" << std::setw(6)
      << "dim" << std::setw(14) << "map resid" << "\n";
    for (const auto& p : r.pairs) {
        o << std::left << std::setw(10) << p.from << std::setw(10) << p.to << std::right << std::setw(6) << p.dim_from
          << std::setw(6) << p.dim_to << std::setw(14);
        if (std::isnan(p.map_residual)) o << "-";
        else o << std::scientific << std::setprecision(2) << p.map_residual << std::defaultfloat;
        o << "\n";
    }
    o << r.note << "\n";
    return o.str();
}

// ---------------------------------------------------------------- vanishing

struct VanishingReport {
    std::string model;
    double ricci_min = 0.0, ricci_max = 0.0;
    std::vector<double> F_min;  // pointwise minimum eigenvalue of F by degree
    bool ricci_positive = false;
    bool F_positive = false;
    struct Check {
        std::string name;
        int observed = 0;
        bool required_zero = false;
        bool ok = true;
    };
    std::vector<Check> checks;
    std::string verdict;  // pass | hypotheses-not-met
};

/// Pointwise Weitzenböck endomorphism on the exterior algebra of a frame.
inline MatrixXc pointwise_F(const FrameData& fd) {
    const auto& alg = fd.algebra();
    MatrixXc F = MatrixXc::Zero(alg.dim(), alg.dim());
    for (int a = 0; a < fd.N(); ++a)
        for (int b = 0; b < fd.N(); ++b) F += alg.left_mult(alg.real_covector(a)) * alg.iota_real(b) * fd.curv_real(b, a);
    return F;
}

inline VanishingReport vanishing_check(const ModelPtr& m, double tol = 1e-8) {
    VanishingReport rep;
    rep.model = m->name;
    const int n = m->n, q = 2 * n;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rs(0.5 * (m->curvature.ricci + m->curvature.ricci.transpose()));
    rep.ricci_min = rs.eigenvalues().minCoeff();
    rep.ricci_max = rs.eigenvalues().maxCoeff();
    rep.ricci_positive = rep.ricci_min > 1e-12;

    const auto& fd = ModelContext::of(m)->frame();
    const MatrixXc F = pointwise_F(fd);
    const auto& alg = fd.algebra();
    rep.F_positive = true;
    for (int k = 0; k <= q; ++k) {
        std::vector<int> idx;
        for (int mask = 0; mask < alg.dim(); ++mask)
            if (std::popcount(static_cast<unsigned>(mask)) == k) idx.push_back(mask);
        const MatrixXc Fk = BlockOperators::restrict(F, idx, idx);
        Eigen::SelfAdjointEigenSolver<MatrixXc> es(0.5 * (Fk + Fk.adjoint()));
        rep.F_min.push_back(es.eigenvalues().minCoeff());
        if (k > 0 && k < q && rep.F_min.back() <= 1e-12) rep.F_positive = false;
    }

    if (rep.ricci_positive) {
        for (int r = 1; r <= n; ++r) {
            const Bidegree b{r, 0};
            const int h = harmonic_space(m, OperatorId::boxbar_B, {b}, tol).dim();
            const int kd = kernel(assemble(OperatorId::partialbar_B, m, b), tol).dim();
            rep.checks.push_back({"h_B^" + b.str(), h, true, h == 0});
            rep.checks.push_back({"ker dbar_B on " + b.str(), kd, true, kd == 0});
        }
    }
    if (rep.F_positive)
        for (int r = 1; r < q; ++r) {
            const int h = harmonic_space(m, OperatorId::Delta_B, bidegrees_of_degree(n, r), tol).dim();
            rep.checks.push_back({"h_B^" + std::to_string(r), h, true, h == 0});
        }
    if (!rep.ricci_positive && !rep.F_positive) {
        // record what is observed; nothing is forbidden
        for (int r = 1; r <= n; ++r) {
            const Bidegree b{r, 0}, c{0, r};
            rep.checks.push_back({"h_B^" + b.str(), harmonic_space(m, OperatorId::boxbar_B, {b}, tol).dim(), false, true});
            rep.checks.push_back({"h_B^" + c.str(), harmonic_space(m, OperatorId::boxbar_B, {c}, tol).dim(), false, true});
        }
    }
    rep.verdict = (rep.ricci_positive || rep.F_positive) ? "pass" : "hypotheses-not-met";
    for (const auto& c : rep.checks)
        if (!c.ok)
            throw FolcalcError("TheoremViolation", m->name + ": " + c.name + " = " + std::to_string(c.observed) +
                                                       " although the curvature hypotheses force it to vanish");
    return rep;
}

inline nlohmann::json to_json(const VanishingReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"observed", c.observed}, {"required_zero", c.required_zero}, {"ok", c.ok}});
    return {{"schema", "folcalc.vanishing/1"},
            {"model", r.model},
            {"ricci_min", r.ricci_min},
            {"ricci_max", r.ricci_max},
            {"F_min_by_degree", r.F_min},
            {"ricci_positive", r.ricci_positive},
            {"F_positive", r.F_positive},
            {"verdict", r.verdict},
            {"checks", checks}};
}

// ---------------------------------------------------------------- obstruction

struct ObstructionSample {
    std::uint64_t seed = 0;
    double mean_stated = 0.0;    // t-average of c^2 + (f'' + c f')/2 on a uniform grid
    double mean_derived = 0.0;   // t-average of c^2 + f'' + c f' on the same grid
    double mean_engine = 0.0;    // zero mode of the engine's coefficient, in the same units
    double coefficient_mismatch = 0.0;  // engine coefficient function vs c^2 + f'' + c f'
    double dbar_norm = 0.0;             // L2 norm of dbar_B of the modified (1,0) part
    double lower_bound = 0.0;           // |mean| / 2
};

struct ObstructionReport {
    std::string model;
    double c2 = 0.0;  // (log lambda)^2
    std::vector<ObstructionSample> samples;
    double max_mean_deviation = 0.0;
    double max_coefficient_mismatch = 0.0;
    double min_dbar_norm = std::numeric_limits<double>::infinity();
    bool pass = false;
};

/// Real random periodic function with modes 1..K.
inline std::vector<cplx> random_periodic_coefficients(int K, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<cplx> fk(K + 1, cplx{});
    for (int k = 1; k <= K; ++k) fk[k] = cplx{nd(rng), nd(rng)} / double(k);
    return fk;
}

/// The (1,0) mean curvature part of the Carrière model cannot be made
/// holomorphic by kappa -> kappa + d f.  With Z* = omega / sqrt 2,
/// dbar_B(kappa^{1,0} + partial_B f) = c_f bar Z* ^ Z*, c_f = c^2 + f'' + c f'
/// (partial_B f = -i f' Z*).  Writing half of f'' + c f' instead gives the same
/// mean, so both are averaged; the engine is compared with the derived one.
inline ObstructionReport mean_curvature_obstruction(const ModelPtr& m, int samples, std::uint64_t seed) {
    if (m->family != "carriere") throw FolcalcError("UnknownModel", "the obstruction check needs a Carriere model");
    const auto& sp = dynamic_cast<const FourierLattice&>(*m->spectrum);
    const double c = m->log_lambda;
    const double pi = std::numbers::pi;
    const int K = std::min(6, m->band_limit);
    const auto& fd = ModelContext::of(m)->frame();
    const BasicForm k10 = BasicForm::constant(m, fd.kappa10());
    const std::uint32_t top = 0b11;  // omega ^ bar omega = -2 bar Z* ^ Z*

    ObstructionReport rep;
    rep.model = m->name;
    rep.c2 = c * c;
    for (int i = 0; i < samples; ++i) {
        ObstructionSample smp;
        smp.seed = seed + static_cast<std::uint64_t>(i);
        const auto fk = random_periodic_coefficients(K, smp.seed);
        BasicForm f = BasicForm::zero(m);
        for (int k = 1; k <= K; ++k) {
            f.at(sp.block_of({k}), 0, 0) += fk[k];
            f.at(sp.block_of({-k}), 0, 0) += std::conj(fk[k]);
        }
        const BasicForm mod = k10 + apply(OperatorId::partial_B, f);
        const BasicForm db = apply(OperatorId::partialbar_B, mod);
        smp.dbar_norm = db.norm();

        const int grid = 8 * K + 16;
        double acc_s = 0.0, acc_d = 0.0;
        for (int g = 0; g < grid; ++g) {
            const double t = double(g) / grid;
            double f1 = 0.0, f2 = 0.0;
            for (int k = 1; k <= K; ++k) {
                const cplx e = std::exp(cplx{0.0, 2.0 * pi * k * t}) * fk[k];
                const cplx w{0.0, 2.0 * pi * k};
                f1 += 2.0 * (w * e).real();
                f2 += 2.0 * (w * w * e).real();
            }
            acc_s += c * c + 0.5 * (f2 + c * f1);
            acc_d += c * c + f2 + c * f1;
        }
        smp.mean_stated = acc_s / grid;
        smp.mean_derived = acc_d / grid;
        smp.mean_engine = -2.0 * db.at(sp.block_of({0}), top, 0).real();
        for (int k = -m->band_limit; k <= m->band_limit; ++k) {
            const int b = sp.block_of({k});
            const cplx fkk = k == 0 || std::abs(k) > K ? cplx{} : (k > 0 ? fk[k] : std::conj(fk[-k]));
            const cplx w{0.0, 2.0 * pi * k};
            const cplx want = (k == 0 ? c * c : 0.0) + (w * w + c * w) * fkk;
            smp.coefficient_mismatch = std::max(smp.coefficient_mismatch, std::abs(-2.0 * db.at(b, top, 0) - want));
        }
        smp.lower_bound = std::abs(smp.mean_derived) / 2.0;

        rep.max_mean_deviation =
            std::max({rep.max_mean_deviation, std::abs(smp.mean_stated - rep.c2), std::abs(smp.mean_derived - rep.c2),
                      std::abs(smp.mean_engine - rep.c2)});
        rep.max_coefficient_mismatch = std::max(rep.max_coefficient_mismatch, smp.coefficient_mismatch);
        rep.min_dbar_norm = std::min(rep.min_dbar_norm, smp.dbar_norm);
        rep.samples.push_back(smp);
    }
    rep.pass = rep.max_mean_deviation < 1e-8 && rep.max_coefficient_mismatch < 1e-8;
    for (const auto& s : rep.samples) rep.pass &= s.dbar_norm > 0.0 && s.dbar_norm >= s.lower_bound * (1.0 - 1e-12);
    return rep;
}

inline nlohmann::json to_json(const ObstructionReport& r) {
    nlohmann::json s = nlohmann::json::array();
    for (const auto& x : r.samples)
        s.push_back({{"seed", x.seed},
                     {"mean_stated", x.mean_stated},
                     {"mean_derived", x.mean_derived},
                     {"mean_engine", x.mean_engine},
                     {"coefficient_mismatch", x.coefficient_mismatch},
                     {"dbar_norm", x.dbar_norm},
                     {"lower_bound", x.lower_bound}});
    return {{"schema", "folcalc.obstruction/1"},
            {"model", r.model},
            {"c2", r.c2},
            {"max_mean_deviation", r.max_mean_deviation},
            {"max_coefficient_mismatch", r.max_coefficient_mismatch},
            {"min_dbar_norm", r.min_dbar_norm},
            {"pass", r.pass},
            {"samples", s}};
}

}  // namespace folcalc
