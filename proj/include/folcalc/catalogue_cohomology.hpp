#pragma once

// Duality and cohomology entries, plus the assembled catalogue.

#include "folcalc/catalogue_laplace.hpp"

namespace folcalc {
namespace cat {

/// Dimension of the basic space on one bidegree.
inline int space_dim(const ModelPtr& m, Bidegree b) {
    auto ctx = ModelContext::of(m);
    int d = 0;
    for (int i = 0; i < m->spectrum->num_blocks(); ++i) d += static_cast<int>(ctx->block(i).basic_indices({b}).size());
    return d;
}

/// dim ker D on (r,s) minus rank of D landing in (r,s), for a differential D
/// of pure bidegree shift (dr, ds).
inline int cohomology_dim(const ModelPtr& m, OperatorId D, int dr, int ds, Bidegree b) {
    const int n = m->n;
    auto in_range = [n](Bidegree x) { return x.r >= 0 && x.s >= 0 && x.r <= n && x.s <= n; };
    const Bidegree next{b.r + dr, b.s + ds}, prev{b.r - dr, b.s - ds};
    const int ker = in_range(next) ? kernel(assemble(D, m, b)).dim() : space_dim(m, b);
    int rank = 0;
    if (in_range(prev)) rank = space_dim(m, prev) - kernel(assemble(D, m, prev)).dim();
    return ker - rank;
}

inline CustomOutcome integer_mismatch(const std::vector<std::pair<int, int>>& pairs) {
    CustomOutcome o;
    for (const auto& [a, b] : pairs) {
        o.residual = std::max(o.residual, double(std::abs(a - b)));
        ++o.samples;
    }
    o.abs_residual = o.residual;
    return o;
}

inline CustomOutcome from_duality(const DualityReport& r) {
    CustomOutcome o;
    for (const auto& p : r.pairs) {
        double e = std::abs(p.dim_from - p.dim_to);
        if (p.map_rank >= 0) e = std::max(e, double(std::abs(p.map_rank - p.dim_from)));
        if (!std::isnan(p.map_residual)) e = std::max(e, p.map_residual);
        o.residual = std::max(o.residual, e);
        o.note += (o.note.empty() ? "" : " ") + p.from + "=" + std::to_string(p.dim_from) + "/" + p.to + "=" +
                  std::to_string(p.dim_to);
        ++o.samples;
    }
    o.abs_residual = o.residual;
    return o;
}

inline std::vector<IdentitySpec> duality_entries() {
    const std::string S = "dualities";
    std::vector<IdentitySpec> v;
    v.push_back(custom("TwistedDuality", {"TwistedDuality", "deltab"}, S,
                       "star_bar: ker Delta_B^r -> ker Delta_T^{q-r} is an isomorphism",
                       [](const ModelPtr& m, std::uint64_t, int) {
                           return from_duality(duality_check(m, DualityKind::twisted_de_rham));
                       },
                       Applicability::any, 1e-10));
    v.push_back(custom("SerreForm", {"SerreForm"}, S,
                       "sharp = star_bar o conj: ker boxbar_B^{r,s} -> ker boxbar_T^{n-r,n-s} is an isomorphism",
                       [](const ModelPtr& m, std::uint64_t, int) {
                           return from_duality(duality_check(m, DualityKind::twisted_serre));
                       },
                       Applicability::kaehler, 1e-10));
    v.push_back(custom("SerreCor", {"SerreCor"}, S,
                       "dim H_B^{r,s} (dbar_B cohomology) = dim H_T^{n-r,n-s} (dbar_T cohomology)",
                       [](const ModelPtr& m, std::uint64_t, int) {
                           const int n = m->n;
                           std::vector<std::pair<int, int>> p;
                           std::string note;
                           for (int r = 0; r <= n; ++r)
                               for (int s = 0; s <= n; ++s) {
                                   const int a = cohomology_dim(m, OperatorId::partialbar_B, 0, 1, {r, s});
                                   const int b = cohomology_dim(m, OperatorId::partialbar_T, 0, 1, {n - r, n - s});
                                   p.push_back({a, b});
                                   note += Bidegree{r, s}.str() + ":" + std::to_string(a) + "/" + std::to_string(b) + " ";
                               }
                           CustomOutcome o = integer_mismatch(p);
                           o.note = note;
                           return o;
                       },
                       Applicability::kaehler));
    {
        auto e = custom("KSerreForm", {"KSerreForm"}, S, "h_B^{r,s} = h_B^{n-r,n-s}",
                        [](const ModelPtr& m, std::uint64_t, int) {
                            return from_duality(duality_check(m, DualityKind::kodaira_serre));
                        });
        e.expected_fail_nontaut = true;
        v.push_back(e);
    }
    return v;
}

inline std::vector<IdentitySpec> cohomology_entries() {
    const std::string S = "cohomology";
    std::vector<IdentitySpec> v;

    v.push_back(custom("SerreFails", {"SerreFails"}, S,
                       "h_B^{0,0} = h_B^{0,1} = 1, h_B^{1,0} = h_B^{1,1} = 0, h_B^0 = h_B^1 = 1, h_B^2 = 0, h_B^j = sum h_B^{p,q}",
                       [](const ModelPtr& m, std::uint64_t, int) {
                           const BettiTable t = betti_table(m, 1e-8, false);
                           std::vector<std::pair<int, int>> p = {{t.hB_rs[0][0], 1}, {t.hB_rs[0][1], 1},
                                                                 {t.hB_rs[1][0], 0}, {t.hB_rs[1][1], 0},
                                                                 {t.hB[0], 1},       {t.hB[1], 1},
                                                                 {t.hB[2], 0}};
                           for (int k = 0; k <= 2; ++k) p.push_back({t.hB[k], t.dolbeault_sum(k)});
                           CustomOutcome o = integer_mismatch(p);
                           o.note = "min kernel gap " + std::to_string(t.min_gap());
                           return o;
                       },
                       Applicability::carriere));
    {
        // part of the Kodaira-Serre family: the Hodge symmetry fails with it
        auto e = custom("SerreFails.hodge", {"SerreFails", "KSerreForm"}, S, "h_B^{p,q} = h_B^{q,p}",
                        [](const ModelPtr& m, std::uint64_t, int) {
                            const BettiTable t = betti_table(m, 1e-8, false);
                            std::vector<std::pair<int, int>> p;
                            for (int r = 0; r <= m->n; ++r)
                                for (int s = r + 1; s <= m->n; ++s) p.push_back({t.hB_rs[r][s], t.hB_rs[s][r]});
                            return integer_mismatch(p);
                        });
        e.expected_fail_nontaut = true;
        v.push_back(e);
    }

    v.push_back(custom("DolbeaultDecomp", {"DolbeaultDecomp"}, S,
                       "phi = harmonic + dbar_B alpha + dbar_B* beta orthogonally, and dim ker boxbar_B = dim H_B^{r,s}",
                       [](const ModelPtr& m, std::uint64_t seed, int ens) {
                           CustomOutcome o;
                           const auto bds = all_bidegrees(m->n);
                           const int k = std::min(ens, 8);
                           for (int i = 0; i < k; ++i) {
                               const auto bd = bds[static_cast<size_t>(i) % bds.size()];
                               const BasicForm phi = random_form(m, {bd}, detail::mix_seed(seed, "Dolbeault", m->name, i));
                               const auto dec = hodge_decompose(phi, OperatorId::partialbar_B,
                                                                OperatorId::partialbar_B_star, OperatorId::boxbar_B, {bd});
                               o.residual = std::max({o.residual, dec.reconstruction, dec.orthogonality});
                               ++o.samples;
                           }
                           std::vector<std::pair<int, int>> p;
                           for (const auto& bd : bds)
                               p.push_back({harmonic_space(m, OperatorId::boxbar_B, {bd}).dim(),
                                            cohomology_dim(m, OperatorId::partialbar_B, 0, 1, bd)});
                           absorb(o, integer_mismatch(p));
                           return o;
                       }));

    v.push_back(custom("KaehlerExact", {"KaehlerExact"}, S,
                       "the basic Kaehler form is d_B-exact on the nontaut model and not exact on taut models",
                       [](const ModelPtr& m, std::uint64_t, int) {
                           const auto& f = ModelContext::of(m)->frame();
                           const BasicForm w = BasicForm::constant(m, f.kaehler_form());
                           const auto sol = exactness_solve(w, OperatorId::d_B);
                           CustomOutcome o;
                           o.samples = 1;
                           const double rel = sol.residual / w.norm();
                           if (m->is_taut) o.residual = rel > 0.1 ? 0.0 : 1.0;
                           else o.residual = sol.residual;
                           o.abs_residual = o.residual;
                           std::ostringstream s;
                           s << "exactness residual " << sol.residual << ", |omega| " << w.norm();
                           o.note = s.str();
                           return o;
                       },
                       Applicability::kaehler, 1e-12));

    v.push_back(custom("KaehlerExactMeanCurv", {"KaehlerExactMeanCurv"}, S,
                       "for periodic f, the t-average of the dbar_B coefficient of the modified kappa^{1,0} is (log lambda)^2, so it never vanishes",
                       [](const ModelPtr& m, std::uint64_t seed, int ens) {
                           const auto r = mean_curvature_obstruction(m, std::min(ens, 50), seed);
                           CustomOutcome o;
                           o.samples = static_cast<int>(r.samples.size());
                           o.residual = std::max(r.max_mean_deviation, r.min_dbar_norm > 0 ? 0.0 : 1.0);
                           o.abs_residual = o.residual;
                           std::ostringstream s;
                           s << "min |dbar kappa'| " << r.min_dbar_norm << ", coefficient mismatch "
                             << r.max_coefficient_mismatch;
                           o.note = s.str();
                           return o;
                       },
                       Applicability::carriere, 1e-8));

    const auto vanishing = [](bool holo) {
        return [holo](const ModelPtr& m, std::uint64_t, int) {
            CustomOutcome o;
            try {
                const auto r = vanishing_check(m);
                if (!r.ricci_positive) {
                    o.applicable = false;
                    o.note = "transverse Ricci curvature is not positive";
                    return o;
                }
                for (const auto& c : r.checks) {
                    const bool mine = holo ? c.name.rfind("ker dbar_B", 0) == 0 : c.name.rfind("h_B^(", 0) == 0;
                    if (!mine) continue;
                    o.residual = std::max(o.residual, double(c.observed));
                    o.note += (o.note.empty() ? "" : ", ") + c.name + " = " + std::to_string(c.observed);
                    ++o.samples;
                }
            } catch (const FolcalcError& e) {
                o.residual = 1.0;
                o.note = e.what();
            }
            o.abs_residual = o.residual;
            return o;
        };
    };
    v.push_back(custom("VanishingThm", {"VanishingThm"}, S, "Ric^Q > 0: H_B^{r,0} = 0 for r > 0", vanishing(false)));
    v.push_back(custom("VanishingCor", {"VanishingCor"}, S,
                       "Ric^Q > 0: no nonzero basic holomorphic forms of type (r,0), r > 0", vanishing(true)));
    return v;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> s = {"structure",    "commutators", "laplacians", "weitzenboeck",
                                               "dualities",    "cohomology"};
    return s;
}

/// Every entry, sorted by id.
inline const std::vector<IdentitySpec>& catalogue() {
    static const std::vector<IdentitySpec> all = [] {
        std::vector<IdentitySpec> v;
        for (auto part : {structure_entries(), commutator_entries(), laplacian_entries(), weitzenboeck_entries(),
                          duality_entries(), cohomology_entries()})
            v.insert(v.end(), part.begin(), part.end());
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
        return v;
    }();
    return all;
}

}  // namespace cat
}  // namespace folcalc
