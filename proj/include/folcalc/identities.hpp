#pragma once

// Identity catalogue and suite runner.
//
// An identity compares two operator expressions on seeded random basic forms
// of a declared type, or runs a custom evaluator for statements that are not
// operator equations (pointwise formulas, dimension counts, dichotomies).

#include "folcalc/cohomology.hpp"

#include <chrono>
#include <functional>
#include <future>
#include <set>

namespace folcalc {

// ---------------------------------------------------------------- expressions

/// Operator expression: a display string, declared bidegree images and a
/// per-block full-space matrix builder.
struct Expr {
    std::string text;
    std::function<std::set<Bidegree>(Bidegree, int)> image;
    std::function<MatrixXc(BlockOperators&)> build;
};

namespace expr {

inline std::function<std::set<Bidegree>(Bidegree, int)> shifts(std::vector<std::pair<int, int>> sh) {
    return [sh](Bidegree in, int n) {
        std::set<Bidegree> out;
        for (auto [dr, ds] : sh) {
            Bidegree b{in.r + dr, in.s + ds};
            if (b.r >= 0 && b.s >= 0 && b.r <= n && b.s <= n) out.insert(b);
        }
        return out;
    };
}

inline Expr op(OperatorId id) {
    const auto& info = operator_info(id);
    return {std::string(info.name), [id](Bidegree b, int n) { return operator_image(operator_info(id), b, n); },
            [id](BlockOperators& B) -> MatrixXc { return B.op(id); }};
}

inline Expr zero() {
    return {"0", [](Bidegree, int) { return std::set<Bidegree>{}; },
            [](BlockOperators& B) -> MatrixXc { return MatrixXc::Zero(B.full_dim(), B.full_dim()); }};
}

inline Expr identity() {
    return {"1", shifts({{0, 0}}), [](BlockOperators& B) -> MatrixXc { return B.identity(); }};
}

/// Pointwise or derivative term with an explicit shift declaration.
inline Expr term(std::string text, std::vector<std::pair<int, int>> sh, std::function<MatrixXc(BlockOperators&)> f) {
    return {std::move(text), shifts(std::move(sh)), std::move(f)};
}

// shift of a constant vector field: V_a lowers r, bar V_a lowers s
inline std::vector<std::pair<int, int>> vector_shifts(const VectorXc& X, int n) {
    bool hol = false, anti = false;
    for (int a = 0; a < n; ++a) {
        hol |= std::abs(X[a]) > 1e-14;
        anti |= std::abs(X[n + a]) > 1e-14;
    }
    std::vector<std::pair<int, int>> out;
    if (hol) out.push_back({-1, 0});
    if (anti) out.push_back({0, -1});
    return out;
}

inline Expr operator*(const Expr& a, const Expr& b) {
    return {a.text + " " + b.text,
            [ia = a.image, ib = b.image](Bidegree in, int n) {
                std::set<Bidegree> out;
                for (const auto& mid : ib(in, n))
                    for (const auto& o : ia(mid, n)) out.insert(o);
                return out;
            },
            [ba = a.build, bb = b.build](BlockOperators& B) -> MatrixXc { return ba(B) * bb(B); }};
}

inline Expr operator+(const Expr& a, const Expr& b) {
    return {a.text + " + " + b.text,
            [ia = a.image, ib = b.image](Bidegree in, int n) {
                auto out = ia(in, n);
                for (const auto& o : ib(in, n)) out.insert(o);
                return out;
            },
            [ba = a.build, bb = b.build](BlockOperators& B) -> MatrixXc { return ba(B) + bb(B); }};
}

inline Expr operator*(cplx c, const Expr& a) {
    std::ostringstream s;
    if (c.imag() == 0.0) s << c.real();
    else if (c.real() == 0.0) s << c.imag() << "i";
    else s << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
    return {s.str() + " " + a.text, a.image, [c, ba = a.build](BlockOperators& B) -> MatrixXc { return c * ba(B); }};
}

inline Expr operator-(const Expr& a, const Expr& b) {
    Expr nb = cplx(-1.0) * b;
    nb.text = b.text;
    Expr out = a + nb;
    out.text = a.text + " - " + b.text;
    return out;
}

inline Expr comm(const Expr& a, const Expr& b) {
    Expr out = a * b - b * a;
    out.text = "[" + a.text + ", " + b.text + "]";
    return out;
}

inline Expr paren(Expr a) {
    a.text = "(" + a.text + ")";
    return a;
}

}  // namespace expr

// ------------------------------------------------------------------ catalogue

struct IdentitySample {
    VectorXc lhs;
    VectorXc rhs;
};

/// Outcome of a custom evaluator that decides pass/fail itself.
struct CustomOutcome {
    double residual = 0.0;
    double abs_residual = 0.0;
    int samples = 0;
    std::string note;
    bool applicable = true;  // false when the sample space or hypothesis is empty on this model
};

enum class Applicability { any, kaehler, taut, nontaut, hopf, carriere, minimal_kaehler };

struct IdentitySpec {
    std::string id;
    std::vector<std::string> refs;  // equation labels covered
    std::string statement;
    std::string suite;
    Applicability applies = Applicability::any;
    bool expected_fail_nontaut = false;
    std::vector<Bidegree> (*domain)(int n) = nullptr;  // null: every bidegree separately
    std::optional<Expr> lhs, rhs;
    std::function<CustomOutcome(const ModelPtr&, std::uint64_t seed, int ensemble)> custom;
    double threshold = 1e-9;
};

struct IdentityReport {
    std::string id;
    std::vector<std::string> refs;
    std::string model;
    std::string statement;
    int ensemble = 0;
    std::uint64_t seed = 0;
    double residual = 0.0;
    double abs_residual = 0.0;
    double threshold = 0.0;
    std::string verdict;
    std::string note;
    double wall_ms = 0.0;
};

inline bool applies_to(Applicability a, const ModelPtr& m) {
    const bool taut = ModelContext::of(m)->frame().kappa_form().norm() < 1e-14;
    switch (a) {
        case Applicability::any:
        case Applicability::kaehler: return true;
        case Applicability::taut:
        case Applicability::minimal_kaehler: return taut;
        case Applicability::nontaut: return !taut;
        case Applicability::hopf: return m->name == "hopf";
        case Applicability::carriere: return m->name == "carriere";
    }
    return false;
}

inline std::string to_string(Applicability a) {
    switch (a) {
        case Applicability::any: return "any";
        case Applicability::kaehler: return "kaehler";
        case Applicability::taut: return "taut";
        case Applicability::nontaut: return "nontaut";
        case Applicability::hopf: return "hopf";
        case Applicability::carriere: return "carriere";
        case Applicability::minimal_kaehler: return "minimal-kaehler";
    }
    return "?";
}

/// Every bidegree of the model, used when an identity has no type restriction.
inline std::vector<Bidegree> any_type(int n) { return all_bidegrees(n); }

/// Images of both sides must be nested (or one side identically zero).
inline void type_check(const IdentitySpec& s, int n) {
    if (!s.lhs || !s.rhs) return;
    const auto dom = s.domain ? s.domain(n) : all_bidegrees(n);
    for (const auto& bd : dom) {
        const auto a = s.lhs->image(bd, n);
        const auto b = s.rhs->image(bd, n);
        if (a.empty() || b.empty()) continue;
        const bool ab = std::includes(b.begin(), b.end(), a.begin(), a.end());
        const bool ba = std::includes(a.begin(), a.end(), b.begin(), b.end());
        if (!ab && !ba)
            throw FolcalcError("TypeCheckFailed", s.id + ": sides land in different bidegrees on " + bd.str());
    }
}

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, const std::string& a, const std::string& b, std::uint64_t k) {
    std::uint64_t h = 1469598103934665603ull ^ seed;
    for (char c : a + "|" + b) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
    h ^= k + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

inline double residual_of(const VectorXc& l, const VectorXc& r) {
    return (l - r).norm() / (1.0 + l.norm() + r.norm());
}

}  // namespace detail

/// Runs an operator-equation identity on seeded random forms.
inline CustomOutcome evaluate_operator_identity(const IdentitySpec& s, const ModelPtr& m, std::uint64_t seed,
                                                int ensemble) {
    auto ctx = ModelContext::of(m);
    const int nb = m->spectrum->num_blocks();
    const auto dom = s.domain ? s.domain(m->n) : all_bidegrees(m->n);
    // each identity sample lives in one bidegree when the identity is typed
    // per bidegree; cycling through the domain covers all of them
    struct Blk {
        MatrixXc Lm, Rm;
    };
    std::map<int, Blk> built;  // keyed by block class
    CustomOutcome out;
    for (int k = 0; k < ensemble; ++k) {
        std::vector<Bidegree> bds;
        if (s.domain) bds = dom;
        else bds = {dom[static_cast<size_t>(k) % dom.size()]};
        const BasicForm phi = random_form(m, bds, detail::mix_seed(seed, s.id, m->name, k));
        double dn = 0, ln = 0, rn = 0, pn = 0;
        for (int b = 0; b < nb; ++b) {
            const auto& v = phi.block(b);
            if (v.isZero(0.0)) continue;
            BlockOperators& B = ctx->block(b);
            const int cls = m->spectrum->block_class(b);
            auto it = built.find(cls);
            if (it == built.end()) {
                Blk blk;
                blk.Lm = s.lhs->build(B);
                blk.Rm = s.rhs->build(B);
                it = built.emplace(cls, std::move(blk)).first;
            }
            const VectorXc l = it->second.Lm * v, r = it->second.Rm * v;
            dn += (l - r).squaredNorm();
            ln += l.squaredNorm();
            rn += r.squaredNorm();
            pn += v.squaredNorm();
        }
        dn = std::sqrt(dn);
        out.residual = std::max(out.residual, dn / (1.0 + std::sqrt(ln) + std::sqrt(rn)));
        if (pn > 0) out.abs_residual = std::max(out.abs_residual, dn / std::sqrt(pn));
        ++out.samples;
    }
    return out;
}

}  // namespace folcalc
