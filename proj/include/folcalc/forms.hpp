#pragma once

// Band-limited basic forms.  A form stores, for every spectral block, the
// coefficient vector on Lambda(C^{2n}) (x) C^m (index mask*m + k).  Functions are
// forms of degree 0.

#include "folcalc/context.hpp"

#include <nlohmann/json.hpp>

#include <random>

namespace folcalc {

class BasicForm {
public:
    BasicForm() = default;
    explicit BasicForm(ContextPtr ctx) : ctx_(std::move(ctx)) {
        const auto& sp = *ctx_->model().spectrum;
        const int lam = ctx_->frame().algebra().dim();
        blocks_.reserve(sp.num_blocks());
        for (int b = 0; b < sp.num_blocks(); ++b) blocks_.push_back(VectorXc::Zero(lam * sp.block_dim(b)));
    }
    static BasicForm zero(const ModelPtr& m) { return BasicForm(ModelContext::of(m)); }

    /// Constant-coefficient form with pointwise value `lam` (an element of Lambda).
    static BasicForm constant(const ModelPtr& m, const VectorXc& lam) {
        BasicForm f = zero(m);
        const auto c = m->spectrum->constant();
        const int mm = m->spectrum->block_dim(c.block);
        for (int a = 0; a < lam.size(); ++a) f.blocks_[c.block][a * mm + c.index] = lam[a];
        return f;
    }
    /// Single basis element: frame mask times a spectral basis function.
    static BasicForm basis(const ModelPtr& m, std::uint32_t mask, SpectralIndex idx, cplx value = 1.0) {
        BasicForm f = zero(m);
        f.at(idx.block, mask, idx.index) = value;
        return f;
    }

    const ContextPtr& context() const { return ctx_; }
    const ModelFoliation& model() const { return ctx_->model(); }
    bool valid() const { return static_cast<bool>(ctx_); }
    int num_blocks() const { return static_cast<int>(blocks_.size()); }
    VectorXc& block(int b) { return blocks_[b]; }
    const VectorXc& block(int b) const { return blocks_[b]; }
    int fn_dim(int b) const { return model().spectrum->block_dim(b); }
    cplx& at(int b, std::uint32_t mask, int k) { return blocks_[b][mask * fn_dim(b) + k]; }
    cplx at(int b, std::uint32_t mask, int k) const { return blocks_[b][mask * fn_dim(b) + k]; }

    bool truncated() const { return truncated_; }
    void set_truncated(bool t) { truncated_ = t; }

    void check_same(const BasicForm& o) const {
        if (!ctx_ || !o.ctx_ || ctx_->model_ptr() != o.ctx_->model_ptr())
            throw FolcalcError("ModelMismatch", "forms belong to different models");
    }

    BasicForm& operator+=(const BasicForm& o) {
        check_same(o);
        for (int b = 0; b < num_blocks(); ++b) blocks_[b] += o.blocks_[b];
        truncated_ = truncated_ || o.truncated_;
        return *this;
    }
    BasicForm& operator-=(const BasicForm& o) {
        check_same(o);
        for (int b = 0; b < num_blocks(); ++b) blocks_[b] -= o.blocks_[b];
        truncated_ = truncated_ || o.truncated_;
        return *this;
    }
    BasicForm& operator*=(cplx s) {
        for (auto& v : blocks_) v *= s;
        return *this;
    }
    friend BasicForm operator+(BasicForm a, const BasicForm& b) { return a += b; }
    friend BasicForm operator-(BasicForm a, const BasicForm& b) { return a -= b; }
    friend BasicForm operator*(cplx s, BasicForm a) { return a *= s; }
    friend BasicForm operator*(double s, BasicForm a) { return a *= cplx{s}; }

    /// Projection onto one bidegree.
    BasicForm component(Bidegree bd) const {
        BasicForm out = *this;
        const auto& alg = ctx_->frame().algebra();
        for (int b = 0; b < num_blocks(); ++b) {
            const int m = fn_dim(b);
            for (int i = 0; i < out.blocks_[b].size(); ++i)
                if (alg.bidegree(static_cast<std::uint32_t>(i / m)) != bd) out.blocks_[b][i] = 0.0;
        }
        return out;
    }
    /// Bidegrees carrying a coefficient above `tol`.
    std::vector<Bidegree> bidegrees(double tol = 0.0) const {
        std::set<Bidegree> s;
        const auto& alg = ctx_->frame().algebra();
        for (int b = 0; b < num_blocks(); ++b) {
            const int m = fn_dim(b);
            for (int i = 0; i < blocks_[b].size(); ++i)
                if (std::abs(blocks_[b][i]) > tol) s.insert(alg.bidegree(static_cast<std::uint32_t>(i / m)));
        }
        return {s.begin(), s.end()};
    }
    /// Largest coefficient outside the basic subspace.
    double nonbasic_part() const {
        double w = 0.0;
        for (int b = 0; b < num_blocks(); ++b) {
            const auto& B = ctx_->block(b);
            std::vector<char> mark(blocks_[b].size(), 0);
            for (int i : B.basic_indices()) mark[i] = 1;
            for (int i = 0; i < blocks_[b].size(); ++i)
                if (!mark[i]) w = std::max(w, std::abs(blocks_[b][i]));
        }
        return w;
    }
    bool is_basic(double tol = 1e-12) const { return nonbasic_part() <= tol * (1.0 + norm()); }

    double norm_sq() const {
        double s = 0.0;
        for (const auto& v : blocks_) s += v.squaredNorm();
        return s;
    }
    double norm() const { return std::sqrt(norm_sq()); }
    /// Largest coefficient magnitude.
    double max_abs() const {
        double s = 0.0;
        for (const auto& v : blocks_)
            if (v.size()) s = std::max(s, v.cwiseAbs().maxCoeff());
        return s;
    }

    /// Weighted L2 inner product, linear in the first slot.
    friend cplx inner(const BasicForm& a, const BasicForm& b) {
        a.check_same(b);
        cplx s{};
        for (int k = 0; k < a.num_blocks(); ++k) s += b.blocks_[k].dot(a.blocks_[k]);
        return s;
    }

    /// Integral against the model weight (degree-0 part).
    cplx integrate() const {
        const auto c = model().spectrum->constant();
        return at(c.block, 0, c.index);
    }

    nlohmann::json to_json() const {
        using nlohmann::json;
        const auto& alg = ctx_->frame().algebra();
        const int n = model().n;
        json entries = json::array();
        std::set<Bidegree> present;
        for (int b = 0; b < num_blocks(); ++b) {
            const int m = fn_dim(b);
            for (int i = 0; i < blocks_[b].size(); ++i) {
                const cplx v = blocks_[b][i];
                if (v == cplx{}) continue;
                const auto mask = static_cast<std::uint32_t>(i / m);
                std::vector<int> I, J;
                for (int a = 0; a < n; ++a) {
                    if (mask & (1u << a)) I.push_back(a + 1);
                    if (mask & (1u << (a + n))) J.push_back(a + 1);
                }
                present.insert(alg.bidegree(mask));
                entries.push_back({I, J, model().spectrum->index_label({b, i % m}), v.real(), v.imag()});
            }
        }
        json bd = json::array();
        for (auto p : present) bd.push_back({p.r, p.s});
        return {{"model", model().name}, {"bidegree", bd}, {"entries", entries}};
    }
    static BasicForm from_json(const ModelPtr& m, const nlohmann::json& j) {
        BasicForm f = zero(m);
        for (const auto& e : j.at("entries")) {
            std::uint32_t mask = 0;
            for (int a : e.at(0).get<std::vector<int>>()) mask |= 1u << (a - 1);
            for (int a : e.at(1).get<std::vector<int>>()) mask |= 1u << (a - 1 + m->n);
            const auto idx = m->spectrum->index_from_label(e.at(2));
            f.at(idx.block, mask, idx.index) = cplx{e.at(3).get<double>(), e.at(4).get<double>()};
        }
        return f;
    }

private:
    ContextPtr ctx_;
    std::vector<VectorXc> blocks_;
    bool truncated_ = false;
};

/// Wedge product; spectral modes multiply through the basis product rule.
inline BasicForm wedge(const BasicForm& x, const BasicForm& y) {
    x.check_same(y);
    BasicForm out(x.context());
    const auto& sp = *x.model().spectrum;
    bool trunc = x.truncated() || y.truncated();
    for (int ba = 0; ba < x.num_blocks(); ++ba) {
        const int ma = x.fn_dim(ba);
        const auto& va = x.block(ba);
        for (int i = 0; i < va.size(); ++i) {
            if (va[i] == cplx{}) continue;
            const auto A = static_cast<std::uint32_t>(i / ma);
            for (int bb = 0; bb < y.num_blocks(); ++bb) {
                const int mb = y.fn_dim(bb);
                const auto& vb = y.block(bb);
                for (int j = 0; j < vb.size(); ++j) {
                    if (vb[j] == cplx{}) continue;
                    const auto B = static_cast<std::uint32_t>(j / mb);
                    const int sg = ExteriorAlgebra::wedge_sign(A, B);
                    if (!sg) continue;
                    const cplx w = static_cast<double>(sg) * va[i] * vb[j];
                    trunc |= sp.product({ba, i % ma}, {bb, j % mb},
                                        [&](SpectralIndex k, cplx c) { out.at(k.block, A | B, k.index) += w * c; });
                }
            }
        }
    }
    out.set_truncated(trunc);
    return out;
}

/// Function times form.
inline BasicForm multiply(const BasicForm& f, const BasicForm& phi) { return wedge(f, phi); }

/// Complex conjugate; maps type (r,s) to (s,r).
inline BasicForm conj(const BasicForm& x) {
    BasicForm out(x.context());
    const auto& sp = *x.model().spectrum;
    const auto& fd = x.context()->frame();
    for (int b = 0; b < x.num_blocks(); ++b) {
        const int m = x.fn_dim(b);
        const auto& v = x.block(b);
        for (int i = 0; i < v.size(); ++i) {
            if (v[i] == cplx{}) continue;
            const auto mask = static_cast<std::uint32_t>(i / m);
            const auto [idx, fac] = sp.conjugate({b, i % m});
            out.at(idx.block, fd.conj_mask(mask), idx.index) += std::conj(v[i]) * fac * fd.conj_sign(mask);
        }
    }
    out.set_truncated(x.truncated());
    return out;
}

/// Complex vector field with function coefficients in the frame (V_1..V_n, bar V_1..bar V_n).
class ComplexVectorField {
public:
    enum class Type { t10, t01, mixed };

    ComplexVectorField() = default;
    ComplexVectorField(std::vector<BasicForm> comps, Type t) : comps_(std::move(comps)), type_(t) {
        if (comps_.empty()) throw std::invalid_argument("ComplexVectorField: no components");
        const int n = comps_[0].model().n;
        if (t == Type::t10)
            for (int a = n; a < 2 * n; ++a)
                if (comps_[a].norm() > 0) throw FolcalcError("TypeTagMismatch", "(1,0) field has bar V components");
        if (t == Type::t01)
            for (int a = 0; a < n; ++a)
                if (comps_[a].norm() > 0) throw FolcalcError("TypeTagMismatch", "(0,1) field has V components");
    }
    /// Constant field with complex-frame components X.
    static ComplexVectorField constant(const ModelPtr& m, const VectorXc& X) {
        std::vector<BasicForm> c;
        const int n = m->n;
        bool lo = false, hi = false;
        for (int i = 0; i < 2 * n; ++i) {
            VectorXc lam = VectorXc::Zero(1u << (2 * n));
            lam[0] = X[i];
            c.push_back(BasicForm::constant(m, lam));
            if (std::abs(X[i]) > 0) (i < n ? lo : hi) = true;
        }
        return {std::move(c), !hi ? Type::t10 : (!lo ? Type::t01 : Type::mixed)};
    }
    /// Field dual to a 1-form through the complex-linear metric (omega^a -> bar V_a).
    static ComplexVectorField sharp(const BasicForm& xi) {
        const int n = xi.model().n;
        std::vector<BasicForm> c;
        for (int i = 0; i < 2 * n; ++i) {
            BasicForm f(xi.context());
            const int src = i < n ? i + n : i - n;  // V_a gets the bar omega^a coefficient
            for (int b = 0; b < xi.num_blocks(); ++b)
                for (int k = 0; k < xi.fn_dim(b); ++k) f.at(b, 0, k) = xi.at(b, 1u << src, k);
            c.push_back(std::move(f));
        }
        return {std::move(c), Type::mixed};
    }

    Type type() const { return type_; }
    const std::vector<BasicForm>& components() const { return comps_; }
    const BasicForm& component(int i) const { return comps_[i]; }
    const ModelFoliation& model() const { return comps_[0].model(); }
    const ContextPtr& context() const { return comps_[0].context(); }

    /// Real-frame coefficient functions (sum_c X^c E_c).
    std::vector<BasicForm> real_components() const {
        const auto& V = context()->frame().algebra().Vmat();
        const int N = static_cast<int>(comps_.size());
        std::vector<BasicForm> out;
        for (int c = 0; c < N; ++c) {
            BasicForm f(context());
            for (int i = 0; i < N; ++i)
                if (V(i, c) != cplx{}) f += V(i, c) * comps_[i];
            out.push_back(std::move(f));
        }
        return out;
    }

    /// Pointwise conjugate field.
    ComplexVectorField conj_field() const {
        const int n = model().n;
        std::vector<BasicForm> c;
        for (int i = 0; i < 2 * n; ++i) c.push_back(folcalc::conj(comps_[i < n ? i + n : i - n]));
        const Type t = type_ == Type::t10 ? Type::t01 : (type_ == Type::t01 ? Type::t10 : Type::mixed);
        return {std::move(c), t};
    }

private:
    std::vector<BasicForm> comps_;
    Type type_ = Type::mixed;
};

/// Interior product X int phi, complex-linear in X.
inline BasicForm interior(const ComplexVectorField& X, const BasicForm& phi) {
    phi.check_same(X.component(0));
    BasicForm out(phi.context());
    const auto& alg = phi.context()->frame().algebra();
    for (int i = 0; i < alg.generators(); ++i) {
        if (X.component(i).max_abs() == 0.0) continue;
        BasicForm ip(phi.context());
        for (int b = 0; b < phi.num_blocks(); ++b) {
            if (phi.block(b).isZero(0.0)) continue;
            auto& B = phi.context()->block(b);
            ip.block(b) = B.lift(alg.iota(i)) * phi.block(b);
        }
        out += wedge(X.component(i), ip);
    }
    return out;
}

/// Deterministic complex-normal random basic form on the listed bidegrees, using
/// blocks of degree <= bandwidth.
inline BasicForm random_form(const ModelPtr& m, const std::vector<Bidegree>& bidegrees, std::uint64_t seed,
                             int bandwidth = -1) {
    if (bandwidth < 0) bandwidth = m->band_limit;
    if (bandwidth > m->band_limit)
        throw FolcalcError("BandwidthTooLarge", "bandwidth " + std::to_string(bandwidth) + " exceeds band limit " +
                                                    std::to_string(m->band_limit));
    auto ctx = ModelContext::of(m);
    BasicForm f(ctx);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    for (int b = 0; b < f.num_blocks(); ++b) {
        if (m->spectrum->block_degree(b) > bandwidth) continue;
        auto& B = ctx->block(b);
        for (int i : B.basic_indices(bidegrees)) {
            const double re = nd(rng);
            const double im = nd(rng);
            f.block(b)[i] = {re, im};
        }
    }
    return f;
}
inline BasicForm random_form(const ModelPtr& m, Bidegree bd, std::uint64_t seed, int bandwidth = -1) {
    return random_form(m, std::vector<Bidegree>{bd}, seed, bandwidth);
}

/// Number of basic coefficients a random form on these bidegrees draws.
inline int random_form_dim(const ModelPtr& m, const std::vector<Bidegree>& bidegrees, int bandwidth = -1) {
    if (bandwidth < 0) bandwidth = m->band_limit;
    auto ctx = ModelContext::of(m);
    int d = 0;
    for (int b = 0; b < ctx->num_blocks(); ++b)
        if (m->spectrum->block_degree(b) <= bandwidth)
            d += static_cast<int>(ctx->block(b).basic_indices(bidegrees).size());
    return d;
}

/// All bidegrees of the model.
inline std::vector<Bidegree> all_bidegrees(int n) {
    std::vector<Bidegree> out;
    for (int r = 0; r <= n; ++r)
        for (int s = 0; s <= n; ++s) out.push_back({r, s});
    return out;
}

}  // namespace folcalc
