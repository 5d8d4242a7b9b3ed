#pragma once

// Pointwise (frame-level) data of a model on the exterior algebra, and the
// per-spectral-block matrices of every basic operator.
//
// A block's full space is Lambda(C^{2n}) (x) C^m with index mask*m + k.  Operators
// are first built on the full space (intermediate steps such as nabla_{V_a} need
// not preserve basic forms on the Hopf model) and restricted to the basic
// subspace afterwards.

#include "folcalc/exterior.hpp"
#include "folcalc/geometry.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string_view>

namespace folcalc {

enum class OperatorId {
    d_B,
    d_T,
    delta_B,
    delta_T,
    partial_B,
    partialbar_B,
    partial_T,
    partialbar_T,
    partial_B_star,
    partialbar_B_star,
    partial_T_star,
    partialbar_T_star,
    star_bar,
    L,
    Lambda,
    J_op,
    Delta_B,
    Delta_T,
    box_B,
    boxbar_B,
    box_T,
    boxbar_T,
    roughT,
    roughbarT,
    rough_tr,
    F_curv,
    RQ_pair_sum,
    lie_H10,
    A_kappa,
    pointwise_norm_sq,
};

struct OperatorInfo {
    OperatorId id;
    std::string_view name;
    std::string_view description;
    // bidegree shifts (dr, ds); empty together with `reflect` for star_bar
    std::vector<std::pair<int, int>> shifts;
    bool reflect = false;  // (r,s) -> (n-s, n-r)
    bool linear = true;
    std::string_view label;  // equation label the operator realizes
};

inline const std::vector<OperatorInfo>& operator_catalogue() {
    using P = std::pair<int, int>;
    static const std::vector<OperatorInfo> cat = {
        {OperatorId::d_B, "d_B", "basic exterior derivative", {P{1, 0}, P{0, 1}}, false, true, "dBdTFormulas"},
        {OperatorId::d_T, "d_T", "twisted differential d_B - eps(kappa_B)", {P{1, 0}, P{0, 1}}, false, true, "dBdTFormulas"},
        {OperatorId::delta_B, "delta_B", "adjoint of d_B", {P{-1, 0}, P{0, -1}}, false, true, "deltab"},
        {OperatorId::delta_T, "delta_T", "adjoint of d_T", {P{-1, 0}, P{0, -1}}, false, true, "deltab"},
        {OperatorId::partial_B, "partial_B", "sum_a omega^a ^ nabla_{V_a}", {P{1, 0}}, false, true, "partialBForm"},
        {OperatorId::partialbar_B, "partialbar_B", "sum_a bar omega^a ^ nabla_{bar V_a}", {P{0, 1}}, false, true, "partialBForm"},
        {OperatorId::partial_T, "partial_T", "partial_B - eps(kappa^{1,0})", {P{1, 0}}, false, true, "kappaComponents"},
        {OperatorId::partialbar_T, "partialbar_T", "partialbar_B - eps(kappa^{0,1})", {P{0, 1}}, false, true, "kappaComponents"},
        {OperatorId::partial_B_star, "partial_B_star", "partial_T* + H^{1,0} interior", {P{-1, 0}}, false, true, "partialBadjointFormulasProp"},
        {OperatorId::partialbar_B_star, "partialbar_B_star", "partialbar_T* + H^{0,1} interior", {P{0, -1}}, false, true, "partialBadjointFormulasProp"},
        {OperatorId::partial_T_star, "partial_T_star", "-sum_a V_a interior nabla_{bar V_a}", {P{-1, 0}}, false, true, "partialBadjointFormulasProp"},
        {OperatorId::partialbar_T_star, "partialbar_T_star", "-sum_a bar V_a interior nabla_{V_a}", {P{0, -1}}, false, true, "partialBadjointFormulasProp"},
        {OperatorId::star_bar, "star_bar", "transversal Hodge star on (r,s)-forms", {}, true, true, "starBarDeltaForm1"},
        {OperatorId::L, "L", "wedge with the Kaehler form", {P{1, 1}}, false, true, "LComm1"},
        {OperatorId::Lambda, "Lambda", "interior product with the Kaehler form", {P{-1, -1}}, false, true, "LComm1"},
        {OperatorId::J_op, "J_op", "complex structure acting as a derivation", {P{0, 0}}, false, true, "LProp"},
        {OperatorId::Delta_B, "Delta_B", "basic Laplacian", {P{0, 0}, P{1, -1}, P{-1, 1}}, false, true, "LaplaceForm2"},
        {OperatorId::Delta_T, "Delta_T", "twisted basic Laplacian", {P{0, 0}, P{1, -1}, P{-1, 1}}, false, true, "starBarLaplaceForm"},
        {OperatorId::box_B, "box_B", "partial_B Laplacian", {P{0, 0}}, false, true, "boxLaplaceDef"},
        {OperatorId::boxbar_B, "boxbar_B", "partialbar_B Laplacian", {P{0, 0}}, false, true, "boxLaplaceDef"},
        {OperatorId::box_T, "box_T", "partial_T Laplacian", {P{0, 0}}, false, true, "starBarLaplaceForm"},
        {OperatorId::boxbar_T, "boxbar_T", "partialbar_T Laplacian", {P{0, 0}}, false, true, "SerreForm"},
        {OperatorId::roughT, "roughT", "-sum nabla^2_{V_a,bar V_a} + nabla_{H^{0,1}}", {P{0, 0}}, false, true, "DeltaTSquareForm"},
        {OperatorId::roughbarT, "roughbarT", "-sum nabla^2_{bar V_a,V_a} + nabla_{H^{1,0}}", {P{0, 0}}, false, true, "DeltaTSquareForm"},
        {OperatorId::rough_tr, "rough_tr", "-sum nabla^2_{E_a,E_a} + nabla_{kappa#}", {P{0, 0}}, false, true, "WeitzThm"},
        {OperatorId::F_curv, "F_curv", "sum theta^a ^ E_b interior R(E_b,E_a)", {P{0, 0}}, false, true, "WeitzThm"},
        {OperatorId::RQ_pair_sum, "RQ_pair_sum", "sum_a R^Q(bar V_a, V_a)", {P{0, 0}}, false, true, "10Remark"},
        {OperatorId::lie_H10, "lie_H10", "Lie derivative along H^{1,0} (Cartan)", {P{0, 0}, P{-1, 1}}, false, true, "(r,0)Prop"},
        {OperatorId::A_kappa, "A_kappa", "Lie minus covariant derivative along kappa#", {P{0, 0}, P{1, -1}, P{-1, 1}}, false, true, "WeitzThm"},
        {OperatorId::pointwise_norm_sq, "pointwise_norm_sq", "|phi|^2 as a basic function", {}, false, false, "LaplaceBDeltaTProp"},
    };
    return cat;
}

inline const OperatorInfo& operator_info(OperatorId id) {
    for (const auto& o : operator_catalogue())
        if (o.id == id) return o;
    throw std::out_of_range("operator_info");
}

inline OperatorId operator_from_name(std::string_view name) {
    for (const auto& o : operator_catalogue())
        if (o.name == name) return o.id;
    throw FolcalcError("UnknownOperator", std::string(name));
}

/// Bidegrees reachable from `in` under an operator.
inline std::set<Bidegree> operator_image(const OperatorInfo& info, Bidegree in, int n) {
    std::set<Bidegree> out;
    if (info.reflect) {
        out.insert({n - in.s, n - in.r});
        return out;
    }
    for (auto [dr, ds] : info.shifts) {
        Bidegree b{in.r + dr, in.s + ds};
        if (b.r >= 0 && b.s >= 0 && b.r <= n && b.s <= n) out.insert(b);
    }
    return out;
}

/// Model-level constant data on Lambda(C^{2n}).
class FrameData {
public:
    explicit FrameData(ModelPtr model) : model_(std::move(model)), alg_(*model_->algebra) {
        const int N = alg_.generators();
        const auto& m = *model_;
        const MatrixXc WT = alg_.W().transpose();
        const MatrixXc UT = alg_.U().transpose();
        auto to_complex = [&](const Eigen::MatrixXd& Ar) -> MatrixXc { return WT * Ar.cast<cplx>() * UT; };

        for (int c = 0; c < N; ++c) {
            Eigen::MatrixXd Ar(N, N);  // (nabla xi)_b = -sum_d gamma(c,b,d) xi_d
            for (int b = 0; b < N; ++b)
                for (int d = 0; d < N; ++d) Ar(b, d) = -m.gamma(c, b, d);
            conn_real_.push_back(alg_.derivation(to_complex(Ar)));
        }
        {
            Eigen::MatrixXd Ar(N, N);
            for (int b = 0; b < N; ++b)
                for (int d = 0; d < N; ++d) Ar(b, d) = -m.leaf_action(b, d);
            conn_leaf_ = alg_.derivation(to_complex(Ar));
        }
        curv_.resize(N * N);
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                Eigen::MatrixXd Ar(N, N);  // (R xi)_c = -sum_d R(a,b,c,d) xi_d
                for (int c = 0; c < N; ++c)
                    for (int d = 0; d < N; ++d) Ar(c, d) = -m.curvature.R(a, b, c, d);
                curv_[a * N + b] = alg_.derivation(to_complex(Ar));
            }

        // frame part of d: d theta^c = -1/2 sum_{a,b} bracket(a,b,c) theta^a ^ theta^b
        std::vector<VectorXc> dtheta(N);
        for (int c = 0; c < N; ++c) {
            dtheta[c] = VectorXc::Zero(alg_.dim());
            for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b)
                    if (m.bracket(a, b, c) != 0.0)
                        dtheta[c] -= 0.5 * m.bracket(a, b, c) * alg_.wedge(alg_.real_covector(a), alg_.real_covector(b));
        }
        std::vector<VectorXc> de(N);  // d e^i = sum_c U(i,c) d theta^c
        for (int i = 0; i < N; ++i) {
            de[i] = VectorXc::Zero(alg_.dim());
            for (int c = 0; c < N; ++c) de[i] += alg_.U()(i, c) * dtheta[c];
        }
        d_frame_ = alg_.antiderivation(de);

        build_star();
        build_conj();

        kaehler_ = alg_.kaehler_form();
        L_ = alg_.left_mult(kaehler_);
        // omega = -sum_a theta^a ^ theta^{a+n}; (xi1 ^ xi2) interior = xi2# int xi1# int
        Lambda_ = MatrixXc::Zero(alg_.dim(), alg_.dim());
        for (int a = 0; a < m.n; ++a) Lambda_ -= alg_.iota_real(a + m.n) * alg_.iota_real(a);
        // J phi = sum_alpha J theta^alpha ^ E_alpha interior phi
        Jop_ = MatrixXc::Zero(alg_.dim(), alg_.dim());
        for (int al = 0; al < N; ++al) {
            VectorXc Jth = al < m.n ? alg_.real_covector(al + m.n) : VectorXc(-alg_.real_covector(al - m.n));
            Jop_ += alg_.left_mult(Jth) * alg_.iota_real(al);
        }

        const VectorXc kr = m.kappa.cast<cplx>();
        kappa_form_ = alg_.covector(kr);
        kappa10_ = VectorXc::Zero(alg_.dim());
        kappa01_ = VectorXc::Zero(alg_.dim());
        for (int a = 0; a < m.n; ++a) {
            kappa10_[1u << a] = kappa_form_[1u << a];
            kappa01_[1u << (a + m.n)] = kappa_form_[1u << (a + m.n)];
        }
        kappa_sharp_ = alg_.vector_components(kr);
        const Eigen::VectorXd Jk = alg_.J_matrix() * m.kappa;
        Jkappa_sharp_ = alg_.vector_components(Jk.cast<cplx>());
        H10_ = 0.5 * (kappa_sharp_ - I_unit * Jkappa_sharp_);
        H01_ = 0.5 * (kappa_sharp_ + I_unit * Jkappa_sharp_);
    }

    const ModelFoliation& model() const { return *model_; }
    const ModelPtr& model_ptr() const { return model_; }
    const ExteriorAlgebra& algebra() const { return alg_; }
    int n() const { return model_->n; }
    int N() const { return alg_.generators(); }

    const MatrixXc& conn_real(int c) const { return conn_real_[c]; }
    const MatrixXc& conn_leaf() const { return conn_leaf_; }
    /// Connection derivation along a constant complex-frame vector.
    MatrixXc conn(const VectorXc& X) const {
        const VectorXc Xr = alg_.vector_real(X);
        MatrixXc out = MatrixXc::Zero(alg_.dim(), alg_.dim());
        for (int c = 0; c < N(); ++c)
            if (Xr[c] != cplx{}) out += Xr[c] * conn_real_[c];
        return out;
    }
    const MatrixXc& curv_real(int a, int b) const { return curv_[a * N() + b]; }
    /// R^Q(X,Y) as a derivation on forms, for constant complex vectors.
    MatrixXc curvature(const VectorXc& X, const VectorXc& Y) const {
        const VectorXc Xr = alg_.vector_real(X), Yr = alg_.vector_real(Y);
        MatrixXc out = MatrixXc::Zero(alg_.dim(), alg_.dim());
        for (int a = 0; a < N(); ++a)
            for (int b = 0; b < N(); ++b) {
                const cplx w = Xr[a] * Yr[b];
                if (w != cplx{}) out += w * curv_real(a, b);
            }
        return out;
    }
    const MatrixXc& d_frame() const { return d_frame_; }
    const MatrixXc& star() const { return star_; }
    const MatrixXc& L() const { return L_; }
    const MatrixXc& Lambda() const { return Lambda_; }
    const MatrixXc& Jop() const { return Jop_; }
    const VectorXc& kaehler_form() const { return kaehler_; }

    const VectorXc& kappa_form() const { return kappa_form_; }
    const VectorXc& kappa10() const { return kappa10_; }
    const VectorXc& kappa01() const { return kappa01_; }
    const VectorXc& kappa_sharp() const { return kappa_sharp_; }
    const VectorXc& Jkappa_sharp() const { return Jkappa_sharp_; }
    const VectorXc& H10() const { return H10_; }
    const VectorXc& H01() const { return H01_; }

    /// Complex-frame unit vector e_i (V_a for i < n, bar V_a otherwise).
    VectorXc frame_vector(int i) const {
        VectorXc v = VectorXc::Zero(N());
        v[i] = 1.0;
        return v;
    }
    /// nabla_Y X for constant vectors (complex-frame components in and out).
    VectorXc nabla_vector(const VectorXc& Y, const VectorXc& X) const {
        const VectorXc Yr = alg_.vector_real(Y), Xr = alg_.vector_real(X);
        VectorXc out = VectorXc::Zero(N());
        for (int c = 0; c < N(); ++c)
            for (int b = 0; b < N(); ++b)
                for (int d = 0; d < N(); ++d) out[d] += Yr[c] * Xr[b] * model_->gamma(c, b, d);
        return alg_.vector_components(out);
    }
    /// Transversal divergence of a constant vector field.
    cplx divergence(const VectorXc& X) const {
        const VectorXc Xr = alg_.vector_real(X);
        cplx s{};
        for (int c = 0; c < N(); ++c)
            for (int b = 0; b < N(); ++b) s += Xr[b] * model_->gamma(c, b, c);
        return s;
    }
    /// Complex-linear musical isomorphism on constant vectors (g extended bilinearly).
    VectorXc flat(const VectorXc& X) const { return alg_.covector(alg_.vector_real(X)); }
    /// Conjugate of a constant vector.
    VectorXc conj_vector(const VectorXc& X) const {
        return alg_.vector_components(alg_.vector_real(X).conjugate());
    }
    /// J applied to a constant vector.
    VectorXc J_vector(const VectorXc& X) const {
        const VectorXc Xr = alg_.vector_real(X);
        return alg_.vector_components(alg_.J_matrix().cast<cplx>() * Xr);
    }

    /// conj(e^mask) = conj_sign(mask) e^{conj_mask(mask)}.
    std::uint32_t conj_mask(std::uint32_t mask) const { return conj_mask_[mask]; }
    double conj_sign(std::uint32_t mask) const { return conj_sign_[mask]; }

private:
    void build_conj() {
        const int D = alg_.dim();
        const int n = model_->n;
        conj_mask_.resize(D);
        conj_sign_.resize(D);
        for (std::uint32_t mask = 0; mask < static_cast<std::uint32_t>(D); ++mask) {
            VectorXc v = alg_.one();
            for (int i = 0; i < N(); ++i)
                if (mask & (1u << i)) v = alg_.wedge(v, alg_.generator(i < n ? i + n : i - n));
            for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(D); ++b)
                if (v[b] != cplx{}) {
                    conj_mask_[mask] = b;
                    conj_sign_[mask] = v[b].real();
                }
        }
    }
    void build_star() {
        // phi ^ star(chi) = <phi, conj chi> nu for all phi, nu = omega^n / n!
        const int D = alg_.dim();
        VectorXc nu = alg_.one();
        const VectorXc w = alg_.kaehler_form();
        double fact = 1.0;
        for (int k = 1; k <= model_->n; ++k) {
            nu = alg_.wedge(nu, w);
            fact *= k;
        }
        nu /= fact;
        const std::uint32_t top = static_cast<std::uint32_t>(D - 1);
        const cplx nu_coef = nu[top];
        MatrixXc Wnu = MatrixXc::Zero(D, D);  // Wnu(A,C) = nu-coefficient of e^A ^ e^C
        for (std::uint32_t a = 0; a < static_cast<std::uint32_t>(D); ++a)
            for (std::uint32_t c = 0; c < static_cast<std::uint32_t>(D); ++c)
                if ((a | c) == top) {
                    const int sg = ExteriorAlgebra::wedge_sign(a, c);
                    if (sg) Wnu(a, c) = static_cast<double>(sg) / nu_coef;
                }
        build_conj();
        star_ = MatrixXc::Zero(D, D);
        const MatrixXc Winv = Wnu.inverse();
        for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(D); ++b) {
            VectorXc rhs = VectorXc::Zero(D);
            rhs[conj_mask_[b]] = conj_sign_[b];  // <e^A, conj e^B>
            star_.col(b) = Winv * rhs;
        }
    }

    ModelPtr model_;
    const ExteriorAlgebra& alg_;
    std::vector<MatrixXc> conn_real_;
    MatrixXc conn_leaf_;
    std::vector<MatrixXc> curv_;
    MatrixXc d_frame_, star_, L_, Lambda_, Jop_;
    VectorXc kaehler_, kappa_form_, kappa10_, kappa01_, kappa_sharp_, Jkappa_sharp_, H10_, H01_;
    std::vector<std::uint32_t> conj_mask_;
    std::vector<double> conj_sign_;
};

using FramePtr = std::shared_ptr<const FrameData>;

/// Full-space matrices of every basic operator on one spectral block.
class BlockOperators {
public:
    BlockOperators(FramePtr frame, int block) : frame_(std::move(frame)), block_(block) {
        const auto& spec = *frame_->model().spectrum;
        m_ = spec.block_dim(block);
        lam_ = frame_->algebra().dim();
        full_ = lam_ * m_;
        for (int c = 0; c < frame_->N(); ++c) D_.push_back(spec.derivation(block, c));
        D_leaf_ = spec.leaf_derivation(block);

        nabla_real_.reserve(frame_->N());
        for (int c = 0; c < frame_->N(); ++c)
            nabla_real_.push_back(lift(frame_->conn_real(c)) + lift_fn(D_[c]));

        // basic subspace: kernel of nabla along the leaf direction (diagonal here)
        const MatrixXc leaf = lift(frame_->conn_leaf()) + lift_fn(D_leaf_);
        const double off = (leaf - MatrixXc(leaf.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
        if (off > 1e-12)
            throw FolcalcError("BlockCouplingDetected", "leaf action is not diagonal in the block basis");
        const auto& alg = frame_->algebra();
        for (int i = 0; i < full_; ++i)
            if (std::abs(leaf(i, i)) < 1e-9) {
                basic_.push_back(i);
                basic_bideg_.push_back(alg.bidegree(static_cast<std::uint32_t>(i / m_)));
            }
    }

    const FrameData& frame() const { return *frame_; }
    int block() const { return block_; }
    int fn_dim() const { return m_; }
    int full_dim() const { return full_; }
    const std::vector<int>& basic_indices() const { return basic_; }
    const std::vector<Bidegree>& basic_bidegrees() const { return basic_bideg_; }
    /// Basic indices of the listed bidegrees (all if empty).
    std::vector<int> basic_indices(const std::vector<Bidegree>& allowed) const {
        if (allowed.empty()) return basic_;
        std::vector<int> out;
        for (size_t i = 0; i < basic_.size(); ++i)
            if (std::find(allowed.begin(), allowed.end(), basic_bideg_[i]) != allowed.end()) out.push_back(basic_[i]);
        return out;
    }

    MatrixXc lift(const MatrixXc& lam) const {
        MatrixXc out = MatrixXc::Zero(full_, full_);
        for (int a = 0; a < lam_; ++a)
            for (int b = 0; b < lam_; ++b)
                if (lam(a, b) != cplx{})
                    for (int k = 0; k < m_; ++k) out(a * m_ + k, b * m_ + k) = lam(a, b);
        return out;
    }
    MatrixXc lift_fn(const MatrixXc& f) const {
        MatrixXc out = MatrixXc::Zero(full_, full_);
        for (int a = 0; a < lam_; ++a) out.block(a * m_, a * m_, m_, m_) = f;
        return out;
    }
    MatrixXc identity() const { return MatrixXc::Identity(full_, full_); }

    const MatrixXc& nabla_real(int c) const { return nabla_real_[c]; }
    /// nabla along a constant complex-frame vector.
    MatrixXc nabla(const VectorXc& X) const {
        const VectorXc Xr = frame_->algebra().vector_real(X);
        MatrixXc out = MatrixXc::Zero(full_, full_);
        for (int c = 0; c < frame_->N(); ++c)
            if (Xr[c] != cplx{}) out += Xr[c] * nabla_real_[c];
        return out;
    }
    MatrixXc nabla_frame(int i) const { return nabla(frame_->frame_vector(i)); }
    /// Function part only: the derivation X acting on coefficients.
    MatrixXc derivative(const VectorXc& X) const {
        const VectorXc Xr = frame_->algebra().vector_real(X);
        MatrixXc out = MatrixXc::Zero(m_, m_);
        for (int c = 0; c < frame_->N(); ++c)
            if (Xr[c] != cplx{}) out += Xr[c] * D_[c];
        return out;
    }
    /// Tensorial second derivative nabla^2_{X,Y} = nabla_X nabla_Y - nabla_{nabla_X Y}.
    MatrixXc nabla2(const VectorXc& X, const VectorXc& Y) const {
        return nabla(X) * nabla(Y) - nabla(frame_->nabla_vector(X, Y));
    }
    MatrixXc eps(int i) const { return lift(frame_->algebra().eps(i)); }
    MatrixXc iota(int i) const { return lift(frame_->algebra().iota(i)); }
    MatrixXc wedge(const VectorXc& lam_form) const { return lift(frame_->algebra().left_mult(lam_form)); }
    MatrixXc interior(const VectorXc& X) const { return lift(frame_->algebra().interior(X)); }
    MatrixXc curvature(const VectorXc& X, const VectorXc& Y) const { return lift(frame_->curvature(X, Y)); }
    /// Lie derivative along a constant vector (Cartan's formula).
    MatrixXc lie(const VectorXc& X) { return op(OperatorId::d_B) * interior(X) + interior(X) * op(OperatorId::d_B); }

    /// d_B assembled from the frame structure constants (no connection involved).
    MatrixXc d_structure() const {
        MatrixXc out = lift(frame_->d_frame());
        for (int c = 0; c < frame_->N(); ++c) out += wedge(frame_->algebra().real_covector(c)) * lift_fn(D_[c]);
        return out;
    }
    /// d_B as sum_c theta^c ^ nabla_{E_c} (torsion-free connection route).
    MatrixXc d_real_frame() const {
        MatrixXc out = MatrixXc::Zero(full_, full_);
        for (int c = 0; c < frame_->N(); ++c) out += wedge(frame_->algebra().real_covector(c)) * nabla_real_[c];
        return out;
    }

    const MatrixXc& op(OperatorId id) {
        std::lock_guard lk(mu_);
        return op_locked(id);
    }

    /// Restriction of a full-space matrix to basic indices (rows, cols).
    static MatrixXc restrict(const MatrixXc& M, const std::vector<int>& rows, const std::vector<int>& cols) {
        MatrixXc out(rows.size(), cols.size());
        for (size_t i = 0; i < rows.size(); ++i)
            for (size_t j = 0; j < cols.size(); ++j) out(i, j) = M(rows[i], cols[j]);
        return out;
    }
    /// Largest entry of M mapping basic vectors outside the basic subspace.
    double leakage(const MatrixXc& M) const {
        std::vector<char> is_basic(full_, 0);
        for (int i : basic_) is_basic[i] = 1;
        double worst = 0.0;
        for (int i = 0; i < full_; ++i) {
            if (is_basic[i]) continue;
            for (int j : basic_) worst = std::max(worst, std::abs(M(i, j)));
        }
        return worst;
    }

private:
    const MatrixXc& op_locked(OperatorId id) {
        if (auto it = cache_.find(id); it != cache_.end()) return it->second;
        MatrixXc M = build(id);
        return cache_.emplace(id, std::move(M)).first->second;
    }

    MatrixXc build(OperatorId id) {
        const int n = frame_->n();
        const auto& fd = *frame_;
        auto get = [&](OperatorId o) -> const MatrixXc& { return op_locked(o); };
        switch (id) {
            case OperatorId::partial_B: {
                MatrixXc out = MatrixXc::Zero(full_, full_);
                for (int a = 0; a < n; ++a) out += eps(a) * nabla_frame(a);
                return out;
            }
            case OperatorId::partialbar_B: {
                MatrixXc out = MatrixXc::Zero(full_, full_);
                for (int a = 0; a < n; ++a) out += eps(n + a) * nabla_frame(n + a);
                return out;
            }
            case OperatorId::d_B: return get(OperatorId::partial_B) + get(OperatorId::partialbar_B);
            case OperatorId::d_T: return get(OperatorId::d_B) - wedge(fd.kappa_form());
            case OperatorId::partial_T: return get(OperatorId::partial_B) - wedge(fd.kappa10());
            case OperatorId::partialbar_T: return get(OperatorId::partialbar_B) - wedge(fd.kappa01());
            case OperatorId::partial_T_star: {
                MatrixXc out = MatrixXc::Zero(full_, full_);
                for (int a = 0; a < n; ++a) out -= iota(a) * nabla_frame(n + a);
                return out;
            }
            case OperatorId::partialbar_T_star: {
                MatrixXc out = MatrixXc::Zero(full_, full_);
                for (int a = 0; a < n; ++a) out -= iota(n + a) * nabla_frame(a);
                return out;
            }
            case OperatorId::partial_B_star: return get(OperatorId::partial_T_star) + interior(fd.H10());
            case OperatorId::partialbar_B_star: return get(OperatorId::partialbar_T_star) + interior(fd.H01());
            case OperatorId::delta_T: return get(OperatorId::partial_T_star) + get(OperatorId::partialbar_T_star);
            case OperatorId::delta_B: return get(OperatorId::delta_T) + interior(fd.kappa_sharp());
            case OperatorId::star_bar: return lift(fd.star());
            case OperatorId::L: return lift(fd.L());
            case OperatorId::Lambda: return lift(fd.Lambda());
            case OperatorId::J_op: return lift(fd.Jop());
            case OperatorId::Delta_B: {
                const auto& d = get(OperatorId::d_B);
                const auto& dl = get(OperatorId::delta_B);
                return d * dl + dl * d;
            }
            case OperatorId::Delta_T: {
                const auto& d = get(OperatorId::d_T);
                const auto& dl = get(OperatorId::delta_T);
                return d * dl + dl * d;
            }
            case OperatorId::box_B: {
                const auto& d = get(OperatorId::partial_B);
                const auto& s = get(OperatorId::partial_B_star);
                return d * s + s * d;
            }
            case OperatorId::boxbar_B: {
                const auto& d = get(OperatorId::partialbar_B);
                const auto& s = get(OperatorId::partialbar_B_star);
                return d * s + s * d;
            }
            case OperatorId::box_T: {
                const auto& d = get(OperatorId::partial_T);
                const auto& s = get(OperatorId::partial_T_star);
                return d * s + s * d;
            }
            case OperatorId::boxbar_T: {
                const auto& d = get(OperatorId::partialbar_T);
                const auto& s = get(OperatorId::partialbar_T_star);
                return d * s + s * d;
            }
            case OperatorId::roughT: {
                MatrixXc out = nabla(fd.H01());
                for (int a = 0; a < n; ++a) out -= nabla2(fd.frame_vector(a), fd.frame_vector(n + a));
                return out;
            }
            case OperatorId::roughbarT: {
                MatrixXc out = nabla(fd.H10());
                for (int a = 0; a < n; ++a) out -= nabla2(fd.frame_vector(n + a), fd.frame_vector(a));
                return out;
            }
            case OperatorId::rough_tr: {
                MatrixXc out = nabla(fd.kappa_sharp());
                const auto& alg = fd.algebra();
                for (int c = 0; c < fd.N(); ++c) {
                    VectorXc Er = VectorXc::Zero(fd.N());
                    Er[c] = 1.0;
                    const VectorXc E = alg.vector_components(Er);
                    out -= nabla2(E, E);
                }
                return out;
            }
            case OperatorId::F_curv: {
                MatrixXc lam = MatrixXc::Zero(lam_, lam_);
                const auto& alg = fd.algebra();
                for (int a = 0; a < fd.N(); ++a)
                    for (int b = 0; b < fd.N(); ++b)
                        lam += alg.left_mult(alg.real_covector(a)) * alg.iota_real(b) * fd.curv_real(b, a);
                return lift(lam);
            }
            case OperatorId::RQ_pair_sum: {
                MatrixXc out = MatrixXc::Zero(full_, full_);
                for (int a = 0; a < n; ++a) out += curvature(fd.frame_vector(n + a), fd.frame_vector(a));
                return out;
            }
            case OperatorId::lie_H10: {
                const auto& d = get(OperatorId::d_B);
                const MatrixXc ih = interior(fd.H10());
                return d * ih + ih * d;
            }
            case OperatorId::A_kappa: {
                const auto& d = get(OperatorId::d_B);
                const MatrixXc ik = interior(fd.kappa_sharp());
                return d * ik + ik * d - nabla(fd.kappa_sharp());
            }
            case OperatorId::pointwise_norm_sq:
                throw FolcalcError("NotLinear", "pointwise_norm_sq is not a linear operator");
        }
        throw std::logic_error("unhandled operator");
    }

    FramePtr frame_;
    int block_;
    int m_ = 1, lam_ = 1, full_ = 1;
    std::vector<MatrixXc> D_;
    MatrixXc D_leaf_;
    std::vector<MatrixXc> nabla_real_;
    std::vector<int> basic_;
    std::vector<Bidegree> basic_bideg_;
    std::map<OperatorId, MatrixXc> cache_;
    std::recursive_mutex mu_;
};

}  // namespace folcalc
