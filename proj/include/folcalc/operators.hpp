#pragma once

// Operators acting on BasicForm values.

#include "folcalc/forms.hpp"

#include <nlohmann/json.hpp>

namespace folcalc {

/// Applies a per-block full-space matrix family.
template <class F>
BasicForm apply_blockwise(const BasicForm& phi, F&& matrix_of) {
    BasicForm out(phi.context());
    for (int b = 0; b < phi.num_blocks(); ++b) {
        if (phi.block(b).isZero(0.0)) continue;
        BlockOperators& B = phi.context()->block(b);
        out.block(b) = matrix_of(B) * phi.block(b);
    }
    out.set_truncated(phi.truncated());
    return out;
}

inline BasicForm apply(OperatorId id, const BasicForm& phi) {
    if (!operator_info(id).linear) throw FolcalcError("NotLinear", std::string(operator_info(id).name));
    return apply_blockwise(phi, [id](BlockOperators& B) -> const MatrixXc& { return B.op(id); });
}

/// Wedge with a constant pointwise form.
inline BasicForm wedge_constant(const VectorXc& lam, const BasicForm& phi) {
    return apply_blockwise(phi, [&](BlockOperators& B) { return B.wedge(lam); });
}
/// Interior product with a constant complex vector.
inline BasicForm interior_constant(const VectorXc& X, const BasicForm& phi) {
    return apply_blockwise(phi, [&](BlockOperators& B) { return B.interior(X); });
}
/// nabla along a constant complex vector.
inline BasicForm nabla_constant(const VectorXc& X, const BasicForm& phi) {
    return apply_blockwise(phi, [&](BlockOperators& B) { return B.nabla(X); });
}

/// nabla_X phi for a general complex field X (derivation over functions).
inline BasicForm covariant_derivative(const ComplexVectorField& X, const BasicForm& phi) {
    phi.check_same(X.component(0));
    BasicForm out(phi.context());
    const auto Xr = X.real_components();
    for (int c = 0; c < static_cast<int>(Xr.size()); ++c) {
        if (Xr[c].max_abs() == 0.0) continue;
        const BasicForm dc = apply_blockwise(phi, [c](BlockOperators& B) -> const MatrixXc& { return B.nabla_real(c); });
        out += multiply(Xr[c], dc);
    }
    return out;
}

/// Lie derivative by Cartan's formula d(X int) + X int d.
inline BasicForm lie_derivative(const ComplexVectorField& X, const BasicForm& phi) {
    return apply(OperatorId::d_B, interior(X, phi)) + interior(X, apply(OperatorId::d_B, phi));
}

/// A_X = L_X - nabla_X.
inline BasicForm lie_minus_nabla(const ComplexVectorField& X, const BasicForm& phi) {
    return lie_derivative(X, phi) - covariant_derivative(X, phi);
}

/// R^Q(X,Y) acting on forms.
inline BasicForm curvature_action(const ComplexVectorField& X, const ComplexVectorField& Y, const BasicForm& phi) {
    phi.check_same(X.component(0));
    phi.check_same(Y.component(0));
    const auto Xr = X.real_components();
    const auto Yr = Y.real_components();
    const auto& fd = phi.context()->frame();
    BasicForm out(phi.context());
    for (int c = 0; c < fd.N(); ++c) {
        if (Xr[c].max_abs() == 0.0) continue;
        for (int d = 0; d < fd.N(); ++d) {
            if (Yr[d].max_abs() == 0.0) continue;
            const BasicForm r = apply_blockwise(phi, [&](BlockOperators& B) { return B.lift(fd.curv_real(c, d)); });
            out += multiply(multiply(Xr[c], Yr[d]), r);
        }
    }
    return out;
}

inline BasicForm weitzenbock_F(const BasicForm& phi) { return apply(OperatorId::F_curv, phi); }

/// Pointwise Hermitian product <phi, psi> as a function (linear in phi).
inline BasicForm pointwise_inner(const BasicForm& phi, const BasicForm& psi) {
    phi.check_same(psi);
    const auto& sp = *phi.model().spectrum;
    BasicForm out(phi.context());
    bool trunc = phi.truncated() || psi.truncated();
    const int lam = phi.context()->frame().algebra().dim();
    for (int b1 = 0; b1 < phi.num_blocks(); ++b1) {
        const int m1 = phi.fn_dim(b1);
        for (int k1 = 0; k1 < m1; ++k1)
            for (int mask = 0; mask < lam; ++mask) {
                const cplx x = phi.at(b1, mask, k1);
                if (x == cplx{}) continue;
                for (int b2 = 0; b2 < psi.num_blocks(); ++b2) {
                    const int m2 = psi.fn_dim(b2);
                    for (int k2 = 0; k2 < m2; ++k2) {
                        const cplx y = psi.at(b2, mask, k2);
                        if (y == cplx{}) continue;
                        const auto [cj, fac] = sp.conjugate({b2, k2});
                        const cplx w = x * std::conj(y) * fac;
                        trunc |= sp.product({b1, k1}, cj,
                                            [&](SpectralIndex k, cplx c) { out.at(k.block, 0, k.index) += w * c; });
                    }
                }
            }
    }
    if (trunc) throw FolcalcError("BandwidthOverflow", "pointwise product exceeds the band limit");
    return out;
}

inline BasicForm pointwise_norm_sq(const BasicForm& phi) { return pointwise_inner(phi, phi); }

/// Complex-linear flat of a field: V_a -> bar omega^a, bar V_a -> omega^a.
inline BasicForm flat(const ComplexVectorField& X) {
    const int n = X.model().n;
    BasicForm out(X.context());
    for (int i = 0; i < 2 * n; ++i) {
        const int gen = i < n ? i + n : i - n;
        const auto& f = X.component(i);
        for (int b = 0; b < f.num_blocks(); ++b)
            for (int k = 0; k < f.fn_dim(b); ++k) out.at(b, 1u << gen, k) += f.at(b, 0, k);
    }
    return out;
}

struct HolomorphyReport {
    bool holomorphic = false;
    double operator_residual = 0.0;  // max ||(dbar Z int + Z int dbar) phi|| / ||phi|| over the spanning set
    double direct_residual = 0.0;    // max_a ||nabla_{bar V_a} Z||
    bool verdicts_agree = true;
};

/// Transversal holomorphy of a (1,0) field, by the anticommutator and directly.
inline HolomorphyReport is_transversally_holomorphic(const ComplexVectorField& Z, double tol = 1e-10) {
    if (Z.type() != ComplexVectorField::Type::t10)
        throw FolcalcError("TypeTagMismatch", "transversal holomorphy needs a (1,0) field");
    const auto& m = Z.context()->model_ptr();
    const int n = m->n;
    HolomorphyReport rep;
    // constant fields act blockwise, so the anticommutator is checked on
    // every block exactly; otherwise a spanning set of low-degree blocks
    const auto c = m->spectrum->constant();
    VectorXc X = VectorXc::Zero(2 * n);
    bool constant = true;
    for (int i = 0; i < 2 * n; ++i) {
        const auto& f = Z.component(i);
        X[i] = f.at(c.block, 0, c.index);
        constant &= std::abs(f.norm() - std::abs(X[i])) < 1e-14;
    }
    if (constant) {
        for (int b = 0; b < m->spectrum->num_blocks(); ++b) {
            BlockOperators& B = Z.context()->block(b);
            const auto& idx = B.basic_indices();
            if (idx.empty()) continue;
            const MatrixXc A = B.op(OperatorId::partialbar_B) * B.interior(X) + B.interior(X) * B.op(OperatorId::partialbar_B);
            const MatrixXc R = BlockOperators::restrict(A, idx, idx);
            for (Eigen::Index j = 0; j < R.cols(); ++j)
                rep.operator_residual = std::max(rep.operator_residual, R.col(j).norm());
        }
    } else {
        for (int b = 0; b < m->spectrum->num_blocks(); ++b) {
            if (m->spectrum->block_degree(b) > std::min(1, m->band_limit)) continue;
            for (int i : Z.context()->block(b).basic_indices()) {
                BasicForm phi(Z.context());
                phi.block(b)[i] = 1.0;
                const BasicForm lhs = apply(OperatorId::partialbar_B, interior(Z, phi)) +
                                      interior(Z, apply(OperatorId::partialbar_B, phi));
                rep.operator_residual = std::max(rep.operator_residual, lhs.norm());
            }
        }
    }
    const BasicForm zf = flat(Z);
    for (int a = 0; a < n; ++a) {
        const auto& fd = Z.context()->frame();
        const BasicForm d = nabla_constant(fd.frame_vector(n + a), zf);
        rep.direct_residual = std::max(rep.direct_residual, d.norm());
    }
    const bool v1 = rep.operator_residual < tol;
    const bool v2 = rep.direct_residual < tol;
    rep.verdicts_agree = v1 == v2;
    rep.holomorphic = v1 && v2;
    return rep;
}

inline nlohmann::json operator_catalogue_json(int n = 1) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& o : operator_catalogue()) {
        nlohmann::json maps = nlohmann::json::array();
        for (const auto& dom : all_bidegrees(n)) {
            nlohmann::json cod = nlohmann::json::array();
            for (auto b : operator_image(o, dom, n)) cod.push_back({b.r, b.s});
            maps.push_back({{"domain", {dom.r, dom.s}}, {"codomain", cod}});
        }
        out.push_back({{"id", o.name},
                       {"description", o.description},
                       {"linear", o.linear},
                       {"label", o.label},
                       {"bidegree_map_n" + std::to_string(n), maps}});
    }
    return out;
}

}  // namespace folcalc
