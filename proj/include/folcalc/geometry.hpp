#pragma once

// Model transverse geometries.
//
// A ModelFoliation is everything the basic operators consume: an orthonormal
// J-frame {E_a, J E_a = E_{a+n}} with constant connection coefficients, the
// transverse part of the frame brackets, the leaf component of the brackets
// together with the action of the leaf direction on the frame, the basic mean
// curvature kappa_B, curvature, and a spectral basis whose weight is the
// pushforward of the ambient volume.

#include "folcalc/exterior.hpp"
#include "folcalc/spectral.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace folcalc {

struct FolcalcError : std::runtime_error {
    std::string code;
    FolcalcError(std::string c, const std::string& what) : std::runtime_error(what), code(std::move(c)) {}
};

/// Rank-3 and rank-4 real tensors over the 2n frame indices.
class Tensor3 {
public:
    explicit Tensor3(int d = 0) : d_(d), v_(static_cast<size_t>(d * d * d), 0.0) {}
    double& operator()(int a, int b, int c) { return v_[(a * d_ + b) * d_ + c]; }
    double operator()(int a, int b, int c) const { return v_[(a * d_ + b) * d_ + c]; }
    int dim() const { return d_; }

private:
    int d_;
    std::vector<double> v_;
};

class Tensor4 {
public:
    explicit Tensor4(int d = 0) : d_(d), v_(static_cast<size_t>(d * d * d * d), 0.0) {}
    double& operator()(int a, int b, int c, int e) { return v_[((a * d_ + b) * d_ + c) * d_ + e]; }
    double operator()(int a, int b, int c, int e) const { return v_[((a * d_ + b) * d_ + c) * d_ + e]; }
    int dim() const { return d_; }

private:
    int d_;
    std::vector<double> v_;
};

/// R(a,b,c,d) = g(R(E_a,E_b)E_c, E_d).
struct CurvatureData {
    Tensor4 R;
    Eigen::MatrixXd ricci;  // Ric(b,c) = sum_a R(b,a,a,c)

    static CurvatureData from_tensor(Tensor4 R) {
        const int d = R.dim();
        Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(d, d);
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int a = 0; a < d; ++a) ric(b, c) += R(b, a, a, c);
        return {std::move(R), std::move(ric)};
    }

    /// Curvature operator on Lambda^2: <R(th^a^th^b), th^c^th^d> = g(R(E_a,E_b)E_d, E_c).
    Eigen::MatrixXd curvature_operator() const {
        const int d = R.dim();
        std::vector<std::pair<int, int>> pairs;
        for (int a = 0; a < d; ++a)
            for (int b = a + 1; b < d; ++b) pairs.emplace_back(a, b);
        Eigen::MatrixXd op(pairs.size(), pairs.size());
        for (size_t i = 0; i < pairs.size(); ++i)
            for (size_t j = 0; j < pairs.size(); ++j)
                op(i, j) = R(pairs[i].first, pairs[i].second, pairs[j].second, pairs[j].first);
        return op;
    }
};

/// Curvature of constant sectional curvature K in an orthonormal frame.
inline Tensor4 constant_curvature_tensor(int d, double K) {
    Tensor4 R(d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e)
                    R(a, b, c, e) = K * ((b == c && a == e ? 1.0 : 0.0) - (a == c && b == e ? 1.0 : 0.0));
    return R;
}

struct ModelFoliation {
    std::string name;
    std::string family;  // "carriere" | "flat" | "hopf"
    int n = 1;
    int band_limit = 1;

    Tensor3 gamma;          // gamma(a,b,c) = g(nabla_{E_a} E_b, E_c)
    Tensor3 bracket;        // bracket(a,b,c) = theta^c([E_a,E_b])
    Eigen::MatrixXd leaf_bracket;  // leaf component of [E_a,E_b]
    Eigen::MatrixXd leaf_action;   // leaf_action(b,c) = g(nabla_X E_b, E_c), X the leaf direction
    Eigen::VectorXd kappa;         // kappa_B = sum_c kappa(c) theta^c
    CurvatureData curvature;
    std::shared_ptr<const SpectralBasis> spectrum;
    std::shared_ptr<const ExteriorAlgebra> algebra;
    bool is_kaehler = true;
    bool is_taut = true;

    // Carriere parameters (zero elsewhere)
    std::array<std::array<long, 2>, 2> trace_matrix{};
    double log_lambda = 0.0;

    int q() const { return 2 * n; }
    int frame_dim() const { return 2 * n; }

    /// Connection matrix along E_a acting on vector components: (G_a)(c,b) = gamma(a,b,c).
    Eigen::MatrixXd connection_matrix(int a) const {
        const int d = frame_dim();
        Eigen::MatrixXd G(d, d);
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c) G(c, b) = gamma(a, b, c);
        return G;
    }

    /// Stable text identity of the model (used as a cache key).
    std::string fingerprint() const {
        std::string s = family + ":" + name + ":n=" + std::to_string(n) + ":band=" + std::to_string(band_limit);
        char buf[64];
        std::snprintf(buf, sizeof buf, ":loglam=%.17g", log_lambda);
        return s + buf;
    }
};

using ModelPtr = std::shared_ptr<const ModelFoliation>;

/// Curvature rebuilt from gamma, brackets and the leaf action by the structure equations:
///   R(a,b)E_c = nabla_a nabla_b E_c - nabla_b nabla_a E_c - nabla_{[E_a,E_b]} E_c.
inline Tensor4 curvature_from_structure(const ModelFoliation& m) {
    const int d = m.frame_dim();
    Tensor4 R(d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e) {
                    double v = 0.0;
                    for (int k = 0; k < d; ++k) {
                        v += m.gamma(b, c, k) * m.gamma(a, k, e) - m.gamma(a, c, k) * m.gamma(b, k, e);
                        v -= m.bracket(a, b, k) * m.gamma(k, c, e);
                    }
                    v -= m.leaf_bracket(a, b) * m.leaf_action(c, e);
                    R(a, b, c, e) = v;
                }
    return R;
}

inline void check_band(int band, int minimum) {
    if (band < minimum)
        throw FolcalcError("BandLimitInvalid", "band limit " + std::to_string(band) + " below minimum " +
                                                   std::to_string(minimum));
}

/// Codimension-2 model transverse to the Carriere flow on the hyperbolic torus T^3_A.
/// Frame E_1 = Y_1 = lambda^{-t} d_s, E_2 = Y_2 = d_t, J Y_1 = Y_2; weight dt on [0,1].
inline ModelPtr build_carriere(std::array<std::array<long, 2>, 2> A, int band_limit) {
    const long det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
    if (det != 1) throw FolcalcError("NotUnimodular", "matrix must have determinant 1");
    const long tr = A[0][0] + A[1][1];
    if (tr <= 2)
        throw FolcalcError("TraceTooSmall", "trace " + std::to_string(tr) + " must exceed 2 for a real eigenvalue > 1");
    check_band(band_limit, 1);

    auto m = std::make_shared<ModelFoliation>();
    m->name = "carriere";
    m->family = "carriere";
    m->n = 1;
    m->band_limit = band_limit;
    m->trace_matrix = A;
    const double t = static_cast<double>(tr);
    const double lambda = (t + std::sqrt(t * t - 4.0)) / 2.0;
    const double c = std::log(lambda);
    m->log_lambda = c;

    m->gamma = Tensor3(2);
    m->gamma(0, 0, 1) = -c;  // nabla_{Y1} Y1 = -c Y2
    m->gamma(0, 1, 0) = c;   // nabla_{Y1} Y2 =  c Y1
    m->bracket = Tensor3(2);
    m->bracket(0, 1, 0) = c;  // [Y1,Y2] = c Y1
    m->bracket(1, 0, 0) = -c;
    m->leaf_bracket = Eigen::MatrixXd::Zero(2, 2);
    m->leaf_action = Eigen::MatrixXd::Zero(2, 2);
    m->kappa = Eigen::VectorXd::Zero(2);
    m->kappa(1) = c;
    // Gauss curvature of e^{2ct} ds^2 + dt^2 is -c^2.
    m->curvature = CurvatureData::from_tensor(constant_curvature_tensor(2, -c * c));
    m->spectrum = std::make_shared<FourierLattice>(1, band_limit, std::vector<int>{-1, 0});
    m->algebra = std::make_shared<ExteriorAlgebra>(1);
    m->is_kaehler = true;
    m->is_taut = false;
    return m;
}

/// Flat torus T^{2n} with the standard complex structure, kappa_B = 0.
inline ModelPtr build_flat_product(int n, int band_limit) {
    if (n < 1) throw std::invalid_argument("flat model needs n >= 1");
    check_band(band_limit, 1);
    auto m = std::make_shared<ModelFoliation>();
    m->name = "flat" + std::to_string(n);
    m->family = "flat";
    m->n = n;
    m->band_limit = band_limit;
    const int d = 2 * n;
    m->gamma = Tensor3(d);
    m->bracket = Tensor3(d);
    m->leaf_bracket = Eigen::MatrixXd::Zero(d, d);
    m->leaf_action = Eigen::MatrixXd::Zero(d, d);
    m->kappa = Eigen::VectorXd::Zero(d);
    m->curvature = CurvatureData::from_tensor(Tensor4(d));
    std::vector<int> axes(d);
    for (int a = 0; a < d; ++a) axes[a] = a;
    m->spectrum = std::make_shared<FourierLattice>(d, band_limit, axes);
    m->algebra = std::make_shared<ExteriorAlgebra>(n);
    return m;
}

/// Hopf fibration of the unit 3-sphere: transverse geometry is the round sphere of
/// radius 1/2.  Left-invariant frame X_1, X_2 transverse, X_3 along the fibres.
inline ModelPtr build_hopf_transverse(int band_limit_degree) {
    check_band(band_limit_degree, 2);
    auto m = std::make_shared<ModelFoliation>();
    m->name = "hopf";
    m->family = "hopf";
    m->n = 1;
    m->band_limit = band_limit_degree;
    m->gamma = Tensor3(2);  // nabla_{X_a} X_b = [X_a,X_b]/2 is vertical for a != b
    m->bracket = Tensor3(2);
    m->leaf_bracket = Eigen::MatrixXd::Zero(2, 2);
    m->leaf_bracket(0, 1) = 2.0;  // [X1,X2] = 2 X3
    m->leaf_bracket(1, 0) = -2.0;
    m->leaf_action = Eigen::MatrixXd::Zero(2, 2);
    m->leaf_action(0, 1) = 2.0;   // pi[X3,X1] = 2 X2
    m->leaf_action(1, 0) = -2.0;  // pi[X3,X2] = -2 X1
    m->kappa = Eigen::VectorXd::Zero(2);
    // Gauss curvature of the radius-1/2 sphere.
    m->curvature = CurvatureData::from_tensor(constant_curvature_tensor(2, 4.0));
    m->spectrum = std::make_shared<SU2PeterWeyl>(band_limit_degree);
    m->algebra = std::make_shared<ExteriorAlgebra>(1);
    return m;
}

/// Copy of a model with a different band limit.
inline ModelPtr with_band(const ModelFoliation& m, int band) {
    if (m.family == "carriere") return build_carriere(m.trace_matrix, band);
    if (m.family == "flat") return build_flat_product(m.n, band);
    if (m.family == "hopf") return build_hopf_transverse(band);
    throw FolcalcError("UnknownModel", m.family);
}

struct StructureReport {
    double metric_compatibility = 0.0;
    double torsion = 0.0;
    double complex_parallel = 0.0;  // nabla J = 0
    double curvature_symmetry = 0.0;
    double bianchi = 0.0;
    double curvature_reconstruction = 0.0;
    double leaf_action_skew = 0.0;
    bool pass(double tol = 1e-12) const {
        return metric_compatibility < tol && torsion < tol && complex_parallel < tol && curvature_symmetry < tol &&
               bianchi < tol && curvature_reconstruction < tol && leaf_action_skew < tol;
    }
};

inline StructureReport structure_consistency_check(const ModelFoliation& m) {
    StructureReport rep;
    const int d = m.frame_dim();
    auto upd = [](double& slot, double v) { slot = std::max(slot, std::abs(v)); };
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c) {
                upd(rep.metric_compatibility, m.gamma(a, b, c) + m.gamma(a, c, b));
                upd(rep.torsion, m.gamma(a, b, c) - m.gamma(b, a, c) - m.bracket(a, b, c));
            }
    for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c) upd(rep.leaf_action_skew, m.leaf_action(b, c) + m.leaf_action(c, b));

    const Eigen::MatrixXd J = m.algebra->J_matrix();
    if (m.is_kaehler) {
        for (int a = 0; a < d; ++a) {
            const Eigen::MatrixXd G = m.connection_matrix(a);
            upd(rep.complex_parallel, (G * J - J * G).cwiseAbs().maxCoeff());
        }
        // the leaf direction also has to preserve J for basic forms to split by type
        const Eigen::MatrixXd T = m.leaf_action.transpose();
        upd(rep.complex_parallel, (T * J - J * T).cwiseAbs().maxCoeff());
    }
    const auto& R = m.curvature.R;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e) {
                    upd(rep.curvature_symmetry, R(a, b, c, e) + R(b, a, c, e));
                    upd(rep.curvature_symmetry, R(a, b, c, e) + R(a, b, e, c));
                    upd(rep.curvature_symmetry, R(a, b, c, e) - R(c, e, a, b));
                    upd(rep.bianchi, R(a, b, c, e) + R(b, c, a, e) + R(c, a, b, e));
                }
    const Tensor4 Rs = curvature_from_structure(m);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e) upd(rep.curvature_reconstruction, Rs(a, b, c, e) - R(a, b, c, e));
    return rep;
}

}  // namespace folcalc
