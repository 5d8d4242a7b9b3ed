#pragma once

// Spectral realizations of basic functions.
//
// A SpectralBasis splits the (band-limited) function space into blocks that every
// frame derivation preserves.  Within a block the coefficient vector transforms
// under the frame derivation E_a by the matrix derivation(b, a).  All bases are
// orthonormal for the model weight, so coefficient inner products are plain
// Euclidean ones.

#include "folcalc/exterior.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <vector>

namespace folcalc {

/// Position of a single basis function: block and index within the block.
struct SpectralIndex {
    int block = 0;
    int index = 0;
};

class SpectralBasis {
public:
    virtual ~SpectralBasis() = default;

    virtual std::string kind() const = 0;
    virtual int num_blocks() const = 0;
    virtual int block_dim(int block) const = 0;
    /// Blocks of the same class carry identical derivation matrices.
    virtual int block_class(int block) const = 0;
    /// Degree used for bandwidth bookkeeping (max |k| or spherical degree l).
    virtual int block_degree(int block) const = 0;
    virtual nlohmann::json block_label(int block) const = 0;
    /// Label of a single basis function and its inverse (for serialization).
    virtual nlohmann::json index_label(SpectralIndex i) const = 0;
    virtual SpectralIndex index_from_label(const nlohmann::json& j) const = 0;

    /// Matrix of the real frame derivation E_a acting on coefficient vectors.
    virtual MatrixXc derivation(int block, int frame_index) const = 0;
    /// Matrix of the leaf direction acting on coefficient vectors (zero if no leaf action).
    virtual MatrixXc leaf_derivation(int block) const = 0;
    virtual bool has_leaf_action() const = 0;

    /// conj(basis function) = factor * basis function at the returned index.
    virtual std::pair<SpectralIndex, cplx> conjugate(SpectralIndex) const = 0;

    /// Product of two basis functions expanded in the basis.  Terms outside the
    /// band limit are dropped and reported through the return value (true = truncated).
    virtual bool product(SpectralIndex a, SpectralIndex b,
                         const std::function<void(SpectralIndex, cplx)>& emit) const = 0;

    /// The constant function 1.
    virtual SpectralIndex constant() const = 0;

    /// Integral of a basis function against the model weight.
    cplx integrate_basis(SpectralIndex i) const {
        const auto c = constant();
        return (i.block == c.block && i.index == c.index) ? cplx{1.0} : cplx{};
    }

    int total_dim() const {
        int d = 0;
        for (int b = 0; b < num_blocks(); ++b) d += block_dim(b);
        return d;
    }
};

/// Fourier modes exp(2 pi i k.x) on a unit torus of dimension `dim`, |k_i| <= N.
/// Frame direction a differentiates along lattice axis axis_of_frame[a] (or not at
/// all when that entry is -1).
class FourierLattice final : public SpectralBasis {
public:
    FourierLattice(int dim, int band, std::vector<int> axis_of_frame)
        : dim_(dim), band_(band), side_(2 * band + 1), axis_(std::move(axis_of_frame)) {
        if (band < 1) throw std::invalid_argument("FourierLattice: band limit must be >= 1");
        count_ = 1;
        for (int i = 0; i < dim_; ++i) count_ *= side_;
    }

    std::string kind() const override { return "fourier"; }
    int num_blocks() const override { return count_; }
    int block_dim(int) const override { return 1; }
    int block_class(int b) const override { return b; }
    int block_degree(int b) const override {
        int m = 0;
        for (int k : mode(b)) m = std::max(m, std::abs(k));
        return m;
    }
    nlohmann::json block_label(int b) const override { return mode(b); }
    nlohmann::json index_label(SpectralIndex i) const override { return mode(i.block); }
    SpectralIndex index_from_label(const nlohmann::json& j) const override {
        const int b = block_of(j.get<std::vector<int>>());
        if (b < 0) throw std::out_of_range("mode outside band");
        return {b, 0};
    }

    std::vector<int> mode(int b) const {
        std::vector<int> k(dim_);
        for (int i = 0; i < dim_; ++i) {
            k[i] = b % side_ - band_;
            b /= side_;
        }
        return k;
    }
    /// Block index of a mode, or -1 when outside the band.
    int block_of(const std::vector<int>& k) const {
        int b = 0;
        for (int i = dim_ - 1; i >= 0; --i) {
            if (std::abs(k[i]) > band_) return -1;
            b = b * side_ + (k[i] + band_);
        }
        return b;
    }
    int band() const { return band_; }
    int lattice_dim() const { return dim_; }

    MatrixXc derivation(int b, int a) const override {
        MatrixXc m(1, 1);
        const int ax = axis_.at(a);
        m(0, 0) = ax < 0 ? cplx{} : cplx{0.0, 2.0 * std::numbers::pi * mode(b)[ax]};
        return m;
    }
    MatrixXc leaf_derivation(int) const override { return MatrixXc::Zero(1, 1); }
    bool has_leaf_action() const override { return false; }

    std::pair<SpectralIndex, cplx> conjugate(SpectralIndex i) const override {
        auto k = mode(i.block);
        for (auto& v : k) v = -v;
        return {{block_of(k), 0}, cplx{1.0}};
    }

    bool product(SpectralIndex a, SpectralIndex b,
                 const std::function<void(SpectralIndex, cplx)>& emit) const override {
        auto ka = mode(a.block);
        const auto kb = mode(b.block);
        for (int i = 0; i < dim_; ++i) ka[i] += kb[i];
        const int blk = block_of(ka);
        if (blk < 0) return true;
        emit({blk, 0}, cplx{1.0});
        return false;
    }

    SpectralIndex constant() const override { return {block_of(std::vector<int>(dim_, 0)), 0}; }

private:
    int dim_;
    int band_;
    int side_;
    int count_ = 1;
    std::vector<int> axis_;
};

namespace detail {

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace detail

/// Clebsch-Gordan coefficient <j1 m1 j2 m2 | J M> (Condon-Shortley phase), integer spins.
inline double clebsch_gordan(int j1, int m1, int j2, int m2, int J, int M) {
    using detail::log_factorial;
    if (m1 + m2 != M) return 0.0;
    if (J < std::abs(j1 - j2) || J > j1 + j2) return 0.0;
    if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(M) > J) return 0.0;
    const double pref =
        0.5 * (std::log(2.0 * J + 1.0) + log_factorial(J + j1 - j2) + log_factorial(J - j1 + j2) +
               log_factorial(j1 + j2 - J) - log_factorial(j1 + j2 + J + 1) + log_factorial(J + M) +
               log_factorial(J - M) + log_factorial(j1 - m1) + log_factorial(j1 + m1) +
               log_factorial(j2 - m2) + log_factorial(j2 + m2));
    double sum = 0.0;
    for (int k = 0; k <= j1 + j2 - J; ++k) {
        const int a = j1 + j2 - J - k;
        const int b = j1 - m1 - k;
        const int c = j2 + m2 - k;
        const int d = J - j2 + m1 + k;
        const int e = J - j1 - m2 + k;
        if (a < 0 || b < 0 || c < 0 || d < 0 || e < 0) continue;
        const double lt = log_factorial(k) + log_factorial(a) + log_factorial(b) + log_factorial(c) +
                          log_factorial(d) + log_factorial(e);
        sum += ((k & 1) ? -1.0 : 1.0) * std::exp(pref - lt);
    }
    return sum;
}

/// Spin-l angular momentum matrices in the weight basis |l,k>, k = -l..l.
struct SpinMatrices {
    MatrixXc Jx, Jy, Jz;
    explicit SpinMatrices(int l) {
        const int d = 2 * l + 1;
        MatrixXc Jp = MatrixXc::Zero(d, d);
        Jz = MatrixXc::Zero(d, d);
        for (int i = 0; i < d; ++i) {
            const int k = i - l;
            Jz(i, i) = k;
            if (k < l) Jp(i + 1, i) = std::sqrt(static_cast<double>(l * (l + 1) - k * (k + 1)));
        }
        const MatrixXc Jm = Jp.adjoint();
        Jx = 0.5 * (Jp + Jm);
        Jy = (Jp - Jm) / (2.0 * I_unit);
    }
};

/// Peter-Weyl basis of L^2(SU(2)) restricted to integer spins l <= L:
///   e_{l m k} = sqrt(2l+1) D^l_{mk}, with D^l_{mk}(g) = <l m|U(g)|l k>.
/// Left-invariant fields X_a (brackets [X_a,X_b] = 2 eps_abc X_c on the unit
/// 3-sphere) act on the right index k through -2i J_a; the left index m is inert,
/// so each (l, m) is a block of dimension 2l+1 indexed by k.  Frames 0,1 are X_1,
/// X_2; the leaf direction is X_3 (Hopf fibres).
class SU2PeterWeyl final : public SpectralBasis {
public:
    explicit SU2PeterWeyl(int L) : L_(L) {
        if (L < 0) throw std::invalid_argument("SU2PeterWeyl: negative degree");
        for (int l = 0; l <= L_; ++l) {
            spins_.emplace_back(l);
            for (int m = -l; m <= l; ++m) blocks_.push_back({l, m});
        }
    }

    std::string kind() const override { return "su2"; }
    int num_blocks() const override { return static_cast<int>(blocks_.size()); }
    int block_dim(int b) const override { return 2 * blocks_[b].first + 1; }
    int block_class(int b) const override { return blocks_[b].first; }
    int block_degree(int b) const override { return blocks_[b].first; }
    nlohmann::json block_label(int b) const override {
        return {{"l", blocks_[b].first}, {"m", blocks_[b].second}};
    }
    int max_degree() const { return L_; }
    nlohmann::json index_label(SpectralIndex i) const override {
        const auto [l, m] = blocks_[i.block];
        return {l, m, i.index - l};
    }
    SpectralIndex index_from_label(const nlohmann::json& j) const override {
        const int l = j.at(0), m = j.at(1), k = j.at(2);
        const int b = block_of(l, m);
        if (b < 0 || std::abs(k) > l) throw std::out_of_range("degree outside band");
        return {b, k + l};
    }

    int block_of(int l, int m) const {
        if (l < 0 || l > L_ || std::abs(m) > l) return -1;
        return l * l + (m + l);
    }
    std::pair<int, int> lm(int b) const { return blocks_[b]; }

    MatrixXc derivation(int b, int a) const override {
        const auto& S = spins_[blocks_[b].first];
        if (a == 0) return -2.0 * I_unit * S.Jx;
        if (a == 1) return -2.0 * I_unit * S.Jy;
        throw std::out_of_range("SU2PeterWeyl: transverse frame index must be 0 or 1");
    }
    MatrixXc leaf_derivation(int b) const override { return -2.0 * I_unit * spins_[blocks_[b].first].Jz; }
    bool has_leaf_action() const override { return true; }

    std::pair<SpectralIndex, cplx> conjugate(SpectralIndex i) const override {
        // conj D^l_{mk} = (-1)^{m-k} D^l_{-m,-k}
        const auto [l, m] = blocks_[i.block];
        const int k = i.index - l;
        const double sg = ((m - k) & 1) ? -1.0 : 1.0;
        return {{block_of(l, -m), -k + l}, cplx{sg}};
    }

    bool product(SpectralIndex a, SpectralIndex b,
                 const std::function<void(SpectralIndex, cplx)>& emit) const override {
        const auto [l1, m1] = blocks_[a.block];
        const auto [l2, m2] = blocks_[b.block];
        const int k1 = a.index - l1;
        const int k2 = b.index - l2;
        const int M = m1 + m2;
        const int K = k1 + k2;
        bool truncated = false;
        for (int J = std::abs(l1 - l2); J <= l1 + l2; ++J) {
            if (std::abs(M) > J || std::abs(K) > J) continue;
            const double c = clebsch_gordan(l1, m1, l2, m2, J, M) * clebsch_gordan(l1, k1, l2, k2, J, K);
            if (c == 0.0) continue;
            if (J > L_) {
                if (std::abs(c) > 1e-15) truncated = true;
                continue;
            }
            const double norm = std::sqrt((2.0 * l1 + 1.0) * (2.0 * l2 + 1.0) / (2.0 * J + 1.0));
            emit({block_of(J, M), K + J}, cplx{norm * c});
        }
        return truncated;
    }

    SpectralIndex constant() const override { return {0, 0}; }

private:
    int L_;
    std::vector<SpinMatrices> spins_;
    std::vector<std::pair<int, int>> blocks_;
};

}  // namespace folcalc
