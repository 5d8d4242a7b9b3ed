#pragma once

// Exterior algebra on the complexified transverse coframe.
//
// Generators are ordered (omega^1 .. omega^n, bar omega^1 .. bar omega^n); a basis
// element is a bitmask over the 2n generators read in increasing bit order, so
// bit a < n is omega^{a+1} and bit n+a is bar omega^{a+1}.  This is exactly the
// canonical omega^I ^ bar omega^J storage with I, J strictly increasing.

#include <Eigen/Dense>

#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace folcalc {

using cplx = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

inline constexpr cplx I_unit{0.0, 1.0};

struct Bidegree {
    int r = 0;
    int s = 0;
    friend bool operator==(const Bidegree&, const Bidegree&) = default;
    friend auto operator<=>(const Bidegree&, const Bidegree&) = default;
    int total() const { return r + s; }
    std::string str() const { return "(" + std::to_string(r) + "," + std::to_string(s) + ")"; }
};

class ExteriorAlgebra {
public:
    explicit ExteriorAlgebra(int n) : n_(n), N_(2 * n), dim_(1u << (2 * n)) {
        if (n < 1 || n > 4) throw std::invalid_argument("ExteriorAlgebra: n must be in [1,4]");
        eps_.reserve(N_);
        iota_.reserve(N_);
        for (int j = 0; j < N_; ++j) {
            eps_.push_back(build_eps(j));
            iota_.push_back(build_iota(j));
        }
        build_frames();
    }

    int n() const { return n_; }
    int generators() const { return N_; }
    int dim() const { return static_cast<int>(dim_); }

    Bidegree bidegree(std::uint32_t mask) const {
        const std::uint32_t lo = mask & ((1u << n_) - 1u);
        const std::uint32_t hi = mask >> n_;
        return {std::popcount(lo), std::popcount(hi)};
    }
    int degree(std::uint32_t mask) const { return std::popcount(mask); }

    /// Sign of e^A ^ e^B reordered to canonical order (0 if A and B overlap).
    static int wedge_sign(std::uint32_t a, std::uint32_t b) {
        if (a & b) return 0;
        // count pairs (i in a, j in b) with i > j
        int swaps = 0;
        for (std::uint32_t bb = b; bb; bb &= bb - 1) {
            const int j = std::countr_zero(bb);
            swaps += std::popcount(a >> (j + 1));
        }
        return (swaps & 1) ? -1 : 1;
    }

    /// Left multiplication by the generator e^j.
    const MatrixXc& eps(int j) const { return eps_.at(j); }
    /// Contraction with the dual frame vector e_j (e^i(e_j) = delta_ij).
    const MatrixXc& iota(int j) const { return iota_.at(j); }

    VectorXc wedge(const VectorXc& x, const VectorXc& y) const {
        VectorXc out = VectorXc::Zero(dim_);
        for (std::uint32_t a = 0; a < dim_; ++a) {
            if (x[a] == cplx{}) continue;
            for (std::uint32_t b = 0; b < dim_; ++b) {
                if (y[b] == cplx{}) continue;
                const int sg = wedge_sign(a, b);
                if (sg != 0) out[a | b] += static_cast<double>(sg) * x[a] * y[b];
            }
        }
        return out;
    }

    /// Matrix of left multiplication by an arbitrary element x.
    MatrixXc left_mult(const VectorXc& x) const {
        MatrixXc m = MatrixXc::Zero(dim_, dim_);
        for (std::uint32_t a = 0; a < dim_; ++a) {
            if (x[a] == cplx{}) continue;
            for (std::uint32_t b = 0; b < dim_; ++b) {
                const int sg = wedge_sign(a, b);
                if (sg != 0) m(a | b, b) += static_cast<double>(sg) * x[a];
            }
        }
        return m;
    }

    /// Derivation extension of an endomorphism A of Lambda^1 (A e^i = sum_j A(j,i) e^j).
    MatrixXc derivation(const MatrixXc& A) const {
        MatrixXc m = MatrixXc::Zero(dim_, dim_);
        for (int i = 0; i < N_; ++i)
            for (int j = 0; j < N_; ++j)
                if (A(j, i) != cplx{}) m += A(j, i) * (eps_[j] * iota_[i]);
        return m;
    }

    /// Degree +1 antiderivation sending e^i to the 2-form beta[i].
    MatrixXc antiderivation(const std::vector<VectorXc>& beta) const {
        MatrixXc m = MatrixXc::Zero(dim_, dim_);
        for (int i = 0; i < N_; ++i) m += left_mult(beta[i]) * iota_[i];
        return m;
    }

    VectorXc generator(int j) const {
        VectorXc v = VectorXc::Zero(dim_);
        v[1u << j] = 1.0;
        return v;
    }
    VectorXc one() const {
        VectorXc v = VectorXc::Zero(dim_);
        v[0] = 1.0;
        return v;
    }

    // Real orthonormal frame {E_a, J E_a = E_{a+n}} and its complex partners.
    //   omega^a = (theta^a + i theta^{a+n})/sqrt2,   V_a = (E_a - i E_{a+n})/sqrt2.
    // U(i,c): coefficient of theta^c in complex covector e^i; also e^i(E_c), so
    //   E_c = sum_i U(i,c) e_i.
    // W = U^{-1}: theta^c = sum_i W(c,i) e^i.
    // Vmat(i,c): coefficient of E_c in the complex frame vector e_i.
    const MatrixXc& U() const { return U_; }
    const MatrixXc& W() const { return W_; }
    const MatrixXc& Vmat() const { return Vmat_; }

    /// Real covector theta^c as an element of Lambda^1.
    VectorXc real_covector(int c) const {
        VectorXc v = VectorXc::Zero(dim_);
        for (int i = 0; i < N_; ++i) v[1u << i] = W_(c, i);
        return v;
    }
    /// Complex-frame components of a real-frame 1-form with coefficients xi_c.
    VectorXc covector(const VectorXc& real_coeffs) const {
        VectorXc v = VectorXc::Zero(dim_);
        for (int c = 0; c < N_; ++c)
            if (real_coeffs[c] != cplx{}) v += real_coeffs[c] * real_covector(c);
        return v;
    }
    /// Complex-frame components X^i of the vector sum_c X^c E_c.
    VectorXc vector_components(const VectorXc& real_coeffs) const { return U_ * real_coeffs; }
    /// Real-frame components of a vector given by complex-frame components.
    VectorXc vector_real(const VectorXc& complex_coeffs) const { return Vmat_.transpose() * complex_coeffs; }

    /// Contraction with E_c.
    MatrixXc iota_real(int c) const {
        MatrixXc m = MatrixXc::Zero(dim_, dim_);
        for (int i = 0; i < N_; ++i) m += U_(i, c) * iota_[i];
        return m;
    }
    MatrixXc interior(const VectorXc& complex_components) const {
        MatrixXc m = MatrixXc::Zero(dim_, dim_);
        for (int i = 0; i < N_; ++i)
            if (complex_components[i] != cplx{}) m += complex_components[i] * iota_[i];
        return m;
    }

    /// Index of J E_c and its sign: J E_a = E_{a+n}, J E_{a+n} = -E_a.
    std::pair<int, double> J_index(int c) const {
        return c < n_ ? std::pair{c + n_, 1.0} : std::pair{c - n_, -1.0};
    }
    /// Real 2n x 2n matrix of J acting on real vector components.
    Eigen::MatrixXd J_matrix() const {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N_, N_);
        for (int c = 0; c < N_; ++c) {
            auto [jc, sg] = J_index(c);
            J(jc, c) = sg;
        }
        return J;
    }

    /// All basis masks of the given bidegree, in increasing mask order.
    std::vector<std::uint32_t> masks(Bidegree b) const {
        std::vector<std::uint32_t> out;
        for (std::uint32_t a = 0; a < dim_; ++a)
            if (bidegree(a) == b) out.push_back(a);
        return out;
    }

    /// Real-frame alternative: theta^a ^ J theta^a summed, giving the Kaehler form
    /// omega = -1/2 sum_alpha theta^alpha ^ J theta^alpha.
    VectorXc kaehler_form() const {
        VectorXc w = VectorXc::Zero(dim_);
        for (int al = 0; al < N_; ++al) {
            // J theta^c (X) = -theta^c (J X): J theta^a = theta^{a+n}, J theta^{a+n} = -theta^a
            VectorXc Jth = al < n_ ? real_covector(al + n_) : VectorXc(-real_covector(al - n_));
            w += -0.5 * wedge(real_covector(al), Jth);
        }
        return w;
    }

private:
    MatrixXc build_eps(int j) const {
        MatrixXc m = MatrixXc::Zero(dim_, dim_);
        const std::uint32_t g = 1u << j;
        for (std::uint32_t b = 0; b < dim_; ++b) {
            const int sg = wedge_sign(g, b);
            if (sg != 0) m(b | g, b) = sg;
        }
        return m;
    }
    MatrixXc build_iota(int j) const {
        // adjoint of eps(j) in the orthonormal basis (real entries)
        return build_eps(j).transpose();
    }
    void build_frames() {
        const double h = 1.0 / std::sqrt(2.0);
        U_ = MatrixXc::Zero(N_, N_);
        Vmat_ = MatrixXc::Zero(N_, N_);
        for (int a = 0; a < n_; ++a) {
            U_(a, a) = h;
            U_(a, a + n_) = I_unit * h;
            U_(a + n_, a) = h;
            U_(a + n_, a + n_) = -I_unit * h;
            Vmat_(a, a) = h;
            Vmat_(a, a + n_) = -I_unit * h;
            Vmat_(a + n_, a) = h;
            Vmat_(a + n_, a + n_) = I_unit * h;
        }
        W_ = U_.inverse();
    }

    int n_;
    int N_;
    std::uint32_t dim_;
    std::vector<MatrixXc> eps_;
    std::vector<MatrixXc> iota_;
    MatrixXc U_, W_, Vmat_;
};

}  // namespace folcalc
