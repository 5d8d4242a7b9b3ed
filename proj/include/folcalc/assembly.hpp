#pragma once

// Block-diagonal assembly of basic operators, kernels and least-squares solves.
//
// A block matrix is the full-space operator restricted to basic indices: columns
// are the basic indices of the domain bidegrees, rows those of every bidegree the
// operator can reach.  All spectral bases are orthonormal for the model weight,
// so the Gram matrices are identities; they are still carried and used.

#include "folcalc/operators.hpp"

#include <Eigen/SVD>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

namespace folcalc {

inline std::vector<Bidegree> bidegrees_of_degree(int n, int k) {
    std::vector<Bidegree> out;
    for (int r = 0; r <= n; ++r) {
        const int s = k - r;
        if (s >= 0 && s <= n) out.push_back({r, s});
    }
    return out;
}

inline std::string bidegree_key(const std::vector<Bidegree>& v) {
    std::string s;
    for (auto b : v) s += b.str();
    return s;
}

/// Full-space matrix producer for one block.
using BlockMatrixFn = std::function<MatrixXc(BlockOperators&)>;

struct MatrixBlock {
    int block = 0;
    std::vector<int> rows;  // full-space indices of codomain basis
    std::vector<int> cols;  // full-space indices of domain basis
    MatrixXc M;
    MatrixXc gram_dom;
    MatrixXc gram_cod;
};

struct OperatorMatrix {
    std::string name;
    ModelPtr model;
    std::vector<Bidegree> domain;
    std::vector<Bidegree> codomain;
    std::vector<MatrixBlock> blocks;

    double norm() const {
        double s = 0.0;
        for (const auto& b : blocks) s += b.M.squaredNorm();
        return std::sqrt(s);
    }
    double max_singular_bound() const {
        double s = 0.0;
        for (const auto& b : blocks)
            if (b.M.size()) s = std::max(s, b.M.cwiseAbs().maxCoeff());
        return s;
    }
    int rows() const {
        int r = 0;
        for (const auto& b : blocks) r += static_cast<int>(b.rows.size());
        return r;
    }
    int cols() const {
        int c = 0;
        for (const auto& b : blocks) c += static_cast<int>(b.cols.size());
        return c;
    }

    /// Matrix-vector product on forms (domain components only).
    BasicForm apply(const BasicForm& phi) const {
        BasicForm out(phi.context());
        for (const auto& b : blocks) {
            VectorXc x(b.cols.size());
            for (size_t j = 0; j < b.cols.size(); ++j) x[j] = phi.block(b.block)[b.cols[j]];
            const VectorXc y = b.M * x;
            for (size_t i = 0; i < b.rows.size(); ++i) out.block(b.block)[b.rows[i]] += y[i];
        }
        return out;
    }
};

namespace detail {

inline std::string fnv_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream o;
    o << std::hex << h;
    return o.str();
}

inline void write_matrix(std::ostream& os, const MatrixXc& M) {
    const std::int64_t r = M.rows(), c = M.cols();
    os.write(reinterpret_cast<const char*>(&r), sizeof r);
    os.write(reinterpret_cast<const char*>(&c), sizeof c);
    for (std::int64_t j = 0; j < c; ++j)
        for (std::int64_t i = 0; i < r; ++i) {
            const double v[2] = {M(i, j).real(), M(i, j).imag()};
            os.write(reinterpret_cast<const char*>(v), sizeof v);
        }
}

inline bool read_matrix(std::istream& is, MatrixXc& M) {
    std::int64_t r = 0, c = 0;
    if (!is.read(reinterpret_cast<char*>(&r), sizeof r) || !is.read(reinterpret_cast<char*>(&c), sizeof c)) return false;
    if (r < 0 || c < 0 || r > (1 << 20) || c > (1 << 20)) return false;
    M.resize(r, c);
    for (std::int64_t j = 0; j < c; ++j)
        for (std::int64_t i = 0; i < r; ++i) {
            double v[2];
            if (!is.read(reinterpret_cast<char*>(v), sizeof v)) return false;
            M(i, j) = {v[0], v[1]};
        }
    return true;
}

}  // namespace detail

/// Content-addressed cache of restricted blocks, optionally mirrored on disk
/// (directory from FOLCALC_CACHE_DIR).
class BlockCache {
public:
    static BlockCache& instance() {
        static BlockCache c;
        return c;
    }

    std::optional<MatrixXc> find(const std::string& key) {
        {
            std::lock_guard lk(mu_);
            if (auto it = mem_.find(key); it != mem_.end()) {
                ++hits_;
                return it->second;
            }
        }
        if (auto dir = disk_dir()) {
            std::ifstream in(*dir / (detail::fnv_hex(key) + ".bin"), std::ios::binary);
            std::string stored;
            std::int64_t len = 0;
            MatrixXc M;
            if (in && in.read(reinterpret_cast<char*>(&len), sizeof len) && len >= 0 && len < (1 << 20)) {
                stored.resize(static_cast<size_t>(len));
                if (in.read(stored.data(), len) && stored == key && detail::read_matrix(in, M)) {
                    std::lock_guard lk(mu_);
                    mem_.emplace(key, M);
                    ++disk_hits_;
                    return M;
                }
            }
        }
        return std::nullopt;
    }

    void insert(const std::string& key, const MatrixXc& M) {
        bool fresh = false;
        {
            std::lock_guard lk(mu_);
            fresh = mem_.emplace(key, M).second;
        }
        if (!fresh) return;
        if (auto dir = disk_dir()) {
            std::error_code ec;
            std::filesystem::create_directories(*dir, ec);
            const auto final_path = *dir / (detail::fnv_hex(key) + ".bin");
            const auto tmp = final_path.string() + ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
            {
                std::ofstream out(tmp, std::ios::binary);
                const std::int64_t len = static_cast<std::int64_t>(key.size());
                out.write(reinterpret_cast<const char*>(&len), sizeof len);
                out.write(key.data(), len);
                detail::write_matrix(out, M);
            }
            std::filesystem::rename(tmp, final_path, ec);
        }
    }

    void clear() {
        std::lock_guard lk(mu_);
        mem_.clear();
        hits_ = disk_hits_ = 0;
    }
    size_t size() const {
        std::lock_guard lk(mu_);
        return mem_.size();
    }
    size_t hits() const { return hits_; }
    size_t disk_hits() const { return disk_hits_; }

private:
    static std::optional<std::filesystem::path> disk_dir() {
        const char* d = std::getenv("FOLCALC_CACHE_DIR");
        if (!d || !*d) return std::nullopt;
        return std::filesystem::path(d);
    }
    mutable std::mutex mu_;
    std::map<std::string, MatrixXc> mem_;
    std::atomic<size_t> hits_{0}, disk_hits_{0};
};

inline void check_bidegrees(const ModelFoliation& m, const std::vector<Bidegree>& v) {
    for (auto b : v)
        if (b.r < 0 || b.s < 0 || b.r > m.n || b.s > m.n)
            throw FolcalcError("BidegreeMismatch", "bidegree " + b.str() + " outside the model's range");
}

/// Assembles an arbitrary per-block full-space operator between bidegree sets.
/// `name` must identify the operator uniquely (it keys the cache).
inline OperatorMatrix assemble_custom(const ModelPtr& model, const std::string& name, const std::vector<Bidegree>& domain,
                                      const std::vector<Bidegree>& codomain, const BlockMatrixFn& fn,
                                      bool use_cache = true) {
    check_bidegrees(*model, domain);
    check_bidegrees(*model, codomain);
    auto ctx = ModelContext::of(model);
    OperatorMatrix out{name, model, domain, codomain, {}};
    const auto& sp = *model->spectrum;
    std::map<int, MatrixXc> per_class;
    for (int b = 0; b < sp.num_blocks(); ++b) {
        BlockOperators& B = ctx->block(b);
        MatrixBlock mb;
        mb.block = b;
        mb.cols = B.basic_indices(domain);
        mb.rows = B.basic_indices(codomain);
        const int cls = sp.block_class(b);
        if (auto it = per_class.find(cls); it != per_class.end()) {
            mb.M = it->second;
        } else {
            const std::string key = model->fingerprint() + "|" + name + "|" + bidegree_key(domain) + "->" +
                                    bidegree_key(codomain) + "|class=" + std::to_string(cls);
            std::optional<MatrixXc> hit = use_cache ? BlockCache::instance().find(key) : std::nullopt;
            if (hit && hit->rows() == static_cast<int>(mb.rows.size()) && hit->cols() == static_cast<int>(mb.cols.size())) {
                mb.M = *hit;
            } else {
                const MatrixXc full = fn(B);
                // basic columns must not leak into non-basic rows, nor outside the codomain
                std::vector<char> in_rows(B.full_dim(), 0);
                for (int i : mb.rows) in_rows[i] = 1;
                const double scale = std::max(1.0, full.cwiseAbs().maxCoeff());
                double leak = 0.0, stray = 0.0;
                std::vector<char> is_basic(B.full_dim(), 0);
                for (int i : B.basic_indices()) is_basic[i] = 1;
                for (int j : mb.cols)
                    for (int i = 0; i < B.full_dim(); ++i) {
                        if (in_rows[i]) continue;
                        const double v = std::abs(full(i, j));
                        if (!is_basic[i]) leak = std::max(leak, v);
                        else stray = std::max(stray, v);
                    }
                if (leak > 1e-13 * scale)
                    throw FolcalcError("BlockCouplingDetected", name + ": basic forms leak out of the basic subspace in block " +
                                                                    std::to_string(b) + " (" + std::to_string(leak) + ")");
                if (stray > 1e-11 * scale)
                    throw FolcalcError("BidegreeMismatch", name + ": image outside the declared codomain " +
                                                               bidegree_key(codomain));
                mb.M = BlockOperators::restrict(full, mb.rows, mb.cols);
                if (use_cache) BlockCache::instance().insert(key, mb.M);
            }
            per_class.emplace(cls, mb.M);
        }
        mb.gram_dom = MatrixXc::Identity(mb.cols.size(), mb.cols.size());
        mb.gram_cod = MatrixXc::Identity(mb.rows.size(), mb.rows.size());
        out.blocks.push_back(std::move(mb));
    }
    return out;
}

/// Codomain bidegrees of a catalogue operator on a domain set.
inline std::vector<Bidegree> image_bidegrees(OperatorId id, const std::vector<Bidegree>& domain, int n) {
    std::set<Bidegree> s;
    for (auto d : domain)
        for (auto b : operator_image(operator_info(id), d, n)) s.insert(b);
    return {s.begin(), s.end()};
}

inline OperatorMatrix assemble(OperatorId id, const ModelPtr& model, const std::vector<Bidegree>& domain) {
    const auto& info = operator_info(id);
    if (!info.linear) throw FolcalcError("NotLinear", std::string(info.name) + " has no matrix");
    const auto cod = image_bidegrees(id, domain, model->n);
    return assemble_custom(model, std::string(info.name), domain, cod,
                           [id](BlockOperators& B) -> MatrixXc { return B.op(id); });
}
inline OperatorMatrix assemble(OperatorId id, const ModelPtr& model, Bidegree bd) {
    return assemble(id, model, std::vector<Bidegree>{bd});
}

/// Blockwise product A * B (B's codomain must be A's domain).
inline OperatorMatrix compose(const OperatorMatrix& A, const OperatorMatrix& B) {
    if (A.model != B.model) throw FolcalcError("ModelMismatch", "compose");
    if (A.domain != B.codomain) throw FolcalcError("BidegreeMismatch", "compose: " + A.name + " after " + B.name);
    OperatorMatrix out{"(" + A.name + ")(" + B.name + ")", A.model, B.domain, A.codomain, {}};
    for (size_t k = 0; k < A.blocks.size(); ++k) {
        MatrixBlock mb;
        mb.block = A.blocks[k].block;
        mb.rows = A.blocks[k].rows;
        mb.cols = B.blocks[k].cols;
        mb.M = A.blocks[k].M * B.blocks[k].M;
        mb.gram_dom = B.blocks[k].gram_dom;
        mb.gram_cod = A.blocks[k].gram_cod;
        out.blocks.push_back(std::move(mb));
    }
    return out;
}

/// G_dom^{-1} M^* G_cod per block.
inline OperatorMatrix gram_adjoint(const OperatorMatrix& A) {
    OperatorMatrix out{"adj(" + A.name + ")", A.model, A.codomain, A.domain, {}};
    for (const auto& b : A.blocks) {
        MatrixBlock mb;
        mb.block = b.block;
        mb.rows = b.cols;
        mb.cols = b.rows;
        if (mb.rows.empty() || mb.cols.empty()) {
            mb.M = MatrixXc::Zero(mb.rows.size(), mb.cols.size());
        } else {
            const Eigen::FullPivLU<MatrixXc> lu(b.gram_dom);
            if (!lu.isInvertible()) throw FolcalcError("SingularGram", A.name);
            mb.M = lu.solve(b.M.adjoint() * b.gram_cod);
        }
        mb.gram_dom = b.gram_cod;
        mb.gram_cod = b.gram_dom;
        out.blocks.push_back(std::move(mb));
    }
    return out;
}

/// Largest blockwise difference, relative to 1 + max(|A|,|B|).
inline double matrix_distance(const OperatorMatrix& A, const OperatorMatrix& B) {
    if (A.blocks.size() != B.blocks.size()) throw FolcalcError("BidegreeMismatch", "distance: block counts");
    double worst = 0.0;
    const double sc = 1.0 + std::max(A.max_singular_bound(), B.max_singular_bound());
    for (size_t k = 0; k < A.blocks.size(); ++k) {
        const auto& a = A.blocks[k];
        const auto& b = B.blocks[k];
        if (a.rows != b.rows || a.cols != b.cols) throw FolcalcError("BidegreeMismatch", "distance: index sets differ");
        if (a.M.size()) worst = std::max(worst, (a.M - b.M).cwiseAbs().maxCoeff());
    }
    return worst / sc;
}

struct KernelBasis {
    struct Vector {
        int block;
        std::vector<int> indices;  // full-space indices
        VectorXc coeffs;
    };
    std::vector<Vector> vectors;
    double tol = 1e-8;
    double sigma_max = 0.0;
    double threshold = 0.0;
    double smallest_kept = std::numeric_limits<double>::infinity();
    double largest_discarded = 0.0;
    std::vector<std::string> warnings;

    int dim() const { return static_cast<int>(vectors.size()); }
    double gap_ratio() const {
        if (largest_discarded <= 0.0) return std::numeric_limits<double>::infinity();
        return smallest_kept / largest_discarded;
    }
    BasicForm form(const ModelPtr& m, int i) const {
        BasicForm f = BasicForm::zero(m);
        const auto& v = vectors[i];
        for (size_t k = 0; k < v.indices.size(); ++k) f.block(v.block)[v.indices[k]] = v.coeffs[k];
        return f;
    }
};

/// Kernel by per-block SVD; sigma counts as zero below max(tol * sigma_max, 1e-14).
inline KernelBasis kernel(const OperatorMatrix& M, double tol = 1e-8) {
    if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("kernel: tol must lie in (0,1)");
    KernelBasis kb;
    kb.tol = tol;
    struct Svd {
        Eigen::VectorXd s;
        MatrixXc V;
    };
    std::vector<Svd> svds(M.blocks.size());
    for (size_t k = 0; k < M.blocks.size(); ++k) {
        const auto& b = M.blocks[k];
        if (b.cols.empty()) continue;
        if (b.rows.empty()) {
            svds[k].V = MatrixXc::Identity(b.cols.size(), b.cols.size());
            continue;
        }
        // weighted: || L_cod M x || with L_dom-orthonormal x; identity Grams reduce to plain SVD
        const Eigen::LLT<MatrixXc> Ld(b.gram_dom), Lc(b.gram_cod);
        const MatrixXc Ldinv = MatrixXc(Ld.matrixU()).inverse();
        const MatrixXc W = MatrixXc(Lc.matrixU()) * b.M * Ldinv;
        Eigen::JacobiSVD<MatrixXc> svd(W, Eigen::ComputeFullV);
        svds[k].s = svd.singularValues();
        svds[k].V = Ldinv * svd.matrixV();
        for (int i = 0; i < svds[k].s.size(); ++i) kb.sigma_max = std::max(kb.sigma_max, svds[k].s[i]);
    }
    kb.threshold = std::max(tol * kb.sigma_max, 1e-14);
    for (size_t k = 0; k < M.blocks.size(); ++k) {
        const auto& b = M.blocks[k];
        const int nc = static_cast<int>(b.cols.size());
        if (nc == 0) continue;
        const auto& s = svds[k].s;
        for (int i = 0; i < nc; ++i) {
            const double sig = i < s.size() ? s[i] : 0.0;
            if (sig < kb.threshold) {
                kb.largest_discarded = std::max(kb.largest_discarded, sig);
                kb.vectors.push_back({b.block, b.cols, svds[k].V.col(i)});
            } else {
                kb.smallest_kept = std::min(kb.smallest_kept, sig);
            }
        }
    }
    if (kb.gap_ratio() <= 1e4)
        kb.warnings.push_back("DegenerateGap: smallest kept / largest discarded singular value = " +
                              std::to_string(kb.gap_ratio()));
    return kb;
}

struct SolveResult {
    double residual = 0.0;
    BasicForm primitive;
};

/// Least-squares eta minimizing || D eta - target || (pseudo-inverse per block).
inline SolveResult exactness_solve(const BasicForm& target, OperatorId differential, double tol = 1e-10) {
    const auto& m = target.context()->model_ptr();
    const int n = m->n;
    const auto present = target.bidegrees();
    // domain: every bidegree the differential maps into the target's bidegrees
    std::vector<Bidegree> domain;
    for (const auto& d : all_bidegrees(n)) {
        const auto img = operator_image(operator_info(differential), d, n);
        for (auto b : present)
            if (img.count(b)) {
                domain.push_back(d);
                break;
            }
    }
    for (auto b : present) {
        bool hit = false;
        for (auto d : domain) hit |= operator_image(operator_info(differential), d, n).count(b) > 0;
        if (!hit) throw FolcalcError("BidegreeMismatch", "target bidegree " + b.str() + " is not in the image");
    }
    SolveResult res{0.0, BasicForm(target.context())};
    if (domain.empty()) {
        res.residual = target.norm();
        return res;
    }
    const OperatorMatrix D = assemble(differential, m, domain);
    double r2 = 0.0;
    // target components outside D's row set are unreachable
    for (const auto& b : D.blocks) {
        std::vector<char> in_rows(target.block(b.block).size(), 0);
        for (int i : b.rows) in_rows[i] = 1;
        for (int i = 0; i < target.block(b.block).size(); ++i)
            if (!in_rows[i]) r2 += std::norm(target.block(b.block)[i]);
        if (b.rows.empty()) continue;
        VectorXc t(b.rows.size());
        for (size_t i = 0; i < b.rows.size(); ++i) t[i] = target.block(b.block)[b.rows[i]];
        if (b.cols.empty()) {
            r2 += t.squaredNorm();
            continue;
        }
        Eigen::JacobiSVD<MatrixXc> svd(b.M, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(tol);
        const VectorXc eta = svd.solve(t);
        r2 += (b.M * eta - t).squaredNorm();
        for (size_t j = 0; j < b.cols.size(); ++j) res.primitive.block(b.block)[b.cols[j]] = eta[j];
    }
    res.residual = std::sqrt(r2);
    return res;
}

struct Decomposition {
    BasicForm harmonic, exact, coexact;
    double reconstruction = 0.0;  // ||phi - (h + e + c)|| / ||phi||
    double orthogonality = 0.0;   // max pairwise |<.,.>| / ||phi||^2
};

/// phi = harmonic + D(...) + Dstar(...) on the given bidegrees, with D, Dstar a
/// differential/adjoint pair and Lap = D Dstar + Dstar D.
inline Decomposition hodge_decompose(const BasicForm& phi, OperatorId D, OperatorId Dstar, OperatorId Lap,
                                     const std::vector<Bidegree>& bidegrees, double tol = 1e-8) {
    const auto& m = phi.context()->model_ptr();
    const int n = m->n;
    auto preimage = [&](OperatorId op) {
        std::vector<Bidegree> dom;
        for (const auto& d : all_bidegrees(n)) {
            const auto img = operator_image(operator_info(op), d, n);
            for (auto b : bidegrees)
                if (img.count(b)) {
                    dom.push_back(d);
                    break;
                }
        }
        return dom;
    };
    auto project_range = [&](OperatorId op) {
        BasicForm out(phi.context());
        const auto dom = preimage(op);
        if (dom.empty()) return out;
        const OperatorMatrix A = assemble_custom(m, std::string(operator_info(op).name), dom, bidegrees,
                                                 [op](BlockOperators& B) -> MatrixXc { return B.op(op); });
        double smax = 0.0;
        std::vector<std::optional<Eigen::JacobiSVD<MatrixXc>>> svds(A.blocks.size());
        for (size_t k = 0; k < A.blocks.size(); ++k) {
            if (A.blocks[k].M.size() == 0) continue;
            svds[k].emplace(A.blocks[k].M, Eigen::ComputeFullU);
            smax = std::max(smax, svds[k]->singularValues()[0]);
        }
        const double thr = std::max(tol * smax, 1e-14);
        for (size_t k = 0; k < A.blocks.size(); ++k) {
            const auto& b = A.blocks[k];
            if (b.rows.empty() || b.cols.empty()) continue;
            const auto& s = svds[k]->singularValues();
            int rank = 0;
            while (rank < s.size() && s[rank] > thr) ++rank;
            const MatrixXc Uk = svds[k]->matrixU().leftCols(rank);
            VectorXc x(b.rows.size());
            for (size_t i = 0; i < b.rows.size(); ++i) x[i] = phi.block(b.block)[b.rows[i]];
            const VectorXc p = Uk * (Uk.adjoint() * x);
            for (size_t i = 0; i < b.rows.size(); ++i) out.block(b.block)[b.rows[i]] = p[i];
        }
        return out;
    };
    Decomposition d;
    d.exact = project_range(D);
    d.coexact = project_range(Dstar);
    const KernelBasis kb = kernel(assemble_custom(m, std::string(operator_info(Lap).name), bidegrees, bidegrees,
                                                  [Lap](BlockOperators& B) -> MatrixXc { return B.op(Lap); }),
                                  tol);
    d.harmonic = BasicForm(phi.context());
    for (int i = 0; i < kb.dim(); ++i) {
        const BasicForm h = kb.form(m, i);
        d.harmonic += inner(phi, h) * h;
    }
    const double nn = std::max(phi.norm_sq(), 1e-300);
    d.reconstruction = (phi - d.harmonic - d.exact - d.coexact).norm() / std::sqrt(nn);
    d.orthogonality = std::max({std::abs(inner(d.harmonic, d.exact)), std::abs(inner(d.harmonic, d.coexact)),
                                std::abs(inner(d.exact, d.coexact))}) /
                      nn;
    return d;
}

/// Dense complex binary dump (per block: int64 rows, int64 cols, column-major
/// re/im doubles) and a JSON sidecar describing the blocks.
inline void export_matrix(const OperatorMatrix& A, const std::filesystem::path& stem) {
    std::ofstream bin(stem.string() + ".bin", std::ios::binary);
    nlohmann::json side;
    side["operator"] = A.name;
    side["model"] = A.model->name;
    side["fingerprint"] = A.model->fingerprint();
    nlohmann::json dom = nlohmann::json::array(), cod = nlohmann::json::array();
    for (auto b : A.domain) dom.push_back({b.r, b.s});
    for (auto b : A.codomain) cod.push_back({b.r, b.s});
    side["domain"] = dom;
    side["codomain"] = cod;
    side["layout"] = "per block: int64 rows, int64 cols, rows*cols complex (re,im float64), column-major";
    nlohmann::json blocks = nlohmann::json::array();
    std::int64_t offset = 0;
    for (const auto& b : A.blocks) {
        detail::write_matrix(bin, b.M);
        blocks.push_back({{"mode", A.model->spectrum->block_label(b.block)},
                          {"shape", {b.M.rows(), b.M.cols()}},
                          {"offset", offset}});
        offset += 16 + 16 * static_cast<std::int64_t>(b.M.size());
    }
    side["blocks"] = blocks;
    std::ofstream(stem.string() + ".json") << side.dump(2) << "\n";
}

}  // namespace folcalc
