#include "tblandscape/spectral.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "tblandscape/kernels.hpp"

namespace tbl {

Selection Selection::range(std::size_t first, std::size_t last) {
    if (first == 0 || last < first) {
        throw Error(ErrorCode::IndexOutOfRange, "ordinal range must satisfy 1 <= first <= last");
    }
    std::vector<std::size_t> ords(last - first + 1);
    std::iota(ords.begin(), ords.end(), first);
    return Selection(Kind::Ordinals, ords.size(), std::move(ords));
}

Selection Selection::ordinals(std::vector<std::size_t> ords) {
    std::sort(ords.begin(), ords.end());
    ords.erase(std::unique(ords.begin(), ords.end()), ords.end());
    if (ords.empty() || ords.front() == 0) {
        throw Error(ErrorCode::IndexOutOfRange, "ordinals are 1-based and must be nonempty");
    }
    const std::size_t count = ords.size();
    return Selection(Kind::Ordinals, count, std::move(ords));
}

std::vector<std::size_t> Selection::resolve(std::size_t n) const {
    std::vector<std::size_t> out;
    switch (kind_) {
        case Kind::Lowest:
        case Kind::Highest:
            if (count_ == 0 || count_ > n) {
                throw Error(ErrorCode::IndexOutOfRange,
                            "requested " + std::to_string(count_) + " eigenpairs of " + std::to_string(n));
            }
            out.resize(count_);
            std::iota(out.begin(), out.end(), kind_ == Kind::Lowest ? std::size_t{1} : n - count_ + 1);
            break;
        case Kind::Ordinals:
            if (ordinals_.back() > n) {
                throw Error(ErrorCode::IndexOutOfRange,
                            "ordinal " + std::to_string(ordinals_.back()) + " exceeds spectrum size " +
                                std::to_string(n));
            }
            out = ordinals_;
            break;
    }
    return out;
}

namespace {

using Vec = std::vector<double>;
using ApplyFn = std::function<void(std::span<const double>, std::span<double>)>;

void orient(Vec& phi) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < phi.size(); ++i) {
        if (std::abs(phi[i]) > std::abs(phi[best])) best = i;
    }
    if (phi[best] < 0.0) {
        for (double& x : phi) x = -x;
    }
}

double norm2(std::span<const double> v) { return std::sqrt(kernels::dot(v, v)); }

void orthogonalize(Vec& w, const std::vector<Vec>& locked, const std::vector<Vec>& basis = {}) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const Vec& b : locked) kernels::axpy(-kernels::dot(b, w), b, w);
        for (const Vec& b : basis) kernels::axpy(-kernels::dot(b, w), b, w);
    }
}

struct Converged {
    double lambda;
    Vec x;
};

/// Lowest `k` eigenpairs of the SPD operator A. Lanczos runs on A^{-1}
/// (sparse Cholesky solves) with full reorthogonalization; converged Ritz
/// vectors are locked and later runs are deflated against them.
class ShiftInvertLanczos {
public:
    ShiftInvertLanczos(const Eigen::SparseMatrix<double>& a, ApplyFn apply, double tol)
        : a_(a), apply_(std::move(apply)), tol_(tol), n_(static_cast<std::size_t>(a.rows())) {
        chol_.compute(a_);
        if (chol_.info() != Eigen::Success) {
            throw Error(ErrorCode::EigenSolverFailed, "operator is not positive definite");
        }
    }

    std::vector<Converged> lowest(std::size_t k) {
        std::size_t target = k;
        for (int certify = 0; certify < 8; ++certify) {
            extend_to(target);
            std::sort(locked_.begin(), locked_.end(),
                      [](const Converged& x, const Converged& y) { return x.lambda < y.lambda; });
            const double top = locked_[k - 1].lambda;
            const double probe = top - 10.0 * tol_ * std::max(1.0, std::abs(top));
            const std::size_t below = count_eigenvalues_below(a_, probe);
            const auto found = static_cast<std::size_t>(std::count_if(
                locked_.begin(), locked_.end(), [&](const Converged& c) { return c.lambda < probe; }));
            if (below == found) {
                return {locked_.begin(), locked_.begin() + static_cast<std::ptrdiff_t>(k)};
            }
            if (below < found) {
                throw Error(ErrorCode::EigenSolverFailed, "inertia count below the number of converged pairs");
            }
            // Eigenvalues below the k-th were skipped; collect more and re-certify.
            target = locked_.size() + (below - found);
            if (target > n_) target = n_;
        }
        throw Error(ErrorCode::EigenSolverFailed, "could not certify ordinals of the iterative eigenpairs");
    }

private:
    void solve(std::span<const double> rhs, std::span<double> out) const {
        const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
        Eigen::Map<Eigen::VectorXd> x(out.data(), static_cast<Eigen::Index>(out.size()));
        x = chol_.solve(b);
    }

    Vec random_start() {
        std::normal_distribution<double> gauss;
        Vec v(n_);
        for (double& x : v) x = gauss(rng_);
        return v;
    }

    std::vector<Vec> locked_vectors() const {
        std::vector<Vec> out;
        out.reserve(locked_.size());
        for (const auto& c : locked_) out.push_back(c.x);
        return out;
    }

    void extend_to(std::size_t target) {
        Vec start;
        int runs = 0;
        while (locked_.size() < target) {
            if (++runs > 200) {
                std::ostringstream os;
                os << "Lanczos converged " << locked_.size() << " of " << target << " eigenpairs";
                throw Error(ErrorCode::EigenSolverFailed, os.str());
            }
            start = run(target - locked_.size(), start);
        }
    }

    /// One Lanczos run; locks converged pairs and returns a restart vector.
    Vec run(std::size_t need, const Vec& start) {
        const std::vector<Vec> lockedv = locked_vectors();
        const std::size_t room = n_ - lockedv.size();
        const std::size_t m_max = std::min(room, std::max<std::size_t>(2 * need + 40, 80));

        Vec q = start.empty() ? random_start() : start;
        orthogonalize(q, lockedv);
        double nq = norm2(q);
        if (nq < 1e-10) {
            q = random_start();
            orthogonalize(q, lockedv);
            nq = norm2(q);
        }
        for (double& x : q) x /= nq;

        std::vector<Vec> basis{q};
        std::vector<double> alpha, beta;
        Vec w(n_);
        std::vector<Converged> ready;
        Vec restart;

        for (std::size_t j = 0; j < m_max; ++j) {
            solve(basis[j], w);
            alpha.push_back(kernels::dot(basis[j], w));
            orthogonalize(w, lockedv, basis);
            const double b = norm2(w);
            const bool exhausted = b < 1e-12 || j + 1 == m_max;
            if ((j + 1) % 10 == 0 || exhausted) {
                ready.clear();
                restart.clear();
                if (check(basis, alpha, beta, b, need, ready, restart) || exhausted) break;
            }
            beta.push_back(b);
            Vec next(w);
            for (double& x : next) x /= b;
            basis.push_back(std::move(next));
        }
        for (auto& c : ready) locked_.push_back(std::move(c));
        return restart;
    }

    /// Ritz analysis; returns true when `need` wanted pairs have converged.
    /// Pairs are accepted from the top of the B-spectrum down and the scan stops
    /// at the first unconverged one, whose Ritz vector becomes the restart vector.
    bool check(const std::vector<Vec>& basis, const std::vector<double>& alpha,
               const std::vector<double>& beta, double b_next, std::size_t need,
               std::vector<Converged>& ready, Vec& restart) const {
        const auto m = static_cast<Eigen::Index>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            t(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        const std::size_t wanted = std::min<std::size_t>(need, static_cast<std::size_t>(m));
        for (std::size_t c = 0; c < wanted; ++c) {
            const Eigen::Index idx = m - 1 - static_cast<Eigen::Index>(c);
            const double theta = es.eigenvalues()(idx);
            const double ritz_est = std::abs(b_next * es.eigenvectors()(m - 1, idx));
            Vec x(n_, 0.0);
            for (Eigen::Index i = 0; i < m; ++i) {
                kernels::axpy(es.eigenvectors()(i, idx), basis[static_cast<std::size_t>(i)], x);
            }
            const double nx = norm2(x);
            for (double& v : x) v /= nx;
            // ritz_est / theta^2 approximates the residual of A itself.
            if (!(theta > 0.0) || ritz_est > tol_ * theta * theta) {
                restart = std::move(x);
                return false;
            }
            Vec ax(n_);
            apply_(x, ax);
            const double lambda = kernels::dot(x, ax);
            kernels::axpy(-lambda, x, ax);
            if (norm2(ax) > 0.5 * tol_) {
                restart = std::move(x);
                return false;
            }
            ready.push_back({lambda, std::move(x)});
        }
        return ready.size() == need;
    }

    const Eigen::SparseMatrix<double>& a_;
    ApplyFn apply_;
    double tol_;
    std::size_t n_;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> chol_;
    std::vector<Converged> locked_;
    std::mt19937_64 rng_{0x6c616e637a6f73ULL};
};

Eigenpair finish(const Hamiltonian& h, Vec phi, std::size_t ordinal) {
    const double nrm = norm2(phi);
    for (double& x : phi) x /= nrm;
    orient(phi);
    Vec hphi = h.apply(phi);
    Eigenpair p;
    p.mu = kernels::dot(phi, hphi);
    kernels::axpy(-p.mu, phi, hphi);
    p.residual = norm2(hphi);
    p.phi = std::move(phi);
    p.ordinal = ordinal;
    return p;
}

std::vector<Eigenpair> dense_pairs(const Hamiltonian& h, const std::vector<std::size_t>& ords) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense());
    if (es.info() != Eigen::Success) throw Error(ErrorCode::EigenSolverFailed, "dense eigensolver failed");
    std::vector<Eigenpair> out;
    for (std::size_t ord : ords) {
        const auto col = static_cast<Eigen::Index>(ord - 1);
        Vec phi(es.eigenvectors().col(col).data(), es.eigenvectors().col(col).data() + es.eigenvectors().rows());
        out.push_back(finish(h, std::move(phi), ord));
    }
    return out;
}

std::vector<Eigenpair> iterative_pairs(const Hamiltonian& h, const std::vector<std::size_t>& ords,
                                       const EigenOptions& options) {
    const std::size_t n = h.size();
    const std::size_t lo_depth = ords.back();
    const std::size_t hi_depth = n + 1 - ords.front();
    std::vector<Eigenpair> out;
    if (lo_depth <= options.iterative_depth && lo_depth <= hi_depth) {
        const Eigen::SparseMatrix<double> a = h.sparse();
        ShiftInvertLanczos solver(a, [&h](std::span<const double> x, std::span<double> y) { h.apply(x, y); },
                                  options.tol);
        const auto conv = solver.lowest(lo_depth);
        for (std::size_t ord : ords) out.push_back(finish(h, conv[ord - 1].x, ord));
    } else if (hi_depth <= options.iterative_depth) {
        // Top of the spectrum: lowest eigenpairs of the SPD operator sigma I - H.
        const double sigma = h.spectral_bound() + 1.0;
        Eigen::SparseMatrix<double> id(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        id.setIdentity();
        const Eigen::SparseMatrix<double> a = sigma * id - h.sparse();
        ShiftInvertLanczos solver(
            a,
            [&h, sigma](std::span<const double> x, std::span<double> y) {
                h.apply(x, y);
                for (std::size_t i = 0; i < y.size(); ++i) y[i] = sigma * x[i] - y[i];
            },
            options.tol);
        const auto conv = solver.lowest(hi_depth);
        for (std::size_t ord : ords) out.push_back(finish(h, conv[n - ord].x, ord));
    } else {
        throw Error(ErrorCode::EigenSolverFailed,
                    "interior ordinals beyond depth " + std::to_string(options.iterative_depth) +
                        " need the dense path (N <= " + std::to_string(options.dense_limit) + ")");
    }
    std::sort(out.begin(), out.end(), [](const Eigenpair& a, const Eigenpair& b) { return a.ordinal < b.ordinal; });
    return out;
}

}  // namespace

namespace {

template <typename Solver>
bool inverse_iterate(const Hamiltonian& h, Eigenpair& pair, int steps) {
    const auto n = static_cast<Eigen::Index>(h.size());
    Eigen::SparseMatrix<double> id(n, n);
    id.setIdentity();
    const Eigen::SparseMatrix<double> base = h.sparse();
    const Eigen::Map<const Eigen::VectorXd> start(pair.phi.data(), n);
    double shift = pair.mu;
    for (int attempt = 0; attempt < 3; ++attempt) {
        Solver ldlt(base - shift * id);
        if (ldlt.info() != Eigen::Success) {
            shift += 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(pair.mu));
            continue;
        }
        Eigen::VectorXd x = start;
        bool finite = true;
        for (int s = 0; s < steps && finite; ++s) {
            x = ldlt.solve(x);
            finite = x.allFinite() && x.norm() > 0.0;
            if (finite) x.normalize();
        }
        if (!finite) {
            shift += 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(pair.mu));
            continue;
        }
        if (std::abs(x.dot(start)) < 1.0 - 1e-8) return false;
        Eigenpair refined = finish(h, Vec(x.data(), x.data() + n), pair.ordinal);
        if (refined.residual > std::max(pair.residual, 1e-12 * h.spectral_bound())) return false;
        pair = std::move(refined);
        return true;
    }
    return false;
}

}  // namespace

bool refine_eigenpair(const Hamiltonian& h, Eigenpair& pair, int steps) {
    require_size(pair.phi.size(), h.size(), "eigenvector");
    if (steps <= 0) return false;
    using Sparse = Eigen::SparseMatrix<double>;
    if (h.lattice().dim() == 1) {
        return inverse_iterate<Eigen::SimplicialLDLT<Sparse, Eigen::Lower, Eigen::NaturalOrdering<int>>>(h, pair, steps);
    }
    return inverse_iterate<Eigen::SimplicialLDLT<Sparse>>(h, pair, steps);
}

std::vector<Eigenpair> eigenpairs(const Hamiltonian& h, const Selection& sel, const EigenOptions& options) {
    const std::vector<std::size_t> ords = sel.resolve(h.size());
    std::vector<Eigenpair> out =
        h.size() <= options.dense_limit ? dense_pairs(h, ords) : iterative_pairs(h, ords, options);
    for (Eigenpair& p : out) refine_eigenpair(h, p, options.refine_steps);
    for (const Eigenpair& p : out) {
        if (!(p.residual <= options.tol)) {
            std::ostringstream os;
            os << "eigenpair " << p.ordinal << " has residual " << p.residual << " > " << options.tol;
            throw Error(ErrorCode::EigenSolverFailed, os.str());
        }
    }
    return out;
}

std::vector<double> full_spectrum(const Hamiltonian& h) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::EigenSolverFailed, "dense eigensolver failed");
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

std::size_t count_eigenvalues_below(const Eigen::SparseMatrix<double>& a, double shift) {
    Eigen::SparseMatrix<double> id(a.rows(), a.cols());
    id.setIdentity();
    double s = shift;
    for (int attempt = 0; attempt < 4; ++attempt) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a - s * id);
        if (ldlt.info() == Eigen::Success) {
            const Eigen::VectorXd dvec = ldlt.vectorD();
            bool singular = false;
            std::size_t negative = 0;
            for (Eigen::Index i = 0; i < dvec.size(); ++i) {
                if (dvec(i) == 0.0) singular = true;
                if (dvec(i) < 0.0) ++negative;
            }
            if (!singular) return negative;
        }
        // Exact zero pivot: nudge the shift downwards; counts strictly below are unchanged
        // as long as no eigenvalue sits inside the nudge.
        s -= 1e-12 * std::max(1.0, std::abs(s));
    }
    throw Error(ErrorCode::EigenSolverFailed, "inertia count failed: singular shifted factorization");
}

std::vector<double> dual_transform(const Lattice& lat, std::span<const double> phi) {
    require_dual_admissible(lat);
    require_size(phi.size(), lat.size(), "dual transform input");
    std::vector<double> out(phi.size());
    for (std::size_t n = 0; n < phi.size(); ++n) {
        int s = 0;
        for (int i = 0; i < lat.dim(); ++i) s += lat.coord(n, i);
        out[n] = (s % 2 == 0) ? phi[n] : -phi[n];
    }
    return out;
}

Eigenpair dual_pair(const Hamiltonian& h, const Eigenpair& pair) {
    const Hamiltonian ht = dual_operator(h);
    Eigenpair out;
    out.mu = h.spectral_bound() - pair.mu;
    out.phi = dual_transform(h.lattice(), pair.phi);
    Vec r = ht.apply(out.phi);
    kernels::axpy(-out.mu, out.phi, r);
    out.residual = norm2(r);
    out.ordinal = h.size() + 1 - pair.ordinal;
    return out;
}

DualityReport check_duality(const Hamiltonian& h, std::span<const Eigenpair> pairs, double tol) {
    require_dual_admissible(h.lattice());
    DualityReport rep;
    rep.tol = tol;
    for (const Eigenpair& p : pairs) {
        const double r = dual_pair(h, p).residual;
        rep.residuals.push_back(r);
        rep.max_residual = std::max(rep.max_residual, r);
        rep.passed = rep.passed && r <= tol;
    }
    return rep;
}

MirrorReport spectrum_mirror(const Hamiltonian& h) {
    const std::vector<double> ev = full_spectrum(h);
    const std::vector<double> evt = full_spectrum(dual_operator(h));
    MirrorReport rep;
    const double top = h.spectral_bound();
    const std::size_t n = ev.size();
    for (std::size_t k = 0; k < n; ++k) {
        rep.max_deviation = std::max(rep.max_deviation, std::abs(evt[k] - (top - ev[n - 1 - k])));
    }
    rep.min_eigenvalue = ev.front();
    rep.max_eigenvalue = ev.back();
    return rep;
}

}  // namespace tbl
