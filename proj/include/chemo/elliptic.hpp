#ifndef CHEMO_ELLIPTIC_HPP
#define CHEMO_ELLIPTIC_HPP

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "chemo/errors.hpp"
#include "chemo/grid.hpp"
#include "chemo/model.hpp"

namespace chemo {

enum class EllipticMethod { Transform, ConjugateGradient };

std::string_view to_string(EllipticMethod m);
EllipticMethod elliptic_method_from_string(std::string_view name);

struct EllipticConfig {
    EllipticMethod method = EllipticMethod::Transform;
    double tol = 1e-10;  ///< relative residual target
    int max_iter = 10000;

    void validate() const {
        if (!(tol > 0.0) || tol > 1e-4) throw ConfigError("elliptic.tol must lie in (0, 1e-4]");
        if (max_iter < 1) throw ConfigError("elliptic.max_iter must be >= 1");
    }
};

/// Orthonormal cosine basis of the discrete Neumann Laplacian on one axis:
/// Q(i,k) = s_k cos(pi k (i+1/2)/N), eigenvalue (4/h^2) sin^2(pi k/(2N)).
template <typename Scalar>
struct NeumannCosineBasis {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> Q;
    Field<Scalar> eigenvalues;  ///< eigenvalues of -Laplacian, ascending, first is 0

    NeumannCosineBasis() = default;
    NeumannCosineBasis(int n, double h) : Q(n, n), eigenvalues(n) {
        using std::cos;
        using std::sin;
        using std::sqrt;
        const Scalar pi = std::numbers::pi_v<Scalar>;
        for (int k = 0; k < n; ++k) {
            const Scalar s = k == 0 ? sqrt(Scalar(1) / n) : sqrt(Scalar(2) / n);
            for (int i = 0; i < n; ++i) Q(i, k) = s * cos(pi * Scalar(k) * (Scalar(i) + Scalar(0.5)) / Scalar(n));
            const Scalar sk = sin(pi * Scalar(k) / Scalar(2 * n));
            eigenvalues[k] = Scalar(4) * sk * sk / Scalar(h * h);
        }
    }
};

/// Solves (a I - b Laplacian_h) x = f with zero-flux walls, for a > 0 and b >= 0.
/// One instance per grid; the CG backend caches its matrix for the last (a, b), so an
/// instance must not be shared between threads.
template <typename Scalar>
class ShiftedLaplaceSolver {
public:
    using Vector = Field<Scalar>;

    ShiftedLaplaceSolver(const Grid& grid, EllipticConfig cfg) : grid_(grid), cfg_(cfg) {
        cfg_.validate();
        if (cfg_.method == EllipticMethod::Transform) {
            for (int a = 0; a < grid_.dim(); ++a) basis_[a] = NeumannCosineBasis<Scalar>(grid_.cells(a), grid_.h(a));
        }
    }

    const Grid& grid() const { return grid_; }
    const EllipticConfig& config() const { return cfg_; }

    template <typename Derived>
    Vector solve(const Eigen::MatrixBase<Derived>& rhs, Scalar a, Scalar b) {
        const Vector f = rhs;
        if (!(a > Scalar(0)) || !(b >= Scalar(0))) throw DomainError("shifted Laplace solve needs a > 0, b >= 0");
        if (!f.allFinite()) throw DomainError("shifted Laplace solve: non-finite right-hand side");
        if (b == Scalar(0)) return f / a;
        return cfg_.method == EllipticMethod::Transform ? solve_transform(f, a, b) : solve_cg(f, a, b);
    }

    /// Relative residual ||(aI - bL)x - f|| / ||f|| (0 when f = 0 and x = 0).
    template <typename D1, typename D2>
    Scalar relative_residual(const Eigen::MatrixBase<D1>& x, const Eigen::MatrixBase<D2>& f, Scalar a, Scalar b) const {
        const Vector r = a * x - b * laplacian_neumann(grid_, x) - f;
        const Scalar fn = f.norm();
        return fn > Scalar(0) ? r.norm() / fn : r.norm();
    }

    int last_iterations() const { return last_iterations_; }

private:
    Vector solve_transform(const Vector& f, Scalar a, Scalar b) {
        last_iterations_ = 0;
        if (grid_.dim() == 1) {
            const auto& B = basis_[0];
            Vector hat = B.Q.transpose() * f;
            hat.array() /= (a + b * B.eigenvalues.array());
            return B.Q * hat;
        }
        const int nx = grid_.nx(), ny = grid_.ny();
        using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
        Eigen::Map<const Matrix> F(f.data(), nx, ny);
        Matrix hat = basis_[0].Q.transpose() * F * basis_[1].Q;
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) hat(i, j) /= a + b * (basis_[0].eigenvalues[i] + basis_[1].eigenvalues[j]);
        Vector out(grid_.size());
        Eigen::Map<Matrix>(out.data(), nx, ny) = basis_[0].Q * hat * basis_[1].Q.transpose();
        return out;
    }

    void assemble(Scalar a, Scalar b) {
        if (matrix_.rows() == grid_.size() && a == cached_a_ && b == cached_b_) return;
        std::vector<Eigen::Triplet<Scalar>> t;
        t.reserve(std::size_t(grid_.size()) * 5);
        const int nx = grid_.nx(), ny = grid_.ny();
        std::array<Scalar, 2> w{Scalar(1) / Scalar(grid_.h(0) * grid_.h(0)), Scalar(0)};
        if (grid_.dim() == 2) w[1] = Scalar(1) / Scalar(grid_.h(1) * grid_.h(1));
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const auto row = grid_.index(i, j);
                Scalar diag = a;
                auto link = [&](int ii, int jj, Scalar weight) {
                    t.emplace_back(row, grid_.index(ii, jj), -b * weight);
                    diag += b * weight;
                };
                if (i > 0) link(i - 1, j, w[0]);
                if (i + 1 < nx) link(i + 1, j, w[0]);
                if (grid_.dim() == 2) {
                    if (j > 0) link(i, j - 1, w[1]);
                    if (j + 1 < ny) link(i, j + 1, w[1]);
                }
                t.emplace_back(row, row, diag);
            }
        matrix_.resize(grid_.size(), grid_.size());
        matrix_.setFromTriplets(t.begin(), t.end());
        cg_.setTolerance(cfg_.tol);
        cg_.setMaxIterations(cfg_.max_iter);
        cg_.compute(matrix_);
        cached_a_ = a;
        cached_b_ = b;
    }

    Vector solve_cg(const Vector& f, Scalar a, Scalar b) {
        assemble(a, b);
        if (f.norm() == Scalar(0)) return Vector::Zero(f.size());
        Vector x = cg_.solve(f);
        last_iterations_ = int(cg_.iterations());
        if (cg_.info() != Eigen::Success) {
            throw SolverFailure("conjugate gradient did not converge in " + std::to_string(cfg_.max_iter) +
                                    " iterations",
                                double(cg_.error()));
        }
        return x;
    }

    Grid grid_;
    EllipticConfig cfg_;
    std::array<NeumannCosineBasis<Scalar>, 2> basis_;
    Eigen::SparseMatrix<Scalar> matrix_;
    Eigen::ConjugateGradient<Eigen::SparseMatrix<Scalar>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<Scalar>>
        cg_;
    Scalar cached_a_{-1};
    Scalar cached_b_{-1};
    int last_iterations_ = 0;
};

/// Chemoattractant solve -Lap c + beta c = alpha u with zero-flux walls.
template <typename Scalar>
class HelmholtzSolver {
public:
    HelmholtzSolver(const Grid& grid, const ModelParams& params, EllipticConfig cfg)
        : solver_(grid, cfg), alpha_(params.alpha), beta_(params.beta) {
        if (!(params.beta > 0.0)) throw ConfigError("Helmholtz solve needs beta > 0");
    }

    template <typename Derived>
    Field<Scalar> solve(const Eigen::MatrixBase<Derived>& u) {
        return solver_.solve(Scalar(alpha_) * u, Scalar(beta_), Scalar(1));
    }

    template <typename D1, typename D2>
    Scalar relative_residual(const Eigen::MatrixBase<D1>& c, const Eigen::MatrixBase<D2>& u) const {
        return solver_.relative_residual(c, Scalar(alpha_) * u, Scalar(beta_), Scalar(1));
    }

    const Grid& grid() const { return solver_.grid(); }

private:
    ShiftedLaplaceSolver<Scalar> solver_;
    double alpha_;
    double beta_;
};

template <typename Derived>
Field<typename Derived::Scalar> solve_helmholtz(const Grid& grid, const Eigen::MatrixBase<Derived>& u,
                                                const ModelParams& params, const EllipticConfig& cfg) {
    HelmholtzSolver<typename Derived::Scalar> solver(grid, params, cfg);
    return solver.solve(u);
}

struct EllipticConstantsReport {
    double k_p = 0.0;    ///< max ||c||_{W^{1,p}} / ||u||_p over samples
    double k_inf = 0.0;  ///< max ||c||_inf / ||u||_inf over samples
    std::vector<double> ratio_p;
    std::vector<double> ratio_inf;
};

/// Empirical elliptic-regularity ratios over a sample set. Zero samples are skipped.
EllipticConstantsReport measure_elliptic_constants(const Grid& grid, const std::vector<FieldD>& samples,
                                                   const ModelParams& params, const EllipticConfig& cfg, double p);

}  // namespace chemo

#endif  // CHEMO_ELLIPTIC_HPP
