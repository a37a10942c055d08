#ifndef CHEMO_GRID_HPP
#define CHEMO_GRID_HPP

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <limits>

#include "chemo/errors.hpp"

namespace chemo {

template <typename Scalar>
using Field = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using FieldD = Field<double>;

struct GridSpec {
    int dim = 1;
    std::array<double, 2> lengths{1.0, 1.0};
    std::array<int, 2> cells{64, 1};
};

/// Cell-centred product grid on (0,Lx) or (0,Lx)x(0,Ly).
/// Cells are numbered with x fastest: index = i + nx*j.
class Grid {
public:
    static constexpr int min_cells = 4;

    explicit Grid(const GridSpec& spec) : spec_(spec) {
        if (spec.dim != 1 && spec.dim != 2) throw ConfigError("grid.dim must be 1 or 2");
        for (int a = 0; a < spec.dim; ++a) {
            if (!(spec.lengths[a] > 0.0)) throw ConfigError("grid lengths must be positive");
            if (spec.cells[a] < min_cells) throw ConfigError("grid needs at least 4 cells per axis");
        }
        if (spec.dim == 1) {
            spec_.cells[1] = 1;
            spec_.lengths[1] = 1.0;
        }
        for (int a = 0; a < 2; ++a) h_[a] = spec_.lengths[a] / spec_.cells[a];
    }

    int dim() const { return spec_.dim; }
    int nx() const { return spec_.cells[0]; }
    int ny() const { return spec_.cells[1]; }
    int cells(int axis) const { return spec_.cells[axis]; }
    Eigen::Index size() const { return Eigen::Index(nx()) * ny(); }
    double h(int axis) const { return h_[axis]; }
    double length(int axis) const { return spec_.lengths[axis]; }
    const GridSpec& spec() const { return spec_; }

    /// Cell volume (length in 1D, area in 2D).
    double cell_volume() const { return spec_.dim == 1 ? h_[0] : h_[0] * h_[1]; }
    double volume() const { return cell_volume() * double(size()); }
    double min_h() const { return spec_.dim == 1 ? h_[0] : std::min(h_[0], h_[1]); }

    double center(int axis, int i) const { return (i + 0.5) * h_[axis]; }
    Eigen::Index index(int i, int j = 0) const { return Eigen::Index(i) + Eigen::Index(nx()) * j; }

    /// Interior faces normal to `axis`.
    Eigen::Index face_count(int axis) const {
        if (axis >= spec_.dim) return 0;
        return axis == 0 ? Eigen::Index(nx() - 1) * ny() : Eigen::Index(nx()) * (ny() - 1);
    }

    FieldD centers(int axis) const {
        FieldD x(size());
        for (int j = 0; j < ny(); ++j)
            for (int i = 0; i < nx(); ++i) x[index(i, j)] = center(axis, axis == 0 ? i : j);
        return x;
    }

    bool operator==(const Grid& o) const {
        return spec_.dim == o.spec_.dim && spec_.cells == o.spec_.cells && spec_.lengths == o.spec_.lengths;
    }

private:
    GridSpec spec_;
    std::array<double, 2> h_{};
};

/// Values on interior faces, one vector per axis. Boundary faces are not stored: their
/// value is zero (no-flux walls).
/// Axis-0 face (i+1/2, j) lives at i + (nx-1)*j; axis-1 face (i, j+1/2) at i + nx*j.
template <typename Scalar>
struct FaceField {
    std::array<Field<Scalar>, 2> axis;

    Scalar max_abs() const {
        Scalar m(0);
        for (const auto& a : axis)
            if (a.size() > 0) m = std::max(m, a.cwiseAbs().maxCoeff());
        return m;
    }
};

template <typename Scalar>
FaceField<Scalar> zero_faces(const Grid& g) {
    FaceField<Scalar> f;
    for (int a = 0; a < 2; ++a) f.axis[a] = Field<Scalar>::Zero(g.face_count(a));
    return f;
}

/// Centred difference across every interior face.
template <typename Derived>
FaceField<typename Derived::Scalar> gradient_faces(const Grid& g, const Eigen::MatrixBase<Derived>& f) {
    using Scalar = typename Derived::Scalar;
    auto out = zero_faces<Scalar>(g);
    const int nx = g.nx(), ny = g.ny();
    const Scalar ihx = Scalar(1) / g.h(0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i) out.axis[0][i + (nx - 1) * j] = (f[g.index(i + 1, j)] - f[g.index(i, j)]) * ihx;
    if (g.dim() == 2) {
        const Scalar ihy = Scalar(1) / g.h(1);
        for (int j = 0; j + 1 < ny; ++j)
            for (int i = 0; i < nx; ++i) out.axis[1][i + nx * j] = (f[g.index(i, j + 1)] - f[g.index(i, j)]) * ihy;
    }
    return out;
}

/// Cellwise divergence of a face flux, (F_{i+1/2} - F_{i-1/2})/h summed over axes.
/// Boundary faces contribute zero, so the volume-weighted sum telescopes to zero.
template <typename Scalar>
Field<Scalar> divergence_faces(const Grid& g, const FaceField<Scalar>& flux) {
    Field<Scalar> out = Field<Scalar>::Zero(g.size());
    const int nx = g.nx(), ny = g.ny();
    const Scalar ihx = Scalar(1) / g.h(0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i) {
            const Scalar F = flux.axis[0][i + (nx - 1) * j] * ihx;
            out[g.index(i, j)] += F;
            out[g.index(i + 1, j)] -= F;
        }
    if (g.dim() == 2) {
        const Scalar ihy = Scalar(1) / g.h(1);
        for (int j = 0; j + 1 < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const Scalar F = flux.axis[1][i + nx * j] * ihy;
                out[g.index(i, j)] += F;
                out[g.index(i, j + 1)] -= F;
            }
    }
    return out;
}

/// 3-point / 5-point Laplacian with mirrored ghost cells (zero normal derivative).
template <typename Derived>
Field<typename Derived::Scalar> laplacian_neumann(const Grid& g, const Eigen::MatrixBase<Derived>& f) {
    return divergence_faces(g, gradient_faces(g, f));
}

/// Midpoint quadrature.
template <typename Derived>
typename Derived::Scalar integrate(const Grid& g, const Eigen::MatrixBase<Derived>& f) {
    return f.sum() * typename Derived::Scalar(g.cell_volume());
}

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Discrete L^p norm; p = infinity gives the max norm.
template <typename Derived>
typename Derived::Scalar lp_norm(const Grid& g, const Eigen::MatrixBase<Derived>& f, double p) {
    using Scalar = typename Derived::Scalar;
    using std::pow;
    if (!(p >= 1.0)) throw DomainError("lp_norm: exponent must be >= 1");
    if (f.size() == 0) return Scalar(0);
    if (std::isinf(p)) return f.cwiseAbs().maxCoeff();
    if (p == 1.0) return f.cwiseAbs().sum() * Scalar(g.cell_volume());
    if (p == 2.0) return std::sqrt(f.squaredNorm() * Scalar(g.cell_volume()));
    return pow(f.cwiseAbs().array().pow(Scalar(p)).sum() * Scalar(g.cell_volume()), Scalar(1.0 / p));
}

/// Per-cell gradient magnitude, each component the mean of the two adjacent faces
/// (boundary faces count as zero).
template <typename Derived>
Field<typename Derived::Scalar> cell_gradient_magnitude(const Grid& g, const Eigen::MatrixBase<Derived>& f) {
    using Scalar = typename Derived::Scalar;
    const auto faces = gradient_faces(g, f);
    const int nx = g.nx(), ny = g.ny();
    Field<Scalar> gx = Field<Scalar>::Zero(g.size());
    Field<Scalar> gy = Field<Scalar>::Zero(g.size());
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i) {
            const Scalar v = Scalar(0.5) * faces.axis[0][i + (nx - 1) * j];
            gx[g.index(i, j)] += v;
            gx[g.index(i + 1, j)] += v;
        }
    if (g.dim() == 2)
        for (int j = 0; j + 1 < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const Scalar v = Scalar(0.5) * faces.axis[1][i + nx * j];
                gy[g.index(i, j)] += v;
                gy[g.index(i, j + 1)] += v;
            }
    return (gx.array().square() + gy.array().square()).sqrt().matrix();
}

/// Discrete W^{1,p} norm: (||f||_p^p + ||grad f||_p^p)^{1/p}.
template <typename Derived>
typename Derived::Scalar w1p_norm(const Grid& g, const Eigen::MatrixBase<Derived>& f, double p) {
    using Scalar = typename Derived::Scalar;
    using std::pow;
    if (!(p >= 1.0) || std::isinf(p)) throw DomainError("w1p_norm: exponent must be finite and >= 1");
    const Scalar a = lp_norm(g, f, p);
    const Scalar b = lp_norm(g, cell_gradient_magnitude(g, f), p);
    return pow(pow(a, Scalar(p)) + pow(b, Scalar(p)), Scalar(1.0 / p));
}

/// Face-difference Dirichlet energy sum_faces |Df|^2 * vol, equal to -integrate(f * laplacian_neumann(f)).
template <typename Derived>
typename Derived::Scalar dirichlet_energy(const Grid& g, const Eigen::MatrixBase<Derived>& f) {
    const auto faces = gradient_faces(g, f);
    return (faces.axis[0].squaredNorm() + faces.axis[1].squaredNorm()) * typename Derived::Scalar(g.cell_volume());
}

}  // namespace chemo

#endif  // CHEMO_GRID_HPP
