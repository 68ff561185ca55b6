#include "covest/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace covest {

HermitianMatrix::HermitianMatrix(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols())
        throw DimensionMismatch("HermitianMatrix: input is not square");
    if (m.rows() < 1)
        throw DimensionMismatch("HermitianMatrix: dimension must be at least 1");
    m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::zero(Index n) {
    return HermitianMatrix(Eigen::MatrixXcd::Zero(n, n), Trusted{});
}

HermitianMatrix HermitianMatrix::identity(Index n) {
    return HermitianMatrix(Eigen::MatrixXcd::Identity(n, n), Trusted{});
}

HermitianMatrix HermitianMatrix::outer(const ComplexVector& v) {
    // v v^H then symmetrize: the product is Hermitian only up to roundoff in
    // the diagonal imaginary part.
    return HermitianMatrix(Eigen::MatrixXcd(v * v.adjoint()));
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& d) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d.size(), d.size());
    m.diagonal() = d.cast<Complex>();
    return HermitianMatrix(std::move(m), Trusted{});
}

double HermitianMatrix::quadratic_form(const ComplexVector& v) const {
    if (v.size() != dim())
        throw DimensionMismatch("quadratic_form: vector length does not match matrix dimension");
    return v.dot(m_ * v).real();
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& rhs) {
    if (rhs.dim() != dim())
        throw DimensionMismatch("HermitianMatrix: dimension mismatch in +");
    m_ += rhs.m_;
    return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& rhs) {
    if (rhs.dim() != dim())
        throw DimensionMismatch("HermitianMatrix: dimension mismatch in -");
    m_ -= rhs.m_;
    return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
    m_ *= s;
    return *this;
}

HermitianMatrix& HermitianMatrix::add_identity(double s) {
    m_.diagonal().array() += s;
    return *this;
}

double inner(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("inner: dimension mismatch");
    // Re Tr(A^H B) = Re sum_ij conj(a_ij) b_ij
    return (a.m_.array().conjugate() * b.m_.array()).real().sum();
}

HermitianMatrix EigenDecomposition::reconstruct() const {
    Eigen::MatrixXcd m = vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
    return HermitianMatrix(m);
}

namespace {

double off_diagonal_norm(const Eigen::MatrixXcd& a) {
    double sum = 0.0;
    const Index n = a.rows();
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i)
            if (i != j)
                sum += std::norm(a(i, j));
    return std::sqrt(sum);
}

// One Jacobi rotation annihilating a(p, q). The unitary J acts on coordinates
// p, q as [[c, s e], [-s conj(e), c]] with e = a(p,q) / |a(p,q)|; it reduces the
// pair to a real symmetric 2x2 problem solved with the classical tangent formula.
void rotate(Eigen::MatrixXcd& a, Eigen::MatrixXcd& v, Index p, Index q) {
    const Complex g = a(p, q);
    const double abs_g = std::abs(g);
    const Complex e = g / abs_g;
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();

    const double theta = (aqq - app) / (2.0 * abs_g);
    double t;
    if (std::abs(theta) > 1e150) {
        t = 0.5 / theta;
    } else {
        t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0)
            t = -t;
    }
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;
    const Complex se = s * e;
    const Complex sec = s * std::conj(e);

    const Index n = a.rows();
    for (Index k = 0; k < n; ++k) {
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = c * akp - cmul(sec, akq);
        a(k, q) = cmul(se, akp) + c * akq;
    }
    a(p, p) = app - t * abs_g;
    a(q, q) = aqq + t * abs_g;
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    for (Index k = 0; k < n; ++k) {
        if (k == p || k == q)
            continue;
        a(p, k) = std::conj(a(k, p));
        a(q, k) = std::conj(a(k, q));
    }

    for (Index k = 0; k < n; ++k) {
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = c * vkp - cmul(sec, vkq);
        v(k, q) = cmul(se, vkp) + c * vkq;
    }
}

}  // namespace

EigenDecomposition hermitian_eig(const HermitianMatrix& m, const JacobiOptions& opts) {
    const Index n = m.dim();
    Eigen::MatrixXcd a = m.matrix();
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);

    const double scale = a.norm();
    if (!std::isfinite(scale))
        throw NumericError("hermitian_eig: non-finite input", scale);

    double off = off_diagonal_norm(a);
    const double target = opts.tolerance * scale;
    int sweep = 0;
    while (off > target) {
        if (sweep == opts.max_sweeps)
            throw NumericError("hermitian_eig: Jacobi iteration did not converge", off / scale);
        for (Index p = 0; p < n - 1; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                const double abs_g = std::abs(a(p, q));
                if (abs_g == 0.0)
                    continue;
                // Once past the first few sweeps, drop entries too small to
                // change either diagonal element in floating point.
                if (sweep > 3) {
                    const double app = std::abs(a(p, p).real());
                    const double aqq = std::abs(a(q, q).real());
                    if (app + 100.0 * abs_g == app && aqq + 100.0 * abs_g == aqq) {
                        a(p, q) = 0.0;
                        a(q, p) = 0.0;
                        continue;
                    }
                }
                rotate(a, v, p, q);
            }
        }
        ++sweep;
        off = off_diagonal_norm(a);
    }

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    const RealVector diag = a.diagonal().real();
    std::stable_sort(order.begin(), order.end(),
                     [&](Index i, Index j) { return diag(i) > diag(j); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Index k = 0; k < n; ++k) {
        const Index src = order[static_cast<std::size_t>(k)];
        out.values(k) = diag(src);
        out.vectors.col(k) = v.col(src);
    }
    return out;
}

HermitianMatrix psd_project(const HermitianMatrix& p) {
    const EigenDecomposition eig = hermitian_eig(p);
    Index positive = 0;
    while (positive < eig.values.size() && eig.values(positive) > 0.0)
        ++positive;
    if (positive == 0)
        return HermitianMatrix::zero(p.dim());
    const auto u = eig.vectors.leftCols(positive);
    const Eigen::MatrixXcd scaled =
        u * eig.values.head(positive).cast<Complex>().asDiagonal();
    return HermitianMatrix(Eigen::MatrixXcd(scaled * u.adjoint()));
}

DominantEigenpair max_eigenvector(const HermitianMatrix& m) {
    const EigenDecomposition eig = hermitian_eig(m);
    ComplexVector w = eig.vectors.col(0);
    w.normalize();
    return {std::move(w), eig.values(0)};
}

double min_eigenvalue(const HermitianMatrix& m) {
    const EigenDecomposition eig = hermitian_eig(m);
    return eig.values(eig.values.size() - 1);
}

}  // namespace covest
