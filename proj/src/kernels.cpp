#include "covest/kernels.hpp"

#include <cstddef>

namespace covest::kernels {

namespace {

// Below this many complex multiply-adds the fork/join cost dominates.
constexpr long parallel_threshold = 1L << 15;

void check_shapes(const HermitianMatrix& q, const DirectionMatrix& u, Index out_size) {
    if (u.rows() != q.dim())
        throw DimensionMismatch("probe_powers: direction length does not match matrix dimension");
    if (out_size != u.cols())
        throw DimensionMismatch("probe_powers: output length does not match direction count");
}

// Re(u^H Q u) + ||u||^2 / gamma for one column of u.
inline double probe_power_one(const Eigen::MatrixXcd& q, const DirectionMatrix& u, Index l,
                              double gamma) {
    const auto ul = u.col(l);
    Complex acc = 0.0;
    for (Index j = 0; j < q.cols(); ++j)
        acc += cmul(ul.dot(q.col(j)), ul(j));
    return acc.real() + ul.squaredNorm() / gamma;
}

inline Complex dyad_entry(const DirectionMatrix& u, std::span<const double> w, Index i, Index j) {
    Complex acc = 0.0;
    for (Index l = 0; l < u.cols(); ++l)
        acc += w[static_cast<std::size_t>(l)] * cmul(u(i, l), std::conj(u(j, l)));
    return acc;
}

void check_weights(const DirectionMatrix& u, std::span<const double> w) {
    if (static_cast<Index>(w.size()) != u.cols())
        throw DimensionMismatch("weighted_dyads: weight count does not match direction count");
}

void mirror_lower(Eigen::MatrixXcd& s, double shift) {
    const Index n = s.rows();
    for (Index j = 0; j < n; ++j) {
        s(j, j) = Complex(s(j, j).real() + shift, 0.0);
        for (Index i = j + 1; i < n; ++i)
            s(j, i) = std::conj(s(i, j));
    }
}

void mirror_lower(Eigen::MatrixXd& a) {
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = j + 1; i < a.rows(); ++i)
            a(j, i) = a(i, j);
}

inline double design_entry(const DirectionMatrix& u, Index l, Index j) {
    // row/col 0 is the identity (trace) component
    if (l == 0 && j == 0)
        return static_cast<double>(u.rows());
    if (l == 0)
        return u.col(j - 1).squaredNorm();
    if (j == 0)
        return u.col(l - 1).squaredNorm();
    return std::norm(u.col(l - 1).dot(u.col(j - 1)));
}

void check_matvec(const Eigen::MatrixXd& a, const RealVector& x, Index y_size) {
    if (a.cols() != x.size() || a.rows() != y_size)
        throw DimensionMismatch("matvec: shape mismatch");
}

}  // namespace

void probe_powers(const HermitianMatrix& q, const DirectionMatrix& u, double gamma,
                  Eigen::Ref<RealVector> out) {
    check_shapes(q, u, out.size());
    const Eigen::MatrixXcd& qm = q.matrix();
    const long L = static_cast<long>(u.cols());
    const long work = L * static_cast<long>(qm.size());
#pragma omp parallel for schedule(static) if (work > parallel_threshold)
    for (long l = 0; l < L; ++l)
        out(l) = probe_power_one(qm, u, l, gamma);
}

HermitianMatrix weighted_dyads(const DirectionMatrix& u, std::span<const double> w, double shift) {
    check_weights(u, w);
    const long n = static_cast<long>(u.rows());
    Eigen::MatrixXcd s(n, n);
    const long work = n * n * static_cast<long>(u.cols()) / 2;
#pragma omp parallel for schedule(dynamic, 1) if (work > parallel_threshold)
    for (long j = 0; j < n; ++j)
        for (long i = j; i < n; ++i)
            s(i, j) = dyad_entry(u, w, i, j);
    mirror_lower(s, shift);
    return HermitianMatrix(s);
}

Eigen::MatrixXd glm_design(const DirectionMatrix& u) {
    const long m = static_cast<long>(u.cols()) + 1;
    Eigen::MatrixXd a(m, m);
    const long work = m * m * static_cast<long>(u.rows()) / 2;
#pragma omp parallel for schedule(dynamic, 4) if (work > parallel_threshold)
    for (long j = 0; j < m; ++j)
        for (long l = j; l < m; ++l)
            a(l, j) = design_entry(u, l, j);
    mirror_lower(a);
    return a;
}

void matvec(const Eigen::MatrixXd& a, const RealVector& x, Eigen::Ref<RealVector> y) {
    check_matvec(a, x, y.size());
    const long rows = static_cast<long>(a.rows());
    const long work = rows * static_cast<long>(a.cols());
#pragma omp parallel for schedule(static) if (work > 8 * parallel_threshold)
    for (long i = 0; i < rows; ++i)
        y(i) = a.row(i).dot(x);
}

namespace reference {

void probe_powers(const HermitianMatrix& q, const DirectionMatrix& u, double gamma,
                  Eigen::Ref<RealVector> out) {
    check_shapes(q, u, out.size());
    for (Index l = 0; l < u.cols(); ++l)
        out(l) = probe_power_one(q.matrix(), u, l, gamma);
}

HermitianMatrix weighted_dyads(const DirectionMatrix& u, std::span<const double> w, double shift) {
    check_weights(u, w);
    const Index n = u.rows();
    Eigen::MatrixXcd s(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = j; i < n; ++i)
            s(i, j) = dyad_entry(u, w, i, j);
    mirror_lower(s, shift);
    return HermitianMatrix(s);
}

Eigen::MatrixXd glm_design(const DirectionMatrix& u) {
    const Index m = u.cols() + 1;
    Eigen::MatrixXd a(m, m);
    for (Index j = 0; j < m; ++j)
        for (Index l = j; l < m; ++l)
            a(l, j) = design_entry(u, l, j);
    mirror_lower(a);
    return a;
}

void matvec(const Eigen::MatrixXd& a, const RealVector& x, Eigen::Ref<RealVector> y) {
    check_matvec(a, x, y.size());
    for (Index i = 0; i < a.rows(); ++i)
        y(i) = a.row(i).dot(x);
}

}  // namespace reference
}  // namespace covest::kernels
