#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace covest {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Plain complex product. std::complex operator* takes the Annex G NaN/inf
// recovery path, which dominates the cost of the inner loops.
inline Complex cmul(Complex x, Complex y) {
    return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
}

/// Raised when an iterative numeric kernel fails to converge.
class NumericError : public std::runtime_error {
  public:
    NumericError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

/// Raised when an argument lies outside the mathematical domain of an operation
/// (e.g. a matrix that is not PSD where one is required).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

class DimensionMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Dense N x N complex Hermitian matrix.
///
/// Construction from an arbitrary square matrix symmetrizes it as (M + M^H) / 2,
/// so every instance is exactly conjugate-symmetric with a real diagonal.
/// Sums, differences and real scalings of Hermitian matrices are carried out
/// without re-symmetrizing since they preserve the structure bit-for-bit.
class HermitianMatrix {
  public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(const Eigen::MatrixXcd& m);

    static HermitianMatrix zero(Index n);
    static HermitianMatrix identity(Index n);
    static HermitianMatrix outer(const ComplexVector& v);
    static HermitianMatrix diagonal(const RealVector& d);

    Index dim() const noexcept { return m_.rows(); }
    const Eigen::MatrixXcd& matrix() const noexcept { return m_; }
    Complex operator()(Index i, Index j) const { return m_(i, j); }

    double trace() const { return m_.diagonal().real().sum(); }
    double frobenius_norm() const { return m_.norm(); }
    /// Re(v^H M v); the imaginary part vanishes for Hermitian M up to roundoff.
    double quadratic_form(const ComplexVector& v) const;

    HermitianMatrix& operator+=(const HermitianMatrix& rhs);
    HermitianMatrix& operator-=(const HermitianMatrix& rhs);
    HermitianMatrix& operator*=(double s);
    /// Adds s * I.
    HermitianMatrix& add_identity(double s);

    friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
    friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
    friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
    friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

    /// Real trace inner product Re Tr(A^H B).
    friend double inner(const HermitianMatrix& a, const HermitianMatrix& b);

  private:
    struct Trusted {};
    HermitianMatrix(Eigen::MatrixXcd m, Trusted) : m_(std::move(m)) {}

    Eigen::MatrixXcd m_;
};

/// Full spectral decomposition; eigenvalues sorted descending, eigenvectors
/// stored as the matching columns of `vectors`.
struct EigenDecomposition {
    RealVector values;
    Eigen::MatrixXcd vectors;

    HermitianMatrix reconstruct() const;
};

struct JacobiOptions {
    int max_sweeps = 100;
    double tolerance = 1e-12;
};

/// Cyclic Jacobi eigensolver for Hermitian matrices. Throws NumericError if
/// the off-diagonal norm has not dropped below tolerance * ||m||_F after
/// max_sweeps sweeps.
EigenDecomposition hermitian_eig(const HermitianMatrix& m, const JacobiOptions& opts = {});

/// Frobenius-nearest positive semidefinite matrix: U diag(max(d, 0)) U^H.
HermitianMatrix psd_project(const HermitianMatrix& p);

struct DominantEigenpair {
    ComplexVector vector;  // unit norm
    double value;
};

DominantEigenpair max_eigenvector(const HermitianMatrix& m);

/// Smallest eigenvalue, via the Jacobi solver.
double min_eigenvalue(const HermitianMatrix& m);

}  // namespace covest
