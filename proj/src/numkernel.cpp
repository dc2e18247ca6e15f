#include "rmtlab/numkernel.hpp"

#include <algorithm>
#include <cmath>

#include "rmtlab/lapack.hpp"

namespace rmtlab {

SkewMatrix::SkewMatrix(int dim) : dim_(dim) {
    if (dim < 0) throw DimensionError("SkewMatrix: negative dimension");
    upper_.assign(static_cast<std::size_t>(dim) * dim, Complex(0, 0));
}

Complex& SkewMatrix::upper(int i, int j) {
    if (i < 0 || j <= i || j >= dim_) throw DimensionError("SkewMatrix::upper requires 0 <= i < j < dim");
    return upper_[static_cast<std::size_t>(i) * dim_ + j];
}

Complex SkewMatrix::upper(int i, int j) const {
    if (i < 0 || j <= i || j >= dim_) throw DimensionError("SkewMatrix::upper requires 0 <= i < j < dim");
    return upper_[static_cast<std::size_t>(i) * dim_ + j];
}

Complex SkewMatrix::operator()(int i, int j) const {
    if (i == j) return Complex(0, 0);
    if (i < j) return upper(i, j);
    return -upper(j, i);
}

MatrixXcd SkewMatrix::dense() const {
    MatrixXcd m = MatrixXcd::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = i + 1; j < dim_; ++j) {
            m(i, j) = upper(i, j);
            m(j, i) = -upper(i, j);
        }
    return m;
}

SkewMatrix SkewMatrix::from_dense(const MatrixXcd& m, double tol) {
    if (m.rows() != m.cols()) throw DimensionError("SkewMatrix::from_dense: matrix must be square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m + m.transpose()).cwiseAbs().maxCoeff() > tol * scale)
        throw DomainError("SkewMatrix::from_dense: input is not skew-symmetric");
    SkewMatrix s(static_cast<int>(m.rows()));
    for (int i = 0; i < s.dim(); ++i)
        for (int j = i + 1; j < s.dim(); ++j) s.upper(i, j) = m(i, j);
    return s;
}

void StiefelPair::validate(double tol) const {
    if (v1.size() != v2.size()) throw DimensionError("StiefelPair: vectors differ in dimension");
    if (std::abs(v1.norm() - 1.0) > tol || std::abs(v2.norm() - 1.0) > tol)
        throw DomainError("StiefelPair: vectors are not unit length");
    if (std::abs(v1.dot(v2)) > tol) throw DomainError("StiefelPair: vectors are not orthogonal");
}

Complex pfaffian_dense(MatrixXcd a) {
    const int n = static_cast<int>(a.rows());
    if (a.cols() != n) throw DimensionError("pfaffian: matrix must be square");
    if (n % 2 == 1) throw DimensionError("pfaffian: dimension must be even");
    if (n == 0) return Complex(1, 0);
    if (!a.allFinite()) throw DomainError("pfaffian: non-finite entries");

    // Parlett-Reid: reduce to skew tridiagonal form by congruence with
    // Gauss transforms, pivoting on the largest entry of each column.
    Complex pf(1, 0);
    for (int k = 0; k + 1 < n; k += 2) {
        int kp = k + 1;
        double best = std::abs(a(k + 1, k));
        for (int i = k + 2; i < n; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                kp = i;
            }
        }
        if (kp != k + 1) {
            a.row(k + 1).swap(a.row(kp));
            a.col(k + 1).swap(a.col(kp));
            pf = -pf;
        }
        const Complex piv = a(k, k + 1);
        if (piv == Complex(0, 0)) return Complex(0, 0);
        pf *= piv;
        if (k + 2 < n) {
            const int m = n - k - 2;
            const VectorXcd tau = a.row(k).segment(k + 2, m).transpose() / piv;
            const VectorXcd col = a.col(k + 1).segment(k + 2, m);
            a.block(k + 2, k + 2, m, m).noalias() += tau * col.transpose();
            a.block(k + 2, k + 2, m, m).noalias() -= col * tau.transpose();
        }
    }
    return pf;
}

Complex pfaffian(const SkewMatrix& m) { return pfaffian_dense(m.dense()); }

Spectrum eigenvalues_real(const MatrixXd& m) {
    if (m.rows() != m.cols()) throw DimensionError("eigenvalues_real: matrix must be square");
    if (!m.allFinite()) throw DomainError("eigenvalues_real: non-finite entries");
    Spectrum s;
    s.sourceDim = static_cast<int>(m.rows());
    s.eigenvalues = lapack::eig_real(m);
    return s;
}

MatrixXd gaussian_matrix(int rows, int cols, rng::Philox& gen) {
    MatrixXd m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = gen.normal();
    return m;
}

MatrixXcd complex_gaussian_matrix(int rows, int cols, rng::Philox& gen) {
    MatrixXcd m(rows, cols);
    const double inv_sqrt2 = 0.70710678118654752440;
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) {
            const double re = gen.normal();
            const double im = gen.normal();
            m(i, j) = Complex(re * inv_sqrt2, im * inv_sqrt2);
        }
    return m;
}

StiefelPair sample_stiefel2(int n, rng::Philox& gen) {
    if (n < 3) throw DomainError("sample_stiefel2: requires N >= 3");
    MatrixXd g = gaussian_matrix(n, 2, gen);
    lapack::qr_orthonormalize(g);
    return StiefelPair{g.col(0), g.col(1)};
}

StiefelPair sample_stiefel2(int n, std::uint64_t seed) {
    rng::Philox gen(seed);
    return sample_stiefel2(n, gen);
}

MatrixXd sample_orthogonal(int n, rng::Philox& gen) {
    if (n < 1) throw DomainError("sample_orthogonal: requires N >= 1");
    MatrixXd g = gaussian_matrix(n, n, gen);
    lapack::qr_orthonormalize(g);
    return g;
}

MatrixXd sample_orthogonal(int n, std::uint64_t seed) {
    rng::Philox gen(seed);
    return sample_orthogonal(n, gen);
}

Matrix2cd sample_unitary2(rng::Philox& gen) {
    MatrixXcd g = complex_gaussian_matrix(2, 2, gen);
    lapack::qr_orthonormalize(g);
    return g;
}

Matrix2cd sample_unitary2(std::uint64_t seed) {
    rng::Philox gen(seed);
    return sample_unitary2(gen);
}

}  // namespace rmtlab
