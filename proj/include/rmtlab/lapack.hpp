#pragma once

#include "rmtlab/types.hpp"

namespace rmtlab::lapack {

/// Eigenvalues of a real square matrix (dgeev, values only).
VectorXcd eig_real(const MatrixXd& a);

/// Eigenvalues of a complex square matrix (zgeev, values only).
VectorXcd eig_complex(const MatrixXcd& a);

/// Singular values of a complex matrix, descending (zgesdd, values only).
VectorXd singular_values(const MatrixXcd& a);

/// Full SVD a = U * diag(s) * V^*. U, V are square (zgesdd job 'A').
void svd(const MatrixXcd& a, VectorXd& s, MatrixXcd& u, MatrixXcd& v);

/// Inverse of a symmetric positive definite matrix (dpotrf + dpotri).
MatrixXd spd_inverse(MatrixXd a);

/// Eigendecomposition of a real symmetric matrix (dsyevd), ascending.
void eigh(const MatrixXd& a, VectorXd& w, MatrixXd& q);

/// Eigenvalues of a real symmetric matrix (dsyevd), ascending.
VectorXd eigh_values(const MatrixXd& a);

/// Eigendecomposition of a complex Hermitian matrix (zheevd), ascending.
void eigh(const MatrixXcd& a, VectorXd& w, MatrixXcd& q);

/// Orthonormalizes the columns of a tall real matrix in place via Householder
/// QR, dividing each column by the sign of the corresponding R diagonal so the
/// result is Haar when the input is i.i.d. standard Gaussian.
void qr_orthonormalize(MatrixXd& a);

/// Complex variant; columns are divided by the phase of the R diagonal.
void qr_orthonormalize(MatrixXcd& a);

/// Sets the number of BLAS threads used by subsequent calls (best effort).
void set_blas_threads(int n);

}  // namespace rmtlab::lapack
