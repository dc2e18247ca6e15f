#include "rmtlab/lapack.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

extern "C" void openblas_set_num_threads(int);

namespace rmtlab::lapack {

namespace {

void check(int info, const char* routine) {
    if (info != 0) throw SolverError(std::string(routine) + " failed with info=" + std::to_string(info));
}

}  // namespace

void set_blas_threads(int n) { openblas_set_num_threads(n > 0 ? n : 1); }

VectorXcd eig_real(const MatrixXd& a) {
    if (a.rows() != a.cols()) throw DimensionError("eig_real: matrix must be square");
    const lapack_int n = static_cast<lapack_int>(a.rows());
    MatrixXd work = a;
    VectorXd wr(n), wi(n);
    const int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, wr.data(), wi.data(), nullptr, 1,
                                   nullptr, 1);
    check(info, "dgeev");
    VectorXcd w(n);
    for (lapack_int i = 0; i < n; ++i) w[i] = Complex(wr[i], wi[i]);
    return w;
}

VectorXcd eig_complex(const MatrixXcd& a) {
    if (a.rows() != a.cols()) throw DimensionError("eig_complex: matrix must be square");
    const lapack_int n = static_cast<lapack_int>(a.rows());
    MatrixXcd work = a;
    VectorXcd w(n);
    const int info =
        LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, w.data(), nullptr, 1, nullptr, 1);
    check(info, "zgeev");
    return w;
}

VectorXd singular_values(const MatrixXcd& a) {
    const lapack_int m = static_cast<lapack_int>(a.rows());
    const lapack_int n = static_cast<lapack_int>(a.cols());
    MatrixXcd work = a;
    VectorXd s(std::min(m, n));
    const int info =
        LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m, s.data(), nullptr, 1, nullptr, 1);
    check(info, "zgesdd");
    return s;
}

void svd(const MatrixXcd& a, VectorXd& s, MatrixXcd& u, MatrixXcd& v) {
    const lapack_int m = static_cast<lapack_int>(a.rows());
    const lapack_int n = static_cast<lapack_int>(a.cols());
    MatrixXcd work = a;
    s.resize(std::min(m, n));
    u.resize(m, m);
    MatrixXcd vt(n, n);
    const int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', m, n, work.data(), m, s.data(), u.data(), m, vt.data(), n);
    check(info, "zgesdd");
    v = vt.adjoint();
}

MatrixXd spd_inverse(MatrixXd a) {
    if (a.rows() != a.cols()) throw DimensionError("spd_inverse: matrix must be square");
    const lapack_int n = static_cast<lapack_int>(a.rows());
    check(LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', n, a.data(), n), "dpotrf");
    check(LAPACKE_dpotri(LAPACK_COL_MAJOR, 'L', n, a.data(), n), "dpotri");
    a.triangularView<Eigen::StrictlyUpper>() = a.transpose().triangularView<Eigen::StrictlyUpper>();
    return a;
}

void eigh(const MatrixXd& a, VectorXd& w, MatrixXd& q) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    q = a;
    w.resize(n);
    check(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, q.data(), n, w.data()), "dsyevd");
}

VectorXd eigh_values(const MatrixXd& a) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    MatrixXd work = a;
    VectorXd w(n);
    check(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, w.data()), "dsyevd");
    return w;
}

void eigh(const MatrixXcd& a, VectorXd& w, MatrixXcd& q) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    q = a;
    w.resize(n);
    check(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, q.data(), n, w.data()), "zheevd");
}

void qr_orthonormalize(MatrixXd& a) {
    const lapack_int m = static_cast<lapack_int>(a.rows());
    const lapack_int k = static_cast<lapack_int>(a.cols());
    VectorXd tau(std::min(m, k));
    check(LAPACKE_dgeqrf(LAPACK_COL_MAJOR, m, k, a.data(), m, tau.data()), "dgeqrf");
    VectorXd rdiag(k);
    for (lapack_int j = 0; j < k; ++j) rdiag[j] = a(j, j);
    check(LAPACKE_dorgqr(LAPACK_COL_MAJOR, m, k, std::min(m, k), a.data(), m, tau.data()), "dorgqr");
    for (lapack_int j = 0; j < k; ++j)
        if (rdiag[j] < 0.0) a.col(j) = -a.col(j);
}

void qr_orthonormalize(MatrixXcd& a) {
    const lapack_int m = static_cast<lapack_int>(a.rows());
    const lapack_int k = static_cast<lapack_int>(a.cols());
    VectorXcd tau(std::min(m, k));
    check(LAPACKE_zgeqrf(LAPACK_COL_MAJOR, m, k, a.data(), m, tau.data()), "zgeqrf");
    VectorXcd rdiag(k);
    for (lapack_int j = 0; j < k; ++j) rdiag[j] = a(j, j);
    check(LAPACKE_zungqr(LAPACK_COL_MAJOR, m, k, std::min(m, k), a.data(), m, tau.data()), "zungqr");
    for (lapack_int j = 0; j < k; ++j) {
        const double r = std::abs(rdiag[j]);
        if (r > 0.0) a.col(j) *= rdiag[j] / r;
    }
}

}  // namespace rmtlab::lapack
