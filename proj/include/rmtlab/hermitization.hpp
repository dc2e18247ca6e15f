#pragma once

#include <map>
#include <memory>

#include "rmtlab/types.hpp"

namespace rmtlab {

/// Spectral point z = a + ib with |z| < 1 and b bounded away from the real
/// axis by the bulk margin kappa.
struct BulkPoint {
    double a = 0.0;
    double b = 0.0;

    Complex z() const { return Complex(a, b); }
    void validate(double kappa = 0.1) const;
};

/// Parameters (a, b, theta) of the 2x2 shift Lambda_{a,b,theta} =
/// [[a, b tan(theta)], [-b / tan(theta), a]].
struct ShiftParams {
    double a = 0.0;
    double b = 0.0;
    double theta = 0.78539816339744830962;  // pi/4

    Matrix2d lambda() const;
    void validate(double kappa = 0.1) const;
};

/// Trace constants of the z-Hermitization evaluated at eta_{z,t}.
struct TraceConstants {
    double etaZT = 0.0;
    Complex g;
    double alpha = 0.0;
    Complex beta;
    double gamma = 0.0;
    double sigma = 0.0;
    Complex delta;
    Complex tau;
    double upsilon = 0.0;
};

/// Hermitization machinery for a fixed real matrix A and spectral point z.
/// One SVD of A - z is taken up front; every trace of H_z, H~_z and their
/// products with A - z is then evaluated at any eta in O(N) or O(N^2).
class HermitizationZ {
  public:
    HermitizationZ(const MatrixXd& a, BulkPoint z);
    HermitizationZ(const MatrixXcd& a_minus_z);

    int n() const { return n_; }
    const VectorXd& singular_values() const { return s_; }

    /// <H_z(eta)> = (1/N) Tr [(A-z)(A-z)* + eta^2]^{-1}.
    double h_trace(double eta) const;

    /// Root of t <H_z(eta)> = 1 on [t/C, Ct] after bracket expansion.
    double solve_eta(double t, double bracket_c = 10.0) const;

    /// Constants at eta_{z,t}; skipping upsilon avoids four large products
    /// when only the sigma group is needed.
    TraceConstants constants(double t, bool wantUpsilon = true) const;

    /// <H_z(eta)^2>, <H_z H_z-bar>, <H~_z H~_z-bar> style traces at eta.
    double h2_trace(double eta) const;
    double htilde_htildebar_trace(double eta) const;

    /// eta <H^2 (A-z)> at eta (equals beta at eta_{z,t}).
    Complex beta_at(double eta) const;

    /// Dense blocks at eta (N x N complex), for cross-module assembly.
    MatrixXcd h_dense(double eta) const;            // H_z
    MatrixXcd htilde_dense(double eta) const;       // H~_z
    MatrixXcd h_amz_dense(double eta) const;        // H_z (A - z)
    MatrixXcd amzs_h_dense(double eta) const;       // (A - z)* H_z

    /// Normalized traces of the four N-blocks of G_z(eta).
    Matrix2cd g_block_traces(double eta) const;

  private:
    const MatrixXcd& kuv() const;   // U* V
    const MatrixXcd& p_vv() const;  // V* conj(V)
    const MatrixXcd& p_uu() const;  // U* conj(U)
    const MatrixXcd& w_vu() const;  // V^T U

    int n_ = 0;
    MatrixXcd amz_;  // A - z
    VectorXd s_;
    MatrixXcd u_, v_;
    mutable std::unique_ptr<MatrixXcd> kuv_, pvv_, puu_, wvu_;
};

/// Result of assembling the 2x2-block resolvent of the z-Hermitization.
struct ResolventBundle2 {
    BulkPoint z;
    double eta = 0.0;
    Matrix2cd blockTraces;  // (alpha, beta) -> (1/N) Tr G_{alpha beta}
    Complex g2OffDiag12;    // <[G^2]_{12}> = 2i eta <H^2 (A-z)>
    double hTrace = 0.0;    // <H_z(eta)>
    double residual = 0.0;  // probe estimate of ||(H_z - i eta) G - I||
};

ResolventBundle2 resolvent_blocks(const MatrixXd& a, BulkPoint z, double eta);

double solve_eta_zt(const MatrixXd& a, BulkPoint z, double t);

TraceConstants compute_constants(const MatrixXd& a, BulkPoint z, double t);

/// Resolvent of the Hermitization of I_2 (x) A - Lambda_{a,b,theta} (x) I_N.
/// Holds the full 2N x 2N inverse H~ = (A'^T A' + eta^2)^{-1}, from which all
/// sixteen block traces of the 4N x 4N resolvent and the trace products
/// entering Q and the three-vector are assembled.
class LambdaResolvent {
  public:
    LambdaResolvent(const MatrixXd& a, ShiftParams p, double eta);

    int n() const { return n_; }
    double eta() const { return eta_; }
    const ShiftParams& params() const { return params_; }

    /// (1/N) Tr of the (alpha, beta) N-block of G_{a,b,theta}(eta),
    /// alpha, beta in {0,..,3}.
    Complex block_trace(int alpha, int beta) const;
    Eigen::Matrix4cd block_traces() const;

    /// Unnormalized traces of the N-blocks of H~_{a,b,theta}(eta).
    double tr_htilde(int k, int l) const;

    /// N x N block of H~ (k, l in {0,1}).
    Eigen::Block<const MatrixXd> htilde_block(int k, int l) const;

    /// Three-vector (N/t - Tr H~_11, -2 Tr H~_12, N/t - Tr H~_22).
    Vector3d three_vector(double t) const;

    /// 3x3 symmetric Q matrix assembled from traces of products of the
    /// N-blocks of H~, in the coordinate convention whose spectrum at
    /// theta = pi/4 is {2N<H~_z^2>, 2N<H~_z H~_zbar>, N<H~_z H~_zbar>}.
    Matrix3d q_matrix() const;

  private:
    int n_ = 0;
    ShiftParams params_;
    double eta_ = 0.0;
    MatrixXd a_;       // the input matrix
    MatrixXd htilde_;  // (A'^T A' + eta^2)^{-1}, 2N x 2N
    MatrixXd gram_;    // (A - a)^T (A - a)
};

Matrix3d q_matrix(const MatrixXd& a, ShiftParams p, double eta);

Vector3d three_vector(const MatrixXd& a, ShiftParams p, double eta, double t);

/// 4x4 matrix of (t/N)-scaled traces coupling H~_{a,b,pi/4}(eta_{z,t}) with
/// the blocks of G_z(eta_{z,t}).
Matrix4cd g_matrix(const MatrixXd& a, BulkPoint z, double t);

/// Sixteen block traces of G_{a,b,pi/4} computed from G_z and G_zbar through
/// the rotation identity.
Eigen::Matrix4cd rotation_identity_traces(const MatrixXd& a, ShiftParams p, double eta);

}  // namespace rmtlab
