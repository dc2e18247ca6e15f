#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmtlab/hermitization.hpp"
#include "rmtlab/numkernel.hpp"
#include "rmtlab/types.hpp"

namespace rmtlab {

/// A point of the single-step Schur chart: shift parameters, a Stiefel pair
/// in R^N, the coupling block W ((N-2) x 2) and the trailing block M1.
struct PhiPoint {
    ShiftParams shift;
    StiefelPair pair;
    MatrixXd w;
    MatrixXd m1;

    int n() const { return pair.dim(); }
    void validate() const;
};

struct IdentityReport {
    std::string name;
    Complex lhs;
    Complex rhs;
    double absError = 0.0;
    double relError = 0.0;
    double mcStderr = 0.0;  // 0 for deterministic checks
    bool pass = false;
    bool budgetOk = true;  // false when the MC budget was insufficient
    std::string params;

    void finalize(double tolAbs, double tolRel);
};

/// Smooth orthogonal completion R with R e_1 = v1, R e_2 = v2 built from two
/// Householder reflections (deterministic in the inputs).
MatrixXd householder_completion(const StiefelPair& pair);

/// Phi(a,b,theta,v,W,M1) = R [[Lambda, W^T],[0, M1]] R^T.
MatrixXd phi_map(const PhiPoint& p);

/// Generic seeded chart point for the Jacobian check.
PhiPoint random_phi_point(int n, double theta, std::uint64_t seed);

/// Central-difference Jacobian determinant of Phi in the chart coordinates
/// (a, b, theta; f dual to v2^T dv1; H dual to R~^T dv; W; M1) against the
/// closed form 16 b^2 |cos 2theta| / sin^2 2theta |det(M1 - lambda)|^2.
IdentityReport verify_jacobian(const PhiPoint& p, double h = 1e-5);

/// Max violation of orthogonality/tangency among the chart frame vectors.
double jacobian_chart_selftest(const PhiPoint& p);

/// Gaussian-weighted determinant integral vs the Pfaffian integral over
/// 4x4 complex skew matrices (N = 5 or 6; A2 is (N-4) x (N-4)).
IdentityReport verify_pfaffian_identity(int n, double t, Complex lambda1, Complex lambda2, const MatrixXd& a2,
                                        long mcSamples, std::uint64_t seed);

/// Builds the matrix whose Pfaffian enters the identity.
MatrixXcd pfaffian_identity_matrix(const MatrixXcd& x, const MatrixXd& a2, Complex lambda1, Complex lambda2);

/// Stiefel Gaussian integral vs the symmetric-matrix Fourier representation.
IdentityReport verify_stiefel_gaussian(int n, ShiftParams p, double t, long mcSamples, std::uint64_t seed,
                                       double eta = -1.0);

/// Volume of V^2(R^N) under the rotationally invariant form
/// (= Vol(S^{N-1}) Vol(S^{N-2})).
double stiefel2_volume(int n);

/// Right-hand side of the Stiefel identity evaluated by 3D quadrature over
/// symmetric 2x2 matrices; `nodes` controls the tensor rule per dimension.
double stiefel_gaussian_rhs(const MatrixXd& a, ShiftParams p, double t, double eta, int nodes, double radius);

/// Exact determinant-ratio identity; lhs/rhs are reported on the log scale.
IdentityReport verify_det_ratio(const MatrixXd& a, ShiftParams p, double eta);

struct HcizReport {
    std::vector<Complex> ratios;
    std::vector<double> stderrs;
    double maxPairDiff = 0.0;     // max_{i,j} |R_i - R_j|
    double maxDeviation = 0.0;    // max_i |R_i - 1|
    IdentityReport summary;
};

/// Monte-Carlo Haar check that the U(2) x U(2) integral of
/// exp Tr[U2* zbar U2 U1* z U1] is the HCIZ closed form, pair by pair.
HcizReport verify_hciz_ratio(const std::vector<std::pair<Complex, Complex>>& zPairs, long mcSamples,
                             std::uint64_t seed);

}  // namespace rmtlab
