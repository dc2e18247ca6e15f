#pragma once

#include <cstdint>
#include <vector>

#include "rmtlab/rng.hpp"
#include "rmtlab/types.hpp"

namespace rmtlab {

/// Complex skew-symmetric matrix, stored by its strictly upper triangle so
/// that m = -m^T holds exactly by construction.
class SkewMatrix {
  public:
    explicit SkewMatrix(int dim);

    int dim() const { return dim_; }

    /// Upper-triangle accessor; requires i < j.
    Complex& upper(int i, int j);
    Complex upper(int i, int j) const;

    /// Entry with the antisymmetry applied.
    Complex operator()(int i, int j) const;

    MatrixXcd dense() const;

    static SkewMatrix from_dense(const MatrixXcd& m, double tol = 1e-12);

  private:
    int dim_;
    std::vector<Complex> upper_;  // row-major strictly upper triangle
};

/// Pair of orthonormal vectors in R^N, a point of the Stiefel manifold
/// V^2(R^N).
struct StiefelPair {
    VectorXd v1;
    VectorXd v2;

    int dim() const { return static_cast<int>(v1.size()); }
    void validate(double tol = 1e-12) const;
};

struct Spectrum {
    VectorXcd eigenvalues;
    int sourceDim = 0;
};

/// Pfaffian of an even-dimensional skew-symmetric matrix with the convention
/// Pf([[0,a],[-a,0]]) = a, computed by skew-symmetric tridiagonalization with
/// partial pivoting.
Complex pfaffian(const SkewMatrix& m);
Complex pfaffian_dense(MatrixXcd m);

/// Full spectrum of a real square matrix through the pluggable dense solver.
Spectrum eigenvalues_real(const MatrixXd& m);

/// First two columns of a Haar orthogonal matrix on R^N; requires N >= 3.
StiefelPair sample_stiefel2(int n, std::uint64_t seed);
StiefelPair sample_stiefel2(int n, rng::Philox& gen);

/// Haar orthogonal matrix on R^N (QR of a Gaussian with R-diagonal sign fix).
MatrixXd sample_orthogonal(int n, std::uint64_t seed);
MatrixXd sample_orthogonal(int n, rng::Philox& gen);

/// Haar unitary 2x2 matrix.
Matrix2cd sample_unitary2(std::uint64_t seed);
Matrix2cd sample_unitary2(rng::Philox& gen);

/// Gaussian matrices drawn entrywise from an existing generator.
MatrixXd gaussian_matrix(int rows, int cols, rng::Philox& gen);
MatrixXcd complex_gaussian_matrix(int rows, int cols, rng::Philox& gen);

}  // namespace rmtlab
