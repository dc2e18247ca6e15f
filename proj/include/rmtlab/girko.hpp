#pragma once

#include <cstdint>
#include <vector>

#include "rmtlab/ensembles.hpp"
#include "rmtlab/hermitization.hpp"
#include "rmtlab/types.hpp"

namespace rmtlab {

/// Smooth compactly supported radial bump f(w) = amp * exp(-1/(1 - |w/R|^2))
/// for |w| < R, with an analytic Laplacian.
struct TestFunction {
    Complex center;
    double radius = 1.0;
    double amplitude = 1.0;

    double operator()(Complex w) const;
    double laplacian(Complex w) const;
    /// L1 norm of the Laplacian, by polar quadrature.
    double laplacian_l1() const;
};

struct GirkoResult {
    double direct = 0.0;    // (1/N) sum f_z(sigma_i) - (1/pi) int_D f_z
    double integral = 0.0;  // I_eps by nested quadrature
    double epsilon = 0.0;
    std::vector<double> etaGrid;
    double discrepancy = 0.0;
};

/// Girko functional of one matrix sample: the eigenvalue-side statistic and
/// the Hermitized eta-integral I_eps over the window [N^(-1-eps), N^(-1+eps)],
/// both for the rescaled test function f_z(w) = N f(sqrt(N)(w - z)).
GirkoResult girko_functional(const MatrixXd& x, const TestFunction& f, BulkPoint z, double epsilon,
                             int etaNodes = 40, int radialNodes = 24, int angularNodes = 32);

struct ComparisonResult {
    double meanBase = 0.0;
    double meanTarget = 0.0;
    double seBase = 0.0;
    double seTarget = 0.0;
    double difference = 0.0;
    double combinedSe = 0.0;
};

/// Monte-Carlo estimate of E prod_l <Im G_{z_l}(i eta_l) - Im m^{z_l}(i eta_l)>
/// for the two laws of a matched pair (base + sqrt(t) Ginibre vs the
/// sqrt(1+t)-scaled target), with common per-task seeds.
ComparisonResult comparison_experiment(const MatchedPair& pair, const std::vector<BulkPoint>& points,
                                       const std::vector<double>& etas, int samples, std::uint64_t seed,
                                       int workers = 1);

/// Same statistic for two arbitrary ensembles (used for the mismatched-variance control).
ComparisonResult comparison_experiment_specs(const EnsembleSpec& lawA, double tA, const EnsembleSpec& lawB,
                                             double tB, const std::vector<BulkPoint>& points,
                                             const std::vector<double>& etas, int samples, std::uint64_t seed,
                                             int workers = 1);

}  // namespace rmtlab
