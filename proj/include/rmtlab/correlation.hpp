#pragma once

#include <string>
#include <vector>

#include "rmtlab/ensembles.hpp"
#include "rmtlab/hermitization.hpp"
#include "rmtlab/numkernel.hpp"
#include "rmtlab/types.hpp"

namespace rmtlab {

/// k-point GinUE correlation det[(1/pi) exp(-(|zi|^2+|zj|^2)/2 + zi conj(zj))],
/// clipped below at -1e-12; supports 1 <= k <= 6.
double ginue_rho(const std::vector<Complex>& points);

/// Radial pair-correlation profile of the GinUE: (1/pi^2)(1 - exp(-r^2)).
double ginue_pair_radial(double r);

struct CorrelationEstimate {
    BulkPoint center;
    double sigmaUsed = 1.0;
    double window = 4.0;  // radius L of the rescaled observation disk
    std::vector<double> binLo, binHi;
    std::vector<double> binMeasure;  // per-sample pair measure of each bin
    std::vector<double> values;      // estimated rho^(2) per radial bin
    std::vector<double> stderrs;
    long nSamples = 0;
    long nPairs = 0;
};

/// Rescales each eigenvalue to w = sqrt(N sigma) (z - lambda), histograms
/// ordered pairs by separation inside the window, and normalizes by the exact
/// pair measure of the observation disk so the estimator targets rho^(2).
CorrelationEstimate estimate_pair_correlation(const std::vector<Spectrum>& samples, BulkPoint z, double sigma,
                                              double window = 4.0, int bins = 24);

struct ChiSquare {
    double statistic = 0.0;
    int dof = 0;
    double pValue = 1.0;
};

/// Chi-square comparison of an estimate against a reference radial profile,
/// merging bins with fewer than `minPairs` expected pairs.
ChiSquare chi_square_against(const CorrelationEstimate& est, const std::vector<double>& reference,
                             double minPairs = 5.0);

struct UniversalityConfig {
    std::string label;
    EnsembleSpec ensemble;
    double t = 0.0;           // Ginibre perturbation weight (0 = none)
    double sigma = 0.0;       // 0 = compute via compute_constants (or 1 for complexGinibre)
    std::uint64_t seed = 1;
    int samples = 100;
};

struct UniversalityEntry {
    std::string label;
    double sigmaUsed = 0.0;
    CorrelationEstimate estimate;
    ChiSquare againstGinue;
};

struct UniversalityReport {
    std::vector<UniversalityEntry> entries;
    // max over bins of |rho_i - rho_j| / sqrt(se_i^2 + se_j^2) per config pair
    std::vector<std::tuple<int, int, double>> pairwiseMaxSigma;
};

/// Runs estimate_pair_correlation for every config with that config's
/// sigma_{z,t} and reports bin-wise discrepancies plus the GinUE comparison.
UniversalityReport universality_report(const std::vector<UniversalityConfig>& configs, BulkPoint z,
                                       double window = 4.0, int bins = 24, int workers = 1);

/// Eigenvalue sample generator used by the universality experiment.
std::vector<Spectrum> sample_spectra(const UniversalityConfig& config, int workers = 1);

struct SmoothPairStatistic {
    double value = 0.0;    // mean over samples of sum_{i != j} f(|w_i - w_j|)
    double stderrValue = 0.0;
    double ginuePrediction = 0.0;  // integral of f against the GinUE pair density
};

/// Pair statistic in the exact test-function form: averages a smooth radial
/// observable over ordered eigenvalue pairs in the rescaled window and
/// reports the GinUE prediction for the same window.
SmoothPairStatistic smooth_pair_statistic(const std::vector<Spectrum>& samples, BulkPoint z, double sigma,
                                          const std::function<double(double)>& f, double window = 4.0);

}  // namespace rmtlab
