#include "rmtlab/correlation.hpp"

#include <cmath>
#include <functional>

#include "rmtlab/lapack.hpp"
#include "rmtlab/parallel.hpp"
#include "rmtlab/stats.hpp"

namespace rmtlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Area of the intersection of two disks of radius L whose centers are r
/// apart (the isotropic set covariance of the observation disk).
double disk_set_covariance(double L, double r) {
    if (r >= 2 * L) return 0.0;
    const double half = r / (2 * L);
    return 2 * L * L * std::acos(half) - 0.5 * r * std::sqrt(4 * L * L - r * r);
}

/// Pair measure of a separation bin [r1, r2): int 2 pi r gamma_W(r) dr.
double bin_pair_measure(double L, double r1, double r2) {
    auto [xs, ws] = stats::gauss_legendre(48, r1, r2);
    double acc = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) acc += ws[i] * 2 * kPi * xs[i] * disk_set_covariance(L, xs[i]);
    return acc;
}

}  // namespace

double ginue_rho(const std::vector<Complex>& points) {
    const int k = static_cast<int>(points.size());
    if (k < 1 || k > 6) throw DomainError("ginue_rho: 1 <= k <= 6 required");
    MatrixXcd kernel(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            const Complex zi = points[i], zj = points[j];
            kernel(i, j) = std::exp(-(std::norm(zi) + std::norm(zj)) / 2.0 + zi * std::conj(zj)) / kPi;
        }
    const double det = kernel.determinant().real();
    return det < 0.0 && det > -1e-12 ? 0.0 : det;
}

double ginue_pair_radial(double r) { return (1.0 - std::exp(-r * r)) / (kPi * kPi); }

CorrelationEstimate estimate_pair_correlation(const std::vector<Spectrum>& samples, BulkPoint z, double sigma,
                                              double window, int bins) {
    if (samples.size() < 20) throw InsufficientDataError("estimate_pair_correlation: need at least 20 samples");
    if (!(sigma > 0.0)) throw DomainError("estimate_pair_correlation: sigma > 0 required");
    CorrelationEstimate est;
    est.center = z;
    est.sigmaUsed = sigma;
    est.window = window;
    est.nSamples = static_cast<long>(samples.size());
    const double width = window / bins;
    est.binLo.resize(bins);
    est.binHi.resize(bins);
    est.binMeasure.resize(bins);
    for (int b = 0; b < bins; ++b) {
        est.binLo[b] = b * width;
        est.binHi[b] = (b + 1) * width;
        est.binMeasure[b] = bin_pair_measure(window, est.binLo[b], est.binHi[b]);
    }

    std::vector<std::vector<double>> counts(bins, std::vector<double>(samples.size(), 0.0));
    long pairs = 0;
    bool anyPoint = false;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const Spectrum& spec = samples[s];
        const double scale = std::sqrt(spec.sourceDim * sigma);
        std::vector<Complex> w;
        for (int i = 0; i < spec.eigenvalues.size(); ++i) {
            const Complex ww = scale * (z.z() - spec.eigenvalues[i]);
            if (std::abs(ww) <= window) w.push_back(ww);
        }
        if (!w.empty()) anyPoint = true;
        for (std::size_t i = 0; i < w.size(); ++i)
            for (std::size_t j = 0; j < w.size(); ++j) {
                if (i == j) continue;
                const double r = std::abs(w[i] - w[j]);
                const int b = static_cast<int>(r / width);
                if (b >= 0 && b < bins) {
                    counts[b][s] += 1.0;
                    ++pairs;
                }
            }
    }
    if (!anyPoint) throw InsufficientDataError("estimate_pair_correlation: no eigenvalues near the bulk point");
    est.nPairs = pairs;
    est.values.resize(bins);
    est.stderrs.resize(bins);
    for (int b = 0; b < bins; ++b) {
        est.values[b] = stats::mean(counts[b]) / est.binMeasure[b];
        est.stderrs[b] = stats::standard_error(counts[b]) / est.binMeasure[b];
    }
    return est;
}

ChiSquare chi_square_against(const CorrelationEstimate& est, const std::vector<double>& reference, double minPairs) {
    if (reference.size() != est.values.size()) throw DimensionError("chi_square_against: reference size mismatch");
    ChiSquare out;
    double mergedCount = 0.0, mergedExpect = 0.0, mergedVar = 0.0, mergedMeasure = 0.0;
    for (std::size_t b = 0; b < est.values.size(); ++b) {
        mergedCount += est.values[b] * est.binMeasure[b];
        mergedExpect += reference[b] * est.binMeasure[b];
        mergedVar += est.stderrs[b] * est.binMeasure[b] * est.stderrs[b] * est.binMeasure[b];
        mergedMeasure += est.binMeasure[b];
        if (mergedExpect * est.nSamples >= minPairs || b + 1 == est.values.size()) {
            if (mergedVar > 0.0) {
                const double diff = mergedCount - mergedExpect;
                out.statistic += diff * diff / mergedVar;
                ++out.dof;
            }
            mergedCount = mergedExpect = mergedVar = mergedMeasure = 0.0;
        }
    }
    out.pValue = stats::chi_square_sf(out.statistic, out.dof);
    return out;
}

std::vector<Spectrum> sample_spectra(const UniversalityConfig& config, int workers) {
    std::vector<Spectrum> out(config.samples);
    parallel_for(config.samples, workers, [&](int i) {
        EnsembleSpec spec = config.ensemble;
        spec.seed = rng::task_seed(config.seed, i);
        Spectrum s;
        s.sourceDim = spec.N;
        if (spec.family == Family::ComplexGinibre) {
            s.eigenvalues = lapack::eig_complex(sample_matrix_complex(spec));
        } else {
            MatrixXd a = sample_matrix(spec);
            if (config.t > 0.0) a = perturb_with_ginibre(a, config.t, rng::task_seed(config.seed, i) ^ 0x9E3779B9u);
            s.eigenvalues = lapack::eig_real(a);
        }
        out[i] = std::move(s);
    });
    return out;
}

SmoothPairStatistic smooth_pair_statistic(const std::vector<Spectrum>& samples, BulkPoint z, double sigma,
                                          const std::function<double(double)>& f, double window) {
    if (samples.empty()) throw InsufficientDataError("smooth_pair_statistic: no samples");
    std::vector<double> perSample;
    perSample.reserve(samples.size());
    for (const Spectrum& spec : samples) {
        const double scale = std::sqrt(spec.sourceDim * sigma);
        std::vector<Complex> w;
        for (int i = 0; i < spec.eigenvalues.size(); ++i) {
            const Complex ww = scale * (z.z() - spec.eigenvalues[i]);
            if (std::abs(ww) <= window) w.push_back(ww);
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            for (std::size_t j = 0; j < w.size(); ++j)
                if (i != j) acc += f(std::abs(w[i] - w[j]));
        perSample.push_back(acc);
    }
    SmoothPairStatistic out;
    out.value = stats::mean(perSample);
    out.stderrValue = stats::standard_error(perSample);
    auto [xs, ws] = stats::gauss_legendre(400, 0.0, 2 * window);
    double pred = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        pred += ws[i] * f(xs[i]) * ginue_pair_radial(xs[i]) * 2 * kPi * xs[i] * disk_set_covariance(window, xs[i]);
    out.ginuePrediction = pred;
    return out;
}

UniversalityReport universality_report(const std::vector<UniversalityConfig>& configs, BulkPoint z, double window,
                                       int bins, int workers) {
    if (configs.size() < 2) throw DomainError("universality_report: at least two configs required");
    UniversalityReport report;
    for (const auto& config : configs) {
        UniversalityEntry entry;
        entry.label = config.label;
        double sigma = config.sigma;
        if (sigma <= 0.0) {
            if (config.ensemble.family == Family::ComplexGinibre || config.t <= 0.0) {
                sigma = 1.0;
            } else {
                EnsembleSpec base = config.ensemble;
                base.seed = rng::task_seed(config.seed, 0);
                sigma = compute_constants(sample_matrix(base), z, config.t).sigma;
            }
        }
        entry.sigmaUsed = sigma;
        const auto spectra = sample_spectra(config, workers);
        entry.estimate = estimate_pair_correlation(spectra, z, sigma, window, bins);
        std::vector<double> reference(entry.estimate.values.size());
        for (std::size_t b = 0; b < reference.size(); ++b)
            reference[b] = ginue_pair_radial(0.5 * (entry.estimate.binLo[b] + entry.estimate.binHi[b]));
        entry.againstGinue = chi_square_against(entry.estimate, reference);
        report.entries.push_back(std::move(entry));
    }
    for (std::size_t i = 0; i < report.entries.size(); ++i)
        for (std::size_t j = i + 1; j < report.entries.size(); ++j) {
            const auto& a = report.entries[i].estimate;
            const auto& b = report.entries[j].estimate;
            double worst = 0.0;
            for (std::size_t k = 0; k < a.values.size(); ++k) {
                const double se = std::sqrt(a.stderrs[k] * a.stderrs[k] + b.stderrs[k] * b.stderrs[k]);
                if (se > 0.0) worst = std::max(worst, std::abs(a.values[k] - b.values[k]) / se);
            }
            report.pairwiseMaxSigma.emplace_back(static_cast<int>(i), static_cast<int>(j), worst);
        }
    return report;
}

}  // namespace rmtlab
