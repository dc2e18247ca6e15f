#include <doctest.h>

#include <cmath>
#include <iostream>

#include "rmtlab/correlation.hpp"
#include "rmtlab/stats.hpp"

using namespace rmtlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Poisson process with intensity 1/pi on a disk of radius L, packaged as
// synthetic spectra so the rescaling w = sqrt(N sigma)(z - lambda) recovers
// the original points.
std::vector<Spectrum> poisson_samples(int nSamples, double L, BulkPoint z, int sourceDim, std::uint64_t seed) {
    std::vector<Spectrum> out;
    const double mean = L * L;  // area * intensity = pi L^2 / pi
    const double scale = std::sqrt(static_cast<double>(sourceDim));
    for (int s = 0; s < nSamples; ++s) {
        rng::Philox gen(rng::task_seed(seed, s));
        int k = 0;
        double p = std::exp(-mean), cum = gen.uniform();
        // Knuth inversion by multiplication of uniforms
        double prod = gen.uniform();
        const double floor = std::exp(-mean);
        while (prod > floor) {
            ++k;
            prod *= gen.uniform();
        }
        (void)p;
        (void)cum;
        Spectrum spec;
        spec.sourceDim = sourceDim;
        spec.eigenvalues.resize(k);
        for (int i = 0; i < k; ++i) {
            const double r = L * std::sqrt(gen.uniform());
            const double phi = 2 * kPi * gen.uniform();
            const Complex w = std::polar(r, phi);
            spec.eigenvalues[i] = z.z() - w / scale;
        }
        out.push_back(std::move(spec));
    }
    return out;
}

}  // namespace

TEST_CASE("ginue kernel one- and two-point values") {
    CHECK(ginue_rho({Complex(0.7, -0.3)}) == doctest::Approx(1.0 / kPi).epsilon(1e-14));
    CHECK(ginue_rho({Complex(0.2, 0.1), Complex(0.2, 0.1)}) == doctest::Approx(0.0));
    const double expected = (1 - std::exp(-1.0)) / (kPi * kPi);
    CHECK(ginue_rho({Complex(0, 0), Complex(0, 1)}) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(ginue_rho({Complex(0, 0), Complex(1, 0)}) == doctest::Approx(0.06405).epsilon(1e-3));
    CHECK_THROWS_AS(ginue_rho({}), DomainError);
}

TEST_CASE("ginue kernel exchangeability and translation invariance") {
    const std::vector<Complex> pts{Complex(0.1, 0.2), Complex(-0.4, 0.5), Complex(0.3, -0.8)};
    const double base = ginue_rho(pts);
    CHECK(ginue_rho({pts[1], pts[2], pts[0]}) == doctest::Approx(base).epsilon(1e-14));
    CHECK(ginue_rho({pts[2], pts[1], pts[0]}) == doctest::Approx(base).epsilon(1e-14));

    for (int i = 0; i < 10; ++i) {
        const Complex z1(0.13 * i, -0.07 * i);
        const Complex shift(0.21, 0.11);
        const double r = std::abs(z1);
        CHECK(std::abs(ginue_rho({Complex(0, 0), z1}) - ginue_pair_radial(r)) < 1e-12);
        CHECK(std::abs(ginue_rho({shift, z1 + shift}) - ginue_pair_radial(r)) < 1e-12);
    }
}

TEST_CASE("pair correlation of a Poisson process is flat") {
    const BulkPoint z{0.3, 0.4};
    const auto samples = poisson_samples(600, 4.0, z, 400, 11);
    const CorrelationEstimate est = estimate_pair_correlation(samples, z, 1.0, 4.0, 12);
    const double flat = 1.0 / (kPi * kPi);
    for (std::size_t b = 0; b < est.values.size(); ++b) {
        CHECK(est.values[b] >= 0.0);
        CHECK(std::abs(est.values[b] - flat) < 3.5 * est.stderrs[b] + 1e-12);
    }

    // mass balance: integrated estimate equals the mean counted pairs
    double integrated = 0.0;
    for (std::size_t b = 0; b < est.values.size(); ++b) integrated += est.values[b] * est.binMeasure[b];
    CHECK(integrated == doctest::Approx(static_cast<double>(est.nPairs) / est.nSamples).epsilon(1e-12));
}

TEST_CASE("estimator stderr shrinks like one over sqrt(samples)") {
    const BulkPoint z{0.3, 0.4};
    const auto big = poisson_samples(800, 4.0, z, 400, 21);
    const auto half = std::vector<Spectrum>(big.begin(), big.begin() + 400);
    const CorrelationEstimate e1 = estimate_pair_correlation(half, z, 1.0, 4.0, 10);
    const CorrelationEstimate e2 = estimate_pair_correlation(big, z, 1.0, 4.0, 10);
    double ratioSum = 0.0;
    int cnt = 0;
    for (std::size_t b = 2; b < e1.values.size(); ++b) {
        if (e2.stderrs[b] > 0) {
            ratioSum += e1.stderrs[b] / e2.stderrs[b];
            ++cnt;
        }
    }
    const double meanRatio = ratioSum / cnt;
    CHECK(meanRatio > std::sqrt(2.0) * 0.8);
    CHECK(meanRatio < std::sqrt(2.0) * 1.2);
}

TEST_CASE("estimator determinism and error paths") {
    const BulkPoint z{0.3, 0.4};
    const auto s1 = poisson_samples(40, 4.0, z, 300, 5);
    const auto s2 = poisson_samples(40, 4.0, z, 300, 5);
    const CorrelationEstimate e1 = estimate_pair_correlation(s1, z, 1.0);
    const CorrelationEstimate e2 = estimate_pair_correlation(s2, z, 1.0);
    for (std::size_t b = 0; b < e1.values.size(); ++b) CHECK(e1.values[b] == e2.values[b]);

    CHECK_THROWS_AS(estimate_pair_correlation(s1, z, -1.0), DomainError);
    std::vector<Spectrum> tiny(s1.begin(), s1.begin() + 5);
    CHECK_THROWS_AS(estimate_pair_correlation(tiny, z, 1.0), InsufficientDataError);

    // empty window: all eigenvalues far away from the bulk point
    std::vector<Spectrum> far(25);
    for (auto& spec : far) {
        spec.sourceDim = 100;
        spec.eigenvalues = VectorXcd::Constant(100, Complex(50.0, 50.0));
    }
    CHECK_THROWS_AS(estimate_pair_correlation(far, z, 1.0), InsufficientDataError);
}

TEST_CASE("complex ginibre pair correlation approaches the GinUE profile") {
    UniversalityConfig config;
    config.label = "ginibre";
    config.ensemble.family = Family::ComplexGinibre;
    config.ensemble.N = 256;
    config.sigma = 1.0;
    config.samples = 80;
    config.seed = 7;
    const BulkPoint z{0.3, 0.4};
    const auto spectra = sample_spectra(config, 2);
    const CorrelationEstimate est = estimate_pair_correlation(spectra, z, 1.0, 4.0, 16);
    std::vector<double> reference(est.values.size());
    for (std::size_t b = 0; b < reference.size(); ++b)
        reference[b] = ginue_pair_radial(0.5 * (est.binLo[b] + est.binHi[b]));
    const ChiSquare chi = chi_square_against(est, reference);
    std::cout << "[diag] ginibre chi2/dof = " << chi.statistic << "/" << chi.dof << " p = " << chi.pValue << "\n";
    CHECK(chi.pValue > 1e-3);
}

TEST_CASE("universality report compares a config with itself at zero discrepancy") {
    UniversalityConfig config;
    config.label = "a";
    config.ensemble.family = Family::ComplexGinibre;
    config.ensemble.N = 64;
    config.sigma = 1.0;
    config.samples = 25;
    config.seed = 3;
    UniversalityConfig same = config;
    same.label = "b";
    const UniversalityReport rep = universality_report({config, same}, BulkPoint{0.3, 0.4}, 4.0, 12, 2);
    REQUIRE(rep.pairwiseMaxSigma.size() == 1);
    CHECK(std::get<2>(rep.pairwiseMaxSigma[0]) == doctest::Approx(0.0));
}

TEST_CASE("chi-square survival function sanity") {
    CHECK(stats::chi_square_sf(0.0, 5) == doctest::Approx(1.0));
    CHECK(stats::chi_square_sf(4.35, 1) == doctest::Approx(0.037).epsilon(0.02));
    CHECK(stats::chi_square_sf(18.31, 10) == doctest::Approx(0.05).epsilon(0.02));
}

TEST_CASE("smooth pair statistic matches the GinUE prediction") {
    UniversalityConfig config;
    config.ensemble.family = Family::ComplexGinibre;
    config.ensemble.N = 256;
    config.sigma = 1.0;
    config.samples = 60;
    config.seed = 15;
    const auto spectra = sample_spectra(config, 2);
    const auto f = [](double r) { return std::exp(-r * r / 4.0); };
    const SmoothPairStatistic st = smooth_pair_statistic(spectra, BulkPoint{0.3, 0.4}, 1.0, f);
    CHECK(std::abs(st.value - st.ginuePrediction) < 3.5 * st.stderrValue);
}
