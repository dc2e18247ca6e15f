#include <doctest.h>

#include <cmath>
#include <iostream>

#include "rmtlab/girko.hpp"
#include "rmtlab/stats.hpp"

using namespace rmtlab;

TEST_CASE("bump test function and its laplacian") {
    TestFunction f;
    f.radius = 1.5;
    f.amplitude = 2.0;
    CHECK(f(Complex(1.6, 0)) == 0.0);
    CHECK(f(Complex(0, 0)) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));

    // 5-point finite-difference cross-check of the Laplacian on a grid
    const double h = 1e-4;
    double worst = 0.0;
    for (double x = -1.2; x <= 1.2; x += 0.3)
        for (double y = -1.2; y <= 1.2; y += 0.3) {
            const Complex w(x, y);
            if (std::norm(w / f.radius) > 0.9) continue;  // keep clear of the boundary blowup
            const double fd = (f(w + h) + f(w - h) + f(w + Complex(0, h)) + f(w - Complex(0, h)) - 4 * f(w)) / (h * h);
            worst = std::max(worst, std::abs(fd - f.laplacian(w)));
        }
    CHECK(worst < 1e-4);

    CHECK(f.laplacian_l1() > 0.0);
}

TEST_CASE("girko functional vanishes for the zero test function") {
    TestFunction f;
    f.amplitude = 0.0;
    EnsembleSpec spec;
    spec.N = 60;
    spec.seed = 2;
    const GirkoResult res = girko_functional(sample_matrix(spec), f, BulkPoint{0.3, 0.4}, 0.3, 16, 8, 12);
    CHECK(res.direct == 0.0);
    CHECK(res.integral == 0.0);
    CHECK_THROWS_AS(girko_functional(sample_matrix(spec), f, BulkPoint{0.3, 0.4}, 0.7), DomainError);
}

TEST_CASE("girko functional is tiny when the support misses the spectrum and the disk") {
    TestFunction f;
    EnsembleSpec spec;
    spec.N = 80;
    spec.seed = 3;
    // center the rescaled window at |z| = 3, far outside the unit disk
    const GirkoResult res = girko_functional(sample_matrix(spec), f, BulkPoint{2.9, 0.8}, 0.3, 24, 12, 16);
    CHECK(res.direct == 0.0);  // no eigenvalues and no unit-disk mass in the support
    CHECK(std::abs(res.integral) < 1e-4 * f.laplacian_l1());
}

TEST_CASE("girko transfer at desk scale") {
    TestFunction f;
    EnsembleSpec spec;
    spec.N = 200;
    const double l1 = f.laplacian_l1();
    std::vector<double> discrepancies;
    for (int seed = 0; seed < 3; ++seed) {
        spec.seed = 100 + seed;
        const GirkoResult res = girko_functional(sample_matrix(spec), f, BulkPoint{0.3, 0.4}, 0.3);
        discrepancies.push_back(res.discrepancy);
        std::cout << "[diag] girko seed=" << seed << " direct=" << res.direct << " integral=" << res.integral
                  << " disc/l1=" << res.discrepancy / l1 << "\n";
    }
    CHECK(stats::percentile(discrepancies, 0.5) < 0.2 * l1);
}

TEST_CASE("girko quadrature is stable under refinement") {
    TestFunction f;
    EnsembleSpec spec;
    spec.N = 150;
    spec.seed = 9;
    const MatrixXd x = sample_matrix(spec);
    const BulkPoint z{0.3, 0.4};
    const GirkoResult coarse = girko_functional(x, f, z, 0.3, 40, 24, 32);
    const GirkoResult fine = girko_functional(x, f, z, 0.3, 80, 48, 64);
    CHECK(std::abs(coarse.integral - fine.integral) < 0.01 * f.laplacian_l1());
}

TEST_CASE("comparison of a law with itself vanishes exactly") {
    EnsembleSpec law;
    law.family = Family::Gaussian;
    law.N = 60;
    const auto res = comparison_experiment_specs(law, 0.1, law, 0.1, {BulkPoint{0.3, 0.4}}, {1.0 / 60}, 25, 7, 2);
    CHECK(res.difference == 0.0);
}

TEST_CASE("matched pair resolvent comparison is within noise") {
    EnsembleSpec target;
    target.family = Family::Uniform;
    target.N = 150;
    const MatchedPair pair = construct_matched_pair(target, 0.1, 0.1);
    const auto res = comparison_experiment(pair, {BulkPoint{0.3, 0.4}}, {1.0 / 150}, 120, 11, 2);
    std::cout << "[diag] matched diff=" << res.difference << " se=" << res.combinedSe << "\n";
    CHECK(std::abs(res.difference) < 4.0 * res.combinedSe);
}

TEST_CASE("mismatched second moments are detected") {
    EnsembleSpec law;
    law.family = Family::Gaussian;
    law.N = 200;
    EnsembleSpec inflated = law;
    inflated.variance = 1.5 / law.N;
    const auto res =
        comparison_experiment_specs(law, 0.0, inflated, 0.0, {BulkPoint{0.3, 0.4}}, {1.0 / 200}, 600, 13, 2);
    std::cout << "[diag] mismatch diff=" << res.difference << " se=" << res.combinedSe << "\n";
    CHECK(std::abs(res.difference) > 5.0 * res.combinedSe);
}
