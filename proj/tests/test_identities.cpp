#include <doctest.h>

#include <cmath>
#include <iostream>

#include "rmtlab/ensembles.hpp"
#include "rmtlab/identities.hpp"
#include "rmtlab/lapack.hpp"

using namespace rmtlab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("phi map block-triangular spectrum and eigenvectors") {
    const int n = 7;
    PhiPoint p = random_phi_point(n, 0.62, 99);
    p.shift.a = 0.3;
    p.shift.b = 0.4;
    const MatrixXd m = phi_map(p);

    // spectrum = {a +/- ib} union spec(M1)
    const VectorXcd ev = lapack::eig_real(m);
    auto contains = [&](Complex target, double tol) {
        for (int i = 0; i < ev.size(); ++i)
            if (std::abs(ev[i] - target) < tol) return true;
        return false;
    };
    CHECK(contains(Complex(0.3, 0.4), 1e-8));
    CHECK(contains(Complex(0.3, -0.4), 1e-8));
    const VectorXcd evM1 = lapack::eig_real(p.m1);
    for (int i = 0; i < evM1.size(); ++i) CHECK(contains(evM1[i], 1e-8));

    // sin(theta) v1 + i cos(theta) v2 is the eigenvector for a + ib
    const VectorXcd vec =
        std::sin(p.shift.theta) * p.pair.v1.cast<Complex>() + Complex(0, 1) * std::cos(p.shift.theta) * p.pair.v2.cast<Complex>();
    const VectorXcd image = m.cast<Complex>() * vec;
    CHECK((image - Complex(0.3, 0.4) * vec).cwiseAbs().maxCoeff() < 1e-10);

    // first two columns of the completion equal v1, v2 exactly
    const MatrixXd r = householder_completion(p.pair);
    CHECK((r.col(0) - p.pair.v1).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((r.col(1) - p.pair.v2).cwiseAbs().maxCoeff() < 1e-14);

    // degenerate pair is rejected
    PhiPoint bad = p;
    bad.pair.v2 = bad.pair.v1;
    CHECK_THROWS_AS(phi_map(bad), DomainError);
}

TEST_CASE("phi map spectrum is invariant under orthogonal conjugation") {
    PhiPoint p = random_phi_point(6, 0.5, 123);
    const MatrixXd m = phi_map(p);
    const MatrixXd q = sample_orthogonal(6, 321);
    auto sorted = [](VectorXcd v) {
        std::vector<Complex> out(v.data(), v.data() + v.size());
        std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
            return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
        });
        return out;
    };
    const auto e1 = sorted(lapack::eig_real(m));
    const auto e2 = sorted(lapack::eig_real(q.transpose() * m * q));
    for (std::size_t i = 0; i < e1.size(); ++i) CHECK(std::abs(e1[i] - e2[i]) < 1e-8);
}

TEST_CASE("jacobian chart self test") {
    const PhiPoint p = random_phi_point(5, 0.7, 7);
    CHECK(jacobian_chart_selftest(p) < 1e-12);
}

TEST_CASE("jacobian finite difference matches the closed form") {
    for (const int n : {3, 4}) {
        for (int seed = 0; seed < 3; ++seed) {
            const PhiPoint p = random_phi_point(n, 0.5, 1000 + seed);
            const IdentityReport rep = verify_jacobian(p);
            INFO("N=", n, " seed=", seed, " rel=", rep.relError);
            CHECK(rep.relError < 1e-4);
            CHECK(rep.pass);
        }
    }
}

TEST_CASE("jacobian degenerates at theta = pi/4") {
    const PhiPoint p = random_phi_point(4, kPi / 4, 55);
    const IdentityReport rep = verify_jacobian(p);
    CHECK(std::abs(rep.rhs) < 1e-12);  // cos(2 theta) vanishes at pi/4
    CHECK(std::abs(rep.lhs) < 1e-8);
    CHECK(rep.pass);
}

TEST_CASE("jacobian theta-ratio cancels the chart constants") {
    PhiPoint p1 = random_phi_point(4, 0.5, 77);
    PhiPoint p2 = p1;
    p2.shift.theta = 0.65;
    const IdentityReport r1 = verify_jacobian(p1);
    const IdentityReport r2 = verify_jacobian(p2);
    auto formula = [](double theta) {
        return std::abs(std::cos(2 * theta)) / std::pow(std::sin(2 * theta), 2);
    };
    const double fdRatio = std::abs(r1.lhs) / std::abs(r2.lhs);
    const double closedRatio = formula(0.5) / formula(0.65);
    CHECK(fdRatio == doctest::Approx(closedRatio).epsilon(1e-3));
}

TEST_CASE("pfaffian identity matrix squares to its determinant") {
    rng::Philox gen(31);
    const MatrixXd a2 = gaussian_matrix(1, 1, gen);
    for (int s = 0; s < 5; ++s) {
        MatrixXcd x = MatrixXcd::Zero(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                const Complex v(0.3 * gen.normal(), 0.3 * gen.normal());
                x(i, j) = v;
                x(j, i) = -v;
            }
        const MatrixXcd m = pfaffian_identity_matrix(x, a2, Complex(0.3, 0.4), Complex(-0.1, 0.2));
        CHECK((m + m.transpose()).cwiseAbs().maxCoeff() < 1e-14);
        const Complex pf = pfaffian_dense(m);
        const Complex det = m.determinant();
        CHECK(std::abs(pf * pf - det) < 1e-9 * std::max(1.0, std::abs(det)));
    }
}

TEST_CASE("pfaffian identity at N=5") {
    rng::Philox gen(41);
    MatrixXd a2(1, 1);
    a2 << 0.5;
    const IdentityReport rep =
        verify_pfaffian_identity(5, 1.0, Complex(0.3, 0.4), Complex(-0.1, 0.2), a2, 200000, 20250);
    std::cout << "[diag] pfaffian N=5: lhs=" << rep.lhs.real() << " rhs=" << rep.rhs.real()
              << " mcse=" << rep.mcStderr << "\n";
    CHECK(rep.mcStderr < 0.05 * std::abs(rep.rhs));
    CHECK(rep.pass);
    CHECK(rep.budgetOk);
}

TEST_CASE("pfaffian identity concentrates as t -> 0") {
    MatrixXd a2(1, 1);
    a2 << 0.5;
    const IdentityReport rep =
        verify_pfaffian_identity(5, 0.05, Complex(0.3, 0.4), Complex(-0.1, 0.2), a2, 100000, 4);
    // both sides approach |det(A2 - l1)|^2 |det(A2 - l2)|^2 times matching
    // prefactors; the ratio stays 1 within MC error
    CHECK(std::abs(rep.lhs - rep.rhs) <= 3 * rep.mcStderr + 1e-10 * std::abs(rep.rhs));
    const double limit = std::norm(Complex(0.5 - 0.3, -0.4)) * std::norm(Complex(0.5 + 0.1, -0.2));
    const double lhsPrefactor = std::pow(5 / (2 * kPi * 0.05), 17.0 / 2.0);
    // remove the prefactor and the gaussian mass of the B integral
    const double bare = rep.lhs.real() / lhsPrefactor / std::sqrt(2 * kPi * 0.05 / 5);
    CHECK(bare == doctest::Approx(limit).epsilon(0.05));
}

TEST_CASE("pfaffian identity rejects bad arguments") {
    MatrixXd a2(1, 1);
    a2 << 0.5;
    CHECK_THROWS_AS(verify_pfaffian_identity(7, 1.0, Complex(0, 1), Complex(0, -1), a2, 10, 1), DimensionError);
    CHECK_THROWS_AS(verify_pfaffian_identity(5, 1.0, Complex(1, 0), Complex(0, 1), a2, 10, 1), DomainError);
    CHECK_THROWS_AS(verify_pfaffian_identity(5, 3.0, Complex(0, 1), Complex(0, -1), a2, 10, 1), DomainError);
}

TEST_CASE("stiefel volume and the C=0 self test") {
    CHECK(stiefel2_volume(3) == doctest::Approx(8 * kPi * kPi).epsilon(1e-12));
    // with A = 0 and Lambda = 0 the Haar integral is exactly Vol(V^2(R^N)),
    // so the quadrature side must reproduce the volume
    const int n = 5;
    const MatrixXd zero = MatrixXd::Zero(n, n);
    const ShiftParams p{0.0, 0.0, kPi / 4};
    const double rhs = stiefel_gaussian_rhs(zero, p, 1.0, 1.0, 64, 14.0);
    const double vol = stiefel2_volume(n);
    std::cout << "[diag] stiefel C=0: rhs=" << rhs << " vol=" << vol << " ratio=" << rhs / vol << "\n";
    CHECK(rhs == doctest::Approx(vol).epsilon(0.01));
}

TEST_CASE("stiefel gaussian identity at N=6") {
    const ShiftParams p{0.3, 0.4, 0.7};
    const IdentityReport rep = verify_stiefel_gaussian(6, p, 1.0, 200000, 31);
    std::cout << "[diag] stiefel N=6: lhs=" << rep.lhs.real() << " rhs=" << rep.rhs.real()
              << " ratio=" << rep.lhs.real() / rep.rhs.real() << " mcse=" << rep.mcStderr << "\n";
    CHECK(rep.pass);
}

TEST_CASE("stiefel integral is symmetric under theta -> pi/2 - theta") {
    const double t = 1.0;
    const IdentityReport r1 = verify_stiefel_gaussian(5, ShiftParams{0.3, 0.4, 0.6}, t, 150000, 77);
    const IdentityReport r2 = verify_stiefel_gaussian(5, ShiftParams{0.3, 0.4, kPi / 2 - 0.6}, t, 150000, 77);
    // the substitution (v1, v2) -> (v2, -v1) exchanges the two shifts, so the
    // Haar averages agree within combined MC error
    const double combined = std::hypot(r1.mcStderr, r2.mcStderr);
    CHECK(std::abs(r1.lhs.real() - r2.lhs.real()) < 3 * combined + 0.02 * std::abs(r1.lhs.real()));
}

TEST_CASE("determinant ratio identity") {
    EnsembleSpec spec;
    spec.N = 20;
    for (int seed = 0; seed < 5; ++seed) {
        spec.seed = 9000 + seed;
        const MatrixXd a = sample_matrix(spec);
        const IdentityReport rep = verify_det_ratio(a, ShiftParams{0.3, 0.4, 0.6}, 0.5);
        CHECK(rep.relError < 1e-8);
        CHECK(rep.pass);
        // RHS <= 1: the log is nonpositive
        CHECK(rep.rhs.real() <= 1e-12);
    }
    // theta = pi/4 collapses both sides
    spec.seed = 1;
    const MatrixXd a = sample_matrix(spec);
    const IdentityReport rep = verify_det_ratio(a, ShiftParams{0.3, 0.4, kPi / 4}, 0.5);
    CHECK(std::abs(rep.rhs) < 1e-10);
    CHECK(std::abs(rep.lhs) < 1e-8);
}

TEST_CASE("hciz ratio is constant and equal to one") {
    const std::vector<std::pair<Complex, Complex>> pairs{
        {Complex(0.3, 0.4), Complex(-0.1, 0.2)},
        {Complex(0.5, -0.2), Complex(0.1, 0.6)},
        {Complex(-0.4, 0.1), Complex(0.2, 0.3)},
    };
    const HcizReport rep = verify_hciz_ratio(pairs, 200000, 13);
    std::cout << "[diag] hciz maxDev=" << rep.maxDeviation << " maxPairDiff=" << rep.maxPairDiff
              << " se=" << rep.summary.mcStderr << "\n";
    for (std::size_t i = 0; i < rep.ratios.size(); ++i)
        CHECK(std::abs(rep.ratios[i] - Complex(1, 0)) < 3.5 * rep.stderrs[i]);
    for (std::size_t i = 0; i < rep.ratios.size(); ++i)
        for (std::size_t j = i + 1; j < rep.ratios.size(); ++j)
            CHECK(std::abs(rep.ratios[i] - rep.ratios[j]) < 3.5 * std::hypot(rep.stderrs[i], rep.stderrs[j]));

    // conjugation symmetry
    const HcizReport conj1 = verify_hciz_ratio({{Complex(0.3, 0.4), Complex(-0.1, 0.2)}}, 100000, 14);
    const HcizReport conj2 = verify_hciz_ratio({{Complex(0.3, -0.4), Complex(-0.1, -0.2)}}, 100000, 15);
    CHECK(std::abs(conj1.ratios[0] - conj2.ratios[0]) < 3.5 * std::hypot(conj1.stderrs[0], conj2.stderrs[0]));

    CHECK_THROWS_AS(verify_hciz_ratio({{Complex(0.1, 0.1), Complex(0.1, 0.1)}}, 10, 1), DomainError);
}

TEST_CASE("identity reports are reproducible per seed") {
    MatrixXd a2(1, 1);
    a2 << 0.5;
    const IdentityReport r1 = verify_pfaffian_identity(5, 1.0, Complex(0.3, 0.4), Complex(-0.1, 0.2), a2, 5000, 42);
    const IdentityReport r2 = verify_pfaffian_identity(5, 1.0, Complex(0.3, 0.4), Complex(-0.1, 0.2), a2, 5000, 42);
    CHECK(r1.lhs == r2.lhs);
    CHECK(r1.rhs == r2.rhs);
    CHECK(r1.mcStderr == r2.mcStderr);
}

TEST_CASE("pfaffian identity stability sweep over t and budget") {
    MatrixXd a2(1, 1);
    a2 << 0.5;
    for (double t : {1.0, 0.5})
        for (long samples : {50000L, 100000L}) {
            const IdentityReport rep =
                verify_pfaffian_identity(5, t, Complex(0.3, 0.4), Complex(-0.1, 0.2), a2, samples, 97);
            // never flips into a > 5 sigma failure as the budget or t moves
            CHECK(std::abs(rep.lhs - rep.rhs) <= 5.0 * rep.mcStderr);
        }
}
