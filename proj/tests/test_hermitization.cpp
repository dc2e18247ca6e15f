#include <doctest.h>

#include <cmath>
#include <iostream>

#include "rmtlab/ensembles.hpp"
#include "rmtlab/hermitization.hpp"
#include "rmtlab/lapack.hpp"

using namespace rmtlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

MatrixXd gaussian(int n, std::uint64_t seed) {
    EnsembleSpec spec;
    spec.N = n;
    spec.seed = seed;
    return sample_matrix(spec);
}

}  // namespace

TEST_CASE("resolvent closed form at A=0, z=0") {
    const MatrixXd a = MatrixXd::Zero(6, 6);
    const BulkPoint z{0.0, 0.0};
    const double eta = 0.5;
    const ResolventBundle2 b = resolvent_blocks(a, z, eta);
    // G = i eta / eta^2 on the diagonal blocks: <G_11> = i/eta = 2i
    CHECK(std::abs(b.blockTraces(0, 0) - Complex(0, 2)) < 1e-12);
    CHECK(std::abs(b.blockTraces(1, 1) - Complex(0, 2)) < 1e-12);
    CHECK(std::abs(b.blockTraces(0, 1)) < 1e-12);
    CHECK(b.hTrace == doctest::Approx(1.0 / (eta * eta)).epsilon(1e-12));
}

TEST_CASE("resolvent defining residual and assembled block formula") {
    const MatrixXd a = gaussian(50, 4);
    const BulkPoint z{0.3, 0.4};
    const double eta = 0.7;
    const ResolventBundle2 b = resolvent_blocks(a, z, eta);
    CHECK(b.residual < 1e-10);

    // direct inversion cross-check of the assembled block formula
    const int n = 50;
    MatrixXcd herm = MatrixXcd::Zero(2 * n, 2 * n);
    const MatrixXcd amz = a.cast<Complex>() - z.z() * MatrixXcd::Identity(n, n);
    herm.topRightCorner(n, n) = amz;
    herm.bottomLeftCorner(n, n) = amz.adjoint();
    const MatrixXcd g = (herm - Complex(0, eta) * MatrixXcd::Identity(2 * n, 2 * n)).inverse();
    HermitizationZ hz(a, z);
    const MatrixXcd g11 = Complex(0, eta) * hz.h_dense(eta);
    const MatrixXcd g12 = hz.h_amz_dense(eta);
    CHECK((g.topLeftCorner(n, n) - g11).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((g.topRightCorner(n, n) - g12).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(b.blockTraces(0, 0) - g.topLeftCorner(n, n).trace() / static_cast<double>(n)) < 1e-12);
    CHECK_THROWS_AS(resolvent_blocks(a, z, -1.0), DomainError);
}

TEST_CASE("push-through identity (A-z) Ht_z = H_z (A-z)") {
    const MatrixXd a = gaussian(40, 6);
    const BulkPoint z{0.2, 0.5};
    HermitizationZ hz(a, z);
    const double eta = 0.3;
    const MatrixXcd amz = a.cast<Complex>() - z.z() * MatrixXcd::Identity(40, 40);
    const MatrixXcd lhs = amz * hz.htilde_dense(eta);
    const MatrixXcd rhs = hz.h_dense(eta) * amz;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eta_zt closed form at A=0, z=0 and monotonicity") {
    const MatrixXd a = MatrixXd::Zero(12, 12);
    const BulkPoint z{0.0, 0.0};
    const double t = 0.3;
    // t <H(eta)> = t / eta^2 = 1 at eta = sqrt(t)
    CHECK(solve_eta_zt(a, z, t) == doctest::Approx(std::sqrt(t)).epsilon(1e-10));

    const MatrixXd g = gaussian(200, 8);
    const BulkPoint zb{0.3, 0.4};
    CHECK(solve_eta_zt(g, zb, 0.05) < solve_eta_zt(g, zb, 0.1));
}

TEST_CASE("eta_zt leading order for a large gaussian matrix") {
    const MatrixXd a = gaussian(1000, 10);
    const BulkPoint z{0.3, 0.4};
    const double t = 0.05;
    const double eta = solve_eta_zt(a, z, t);
    const double predicted = t * std::sqrt(1 - 0.3 * 0.3 - 0.4 * 0.4);
    CHECK(std::abs(eta - predicted) < 0.1 * predicted);
    CHECK(eta / t > 0.1);
    CHECK(eta / t < 10.0);
}

TEST_CASE("trace constants: defining equations and sigma identity") {
    const MatrixXd a = gaussian(300, 12);
    const BulkPoint z{0.3, 0.4};
    const double t = 0.1;
    const TraceConstants c = compute_constants(a, z, t);
    HermitizationZ hz(a, z);
    CHECK(std::abs(t * hz.h_trace(c.etaZT) - 1.0) < 1e-10);
    CHECK(std::abs(c.g - c.etaZT / t) < 1e-12);
    CHECK(c.sigma == doctest::Approx(c.alpha + std::norm(c.beta) / c.gamma).epsilon(1e-14));

    // dense re-derivation of alpha, beta, gamma, delta, upsilon
    const int n = 300;
    const double eta = c.etaZT;
    const MatrixXcd amz = a.cast<Complex>() - z.z() * MatrixXcd::Identity(n, n);
    const MatrixXcd h = hz.h_dense(eta);
    const MatrixXcd ht = hz.htilde_dense(eta);
    CHECK(std::abs(c.alpha - eta * eta * (h * ht).trace().real() / n) < 1e-10);
    CHECK(std::abs(c.beta - eta * (h * h * amz).trace() / static_cast<double>(n)) < 1e-10);
    CHECK(std::abs(c.gamma - eta * eta * (h * h).trace().real() / n) < 1e-10);
    const MatrixXcd hamz = h * amz;
    CHECK(std::abs(c.delta - (hamz * hamz).trace() / static_cast<double>(n)) < 1e-10);
    CHECK(std::abs(c.tau - (c.gamma * c.delta - c.beta * c.beta) / (c.gamma * c.sigma)) < 1e-12);

    const MatrixXcd htb = ht.conjugate();
    const MatrixXcd hb = h.conjugate();
    const Complex t1 = (amz.adjoint() * ht * htb * amz).trace();
    const Complex t2 = (amz * h * hb * amz.conjugate()).trace();
    const Complex ups = kPi * (Complex(n / t) - t1) * (Complex(n / t) - t2);
    CHECK(c.upsilon == doctest::Approx(ups.real()).epsilon(1e-8));
}

TEST_CASE("G^2 off-diagonal trace equals 2 i beta") {
    const MatrixXd a = gaussian(60, 14);
    const BulkPoint z{0.3, 0.4};
    const double t = 0.2;
    const double eta = solve_eta_zt(a, z, t);
    const ResolventBundle2 b = resolvent_blocks(a, z, eta);

    const int n = 60;
    MatrixXcd herm = MatrixXcd::Zero(2 * n, 2 * n);
    const MatrixXcd amz = a.cast<Complex>() - z.z() * MatrixXcd::Identity(n, n);
    herm.topRightCorner(n, n) = amz;
    herm.bottomLeftCorner(n, n) = amz.adjoint();
    const MatrixXcd g = (herm - Complex(0, eta) * MatrixXcd::Identity(2 * n, 2 * n)).inverse();
    const MatrixXcd g2 = g * g;
    const Complex lhs = g2.topRightCorner(n, n).trace() / static_cast<double>(n);
    CHECK(std::abs(lhs - b.g2OffDiag12) < 1e-11);
    // <[G^2]_21> = 2 i conj(beta); equivalently <[G^2]_12> = -conj(<[G^2]_21>)
    const Complex lhs21 = g2.bottomLeftCorner(n, n).trace() / static_cast<double>(n);
    CHECK(std::abs(lhs21 - Complex(0, 2) * std::conj(b.g2OffDiag12 / Complex(0, 2))) < 1e-11);
    CHECK(std::abs(b.g2OffDiag12 + std::conj(lhs21)) < 1e-11);
}

TEST_CASE("sigma is near one for gaussian entries at small t") {
    const MatrixXd a = gaussian(1000, 16);
    const BulkPoint z{0.3, 0.4};
    for (double t : {0.05, 0.1}) {
        const TraceConstants c = compute_constants(a, z, t);
        std::cout << "[diag] sigma(t=" << t << ") = " << c.sigma << " (1/(1+t) = " << 1 / (1 + t) << ")\n";
        CHECK(std::abs(c.sigma - 1.0) < 0.12);
    }
}

TEST_CASE("lambda resolvent equals the closed form at A=0") {
    const int n = 8;
    const MatrixXd a = MatrixXd::Zero(n, n);
    const ShiftParams p{0.3, 0.4, 0.6};
    const double eta = 0.5;
    const LambdaResolvent lr(a, p, eta);
    const Matrix2d lam = p.lambda();
    const Matrix2d small = (lam.transpose() * lam + eta * eta * Matrix2d::Identity()).inverse();
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) CHECK(std::abs(lr.tr_htilde(k, l) - n * small(k, l)) < 1e-12);
}

TEST_CASE("lambda resolvent block traces match a dense 4N inversion") {
    const int n = 12;
    const MatrixXd a = gaussian(n, 18);
    const ShiftParams p{0.3, 0.4, 0.7};
    const double eta = 0.45;
    const LambdaResolvent lr(a, p, eta);

    const Matrix2d lam = p.lambda();
    MatrixXd ap(2 * n, 2 * n);
    ap.topLeftCorner(n, n) = a - lam(0, 0) * MatrixXd::Identity(n, n);
    ap.topRightCorner(n, n) = -lam(0, 1) * MatrixXd::Identity(n, n);
    ap.bottomLeftCorner(n, n) = -lam(1, 0) * MatrixXd::Identity(n, n);
    ap.bottomRightCorner(n, n) = a - lam(1, 1) * MatrixXd::Identity(n, n);
    MatrixXcd big = MatrixXcd::Zero(4 * n, 4 * n);
    big.topRightCorner(2 * n, 2 * n) = ap.cast<Complex>();
    big.bottomLeftCorner(2 * n, 2 * n) = ap.transpose().cast<Complex>();
    big -= Complex(0, eta) * MatrixXcd::Identity(4 * n, 4 * n);
    const MatrixXcd g = big.inverse();
    const Eigen::Matrix4cd traces = lr.block_traces();
    for (int al = 0; al < 4; ++al)
        for (int be = 0; be < 4; ++be) {
            const Complex direct = g.block(al * n, be * n, n, n).trace() / static_cast<double>(n);
            CHECK(std::abs(traces(al, be) - direct) < 1e-11);
        }
}

TEST_CASE("rotation identity at theta = pi/4") {
    const int n = 60;
    const MatrixXd a = gaussian(n, 20);
    const ShiftParams p{0.3, 0.4, kPi / 4};
    const double eta = 0.4;
    const LambdaResolvent lr(a, p, eta);
    const Eigen::Matrix4cd direct = lr.block_traces();
    const Eigen::Matrix4cd rotated = rotation_identity_traces(a, p, eta);
    CHECK((direct - rotated).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("three-vector vanishes at theta = pi/4 and eta_zt") {
    const int n = 150;
    const MatrixXd a = gaussian(n, 22);
    const BulkPoint z{0.3, 0.4};
    const double t = 0.1;
    const double eta = solve_eta_zt(a, z, t);
    const Vector3d v = three_vector(a, ShiftParams{z.a, z.b, kPi / 4}, eta, t);
    CHECK(v.cwiseAbs().maxCoeff() < 1e-8 * (n / t));

    // off pi/4 the vector grows linearly in the offset
    const double s1 = 0.01, s2 = 0.005;
    const Vector3d v1 = three_vector(a, ShiftParams{z.a, z.b, kPi / 4 + s1}, eta, t);
    const Vector3d v2 = three_vector(a, ShiftParams{z.a, z.b, kPi / 4 + s2}, eta, t);
    CHECK(v1.norm() > 10 * v.norm());
    CHECK(v1.norm() / v2.norm() == doctest::Approx(s1 / s2).epsilon(0.15));
}

TEST_CASE("three-vector closed form at A=0") {
    const int n = 10;
    const MatrixXd a = MatrixXd::Zero(n, n);
    const ShiftParams p{0.2, 0.6, 0.5};
    const double eta = 0.7, t = 0.3;
    const Matrix2d lam = p.lambda();
    const Matrix2d small = (lam.transpose() * lam + eta * eta * Matrix2d::Identity()).inverse();
    const Vector3d expected(n / t - n * small(0, 0), -2 * n * small(0, 1), n / t - n * small(1, 1));
    const Vector3d v = three_vector(a, p, eta, t);
    CHECK((v - expected).cwiseAbs().maxCoeff() < 1e-12 * (n / t));
}

TEST_CASE("Q matrix structure and spectrum at theta = pi/4") {
    const int n = 100;
    const MatrixXd a = gaussian(n, 24);
    const BulkPoint z{0.3, 0.4};
    const double eta = 0.35;
    const Matrix3d q = q_matrix(a, ShiftParams{z.a, z.b, kPi / 4}, eta);
    CHECK((q - q.transpose()).cwiseAbs().maxCoeff() < 1e-12 * q.cwiseAbs().maxCoeff());

    HermitizationZ hz(a, z);
    const double s = hz.h2_trace(eta);  // <Ht_z^2> equals <H_z^2> spectrally
    const double pp = hz.htilde_htildebar_trace(eta);
    Matrix3d expected;
    expected << s + pp, 0, s - pp, 0, pp, 0, s - pp, 0, s + pp;
    expected *= n;
    CHECK((q - expected).cwiseAbs().maxCoeff() < 1e-10 * expected.cwiseAbs().maxCoeff());

    Eigen::SelfAdjointEigenSolver<Matrix3d> es(q);
    std::vector<double> eigs{es.eigenvalues()[0], es.eigenvalues()[1], es.eigenvalues()[2]};
    std::sort(eigs.begin(), eigs.end());
    std::vector<double> predicted{n * pp, 2 * n * pp, 2 * n * s};
    std::sort(predicted.begin(), predicted.end());
    for (int i = 0; i < 3; ++i) CHECK(std::abs(eigs[i] - predicted[i]) < 1e-9 * std::abs(predicted[i]));

    // floor of order N / eta^2
    CHECK(eigs[0] > 0.05 * n / (eta * eta));
}

TEST_CASE("g matrix assembly and degeneracies") {
    const int n = 40;
    const MatrixXd a = gaussian(n, 26);
    const BulkPoint z{0.3, 0.4};
    const double t = 0.2;
    const Matrix4cd g = g_matrix(a, z, t);

    // entry (1,1) re-derived from dense blocks
    HermitizationZ hz(a, z);
    const double eta = hz.solve_eta(t);
    const LambdaResolvent lr(a, ShiftParams{z.a, z.b, kPi / 4}, eta);
    const MatrixXcd hzDense = hz.h_dense(eta);
    Complex direct(0, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) direct += lr.htilde_block(0, 0)(i, j) * hzDense(j, i);
    direct *= Complex(0, eta) * (t / n);
    CHECK(std::abs(g(0, 0) - direct) < 1e-12);

    // A = 0, z = 0: the off-diagonal 2x2 sub-blocks vanish with the factor A - z
    const MatrixXd zero = MatrixXd::Zero(n, n);
    const Matrix4cd g0 = g_matrix(zero, BulkPoint{0.0, 0.0}, 0.3);
    CHECK(g0.block<2, 2>(0, 2).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(g0.block<2, 2>(2, 0).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("interlacing sanity for deleted rows and columns") {
    const int n = 80;
    const MatrixXd a = gaussian(n, 28);
    const BulkPoint z{0.3, 0.4};
    const double eta = 0.4;
    HermitizationZ full(a, z);
    HermitizationZ minor(a.topLeftCorner(n - 2, n - 2).eval(), BulkPoint{z.a, z.b});
    const double trFull = full.h_trace(eta) * n;
    const double trMinor = minor.h_trace(eta) * (n - 2);
    CHECK(std::abs(trFull - trMinor) <= 10.0 / (eta * eta));
}

TEST_CASE("degenerate shift parameters are rejected") {
    const MatrixXd a = gaussian(10, 30);
    CHECK_THROWS_AS(LambdaResolvent(a, ShiftParams{0.3, 0.4, 0.0}, 0.5), DomainError);
    CHECK_THROWS_AS(LambdaResolvent(a, ShiftParams{0.3, 0.4, kPi / 2}, 0.5), DomainError);
}

TEST_CASE("g matrix determinant stays above the eta power floor") {
    const int n = 500;
    const MatrixXd a = gaussian(n, 31);
    const BulkPoint z{0.3, 0.4};
    const double t = 0.1;
    const double eta = solve_eta_zt(a, z, t);
    const Matrix4cd g = g_matrix(a, z, t);
    const double det = std::abs(g.determinant());
    std::cout << "[diag] |det G| = " << det << " at eta_zt = " << eta << " (eta^8 = " << std::pow(eta, 8)
              << ")\n";
    CHECK(det > std::pow(eta, 8.0));
}
