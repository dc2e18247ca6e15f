#include "rmtlab/identities.hpp"

#include <cmath>
#include <sstream>

#include "rmtlab/lapack.hpp"
#include "rmtlab/rng.hpp"
#include "rmtlab/stats.hpp"

namespace rmtlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

MatrixXd householder(const VectorXd& u, int n) {
    if (u.norm() < 1e-14) return MatrixXd::Identity(n, n);
    return MatrixXd::Identity(n, n) - (2.0 / u.squaredNorm()) * (u * u.transpose());
}

Complex logdet_complex(const MatrixXcd& m) {
    Eigen::PartialPivLU<MatrixXcd> lu(m);
    Complex acc(0, 0);
    const auto& lum = lu.matrixLU();
    for (int i = 0; i < m.rows(); ++i) acc += std::log(lum(i, i));
    // determinant sign of the permutation
    if (lu.permutationP().determinant() < 0) acc += Complex(0, kPi);
    return acc;
}

}  // namespace

void IdentityReport::finalize(double tolAbs, double tolRel) {
    absError = std::abs(lhs - rhs);
    relError = std::abs(rhs) > 0 ? absError / std::abs(rhs) : absError;
    pass = absError <= std::max(tolAbs, 3.0 * mcStderr + tolRel * std::abs(rhs));
}

void PhiPoint::validate() const {
    if (n() < 3) throw DimensionError("PhiPoint: N >= 3 required");
    if (std::abs(pair.v1.dot(pair.v2)) > 1e-10 || std::abs(pair.v1.norm() - 1) > 1e-10 ||
        std::abs(pair.v2.norm() - 1) > 1e-10)
        throw DomainError("PhiPoint: (v1, v2) is not a Stiefel pair");
    if (w.rows() != n() - 2 || w.cols() != 2) throw DimensionError("PhiPoint: W must be (N-2) x 2");
    if (m1.rows() != n() - 2 || m1.cols() != n() - 2) throw DimensionError("PhiPoint: M1 must be (N-2) x (N-2)");
}

MatrixXd householder_completion(const StiefelPair& pair) {
    const int n = pair.dim();
    const MatrixXd h1 = householder(pair.v1 - VectorXd::Unit(n, 0), n);
    const VectorXd w2 = h1 * pair.v2;
    const MatrixXd h2 = householder(w2 - VectorXd::Unit(n, 1), n);
    return h1 * h2;
}

MatrixXd phi_map(const PhiPoint& p) {
    p.validate();
    const int n = p.n();
    MatrixXd t = MatrixXd::Zero(n, n);
    t.topLeftCorner(2, 2) = p.shift.lambda();
    t.topRightCorner(2, n - 2) = p.w.transpose();
    t.bottomRightCorner(n - 2, n - 2) = p.m1;
    const MatrixXd r = householder_completion(p.pair);
    return r * t * r.transpose();
}

PhiPoint random_phi_point(int n, double theta, std::uint64_t seed) {
    rng::Philox gen(seed);
    PhiPoint p;
    p.shift.a = 0.5 * gen.normal();
    p.shift.b = 0.4 + 0.3 * gen.uniform();
    p.shift.theta = theta;
    p.pair = sample_stiefel2(n, gen);
    p.w = gaussian_matrix(n - 2, 2, gen);
    p.m1 = gaussian_matrix(n - 2, n - 2, gen);
    return p;
}

double jacobian_chart_selftest(const PhiPoint& p) {
    const int n = p.n();
    const MatrixXd r = householder_completion(p.pair);
    double worst = 0.0;
    // columns of R: v1, v2, r_1..r_{N-2}
    worst = std::max(worst, (r.transpose() * r - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());
    worst = std::max(worst, (r.col(0) - p.pair.v1).cwiseAbs().maxCoeff());
    worst = std::max(worst, (r.col(1) - p.pair.v2).cwiseAbs().maxCoeff());
    // tangent frame: rotation vector (v2, -v1) and the lifted R~ columns;
    // all must satisfy the Stiefel constraints to first order.
    for (int k = 2; k < n; ++k) {
        worst = std::max(worst, std::abs(p.pair.v1.dot(r.col(k))));
        worst = std::max(worst, std::abs(p.pair.v2.dot(r.col(k))));
    }
    return worst;
}

namespace {

struct Chart {
    PhiPoint base;
    MatrixXd rtilde;  // N x (N-2) completion columns at the center

    PhiPoint displaced(int direction, double h) const;
    int dims() const {
        const int n = base.n();
        return 3 + (2 * n - 3) + 2 * (n - 2) + (n - 2) * (n - 2);
    }
};

PhiPoint Chart::displaced(int direction, double h) const {
    const int n = base.n();
    PhiPoint p = base;
    int d = direction;
    if (d == 0) {
        p.shift.a += h;
        return p;
    }
    --d;
    if (d == 0) {
        p.shift.b += h;
        return p;
    }
    --d;
    if (d == 0) {
        p.shift.theta += h;
        return p;
    }
    --d;
    VectorXd dv1 = VectorXd::Zero(n), dv2 = VectorXd::Zero(n);
    bool moved = false;
    if (d == 0) {  // f-direction, dual to df = v2^T dv1
        dv1 = base.pair.v2;
        dv2 = -base.pair.v1;
        moved = true;
    }
    --d;
    if (!moved && d < n - 2) {  // H_{.,1} directions
        dv1 = rtilde.col(d);
        moved = true;
    }
    if (!moved) d -= n - 2;
    if (!moved && d < n - 2) {  // H_{.,2} directions
        dv2 = rtilde.col(d);
        moved = true;
    }
    if (moved) {
        // first-order retraction: displace then re-orthonormalize
        VectorXd v1 = base.pair.v1 + h * dv1;
        v1 /= v1.norm();
        VectorXd v2 = base.pair.v2 + h * dv2;
        v2 -= v2.dot(v1) * v1;
        v2 /= v2.norm();
        p.pair = StiefelPair{v1, v2};
        return p;
    }
    d -= n - 2;
    if (d < 2 * (n - 2)) {
        p.w((d % (n - 2)), d / (n - 2)) += h;
        return p;
    }
    d -= 2 * (n - 2);
    p.m1(d % (n - 2), d / (n - 2)) += h;
    return p;
}

double fd_jacobian_determinant(const Chart& chart, double h) {
    const int n = chart.base.n();
    const int dims = chart.dims();
    MatrixXd jac(n * n, dims);
    for (int d = 0; d < dims; ++d) {
        const MatrixXd plus = phi_map(chart.displaced(d, h));
        const MatrixXd minus = phi_map(chart.displaced(d, -h));
        const MatrixXd diff = (plus - minus) / (2 * h);
        jac.col(d) = Eigen::Map<const VectorXd>(diff.data(), n * n);
    }
    return std::abs(jac.partialPivLu().determinant());
}

}  // namespace

IdentityReport verify_jacobian(const PhiPoint& point, double h) {
    point.validate();
    const int n = point.n();
    if (n > 8) throw DimensionError("verify_jacobian: N <= 8 required (N^2 x N^2 determinant)");
    Chart chart;
    chart.base = point;
    chart.rtilde = householder_completion(point.pair).rightCols(n - 2);
    if (chart.dims() != n * n)
        throw DimensionError("verify_jacobian: chart dimension mismatch");

    const double jh = fd_jacobian_determinant(chart, h);
    const double jh2 = fd_jacobian_determinant(chart, h / 2);
    const double theta = point.shift.theta;
    const double b = point.shift.b;
    const Complex lambda(point.shift.a, point.shift.b);
    const MatrixXcd shifted =
        point.m1.cast<Complex>() - lambda * MatrixXcd::Identity(n - 2, n - 2);
    const double closed = 16 * b * b * std::abs(std::cos(2 * theta)) / std::pow(std::sin(2 * theta), 2) *
                          std::exp(2.0 * logdet_complex(shifted).real());

    // Richardson extrapolation of the central difference.
    const double fd = (4 * jh2 - jh) / 3.0;
    if (std::min(jh, jh2) > 1e-8 && std::abs(jh - jh2) > 0.1 * std::max(closed, jh2))
        throw QuadratureError("verify_jacobian: step too large, h and h/2 disagree by more than 10%");

    IdentityReport rep;
    rep.name = "jacobian";
    rep.lhs = fd;
    rep.rhs = closed;
    std::ostringstream os;
    os << "{\"N\":" << n << ",\"theta\":" << theta << ",\"h\":" << h << "}";
    rep.params = os.str();
    rep.finalize(1e-8, 1e-4);
    return rep;
}

MatrixXcd pfaffian_identity_matrix(const MatrixXcd& x, const MatrixXd& a2, Complex lambda1, Complex lambda2) {
    const int n4 = static_cast<int>(a2.rows());
    const int half = 4 * n4;
    MatrixXcd aw = MatrixXcd::Zero(half, half);
    const MatrixXcd a2c = a2.cast<Complex>();
    const MatrixXcd id = MatrixXcd::Identity(n4, n4);
    aw.block(0, 0, n4, n4) = a2c - lambda1 * id;
    aw.block(n4, n4, n4, n4) = a2c - lambda2 * id;
    aw.block(2 * n4, 2 * n4, n4, n4) = (a2c - lambda1 * id).adjoint();
    aw.block(3 * n4, 3 * n4, n4, n4) = (a2c - lambda2 * id).adjoint();

    MatrixXcd m = MatrixXcd::Zero(2 * half, 2 * half);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (x(i, j) != Complex(0, 0))
                m.block(i * n4, j * n4, n4, n4) = x(i, j) * id;
            const Complex xs = std::conj(x(j, i));  // (X^*)_{ij}
            if (xs != Complex(0, 0)) m.block(half + i * n4, half + j * n4, n4, n4) = xs * id;
        }
    m.block(0, half, half, half) = aw;
    m.block(half, 0, half, half) = -aw.transpose();
    return m;
}

IdentityReport verify_pfaffian_identity(int n, double t, Complex lambda1, Complex lambda2, const MatrixXd& a2,
                                        long mcSamples, std::uint64_t seed) {
    if (n != 5 && n != 6) throw DimensionError("verify_pfaffian_identity: N must be 5 or 6");
    if (lambda1.imag() == 0.0 || lambda2.imag() == 0.0)
        throw DomainError("verify_pfaffian_identity: lambdas must be non-real");
    if (!(t > 0.0) || t > 2.0) throw DomainError("verify_pfaffian_identity: t in (0, 2] required");
    const int n4 = n - 4;
    if (a2.rows() != n4 || a2.cols() != n4) throw DimensionError("verify_pfaffian_identity: A2 must be (N-4)^2");

    // LHS: Gaussian quadrature of the polynomial-times-Gaussian integrand
    // over M_{N-4}(R), refined until stable.
    const double sd = std::sqrt(t / n);
    auto quad_value = [&](int nodes) {
        auto [xs, ws] = stats::gauss_legendre(nodes, -12 * sd, 12 * sd);
        const int dims = n4 * n4;
        std::vector<int> idx(dims, 0);
        double acc = 0.0;
        for (;;) {
            MatrixXd bmat(n4, n4);
            double weight = 1.0, gauss = 0.0;
            for (int d = 0; d < dims; ++d) {
                const double v = xs[idx[d]];
                bmat(d % n4, d / n4) = v;
                weight *= ws[idx[d]];
                gauss += v * v;
            }
            const MatrixXcd b1 = (a2 + bmat).cast<Complex>() - lambda1 * MatrixXcd::Identity(n4, n4);
            const MatrixXcd b2 = (a2 + bmat).cast<Complex>() - lambda2 * MatrixXcd::Identity(n4, n4);
            const double dets = std::norm(b1.determinant()) * std::norm(b2.determinant());
            acc += weight * dets * std::exp(-(n / (2 * t)) * gauss);
            int d = 0;
            while (d < dims && ++idx[d] == nodes) idx[d++] = 0;
            if (d == dims) break;
        }
        return acc;
    };
    double quad = quad_value(32);
    for (int nodes = 48; nodes <= 96; nodes += 24) {
        const double next = quad_value(nodes);
        const double change = std::abs(next - quad);
        quad = next;
        if (change <= 1e-12 * std::abs(next)) break;
    }
    const double lhsPrefactor = std::pow(n / (2 * kPi * t), (n * n - 4 * n + 12) / 2.0);
    const Complex lhs = lhsPrefactor * quad;

    // RHS: Monte-Carlo over X in M_4^skew(C) with the Gaussian weight as the
    // sampling density; each complex upper entry has E|x|^2 = t/N.
    rng::Philox gen(seed);
    const double entrySd = std::sqrt(t / (2.0 * n));
    std::vector<double> re, im;
    re.reserve(mcSamples);
    im.reserve(mcSamples);
    for (long s = 0; s < mcSamples; ++s) {
        MatrixXcd x = MatrixXcd::Zero(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                const Complex v(entrySd * gen.normal(), entrySd * gen.normal());
                x(i, j) = v;
                x(j, i) = -v;
            }
        const Complex pf = pfaffian_dense(pfaffian_identity_matrix(x, a2, lambda1, lambda2));
        re.push_back(pf.real());
        im.push_back(pf.imag());
    }
    const double gaussNorm = std::pow(kPi * t / n, 6);  // integral of the sampling weight
    const double rhsPrefactor = 64.0 * std::pow(n / (2 * kPi * t), 2.0 * n + 4.0) * gaussNorm;
    const Complex rhs = rhsPrefactor * Complex(stats::mean(re), stats::mean(im));
    const double mcStderr =
        rhsPrefactor * std::hypot(stats::standard_error(re), stats::standard_error(im));

    IdentityReport rep;
    rep.name = "pfaffian";
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.mcStderr = mcStderr;
    std::ostringstream os;
    os << "{\"N\":" << n << ",\"t\":" << t << ",\"mcSamples\":" << mcSamples << ",\"seed\":" << seed << "}";
    rep.params = os.str();
    rep.finalize(0.0, 1e-10);
    rep.budgetOk = mcStderr <= 0.10 * std::abs(rhs);
    if (!rep.budgetOk) rep.pass = false;
    return rep;
}

double stiefel2_volume(int n) {
    auto sphere = [](int dim) { return 2.0 * std::pow(kPi, dim / 2.0) / std::tgamma(dim / 2.0); };
    return sphere(n) * sphere(n - 1);
}

double stiefel_gaussian_rhs(const MatrixXd& a, ShiftParams p, double t, double eta, int nodes, double radius) {
    const int n = static_cast<int>(a.rows());
    const Matrix2d lam = p.lambda();
    MatrixXd aprime(2 * n, 2 * n);
    aprime.topLeftCorner(n, n) = a - lam(0, 0) * MatrixXd::Identity(n, n);
    aprime.topRightCorner(n, n) = -lam(0, 1) * MatrixXd::Identity(n, n);
    aprime.bottomLeftCorner(n, n) = -lam(1, 0) * MatrixXd::Identity(n, n);
    aprime.bottomRightCorner(n, n) = a - lam(1, 1) * MatrixXd::Identity(n, n);
    const MatrixXd c = aprime.transpose() * aprime + eta * eta * MatrixXd::Identity(2 * n, 2 * n);

    VectorXd d;
    MatrixXd q;
    lapack::eigh(c, d, q);
    double logdet0 = 0.0;
    for (int i = 0; i < 2 * n; ++i) logdet0 += std::log(d[i]);
    const MatrixXd w = q * d.cwiseSqrt().cwiseInverse().asDiagonal() * q.transpose();  // (C+eta^2)^{-1/2}

    auto [xs, ws] = stats::gauss_legendre(nodes, -radius, radius);
    const double phaseScale = n / (2.0 * t);
    Complex acc(0, 0);
    MatrixXd pk(2 * n, 2 * n);
    for (int i11 = 0; i11 < nodes; ++i11)
        for (int i22 = 0; i22 < nodes; ++i22)
            for (int i12 = 0; i12 < nodes; ++i12) {
                const double p11 = xs[i11], p22 = xs[i22], p12 = xs[i12];
                // K = W (P (x) I) W, assembled blockwise
                pk.topLeftCorner(n, n) = p11 * MatrixXd::Identity(n, n);
                pk.bottomRightCorner(n, n) = p22 * MatrixXd::Identity(n, n);
                pk.topRightCorner(n, n) = p12 * MatrixXd::Identity(n, n);
                pk.bottomLeftCorner(n, n) = p12 * MatrixXd::Identity(n, n);
                const MatrixXd k = w * pk * w;
                const VectorXd mu = lapack::eigh_values(k);
                Complex logval(-0.5 * logdet0, phaseScale * (p11 + p22));
                for (int i = 0; i < 2 * n; ++i) logval -= 0.5 * std::log(Complex(1.0, mu[i]));
                acc += ws[i11] * ws[i22] * ws[i12] * std::exp(logval);
            }
    // The delta-function representation of the Stiefel constraint fixes the
    // P-integral normalization at 1/pi^3 for the rotationally invariant
    // volume form; the C = 0 volume self-test pins this constant.
    const double prefactor = std::exp(n * eta * eta / t) * std::pow(2 * kPi * t / n, n) *
                             std::pow(n / (2 * t), 3) / std::pow(kPi, 3);
    return prefactor * acc.real();
}

IdentityReport verify_stiefel_gaussian(int n, ShiftParams p, double t, long mcSamples, std::uint64_t seed,
                                       double eta) {
    if (n < 5 || n > 8) throw DimensionError("verify_stiefel_gaussian: 5 <= N <= 8 required");
    if (eta <= 0.0) eta = std::sqrt(t);
    rng::Philox gen(rng::mix(seed));
    MatrixXd a = gaussian_matrix(n, n, gen) / std::sqrt(static_cast<double>(n));

    // LHS: Vol(V^2) times the Haar average of the Gaussian weight.
    const Matrix2d lam = p.lambda();
    std::vector<double> vals;
    vals.reserve(mcSamples);
    rng::Philox haarGen(seed);
    for (long s = 0; s < mcSamples; ++s) {
        const StiefelPair pair = sample_stiefel2(n, haarGen);
        const VectorXd y1 = a * pair.v1 - lam(0, 0) * pair.v1 - lam(0, 1) * pair.v2;
        const VectorXd y2 = a * pair.v2 - lam(1, 0) * pair.v1 - lam(1, 1) * pair.v2;
        vals.push_back(std::exp(-(n / (2 * t)) * (y1.squaredNorm() + y2.squaredNorm())));
    }
    const double vol = stiefel2_volume(n);
    const double lhs = vol * stats::mean(vals);
    const double mcStderr = vol * stats::standard_error(vals);

    // RHS: refined oscillatory quadrature; refuse to report on non-convergence.
    const double radius = 14.0;
    double rhs = stiefel_gaussian_rhs(a, p, t, eta, 48, radius);
    double prev = stiefel_gaussian_rhs(a, p, t, eta, 64, radius);
    if (std::abs(prev - rhs) > 0.05 * std::abs(prev)) {
        const double next = stiefel_gaussian_rhs(a, p, t, eta, 96, radius);
        if (std::abs(next - prev) > 0.05 * std::abs(next))
            throw QuadratureError("verify_stiefel_gaussian: oscillatory quadrature did not converge");
        rhs = next;
    } else {
        rhs = prev;
    }

    IdentityReport rep;
    rep.name = "stiefelGaussian";
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.mcStderr = mcStderr;
    std::ostringstream os;
    os << "{\"N\":" << n << ",\"t\":" << t << ",\"eta\":" << eta << ",\"mcSamples\":" << mcSamples
       << ",\"seed\":" << seed << "}";
    rep.params = os.str();
    rep.finalize(0.0, 0.02);
    return rep;
}

IdentityReport verify_det_ratio(const MatrixXd& a, ShiftParams p, double eta) {
    const int n = static_cast<int>(a.rows());
    if (n > 100) throw DimensionError("verify_det_ratio: N <= 100 required for dense evaluation");
    const Complex lambda(p.a, p.b);

    // LHS (log scale): log det[(A-l)*(A-l)+eta^2] - (1/2) log det[A'^T A'+eta^2]
    HermitizationZ hz(a, BulkPoint{p.a, p.b});
    double l1 = 0.0;
    for (double s : hz.singular_values()) l1 += std::log(s * s + eta * eta);

    const Matrix2d lam = p.lambda();
    MatrixXd aprime(2 * n, 2 * n);
    aprime.topLeftCorner(n, n) = a - lam(0, 0) * MatrixXd::Identity(n, n);
    aprime.topRightCorner(n, n) = -lam(0, 1) * MatrixXd::Identity(n, n);
    aprime.bottomLeftCorner(n, n) = -lam(1, 0) * MatrixXd::Identity(n, n);
    aprime.bottomRightCorner(n, n) = a - lam(1, 1) * MatrixXd::Identity(n, n);
    const MatrixXd c = aprime.transpose() * aprime + eta * eta * MatrixXd::Identity(2 * n, 2 * n);
    double l2 = 0.0;
    {
        Eigen::LLT<MatrixXd> llt(c);
        if (llt.info() != Eigen::Success) throw SolverError("verify_det_ratio: Cholesky failed");
        for (int i = 0; i < 2 * n; ++i) l2 += 2.0 * std::log(llt.matrixL()(i, i));
    }
    const double lhsLog = l1 - 0.5 * l2;

    // RHS (log scale): -(1/2) sum log(1 + coeff * nu_k) over the spectrum of
    // H_lambda(eta) H~_lambdabar(eta).
    const MatrixXcd hl = hz.h_dense(eta);
    const MatrixXcd htlb = hz.htilde_dense(eta).conjugate();  // H~_{lambda-bar} for real A
    const VectorXcd nu = lapack::eig_complex(hl * htlb);
    const double tn = std::tan(p.theta);
    const double coeff = p.b * p.b * (tn - 1 / tn) * (tn - 1 / tn) * eta * eta;
    Complex rhsLog(0, 0);
    for (int i = 0; i < n; ++i) rhsLog -= 0.5 * std::log(1.0 + coeff * nu[i]);

    IdentityReport rep;
    rep.name = "detRatio";
    rep.lhs = lhsLog;
    rep.rhs = rhsLog;
    std::ostringstream os;
    os << "{\"N\":" << n << ",\"theta\":" << p.theta << ",\"eta\":" << eta << ",\"logScale\":true}";
    rep.params = os.str();
    rep.absError = std::abs(rep.lhs - rep.rhs);
    // identity of determinant ratios: report the relative error of the ratio
    rep.relError = std::abs(std::exp(rep.lhs - rep.rhs) - 1.0);
    rep.pass = rep.relError < 1e-8;
    return rep;
}

HcizReport verify_hciz_ratio(const std::vector<std::pair<Complex, Complex>>& zPairs, long mcSamples,
                             std::uint64_t seed) {
    HcizReport out;
    for (std::size_t q = 0; q < zPairs.size(); ++q) {
        const Complex z1 = zPairs[q].first, z2 = zPairs[q].second;
        if (z1 == z2) throw DomainError("verify_hciz_ratio: z1 != z2 required");
        Matrix2cd zm = Matrix2cd::Zero(), zb = Matrix2cd::Zero();
        zm(0, 0) = z1;
        zm(1, 1) = z2;
        zb(0, 0) = std::conj(z1);
        zb(1, 1) = std::conj(z2);
        rng::Philox gen(rng::task_seed(seed, q));
        std::vector<double> re, im;
        re.reserve(mcSamples);
        im.reserve(mcSamples);
        for (long s = 0; s < mcSamples; ++s) {
            const Matrix2cd u1 = sample_unitary2(gen);
            const Matrix2cd u2 = sample_unitary2(gen);
            const Complex tr = (u2.adjoint() * zb * u2 * u1.adjoint() * zm * u1).trace();
            const Complex v = std::exp(tr);
            re.push_back(v.real());
            im.push_back(v.imag());
        }
        const Complex mc(stats::mean(re), stats::mean(im));
        const double closed =
            (std::exp(std::norm(z1) + std::norm(z2)) - std::exp(2.0 * (z1 * std::conj(z2)).real())) /
            std::norm(z1 - z2);
        const Complex ratio = mc / closed;
        out.ratios.push_back(ratio);
        out.stderrs.push_back(std::hypot(stats::standard_error(re), stats::standard_error(im)) / std::abs(closed));
    }
    for (std::size_t i = 0; i < out.ratios.size(); ++i) {
        out.maxDeviation = std::max(out.maxDeviation, std::abs(out.ratios[i] - 1.0));
        for (std::size_t j = i + 1; j < out.ratios.size(); ++j)
            out.maxPairDiff = std::max(out.maxPairDiff, std::abs(out.ratios[i] - out.ratios[j]));
    }
    out.summary.name = "hciz";
    double worstSe = 0.0;
    Complex meanRatio(0, 0);
    for (std::size_t i = 0; i < out.ratios.size(); ++i) {
        meanRatio += out.ratios[i] / static_cast<double>(out.ratios.size());
        worstSe = std::max(worstSe, out.stderrs[i]);
    }
    out.summary.lhs = meanRatio;
    out.summary.rhs = Complex(1, 0);
    out.summary.mcStderr = worstSe;
    std::ostringstream os;
    os << "{\"pairs\":" << zPairs.size() << ",\"mcSamples\":" << mcSamples << ",\"seed\":" << seed << "}";
    out.summary.params = os.str();
    out.summary.finalize(0.0, 0.0);
    return out;
}

}  // namespace rmtlab
