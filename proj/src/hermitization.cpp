#include "rmtlab/hermitization.hpp"

#include <cmath>

#include "rmtlab/lapack.hpp"
#include "rmtlab/rng.hpp"

namespace rmtlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Tr[X Y] for a real block X and complex Y of the same size.
Complex trace_prod_c(const Eigen::Ref<const MatrixXd>& x, const MatrixXcd& y) {
    Complex acc(0, 0);
    const int n = static_cast<int>(x.rows());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += x(i, j) * y(j, i);
    return acc;
}

double trace_prod_r(const Eigen::Ref<const MatrixXd>& x, const Eigen::Ref<const MatrixXd>& y) {
    return (x.cwiseProduct(y.transpose())).sum();
}

}  // namespace

void BulkPoint::validate(double kappa) const {
    if (!(b >= kappa)) throw DomainError("BulkPoint: Im z must be at least the bulk margin");
    if (!(a * a + b * b < 1.0)) throw DomainError("BulkPoint: |z| < 1 required");
}

Matrix2d ShiftParams::lambda() const {
    Matrix2d m;
    const double t = std::tan(theta);
    m << a, b * t, -b / t, a;
    return m;
}

void ShiftParams::validate(double kappa) const {
    if (!(b >= 0.0)) throw DomainError("ShiftParams: b >= 0 required");
    if (!(theta >= kappa) || !(theta <= kPi / 2 - kappa))
        throw DomainError("ShiftParams: theta is degenerate (too close to 0 or pi/2)");
}

HermitizationZ::HermitizationZ(const MatrixXd& a, BulkPoint z)
    : HermitizationZ(MatrixXcd(a.cast<Complex>() - z.z() * MatrixXcd::Identity(a.rows(), a.cols()))) {
    if (a.rows() != a.cols()) throw DimensionError("HermitizationZ: matrix must be square");
}

HermitizationZ::HermitizationZ(const MatrixXcd& a_minus_z) : n_(static_cast<int>(a_minus_z.rows())), amz_(a_minus_z) {
    if (amz_.rows() != amz_.cols()) throw DimensionError("HermitizationZ: matrix must be square");
    lapack::svd(amz_, s_, u_, v_);
}

const MatrixXcd& HermitizationZ::kuv() const {
    if (!kuv_) kuv_ = std::make_unique<MatrixXcd>(u_.adjoint() * v_);
    return *kuv_;
}

const MatrixXcd& HermitizationZ::p_vv() const {
    if (!pvv_) pvv_ = std::make_unique<MatrixXcd>(v_.adjoint() * v_.conjugate());
    return *pvv_;
}

const MatrixXcd& HermitizationZ::p_uu() const {
    if (!puu_) puu_ = std::make_unique<MatrixXcd>(u_.adjoint() * u_.conjugate());
    return *puu_;
}

const MatrixXcd& HermitizationZ::w_vu() const {
    if (!wvu_) wvu_ = std::make_unique<MatrixXcd>(v_.transpose() * u_);
    return *wvu_;
}

double HermitizationZ::h_trace(double eta) const {
    double acc = 0.0;
    for (int i = 0; i < n_; ++i) acc += 1.0 / (s_[i] * s_[i] + eta * eta);
    return acc / n_;
}

double HermitizationZ::h2_trace(double eta) const {
    double acc = 0.0;
    for (int i = 0; i < n_; ++i) {
        const double f = 1.0 / (s_[i] * s_[i] + eta * eta);
        acc += f * f;
    }
    return acc / n_;
}

double HermitizationZ::htilde_htildebar_trace(double eta) const {
    const MatrixXcd& p = p_vv();
    VectorXd f(n_);
    for (int i = 0; i < n_; ++i) f[i] = 1.0 / (s_[i] * s_[i] + eta * eta);
    double acc = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) acc += f[i] * f[j] * std::norm(p(i, j));
    return acc / n_;
}

Complex HermitizationZ::beta_at(double eta) const {
    const MatrixXcd& k = kuv();
    Complex acc(0, 0);
    for (int i = 0; i < n_; ++i) {
        const double f = 1.0 / (s_[i] * s_[i] + eta * eta);
        acc += f * f * s_[i] * std::conj(k(i, i));
    }
    return eta * acc / static_cast<double>(n_);
}

double HermitizationZ::solve_eta(double t, double bracket_c) const {
    if (!(t > 0.0) || !(t < 1.0)) throw DomainError("solve_eta: 0 < t < 1 required");
    auto f = [&](double eta) { return t * h_trace(eta) - 1.0; };
    double lo = t / bracket_c, hi = t * bracket_c;
    int guard = 0;
    while (f(lo) < 0.0) {
        lo /= 2.0;
        if (++guard > 200 || lo < 1e-300) {
            const double limit = t * h_trace(0.0);
            throw SolverError("solve_eta: bracket expansion failed; t<H_z(0+)> = " + std::to_string(limit) +
                              " < 1, no root exists for this matrix");
        }
    }
    guard = 0;
    while (f(hi) > 0.0) {
        hi *= 2.0;
        if (++guard > 200) throw SolverError("solve_eta: upper bracket expansion failed");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) >= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

TraceConstants HermitizationZ::constants(double t, bool wantUpsilon) const {
    TraceConstants c;
    const double eta = solve_eta(t);
    c.etaZT = eta;
    VectorXd f(n_), fs(n_);
    for (int i = 0; i < n_; ++i) {
        f[i] = 1.0 / (s_[i] * s_[i] + eta * eta);
        fs[i] = f[i] * s_[i];
    }
    c.g = Complex(eta * f.sum() / n_, 0.0);

    const MatrixXcd& k = kuv();
    double alpha = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) alpha += f[i] * f[j] * std::norm(k(i, j));
    c.alpha = eta * eta * alpha / n_;

    c.beta = beta_at(eta);
    c.gamma = eta * eta * f.dot(f) / n_;
    c.sigma = c.alpha + std::norm(c.beta) / c.gamma;

    // delta = <[H (A-z)]^2> = conj((1/N) Tr [diag(fs) K]^2) with K = U* V.
    MatrixXcd m = fs.asDiagonal() * k;
    Complex sdelta(0, 0);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) sdelta += m(i, j) * m(j, i);
    c.delta = std::conj(sdelta) / static_cast<double>(n_);
    c.tau = (c.gamma * c.delta - c.beta * c.beta) / (c.gamma * c.sigma);

    // upsilon = pi [N/t - Tr (A-z)* Ht_z Ht_zbar (A-z)]
    //             [N/t - Tr (A-z) H_z H_zbar (A-zbar)]
    if (wantUpsilon) {
        VectorXd s2 = s_.cwiseProduct(s_);
        const MatrixXcd& p = p_vv();
        MatrixXcd m1 = f.asDiagonal() * p * f.asDiagonal();
        MatrixXcd m2 = w_vu() * (s2.asDiagonal() * k);
        const Complex t1 = (m1.cwiseProduct(m2.transpose())).sum();

        MatrixXcd m3 = s_.asDiagonal() * k.adjoint() * f.asDiagonal();
        MatrixXcd m6 = p_uu() * (fs.asDiagonal() * w_vu());
        const Complex t2 = (m3.cwiseProduct(m6.transpose())).sum();

        const double nt = n_ / t;
        const Complex ups = kPi * (nt - t1) * (nt - t2);
        c.upsilon = ups.real();
    }
    return c;
}

MatrixXcd HermitizationZ::h_dense(double eta) const {
    VectorXd f(n_);
    for (int i = 0; i < n_; ++i) f[i] = 1.0 / (s_[i] * s_[i] + eta * eta);
    return (u_ * f.asDiagonal()) * u_.adjoint();
}

MatrixXcd HermitizationZ::htilde_dense(double eta) const {
    VectorXd f(n_);
    for (int i = 0; i < n_; ++i) f[i] = 1.0 / (s_[i] * s_[i] + eta * eta);
    return (v_ * f.asDiagonal()) * v_.adjoint();
}

MatrixXcd HermitizationZ::h_amz_dense(double eta) const {
    VectorXd fs(n_);
    for (int i = 0; i < n_; ++i) fs[i] = s_[i] / (s_[i] * s_[i] + eta * eta);
    return (u_ * fs.asDiagonal()) * v_.adjoint();
}

MatrixXcd HermitizationZ::amzs_h_dense(double eta) const {
    VectorXd fs(n_);
    for (int i = 0; i < n_; ++i) fs[i] = s_[i] / (s_[i] * s_[i] + eta * eta);
    return (v_ * fs.asDiagonal()) * u_.adjoint();
}

Matrix2cd HermitizationZ::g_block_traces(double eta) const {
    const MatrixXcd& k = kuv();
    Complex offdiag(0, 0);
    double h = 0.0;
    for (int i = 0; i < n_; ++i) {
        const double f = 1.0 / (s_[i] * s_[i] + eta * eta);
        h += f;
        offdiag += f * s_[i] * std::conj(k(i, i));
    }
    Matrix2cd g;
    g(0, 0) = Complex(0, eta) * h / static_cast<double>(n_);
    g(0, 1) = offdiag / static_cast<double>(n_);
    g(1, 0) = std::conj(offdiag) / static_cast<double>(n_);
    g(1, 1) = g(0, 0);  // Tr H~ = Tr H for square A - z
    return g;
}

ResolventBundle2 resolvent_blocks(const MatrixXd& a, BulkPoint z, double eta) {
    if (!(eta > 0.0)) throw DomainError("resolvent_blocks: eta > 0 required");
    HermitizationZ h(a, z);
    ResolventBundle2 b;
    b.z = z;
    b.eta = eta;
    b.blockTraces = h.g_block_traces(eta);
    {
        const int n = h.n();
        b.g2OffDiag12 = Complex(0, 2) * h.beta_at(eta);
        b.hTrace = h.h_trace(eta);

        // Probe residual ||(H_z - i eta) G x - x|| over random unit vectors.
        const MatrixXcd amz = a.cast<Complex>() - z.z() * MatrixXcd::Identity(n, n);
        const MatrixXcd hm = h.h_dense(eta);
        const MatrixXcd htm = h.htilde_dense(eta);
        const MatrixXcd ham = h.h_amz_dense(eta);
        rng::Philox gen(0xB0B5EED);
        double worst = 0.0;
        for (int probe = 0; probe < 3; ++probe) {
            VectorXcd x1(n), x2(n);
            for (int i = 0; i < n; ++i) {
                x1[i] = Complex(gen.normal(), gen.normal());
                x2[i] = Complex(gen.normal(), gen.normal());
            }
            const double nrm = std::sqrt(x1.squaredNorm() + x2.squaredNorm());
            x1 /= nrm;
            x2 /= nrm;
            const Complex ieta(0, eta);
            VectorXcd y1 = ieta * (hm * x1) + ham * x2;
            VectorXcd y2 = ham.adjoint() * x1 + ieta * (htm * x2);
            VectorXcd r1 = -ieta * y1 + amz * y2 - x1;
            VectorXcd r2 = amz.adjoint() * y1 - ieta * y2 - x2;
            worst = std::max(worst, std::sqrt(r1.squaredNorm() + r2.squaredNorm()));
        }
        b.residual = worst;
    }
    return b;
}

double solve_eta_zt(const MatrixXd& a, BulkPoint z, double t) { return HermitizationZ(a, z).solve_eta(t); }

TraceConstants compute_constants(const MatrixXd& a, BulkPoint z, double t) {
    return HermitizationZ(a, z).constants(t);
}

LambdaResolvent::LambdaResolvent(const MatrixXd& a, ShiftParams p, double eta) : params_(p), eta_(eta), a_(a) {
    if (a.rows() != a.cols()) throw DimensionError("LambdaResolvent: matrix must be square");
    p.validate(1e-6);
    if (!(eta > 0.0)) throw DomainError("LambdaResolvent: eta > 0 required");
    n_ = static_cast<int>(a.rows());
    const int n = n_;
    const double bt = p.b * std::tan(p.theta);
    const double bc = p.b / std::tan(p.theta);

    MatrixXd e = a - p.a * MatrixXd::Identity(n, n);
    gram_ = e.transpose() * e;

    MatrixXd c(2 * n, 2 * n);
    c.topLeftCorner(n, n) = gram_ + (bc * bc + eta * eta) * MatrixXd::Identity(n, n);
    c.bottomRightCorner(n, n) = gram_ + (bt * bt + eta * eta) * MatrixXd::Identity(n, n);
    c.topRightCorner(n, n) = -bt * e.transpose() + bc * e;
    c.bottomLeftCorner(n, n) = c.topRightCorner(n, n).transpose();
    htilde_ = lapack::spd_inverse(std::move(c));
}

Eigen::Block<const MatrixXd> LambdaResolvent::htilde_block(int k, int l) const {
    return htilde_.block(k * n_, l * n_, n_, n_);
}

double LambdaResolvent::tr_htilde(int k, int l) const { return htilde_block(k, l).trace(); }

Complex LambdaResolvent::block_trace(int alpha, int beta) const {
    return block_traces()(alpha, beta);
}

Eigen::Matrix4cd LambdaResolvent::block_traces() const {
    const int n = n_;
    const double bt = params_.b * std::tan(params_.theta);
    const double bc = params_.b / std::tan(params_.theta);
    // A'_{km} = alpha_{km} E + gamma_{km} I with E = A - a.
    const double alph[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
    const double gam[2][2] = {{0.0, -bt}, {bc, 0.0}};

    double tH[2][2], tE[2][2], tG[2][2];
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            const auto blk = htilde_block(k, l);
            tH[k][l] = blk.trace();
            tE[k][l] = trace_prod_r(blk, a_) - params_.a * tH[k][l];
            tG[k][l] = trace_prod_r(blk, gram_);
        }

    // Tr[(A' Ht)_{kl}] and Tr[(A' Ht A'^T)_{kl}]
    double trAH[2][2] = {{0, 0}, {0, 0}};
    double trAHA[2][2] = {{0, 0}, {0, 0}};
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            for (int m = 0; m < 2; ++m) trAH[k][l] += alph[k][m] * tE[m][l] + gam[k][m] * tH[m][l];
            for (int m = 0; m < 2; ++m)
                for (int nn = 0; nn < 2; ++nn)
                    trAHA[k][l] += alph[k][m] * alph[l][nn] * tG[m][nn] + alph[k][m] * gam[l][nn] * tE[m][nn] +
                                   gam[k][m] * alph[l][nn] * tE[nn][m] + gam[k][m] * gam[l][nn] * tH[m][nn];
        }

    const double eta = eta_;
    Eigen::Matrix4cd g = Eigen::Matrix4cd::Zero();
    const Complex ieta(0, eta);
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            const double trh = (k == l ? n : 0.0) / (eta * eta) - trAHA[k][l] / (eta * eta);
            g(k, l) = ieta * trh / static_cast<double>(n);                  // i eta H'
            g(k, l + 2) = Complex(trAH[k][l] / n, 0);                       // (H' A')_{kl} = (A' Ht)_{kl}
            g(k + 2, l) = Complex(trAH[l][k] / n, 0);                       // (A'^T H')_{kl}
            g(k + 2, l + 2) = ieta * tH[k][l] / static_cast<double>(n);     // i eta Ht
        }
    return g;
}

Vector3d LambdaResolvent::three_vector(double t) const {
    const double nt = n_ / t;
    return Vector3d(nt - tr_htilde(0, 0), -2.0 * tr_htilde(0, 1), nt - tr_htilde(1, 1));
}

Matrix3d LambdaResolvent::q_matrix() const {
    const auto h11 = htilde_block(0, 0);
    const auto h12 = htilde_block(0, 1);
    const auto h22 = htilde_block(1, 1);
    const double t1111 = trace_prod_r(h11, h11);
    const double t1112 = trace_prod_r(h11, h12);
    const double t1212t = h12.cwiseProduct(h12).sum();  // Tr[Ht12 Ht12^T]
    const double t1212 = trace_prod_r(h12, h12);          // Tr[Ht12 Ht12]
    const double t1122 = trace_prod_r(h11, h22);
    const double t2212 = trace_prod_r(h22, h12);
    const double t2222 = trace_prod_r(h22, h22);
    Matrix3d q;
    q << 2 * t1111, 2 * t1112, 2 * t1212t,  //
        2 * t1112, t1122 + t1212, 2 * t2212,  //
        2 * t1212t, 2 * t2212, 2 * t2222;
    return q;
}

Matrix3d q_matrix(const MatrixXd& a, ShiftParams p, double eta) { return LambdaResolvent(a, p, eta).q_matrix(); }

Vector3d three_vector(const MatrixXd& a, ShiftParams p, double eta, double t) {
    return LambdaResolvent(a, p, eta).three_vector(t);
}

Matrix4cd g_matrix(const MatrixXd& a, BulkPoint z, double t) {
    HermitizationZ hz(a, z);
    const double eta = hz.solve_eta(t);
    ShiftParams p{z.a, z.b, kPi / 4};
    LambdaResolvent lr(a, p, eta);

    const MatrixXcd k[2][2] = {{hz.h_dense(eta), hz.h_amz_dense(eta)},
                               {hz.amzs_h_dense(eta), hz.htilde_dense(eta)}};
    const Complex ieta(0, eta);
    const int n = lr.n();
    Matrix4cd g;
    for (int bi = 0; bi < 2; ++bi)
        for (int bj = 0; bj < 2; ++bj) {
            const Complex mult = (bi == bj) ? ieta : Complex(1, 0);
            for (int kk = 0; kk < 2; ++kk)
                for (int ll = 0; ll < 2; ++ll)
                    g(2 * bi + kk, 2 * bj + ll) = mult * (t / n) * trace_prod_c(lr.htilde_block(ll, kk), k[bi][bj]);
        }
    return g;
}

Eigen::Matrix4cd rotation_identity_traces(const MatrixXd& a, ShiftParams p, double eta) {
    BulkPoint w{p.a, p.b};
    HermitizationZ hz(a, w);
    const Matrix2cd gw = hz.g_block_traces(eta);

    // Traces of the N-blocks of diag(G_w, G_wbar); for real A the wbar blocks
    // are complex conjugates of the w blocks.
    Eigen::Matrix4cd d = Eigen::Matrix4cd::Zero();
    d(0, 0) = gw(0, 0);
    d(0, 1) = gw(0, 1);
    d(1, 0) = gw(1, 0);
    d(1, 1) = gw(1, 1);
    d(2, 2) = gw(0, 0);  // <H_wbar> = conj <H_w> is real, i eta factor unchanged
    d(2, 3) = std::conj(gw(0, 1));
    d(3, 2) = std::conj(gw(1, 0));
    d(3, 3) = gw(1, 1);

    Eigen::Matrix4cd u;
    const double r = 1.0 / std::sqrt(2.0);
    const Complex i(0, 1);
    u << r, -i * r, 0, 0,  //
        0, 0, r, -i * r,   //
        r, i * r, 0, 0,    //
        0, 0, r, i * r;

    return u.adjoint() * d * u;
}

}  // namespace rmtlab
