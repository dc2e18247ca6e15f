#include "rmtlab/mde.hpp"

#include <algorithm>
#include <cmath>

#include "rmtlab/lapack.hpp"
#include "rmtlab/parallel.hpp"
#include "rmtlab/rng.hpp"

namespace rmtlab {

namespace {

using Matrix16cd = Eigen::Matrix<Complex, 16, 16>;
using Vector16cd = Eigen::Matrix<Complex, 16, 1>;

/// Minimum eigenvalue of the Hermitian part of i^(-1)(m - m*)/2.
double min_imag_eigenvalue(const Matrix4cd& m) {
    const Matrix4cd im = (m - m.adjoint()) / Complex(0, 2);
    Eigen::SelfAdjointEigenSolver<Matrix4cd> es(im);
    return es.eigenvalues().minCoeff();
}

/// 16x16 matrix of the linear map t -> S(t) in column-major vec coordinates.
Matrix16cd s_operator_matrix() {
    Matrix16cd s = Matrix16cd::Zero();
    for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 4; ++r) {
            Matrix4cd e = Matrix4cd::Zero();
            e(r, c) = 1.0;
            const Matrix4cd se = s_operator(e);
            for (int cc = 0; cc < 4; ++cc)
                for (int rr = 0; rr < 4; ++rr) s(4 * cc + rr, 4 * c + r) = se(rr, cc);
        }
    return s;
}

Matrix16cd kron(const Matrix4cd& a, const Matrix4cd& b) {
    Matrix16cd k;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) k.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
    return k;
}

Eigen::Map<const Vector16cd> vec(const Matrix4cd& m) { return Eigen::Map<const Vector16cd>(m.data()); }

Matrix4cd unvec(const Vector16cd& v) {
    Matrix4cd m;
    Eigen::Map<Vector16cd>(m.data()) = v;
    return m;
}

}  // namespace

Matrix4cd s_operator(const Matrix4cd& t) {
    Matrix4cd s = Matrix4cd::Zero();
    s(0, 0) = t(2, 2);
    s(0, 1) = t(2, 3);
    s(1, 0) = t(3, 2);
    s(1, 1) = t(3, 3);
    s(2, 2) = t(0, 0);
    s(2, 3) = t(0, 1);
    s(3, 2) = t(1, 0);
    s(3, 3) = t(1, 1);
    return s;
}

Matrix4cd z_representative(const ShiftParams& p) {
    const Matrix2d lam = p.lambda();
    Matrix4cd z = Matrix4cd::Zero();
    z.block<2, 2>(0, 2) = lam.cast<Complex>();
    z.block<2, 2>(2, 0) = lam.transpose().cast<Complex>();
    return z;
}

namespace {

double mde_residual(const Matrix4cd& m, const Matrix4cd& z, double eta) {
    const Matrix4cd id = Matrix4cd::Identity();
    return ((Complex(0, eta) * id + z + s_operator(m)) * m + id).norm();
}

/// Newton steps on F(m) = (i eta + Z + S(m)) m + I from the given iterate;
/// returns false if the iteration left the positivity cone or stalled.
bool mde_newton(Matrix4cd& m, const Matrix4cd& z, double eta, int& iterations) {
    static const Matrix16cd s_mat = s_operator_matrix();
    const Matrix4cd id = Matrix4cd::Identity();
    const Complex ieta(0, eta);
    double res = mde_residual(m, z, eta);
    for (int step = 0; step < 60 && res > 1e-14; ++step, ++iterations) {
        const Matrix4cd lhs = ieta * id + z + s_operator(m);
        const Matrix4cd f = lhs * m + id;
        const Matrix16cd jac = kron(m.transpose(), id) * s_mat + kron(id, lhs);
        const Vector16cd delta = jac.partialPivLu().solve(-vec(f));
        const Matrix4cd next = m + unvec(delta);
        if (!next.allFinite() || min_imag_eigenvalue(next) <= 0.0) return false;
        const double nextRes = mde_residual(next, z, eta);
        if (nextRes > 0.9 * res && res < 1e-12) break;
        m = next;
        res = nextRes;
    }
    return res <= 1e-13;
}

}  // namespace

MdeSolution solve_mde(const ShiftParams& p, double eta) {
    if (!(eta > 0.0)) throw DomainError("solve_mde: eta > 0 required");
    const Matrix4cd z = z_representative(p);
    const Matrix4cd id = Matrix4cd::Identity();

    // Damped fixed point at a comfortable spectral parameter, then eta
    // continuation with Newton refinement down to the requested value.
    double etaCur = std::max(eta, 0.5);
    Matrix4cd m = Complex(0, 1) * id;
    const double damping = 0.5;
    const int max_fp = 100000;
    int it = 0;
    {
        const Complex ieta(0, etaCur);
        double res = mde_residual(m, z, etaCur);
        for (; it < max_fp && res > 1e-10; ++it) {
            const Matrix4cd next = -(ieta * id + z + s_operator(m)).inverse();
            m = (1.0 - damping) * m + damping * next;
            if (min_imag_eigenvalue(m) <= 0.0)
                throw SolverError("solve_mde: damped iteration (s=0.5) left the eta Im(m) > 0 cone");
            res = mde_residual(m, z, etaCur);
        }
        if (res > 1e-10)
            throw SolverError("solve_mde: damped iteration (s=0.5, " + std::to_string(it) +
                              " steps) stalled at residual " + std::to_string(res));
    }
    if (!mde_newton(m, z, etaCur, it))
        throw SolverError("solve_mde: Newton refinement failed at eta = " + std::to_string(etaCur));
    while (etaCur > eta) {
        etaCur = std::max(eta, 0.7 * etaCur);
        Matrix4cd trial = m;
        if (!mde_newton(trial, z, etaCur, it)) {
            // fall back to damped fixed-point steps at this eta, then retry
            const Complex ieta(0, etaCur);
            trial = m;
            for (int k = 0; k < 2000 && mde_residual(trial, z, etaCur) > 1e-8; ++k, ++it)
                trial = 0.5 * trial - 0.5 * (ieta * id + z + s_operator(trial)).inverse();
            if (!mde_newton(trial, z, etaCur, it))
                throw SolverError("solve_mde: continuation stalled at eta = " + std::to_string(etaCur) +
                                  " (damping schedule s=0.5)");
        }
        m = trial;
        if (it > max_fp) throw SolverError("solve_mde: iteration budget exceeded (damping schedule s=0.5)");
    }

    MdeSolution sol;
    sol.m = m;
    sol.eta = eta;
    sol.params = p;
    sol.residual = mde_residual(m, z, eta);
    sol.iterations = it;
    if (sol.residual > 1e-12)
        throw SolverError("solve_mde: final residual " + std::to_string(sol.residual) + " exceeds 1e-12");
    if (min_imag_eigenvalue(m) <= 0.0) throw SolverError("solve_mde: solution left the eta Im(m) > 0 cone");
    return sol;
}

SmallEtaExpansion small_eta_expansion(const ShiftParams& p) {
    const double r2 = p.a * p.a + p.b * p.b;
    if (!(r2 < 1.0)) throw DomainError("small_eta_expansion: requires a^2 + b^2 < 1");
    const double tn = std::tan(p.theta);
    const double ct = 1.0 / tn;
    SmallEtaExpansion e;
    e.leading = Matrix2cd::Zero();
    e.leading(0, 0) = Complex(0, std::sqrt(1 - r2) * ct);
    e.leading(1, 1) = Complex(0, std::sqrt(1 - r2) * tn);
    const double a2 = p.a * p.a, b2 = p.b * p.b;
    Matrix2d s;
    s(0, 0) = -1 + (1 + ct * ct) / (4 * (1 - r2)) + (1 - a2) * (1 - ct * ct) / (4 * b2);
    s(1, 1) = -1 + (1 + tn * tn) / (4 * (1 - r2)) + (1 - a2) * (1 - tn * tn) / (4 * b2);
    // The off-diagonal slope is -(a/4b)(tan - cot); the finite-difference
    // oracle on the solved equation pins the 1/4 (see tests).
    s(0, 1) = s(1, 0) = -(p.a / (4 * p.b)) * (tn - ct);
    e.correction = s;
    return e;
}

Matrix4cd apply_stability(const MdeSolution& sol, const Matrix4cd& t) { return t - s_operator(sol.m * t * sol.m); }

Matrix4cd solve_stability(const MdeSolution& sol, const Matrix4cd& rhs) {
    static const Matrix16cd s_mat = s_operator_matrix();
    const Matrix16cd x = Matrix16cd::Identity() - s_mat * kron(sol.m.transpose(), sol.m);
    return unvec(x.partialPivLu().solve(Vector16cd(vec(rhs))));
}

StabilitySpectrum x_spectrum(const MdeSolution& sol) {
    static const Matrix16cd s_mat = s_operator_matrix();
    const Matrix16cd x = Matrix16cd::Identity() - s_mat * kron(sol.m.transpose(), sol.m);
    StabilitySpectrum spec;
    spec.eigenvalues = lapack::eig_complex(x);
    const double a = sol.params.a, b = sol.params.b;
    const double tn = std::tan(sol.params.theta);
    const double w2 = a * a + b * b;
    spec.betaPlus = (tn + 1.0 / tn) * sol.eta / (2.0 * std::sqrt(1.0 - w2));
    spec.betaMinus = 2.0 * (1.0 - a * a - b * b);
    const double disc = std::sqrt(std::max(0.0, (1 - a * a + b * b) * (1 - a * a + b * b) - 4 * b * b));
    spec.gammaPlus = 1 - a * a + b * b + disc;
    spec.gammaMinus = 1 - a * a + b * b - disc;
    return spec;
}

ScalarMz solve_mz(Complex z, Complex w) {
    if (w.imag() == 0.0) throw DomainError("solve_mz: Im w != 0 required");
    const double zz = std::norm(z);
    // m^3 + 2 w m^2 + (w^2 + 1 - |z|^2) m + w = 0
    Eigen::Matrix3cd companion = Eigen::Matrix3cd::Zero();
    companion(0, 2) = -w;
    companion(1, 2) = -(w * w + 1.0 - zz);
    companion(2, 2) = -2.0 * w;
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    const VectorXcd roots = lapack::eig_complex(companion);

    auto residual = [&](Complex m) { return std::abs(m * (w + m) * (w + m) + (w + m) - zz * m); };
    const double sgn = w.imag() > 0 ? 1.0 : -1.0;
    int best = -1;
    // Tie-break by continuity from large |Im w| where the admissible root is
    // unique: pick the candidate closest to a short continuation path.
    std::vector<int> admissible;
    for (int i = 0; i < 3; ++i)
        if (roots[i].imag() * sgn > 0.0) admissible.push_back(i);
    if (admissible.empty()) throw SolverError("solve_mz: no root satisfies the branch condition");
    if (admissible.size() == 1) {
        best = admissible[0];
    } else {
        Complex guide(0, sgn);  // limit of m at Im w -> infinity is 0 from the upper half plane; track from i*sgn
        const double targetIm = std::abs(w.imag());
        double h = std::max(4.0, 4.0 * targetIm);
        while (h > targetIm * 1.0000001) {
            h = std::max(targetIm, h * 0.7);
            const Complex wh(w.real(), sgn * h);
            // fixed-point refinement of the guide at wh
            for (int k = 0; k < 200; ++k) guide = -1.0 / (wh + guide - zz / (wh + guide));
        }
        double bestDist = 1e300;
        for (int i : admissible) {
            const double d = std::abs(roots[i] - guide);
            if (d < bestDist) {
                bestDist = d;
                best = i;
            }
        }
    }
    ScalarMz out;
    out.z = z;
    out.w = w;
    out.m = roots[best];
    // One Newton step against the rational equation to sharpen the root.
    for (int k = 0; k < 3; ++k) {
        const Complex wm = w + out.m;
        const Complex f = out.m * wm * wm + wm - zz * out.m;
        const Complex df = wm * wm + 2.0 * out.m * wm + 1.0 - zz;
        if (std::abs(df) < 1e-300) break;
        out.m -= f / df;
    }
    out.residual = residual(out.m);
    return out;
}

double fit_loglog_slope(const std::vector<int>& Ns, const std::vector<double>& medians) {
    const int k = static_cast<int>(Ns.size());
    if (k < 2) throw DomainError("fit_loglog_slope: need at least two sizes");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < k; ++i) {
        const double x = std::log(static_cast<double>(Ns[i]));
        const double y = std::log(medians[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

namespace {

double percentile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    if (v.empty()) return 0.0;
    const double pos = q * (v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - lo;
    return v[lo] * (1 - frac) + v[hi] * frac;
}

}  // namespace

ScalingRecord local_law_stats(const EnsembleSpec& spec, const ShiftParams& p, double eta, int samples,
                              const std::vector<int>& Ns, int workers) {
    if (!Ns.empty()) {
        const double floor = std::pow(static_cast<double>(Ns.front()), -0.5 + 0.05);
        if (!(eta > floor))
            throw DomainError("local_law_stats: eta must exceed N^(-1/2+0.05)");
    }
    ScalingRecord rec;
    rec.samplesPerN = samples;
    rec.eta = eta;
    const MdeSolution sol = solve_mde(p, eta);
    for (int n : Ns) {
        std::vector<double> errs(samples);
        parallel_for(samples, workers, [&](int i) {
            EnsembleSpec s = spec;
            s.N = n;
            s.variance = -1.0;
            s.seed = rng::task_seed(spec.seed, static_cast<std::uint64_t>(n) * 1000003u + i);
            const MatrixXd a = sample_matrix(s);
            const LambdaResolvent lr(a, p, eta);
            const Eigen::Matrix4cd g = lr.block_traces();
            errs[i] = (g - sol.m).cwiseAbs().maxCoeff() / 4.0;
        });
        rec.Ns.push_back(n);
        rec.medians.push_back(percentile(errs, 0.5));
        rec.p90s.push_back(percentile(errs, 0.9));
    }
    if (rec.Ns.size() >= 2) {
        rec.slope = fit_loglog_slope(rec.Ns, rec.medians);
        rec.slopeValid = true;
    }
    return rec;
}

ScalingRecord two_resolvent_stats(const EnsembleSpec& spec, const ShiftParams& p, double eta,
                                  const std::vector<BlockPair>& pairs, int samples, const std::vector<int>& Ns,
                                  int workers, int* orderingChoice) {
    if (!Ns.empty()) {
        const double floor = std::pow(static_cast<double>(Ns.front()), -1.0 / 6.0 + 0.05);
        if (!(eta > floor))
            throw DomainError("two_resolvent_stats: eta must exceed N^(-1/6+0.05)");
    }
    for (const auto& bp : pairs)
        if (bp.alpha < 2 || bp.beta < 2 || bp.alphaP < 2 || bp.betaP < 2)
            throw DomainError("two_resolvent_stats: block pairs must lie in the H~ side (indices 2,3)");

    const MdeSolution sol = solve_mde(p, eta);
    // Deterministic approximations for both trace orderings of X^{-1}.
    std::vector<Complex> det1, det2;
    for (const auto& bp : pairs) {
        Matrix4cd e = Matrix4cd::Zero(), ep = Matrix4cd::Zero();
        e(bp.alpha, bp.beta) = 1.0;
        ep(bp.alphaP, bp.betaP) = 1.0;
        det1.push_back((sol.m * e * sol.m * solve_stability(sol, ep)).trace() / 4.0);
        det2.push_back((sol.m * solve_stability(sol, e) * sol.m * ep).trace() / 4.0);
    }

    ScalingRecord rec;
    rec.samplesPerN = samples;
    rec.eta = eta;
    std::vector<std::vector<double>> errs1all, errs2all;
    for (int n : Ns) {
        std::vector<double> errs1(samples), errs2(samples);
        parallel_for(samples, workers, [&](int i) {
            EnsembleSpec s = spec;
            s.N = n;
            s.variance = -1.0;
            s.seed = rng::task_seed(spec.seed, static_cast<std::uint64_t>(n) * 2000003u + i);
            const MatrixXd a = sample_matrix(s);
            const LambdaResolvent lr(a, p, eta);
            double worst1 = 0.0, worst2 = 0.0;
            for (std::size_t q = 0; q < pairs.size(); ++q) {
                const auto& bp = pairs[q];
                // <G E_{ab} G E_{a'b'}> = (1/4N) Tr[G_{b'a} G_{ba'}] with all
                // blocks on the H~ side equal to i eta H~_{..}.
                const auto x = lr.htilde_block(bp.betaP - 2, bp.alpha - 2);
                const auto y = lr.htilde_block(bp.beta - 2, bp.alphaP - 2);
                const double tr = (x.cwiseProduct(y.transpose())).sum();
                const Complex lhs = -eta * eta * tr / (4.0 * n);
                worst1 = std::max(worst1, std::abs(lhs - det1[q]));
                worst2 = std::max(worst2, std::abs(lhs - det2[q]));
            }
            errs1[i] = worst1;
            errs2[i] = worst2;
        });
        rec.Ns.push_back(n);
        errs1all.push_back(std::move(errs1));
        errs2all.push_back(std::move(errs2));
    }
    // Keep the ordering whose median error is smaller at the largest size.
    const double med1 = percentile(errs1all.back(), 0.5);
    const double med2 = percentile(errs2all.back(), 0.5);
    const bool useFirst = med1 <= med2;
    if (orderingChoice) *orderingChoice = useFirst ? 1 : 2;
    for (std::size_t i = 0; i < rec.Ns.size(); ++i) {
        const auto& errs = useFirst ? errs1all[i] : errs2all[i];
        rec.medians.push_back(percentile(errs, 0.5));
        rec.p90s.push_back(percentile(errs, 0.9));
    }
    if (rec.Ns.size() >= 2) {
        rec.slope = fit_loglog_slope(rec.Ns, rec.medians);
        rec.slopeValid = true;
    }
    return rec;
}

}  // namespace rmtlab
