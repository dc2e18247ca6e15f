#include "rmtlab/girko.hpp"

#include <cmath>

#include "rmtlab/lapack.hpp"
#include "rmtlab/mde.hpp"
#include "rmtlab/parallel.hpp"
#include "rmtlab/stats.hpp"

namespace rmtlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// <Im G_w(i eta)> of the Hermitization from the singular values of X - w.
double im_trace(const VectorXd& s, double eta) {
    double acc = 0.0;
    for (int i = 0; i < s.size(); ++i) acc += eta / (s[i] * s[i] + eta * eta);
    return acc / s.size();
}

}  // namespace

double TestFunction::operator()(Complex w) const {
    const double u = std::norm((w - center) / radius);
    if (u >= 1.0) return 0.0;
    return amplitude * std::exp(-1.0 / (1.0 - u));
}

double TestFunction::laplacian(Complex w) const {
    const double u = std::norm((w - center) / radius);
    if (u >= 1.0) return 0.0;
    const double f = amplitude * std::exp(-1.0 / (1.0 - u));
    const double d = 1.0 - u;
    const double fp = -f / (d * d);
    const double fpp = f / (d * d * d * d) - 2.0 * f / (d * d * d);
    return 4.0 / (radius * radius) * (fpp * u + fp);
}

double TestFunction::laplacian_l1() const {
    auto [rs, rw] = stats::gauss_legendre(200, 0.0, radius);
    double acc = 0.0;
    for (std::size_t i = 0; i < rs.size(); ++i)
        acc += rw[i] * 2 * kPi * rs[i] * std::abs(laplacian(center + Complex(rs[i], 0)));
    return acc;
}

GirkoResult girko_functional(const MatrixXd& x, const TestFunction& f, BulkPoint z, double epsilon, int etaNodes,
                             int radialNodes, int angularNodes) {
    if (!(epsilon > 0.0) || !(epsilon < 0.5)) throw DomainError("girko_functional: epsilon in (0, 0.5) required");
    const int n = static_cast<int>(x.rows());
    const double sqn = std::sqrt(static_cast<double>(n));

    GirkoResult res;
    res.epsilon = epsilon;

    // Eigenvalue side: (1/N) sum_i f_z(sigma_i) = sum_i f(sqrt(N)(sigma_i - z)).
    const VectorXcd sigma = lapack::eig_real(x);
    double direct = 0.0;
    for (int i = 0; i < n; ++i) direct += f(sqn * (sigma[i] - z.z()));

    // Centering term (1/pi) int_D f_z, on the same polar grid in u-coordinates
    // clipped to the unit disk.
    auto [rs, rw] = stats::gauss_legendre(radialNodes, 0.0, f.radius);
    double centering = 0.0;
    for (int ir = 0; ir < radialNodes; ++ir)
        for (int ia = 0; ia < angularNodes; ++ia) {
            const double phi = 2 * kPi * ia / angularNodes;
            const Complex u = f.center + std::polar(rs[ir], phi);
            const Complex w = z.z() + u / sqn;
            if (std::abs(w) <= 1.0) centering += rw[ir] * (2 * kPi / angularNodes) * rs[ir] * f(u);
        }
    centering /= kPi;
    res.direct = direct - centering;

    // I_eps: (N / 2 pi) int du Laplacian f(u) int deta [<Im G_w> - Im m^w],
    // with the eta integral on a log-spaced Gauss grid.
    const double etaMin = std::pow(n, -1.0 - epsilon);
    const double etaMax = std::pow(n, -1.0 + epsilon);
    auto [ls, lw] = stats::gauss_legendre(etaNodes, std::log(etaMin), std::log(etaMax));
    res.etaGrid.resize(etaNodes);
    for (int i = 0; i < etaNodes; ++i) res.etaGrid[i] = std::exp(ls[i]);

    const MatrixXcd xc = x.cast<Complex>();
    double integral = 0.0;
    for (int ir = 0; ir < radialNodes; ++ir)
        for (int ia = 0; ia < angularNodes; ++ia) {
            const double phi = 2 * kPi * ia / angularNodes;
            const Complex u = f.center + std::polar(rs[ir], phi);
            const double lap = f.laplacian(u);
            if (lap == 0.0) continue;
            const Complex w = z.z() + u / sqn;
            const MatrixXcd shifted = xc - w * MatrixXcd::Identity(n, n);
            const VectorXd s = lapack::singular_values(shifted);
            double etaIntegral = 0.0;
            for (int ie = 0; ie < etaNodes; ++ie) {
                const double eta = res.etaGrid[ie];
                const double imG = im_trace(s, eta);
                if (imG < 0.0) throw SolverError("girko_functional: negative Im trace");
                const ScalarMz m = solve_mz(w, Complex(0, eta));
                etaIntegral += lw[ie] * eta * (imG - m.m.imag());
            }
            integral += rw[ir] * (2 * kPi / angularNodes) * rs[ir] * lap * etaIntegral;
        }
    // Orientation fixed by the eigenvalue side: log|det(X - w)| carries
    // -(1/2) int_0^T Tr Im G(i eta) d eta, so the window fluctuation enters
    // with a minus sign.
    res.integral = -integral * n / (2 * kPi);
    res.discrepancy = std::abs(res.direct - res.integral);
    return res;
}

namespace {

double product_statistic(const MatrixXd& matrix, const std::vector<BulkPoint>& points,
                         const std::vector<double>& etas, const std::vector<double>& imMz) {
    const MatrixXcd xc = matrix.cast<Complex>();
    const int n = static_cast<int>(matrix.rows());
    double prod = 1.0;
    for (std::size_t l = 0; l < points.size(); ++l) {
        const MatrixXcd shifted = xc - points[l].z() * MatrixXcd::Identity(n, n);
        const VectorXd s = lapack::singular_values(shifted);
        prod *= im_trace(s, etas[l]) - imMz[l];
    }
    return prod;
}

ComparisonResult run_comparison(const std::function<MatrixXd(std::uint64_t)>& drawA,
                                const std::function<MatrixXd(std::uint64_t)>& drawB,
                                const std::vector<BulkPoint>& points, const std::vector<double>& etas, int samples,
                                std::uint64_t seed, int workers) {
    std::vector<double> imMz(points.size());
    for (std::size_t l = 0; l < points.size(); ++l) imMz[l] = solve_mz(points[l].z(), Complex(0, etas[l])).m.imag();

    std::vector<double> va(samples), vb(samples);
    parallel_for(samples, workers, [&](int i) {
        const std::uint64_t s = rng::task_seed(seed, i);
        va[i] = product_statistic(drawA(s), points, etas, imMz);
        vb[i] = product_statistic(drawB(s), points, etas, imMz);
    });
    ComparisonResult out;
    out.meanBase = stats::mean(va);
    out.meanTarget = stats::mean(vb);
    out.seBase = stats::standard_error(va);
    out.seTarget = stats::standard_error(vb);
    out.difference = out.meanBase - out.meanTarget;
    out.combinedSe = std::hypot(out.seBase, out.seTarget);
    return out;
}

}  // namespace

ComparisonResult comparison_experiment(const MatchedPair& pair, const std::vector<BulkPoint>& points,
                                       const std::vector<double>& etas, int samples, std::uint64_t seed,
                                       int workers) {
    if (points.size() != etas.size()) throw DimensionError("comparison_experiment: points/etas size mismatch");
    if (points.size() > 3) throw DomainError("comparison_experiment: k <= 3 required");
    auto drawBase = [&](std::uint64_t s) {
        EnsembleSpec spec = pair.base;
        spec.seed = s;
        return perturb_with_ginibre(sample_matrix(spec), pair.t, rng::mix(s ^ 0xB51CEull));
    };
    auto drawTarget = [&](std::uint64_t s) {
        EnsembleSpec spec = pair.target;
        spec.seed = s;
        return MatrixXd(std::sqrt(1.0 + pair.t) * sample_matrix(spec));
    };
    return run_comparison(drawBase, drawTarget, points, etas, samples, seed, workers);
}

ComparisonResult comparison_experiment_specs(const EnsembleSpec& lawA, double tA, const EnsembleSpec& lawB,
                                             double tB, const std::vector<BulkPoint>& points,
                                             const std::vector<double>& etas, int samples, std::uint64_t seed,
                                             int workers) {
    if (points.size() != etas.size()) throw DimensionError("comparison_experiment: points/etas size mismatch");
    auto draw = [](const EnsembleSpec& law, double t) {
        return [law, t](std::uint64_t s) {
            EnsembleSpec spec = law;
            spec.seed = s;
            MatrixXd m = sample_matrix(spec);
            if (t > 0.0) m = perturb_with_ginibre(m, t, rng::mix(s ^ 0xB51CEull));
            return m;
        };
    };
    return run_comparison(draw(lawA, tA), draw(lawB, tB), points, etas, samples, seed, workers);
}

}  // namespace rmtlab
