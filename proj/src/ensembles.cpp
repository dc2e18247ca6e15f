#include "rmtlab/ensembles.hpp"

#include <cmath>

namespace rmtlab {

std::string family_name(Family f) {
    switch (f) {
        case Family::Gaussian: return "gaussian";
        case Family::Rademacher: return "rademacher";
        case Family::Uniform: return "uniform";
        case Family::ComplexGinibre: return "complexGinibre";
        case Family::Custom: return "custom";
    }
    throw DomainError("unknown family");
}

Family family_from_name(const std::string& name) {
    if (name == "gaussian") return Family::Gaussian;
    if (name == "rademacher") return Family::Rademacher;
    if (name == "uniform") return Family::Uniform;
    if (name == "complexGinibre") return Family::ComplexGinibre;
    if (name == "custom") return Family::Custom;
    throw ValidationError("unknown ensemble family: " + name);
}

std::array<double, 4> EnsembleSpec::standardized_moments() const {
    switch (family) {
        case Family::Gaussian: return {0.0, 1.0, 0.0, 3.0};
        case Family::Rademacher: return {0.0, 1.0, 0.0, 1.0};
        case Family::Uniform: return {0.0, 1.0, 0.0, 9.0 / 5.0};
        case Family::ComplexGinibre: return {0.0, 1.0, 0.0, 2.0};  // moments of |x|
        case Family::Custom: {
            if (!threePoint) throw ValidationError("custom ensemble requires threePoint parameters");
            const double a = threePoint->first, p = threePoint->second;
            return {0.0, 2 * p * a * a, 0.0, 2 * p * a * a * a * a};
        }
    }
    throw DomainError("unknown family");
}

namespace {

double draw_standardized(Family family, const std::optional<std::pair<double, double>>& tp, rng::Philox& gen) {
    switch (family) {
        case Family::Gaussian: return gen.normal();
        case Family::Rademacher: return gen.uniform() < 0.5 ? 1.0 : -1.0;
        case Family::Uniform: return (2.0 * gen.uniform() - 1.0) * 1.7320508075688772;
        case Family::Custom: {
            const double a = tp->first, p = tp->second;
            const double u = gen.uniform();
            if (u < p) return a;
            if (u < 2 * p) return -a;
            return 0.0;
        }
        case Family::ComplexGinibre: throw DomainError("complexGinibre has no real entry law");
    }
    throw DomainError("unknown family");
}

}  // namespace

MatrixXd sample_matrix(const EnsembleSpec& spec, rng::Philox& gen) {
    if (spec.N < 1) throw DomainError("sample_matrix: N >= 1 required");
    if (spec.family == Family::ComplexGinibre)
        throw DomainError("sample_matrix: complexGinibre requires sample_matrix_complex");
    if (spec.family == Family::Custom) {
        if (!spec.threePoint) throw ValidationError("custom ensemble requires threePoint parameters");
        const auto [a, p] = *spec.threePoint;
        if (!(p > 0.0) || p > 0.5 || !(a > 0.0))
            throw InfeasibleMomentsError("three-point law requires a > 0 and 0 < p <= 1/2");
    }
    const double scale = std::sqrt(spec.entry_variance());
    MatrixXd m(spec.N, spec.N);
    for (int j = 0; j < spec.N; ++j)
        for (int i = 0; i < spec.N; ++i) m(i, j) = scale * draw_standardized(spec.family, spec.threePoint, gen);
    return m;
}

MatrixXd sample_matrix(const EnsembleSpec& spec) {
    rng::Philox gen(spec.seed);
    return sample_matrix(spec, gen);
}

MatrixXcd sample_matrix_complex(const EnsembleSpec& spec) {
    if (spec.N < 1) throw DomainError("sample_matrix_complex: N >= 1 required");
    rng::Philox gen(spec.seed);
    if (spec.family != Family::ComplexGinibre) return sample_matrix(spec, gen).cast<Complex>();
    const double scale = std::sqrt(spec.entry_variance());
    return scale * complex_gaussian_matrix(spec.N, spec.N, gen);
}

MatrixXd perturb_with_ginibre(const MatrixXd& a, double t, std::uint64_t seed) {
    if (t < 0.0) throw DomainError("perturb_with_ginibre: t >= 0 required");
    if (t == 0.0) return a;
    const int n = static_cast<int>(a.rows());
    rng::Philox gen(seed);
    const double scale = std::sqrt(t / n);
    MatrixXd out = a;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) out(i, j) += scale * gen.normal();
    return out;
}

std::array<double, 4> matched_base_moments(const EnsembleSpec& target, double t) {
    const auto m = target.standardized_moments();
    // base + sqrt(t) g must match sqrt(1+t) * target entrywise in law up to
    // the fourth moment, with g standard Gaussian:
    //   m2_base + t     = (1+t)   m2
    //   m3_base         = (1+t)^{3/2} m3
    //   m4_base + 6 t m2_base + 3 t^2 = (1+t)^2 m4
    const double m2b = (1 + t) * m[1] - t;
    const double m3b = std::pow(1 + t, 1.5) * m[2];
    const double m4b = (1 + t) * (1 + t) * m[3] - 6 * t * m2b - 3 * t * t;
    return {0.0, m2b, m3b, m4b};
}

EnsembleSpec custom_from_moments(int n, double m2, double m4) {
    if (!(m2 > 0.0)) throw InfeasibleMomentsError("custom_from_moments: m2 > 0 required");
    if (m4 < m2 * m2)
        throw InfeasibleMomentsError("custom_from_moments: m4 = " + std::to_string(m4) +
                                     " violates the moment inequality m4 >= m2^2");
    EnsembleSpec spec;
    spec.family = Family::Custom;
    spec.N = n;
    const double a2 = m4 / m2;
    spec.threePoint = std::make_pair(std::sqrt(a2), m2 / (2 * a2));
    return spec;
}

MatchedPair construct_matched_pair(const EnsembleSpec& target, double t, double delta) {
    if (!(t > 0.0) || t >= 1.0) throw DomainError("construct_matched_pair: 0 < t < 1 required");
    if (delta <= 0.0) delta = 0.1;
    const auto need = matched_base_moments(target, t);

    MatchedPair pair;
    pair.target = target;
    pair.t = t;
    pair.delta = delta;
    const auto tm = target.standardized_moments();
    const double s = 1 + t;
    pair.targetMoments = {0.0, s * tm[1], std::pow(s, 1.5) * tm[2], s * s * tm[3]};

    pair.base = target;
    pair.base.variance = target.entry_variance();
    if (target.family == Family::Gaussian) {
        // Gaussian case is exact: the base stays Gaussian with variance
        // (1 + t - t)/N and all four moments match with zero gap.
        pair.base.family = Family::Gaussian;
    } else {
        if (need[1] <= 0.0)
            throw InfeasibleMomentsError("matched base law needs positive variance; t too large");
        // Three-point law +/-a w.p. p, 0 w.p. 1-2p hitting the required
        // second and fourth moments exactly.
        if (need[3] < need[1] * need[1])
            throw InfeasibleMomentsError(
                "required fourth moment " + std::to_string(need[3]) +
                " is below the floor attainable by a real law with variance " + std::to_string(need[1]));
        const EnsembleSpec custom = custom_from_moments(target.N, need[1], need[3]);
        pair.base.family = Family::Custom;
        pair.base.threePoint = custom.threePoint;
    }

    const auto bm = pair.base.standardized_moments();
    pair.achievedMoments = {bm[0], bm[1] + t, bm[2], bm[3] + 6 * t * bm[1] + 3 * t * t};
    pair.fourthMomentGap = pair.achievedMoments[3] - pair.targetMoments[3];
    const double bound = std::pow(static_cast<double>(target.N), -2.0 - delta);
    if (std::abs(pair.fourthMomentGap) > bound)
        throw InfeasibleMomentsError("fourth-moment gap " + std::to_string(pair.fourthMomentGap) +
                                     " exceeds N^(-2-delta) = " + std::to_string(bound));
    return pair;
}

}  // namespace rmtlab
