#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "rmtlab/numkernel.hpp"
#include "rmtlab/types.hpp"

namespace rmtlab {

enum class Family { Gaussian, Rademacher, Uniform, ComplexGinibre, Custom };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// Description of an i.i.d. entry law. Entries are standardized (mean 0,
/// variance 1) and the 1/sqrt(N) scale is applied once at sampling time so
/// that E|A_ij|^2 = variance (default 1/N).
struct EnsembleSpec {
    Family family = Family::Gaussian;
    int N = 1;
    double variance = -1.0;  // entry variance; negative means 1/N
    std::uint64_t seed = 0;
    // Custom three-point law +/-a with probability p each, 0 otherwise,
    // in standardized units (before the 1/sqrt(N) scale).
    std::optional<std::pair<double, double>> threePoint;  // (a, p)

    double entry_variance() const { return variance > 0 ? variance : 1.0 / N; }

    /// Standardized moments m1..m4 of the unscaled entry law.
    std::array<double, 4> standardized_moments() const;
};

struct MatchedPair {
    EnsembleSpec base;        // law of the matrix to be perturbed
    EnsembleSpec target;      // law being matched (before the sqrt(1+t) scale)
    double t = 0.0;
    double delta = 0.1;
    // standardized moments 1..4 of base + sqrt(t) * Gaussian and of the
    // sqrt(1+t)-scaled target law
    std::array<double, 4> achievedMoments{};
    std::array<double, 4> targetMoments{};
    double fourthMomentGap = 0.0;
};

/// Real (or complex, for ComplexGinibre) N x N matrix with i.i.d. entries of
/// the requested law; deterministic per seed.
MatrixXd sample_matrix(const EnsembleSpec& spec);
MatrixXd sample_matrix(const EnsembleSpec& spec, rng::Philox& gen);
MatrixXcd sample_matrix_complex(const EnsembleSpec& spec);

/// A + sqrt(t) B with B a real Ginibre matrix drawn from `seed`.
MatrixXd perturb_with_ginibre(const MatrixXd& a, double t, std::uint64_t seed);

/// Law for the base matrix of the comparison experiment: base + sqrt(t) B
/// matches the sqrt(1+t)-scaled target in moments 1-3 exactly and in the
/// fourth moment within N^(-2-delta). Throws InfeasibleMomentsError when the
/// required fourth moment falls below the floor attainable by a real law.
MatchedPair construct_matched_pair(const EnsembleSpec& target, double t, double delta);

/// Required standardized moments 1..4 of the base law (throws nothing).
std::array<double, 4> matched_base_moments(const EnsembleSpec& target, double t);

/// Three-point law hitting target moments (0, m2, 0, m4) exactly; throws
/// InfeasibleMomentsError when m4 < m2^2 (below the real-law floor).
EnsembleSpec custom_from_moments(int n, double m2, double m4);

}  // namespace rmtlab
