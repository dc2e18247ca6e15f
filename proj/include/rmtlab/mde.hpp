#pragma once

#include <vector>

#include "rmtlab/ensembles.hpp"
#include "rmtlab/hermitization.hpp"
#include "rmtlab/types.hpp"

namespace rmtlab {

/// Solution of the 4x4 matrix Dyson equation
///   (i eta + Z + S(m)) m + I = 0,   eta Im(m) > 0,
/// where m is the block-constant representative of M(eta) = m (x) I_N.
struct MdeSolution {
    Matrix4cd m;
    double eta = 0.0;
    ShiftParams params;
    double residual = 0.0;
    int iterations = 0;
};

struct StabilitySpectrum {
    VectorXcd eigenvalues;  // 16 eigenvalues of X(T) = T - S(m T m)
    double betaPlus = 0.0;
    double betaMinus = 0.0;
    double gammaPlus = 0.0;
    double gammaMinus = 0.0;
};

struct ScalarMz {
    Complex z;
    Complex w;
    Complex m;
    double residual = 0.0;
};

struct SmallEtaExpansion {
    Matrix2cd leading;     // i sqrt(1-a^2-b^2) diag(cot theta, tan theta)
    Matrix2d correction;   // symmetric S with M11(eta) = leading + i eta S + O(eta^2)
};

/// The permuted-block-trace operator of the Dyson equation, reduced to 4x4:
/// S(t) places (t33 t34; t43 t44) in the upper diagonal block and
/// (t11 t12; t21 t22) in the lower one.
Matrix4cd s_operator(const Matrix4cd& t);

/// 4x4 representative of Z_{a,b,theta} = [[0, Lambda], [Lambda^T, 0]].
Matrix4cd z_representative(const ShiftParams& p);

MdeSolution solve_mde(const ShiftParams& p, double eta);

SmallEtaExpansion small_eta_expansion(const ShiftParams& p);

StabilitySpectrum x_spectrum(const MdeSolution& sol);

/// Unique solution of -1/m = w + m - |z|^2/(w+m) with Im(m) Im(w) > 0.
ScalarMz solve_mz(Complex z, Complex w);

/// Applies X(T) = T - S(m T m) for the stability operator of `sol`.
Matrix4cd apply_stability(const MdeSolution& sol, const Matrix4cd& t);

/// Solves X(out) = rhs for the stability operator of `sol`.
Matrix4cd solve_stability(const MdeSolution& sol, const Matrix4cd& rhs);

struct ScalingRecord {
    std::vector<int> Ns;
    std::vector<double> medians;
    std::vector<double> p90s;
    int samplesPerN = 0;
    double eta = 0.0;
    double slope = 0.0;       // least-squares slope of log(median) vs log N
    bool slopeValid = false;  // set when the sweep has >= 2 sizes
};

/// Per-sample max over (alpha,beta) of |<(G_{a,b,theta}(eta) - M(eta)) E_{alpha beta}>|,
/// swept over matrix sizes. The normalized trace is over 4N.
ScalingRecord local_law_stats(const EnsembleSpec& spec, const ShiftParams& p, double eta, int samples,
                              const std::vector<int>& Ns, int workers = 1);

struct BlockPair {
    int alpha, beta, alphaP, betaP;  // 0-based block indices
};

/// Two-resolvent statistics |<G E G E'> - <M E M X^{-1}(E')>| with the same
/// summaries. Only block pairs within {2,3}^2 x {2,3}^2 are supported (these
/// stay inside the H~ side of the resolvent).
ScalingRecord two_resolvent_stats(const EnsembleSpec& spec, const ShiftParams& p, double eta,
                                  const std::vector<BlockPair>& pairs, int samples, const std::vector<int>& Ns,
                                  int workers = 1, int* orderingChoice = nullptr);

/// Fits a power law through (N, median) pairs; returns the log-log slope.
double fit_loglog_slope(const std::vector<int>& Ns, const std::vector<double>& medians);

}  // namespace rmtlab
