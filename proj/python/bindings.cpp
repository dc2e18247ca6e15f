#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rmtlab/correlation.hpp"
#include "rmtlab/ensembles.hpp"
#include "rmtlab/experiment.hpp"
#include "rmtlab/girko.hpp"
#include "rmtlab/hermitization.hpp"
#include "rmtlab/identities.hpp"
#include "rmtlab/mde.hpp"
#include "rmtlab/numkernel.hpp"

namespace py = pybind11;
using namespace rmtlab;

namespace {

EnsembleSpec make_spec(const std::string& family, int n, std::uint64_t seed, double variance,
                       std::optional<std::pair<double, double>> threePoint) {
    EnsembleSpec spec;
    spec.family = family_from_name(family);
    spec.N = n;
    spec.seed = seed;
    spec.variance = variance;
    spec.threePoint = threePoint;
    return spec;
}

py::dict constants_dict(const TraceConstants& c) {
    py::dict d;
    d["etaZT"] = c.etaZT;
    d["g"] = c.g;
    d["alpha"] = c.alpha;
    d["beta"] = c.beta;
    d["gamma"] = c.gamma;
    d["sigma"] = c.sigma;
    d["delta"] = c.delta;
    d["tau"] = c.tau;
    d["upsilon"] = c.upsilon;
    return d;
}

py::dict report_dict(const IdentityReport& r) {
    py::dict d;
    d["name"] = r.name;
    d["lhs"] = r.lhs;
    d["rhs"] = r.rhs;
    d["absError"] = r.absError;
    d["relError"] = r.relError;
    d["mcStderr"] = r.mcStderr;
    d["pass"] = r.pass;
    d["params"] = r.params;
    return d;
}

}  // namespace

PYBIND11_MODULE(_rmtlab, m) {
    m.doc() = "Resolvent, Dyson-equation and correlation machinery for real i.i.d. spectra";
    m.attr("__version__") = kSoftwareVersion;

    py::register_exception<Error>(m, "RmtlabError");

    m.def("pfaffian", &pfaffian_dense, py::arg("matrix"),
          "Pfaffian of an even-dimensional complex skew-symmetric matrix, Pf([[0,a],[-a,0]]) = a");
    m.def(
        "eigenvalues_real", [](const MatrixXd& a) { return eigenvalues_real(a).eigenvalues; }, py::arg("matrix"),
        "Full spectrum of a real square matrix");
    m.def(
        "sample_stiefel2",
        [](int n, std::uint64_t seed) {
            const StiefelPair p = sample_stiefel2(n, seed);
            return std::make_pair(p.v1, p.v2);
        },
        py::arg("n"), py::arg("seed"), "First two columns of a Haar orthogonal matrix");
    m.def("sample_orthogonal", py::overload_cast<int, std::uint64_t>(&sample_orthogonal), py::arg("n"),
          py::arg("seed"));
    m.def("sample_unitary2", py::overload_cast<std::uint64_t>(&sample_unitary2), py::arg("seed"));

    m.def(
        "sample_matrix",
        [](const std::string& family, int n, std::uint64_t seed, double variance,
           std::optional<std::pair<double, double>> threePoint) -> py::object {
            const EnsembleSpec spec = make_spec(family, n, seed, variance, threePoint);
            if (spec.family == Family::ComplexGinibre) return py::cast(sample_matrix_complex(spec));
            return py::cast(sample_matrix(spec));
        },
        py::arg("family"), py::arg("n"), py::arg("seed") = 0, py::arg("variance") = -1.0,
        py::arg("three_point") = std::nullopt, "N x N matrix with i.i.d. entries of the requested law");
    m.def("perturb_with_ginibre", &perturb_with_ginibre, py::arg("a"), py::arg("t"), py::arg("seed"));
    m.def(
        "construct_matched_pair",
        [](const std::string& family, int n, double t, double delta) {
            EnsembleSpec target;
            target.family = family_from_name(family);
            target.N = n;
            const MatchedPair pair = construct_matched_pair(target, t, delta);
            py::dict d;
            d["baseFamily"] = family_name(pair.base.family);
            if (pair.base.threePoint) d["threePoint"] = *pair.base.threePoint;
            d["achievedMoments"] = pair.achievedMoments;
            d["targetMoments"] = pair.targetMoments;
            d["fourthMomentGap"] = pair.fourthMomentGap;
            return d;
        },
        py::arg("family"), py::arg("n"), py::arg("t"), py::arg("delta") = 0.1);

    m.def(
        "solve_eta_zt",
        [](const MatrixXd& a, double za, double zb, double t) { return solve_eta_zt(a, BulkPoint{za, zb}, t); },
        py::arg("a"), py::arg("z_re"), py::arg("z_im"), py::arg("t"));
    m.def(
        "compute_constants",
        [](const MatrixXd& a, double za, double zb, double t) {
            return constants_dict(compute_constants(a, BulkPoint{za, zb}, t));
        },
        py::arg("a"), py::arg("z_re"), py::arg("z_im"), py::arg("t"));
    m.def(
        "q_matrix",
        [](const MatrixXd& a, double pa, double pb, double theta, double eta) {
            return q_matrix(a, ShiftParams{pa, pb, theta}, eta);
        },
        py::arg("a"), py::arg("shift_a"), py::arg("shift_b"), py::arg("theta"), py::arg("eta"));
    m.def(
        "three_vector",
        [](const MatrixXd& a, double pa, double pb, double theta, double eta, double t) {
            return three_vector(a, ShiftParams{pa, pb, theta}, eta, t);
        },
        py::arg("a"), py::arg("shift_a"), py::arg("shift_b"), py::arg("theta"), py::arg("eta"), py::arg("t"));
    m.def(
        "g_matrix",
        [](const MatrixXd& a, double za, double zb, double t) {
            return Eigen::MatrixXcd(g_matrix(a, BulkPoint{za, zb}, t));
        },
        py::arg("a"), py::arg("z_re"), py::arg("z_im"), py::arg("t"));
    m.def(
        "lambda_block_traces",
        [](const MatrixXd& a, double pa, double pb, double theta, double eta) {
            return Eigen::MatrixXcd(LambdaResolvent(a, ShiftParams{pa, pb, theta}, eta).block_traces());
        },
        py::arg("a"), py::arg("shift_a"), py::arg("shift_b"), py::arg("theta"), py::arg("eta"));

    m.def(
        "solve_mde",
        [](double a, double b, double theta, double eta) {
            const MdeSolution sol = solve_mde(ShiftParams{a, b, theta}, eta);
            py::dict d;
            d["m"] = Eigen::MatrixXcd(sol.m);
            d["residual"] = sol.residual;
            d["iterations"] = sol.iterations;
            return d;
        },
        py::arg("a"), py::arg("b"), py::arg("theta"), py::arg("eta"));
    m.def(
        "x_spectrum",
        [](double a, double b, double theta, double eta) {
            return x_spectrum(solve_mde(ShiftParams{a, b, theta}, eta)).eigenvalues;
        },
        py::arg("a"), py::arg("b"), py::arg("theta"), py::arg("eta"));
    m.def(
        "solve_mz", [](Complex z, Complex w) { return solve_mz(z, w).m; }, py::arg("z"), py::arg("w"),
        "Unique solution of -1/m = w + m - |z|^2/(w+m) with Im(m) Im(w) > 0");

    m.def("ginue_rho", &ginue_rho, py::arg("points"));
    m.def("ginue_pair_radial", &ginue_pair_radial, py::arg("r"));

    m.def(
        "girko_functional",
        [](const MatrixXd& x, double za, double zb, double epsilon, double radius, double amplitude) {
            TestFunction f;
            f.radius = radius;
            f.amplitude = amplitude;
            const GirkoResult res = girko_functional(x, f, BulkPoint{za, zb}, epsilon);
            py::dict d;
            d["direct"] = res.direct;
            d["integral"] = res.integral;
            d["discrepancy"] = res.discrepancy;
            return d;
        },
        py::arg("x"), py::arg("z_re"), py::arg("z_im"), py::arg("epsilon") = 0.3, py::arg("radius") = 1.0,
        py::arg("amplitude") = 1.0);

    m.def(
        "verify_jacobian",
        [](int n, double theta, std::uint64_t seed) { return report_dict(verify_jacobian(random_phi_point(n, theta, seed))); },
        py::arg("n"), py::arg("theta"), py::arg("seed"));
    m.def(
        "verify_det_ratio",
        [](const MatrixXd& a, double pa, double pb, double theta, double eta) {
            return report_dict(verify_det_ratio(a, ShiftParams{pa, pb, theta}, eta));
        },
        py::arg("a"), py::arg("shift_a"), py::arg("shift_b"), py::arg("theta"), py::arg("eta"));
    m.def(
        "verify_pfaffian_identity",
        [](int n, double t, Complex l1, Complex l2, const MatrixXd& a2, long mcSamples, std::uint64_t seed) {
            return report_dict(verify_pfaffian_identity(n, t, l1, l2, a2, mcSamples, seed));
        },
        py::arg("n"), py::arg("t"), py::arg("lambda1"), py::arg("lambda2"), py::arg("a2"),
        py::arg("mc_samples") = 100000, py::arg("seed") = 1);
}
