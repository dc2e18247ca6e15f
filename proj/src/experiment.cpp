#include "rmtlab/experiment.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "rmtlab/correlation.hpp"
#include "rmtlab/girko.hpp"
#include "rmtlab/identities.hpp"
#include "rmtlab/lapack.hpp"
#include "rmtlab/mde.hpp"
#include "rmtlab/parallel.hpp"
#include "rmtlab/stats.hpp"

namespace rmtlab {

const char* kSoftwareVersion = "0.1.0";

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ValidationError("unknown key '" + it.key() + "' in " + where);
}

/// Writes content to a temp file in the target directory and renames it into
/// place, so partial outputs never appear under the final name.
void atomic_write(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    const fs::path tmp = path.parent_path() / (".tmp." + path.filename().string());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

EnsembleSpec spec_from_json(const json& j) {
    require_keys(j, {"family", "N", "variance", "seed", "threePoint"}, "ensemble spec");
    EnsembleSpec spec;
    spec.family = family_from_name(j.at("family").get<std::string>());
    spec.N = j.at("N").get<int>();
    if (j.contains("variance")) spec.variance = j["variance"].get<double>();
    if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threePoint"))
        spec.threePoint = std::make_pair(j["threePoint"].at(0).get<double>(), j["threePoint"].at(1).get<double>());
    return spec;
}

json spec_to_json(const EnsembleSpec& spec) {
    json j;
    j["family"] = family_name(spec.family);
    j["N"] = spec.N;
    if (spec.variance > 0) j["variance"] = spec.variance;
    j["seed"] = spec.seed;
    if (spec.threePoint) j["threePoint"] = {spec.threePoint->first, spec.threePoint->second};
    return j;
}

json report_to_json(const IdentityReport& r) {
    json j;
    j["name"] = r.name;
    j["lhs"] = {r.lhs.real(), r.lhs.imag()};
    j["rhs"] = {r.rhs.real(), r.rhs.imag()};
    j["absError"] = r.absError;
    j["relError"] = r.relError;
    j["mcStderr"] = r.mcStderr;
    j["pass"] = r.pass;
    j["budgetOk"] = r.budgetOk;
    j["params"] = r.params;
    return j;
}

std::string scaling_csv(const ScalingRecord& rec) {
    std::ostringstream os;
    os.precision(17);
    os << "N,eta,median,p90,samples,slope\n";
    for (std::size_t i = 0; i < rec.Ns.size(); ++i)
        os << rec.Ns[i] << "," << rec.eta << "," << rec.medians[i] << "," << rec.p90s[i] << "," << rec.samplesPerN
           << "," << rec.slope << "\n";
    return os.str();
}

std::string estimate_csv(const CorrelationEstimate& est) {
    std::ostringstream os;
    os.precision(17);
    os << "bin_lo,bin_hi,rho_hat,stderr\n";
    for (std::size_t b = 0; b < est.values.size(); ++b)
        os << est.binLo[b] << "," << est.binHi[b] << "," << est.values[b] << "," << est.stderrs[b] << "\n";
    return os.str();
}

ShiftParams shift_from_json(const json& j) {
    ShiftParams p;
    if (j.contains("a")) p.a = j["a"].get<double>();
    if (j.contains("b")) p.b = j["b"].get<double>();
    if (j.contains("theta")) p.theta = j["theta"].get<double>();
    return p;
}

void run_sample(const ExperimentConfig& config, ExperimentResult& result) {
    require_keys(config.parameters, {"family", "N", "variance", "threePoint"}, "sample parameters");
    json specJson = config.parameters;
    specJson["seed"] = config.masterSeed;
    const EnsembleSpec spec = spec_from_json(specJson);
    std::ostringstream os;
    os.precision(17);
    for (int j = 0; j < spec.N; ++j) os << "c" << j << (j + 1 == spec.N ? "\n" : ",");
    if (spec.family == Family::ComplexGinibre) {
        const MatrixXcd m = sample_matrix_complex(spec);
        for (int i = 0; i < m.rows(); ++i) {
            for (int j = 0; j < m.cols(); ++j)
                os << m(i, j).real() << (m(i, j).imag() < 0 ? "" : "+") << m(i, j).imag() << "i"
                   << (j + 1 == m.cols() ? "" : ",");
            os << "\n";
        }
    } else {
        const MatrixXd m = sample_matrix(spec);
        for (int i = 0; i < m.rows(); ++i) {
            for (int j = 0; j < m.cols(); ++j) os << m(i, j) << (j + 1 == m.cols() ? "" : ",");
            os << "\n";
        }
    }
    const fs::path path = fs::path(config.outputDir) / "sample.csv";
    atomic_write(path, os.str());
    result.artifacts.push_back(path.string());
    result.summary["entries"] = spec.N * spec.N;
    result.summary["ensemble"] = spec_to_json(spec);
    result.pass = true;
}

void run_local_law(const ExperimentConfig& config, ExperimentResult& result, bool twoResolvent) {
    require_keys(config.parameters, {"family", "Ns", "eta", "shift", "samples", "pairs", "slopeTolerance"},
                 (twoResolvent ? "twoResolvent" : "localLaw") + std::string(" parameters"));
    json specJson;
    specJson["family"] = config.parameters.value("family", "gaussian");
    specJson["N"] = 1;
    EnsembleSpec spec = spec_from_json(specJson);
    spec.seed = config.masterSeed;
    const ShiftParams p = shift_from_json(config.parameters.value("shift", json::object()));
    const double eta = config.parameters.at("eta").get<double>();
    const int samples = config.parameters.value("samples", 200);
    std::vector<int> ns = config.parameters.at("Ns").get<std::vector<int>>();

    ScalingRecord rec;
    int ordering = 0;
    if (twoResolvent) {
        std::vector<BlockPair> pairs;
        if (config.parameters.contains("pairs")) {
            for (const auto& pj : config.parameters["pairs"])
                pairs.push_back({pj.at(0).get<int>(), pj.at(1).get<int>(), pj.at(2).get<int>(), pj.at(3).get<int>()});
        } else {
            pairs = {{2, 2, 2, 2}, {2, 2, 3, 3}, {2, 3, 3, 2}};
        }
        rec = two_resolvent_stats(spec, p, eta, pairs, samples, ns, config.workers, &ordering);
        result.summary["xinvOrdering"] = ordering;
    } else {
        rec = local_law_stats(spec, p, eta, samples, ns, config.workers);
    }
    const fs::path path = fs::path(config.outputDir) / (twoResolvent ? "two_resolvent.csv" : "local_law.csv");
    atomic_write(path, scaling_csv(rec));
    result.artifacts.push_back(path.string());
    json plotSpec;
    plotSpec["axes"] = {{"x", "N (log)"}, {"y", "median error (log)"}};
    plotSpec["series"].push_back({{"label", twoResolvent ? "two-resolvent" : "one-resolvent"},
                                  {"file", path.filename().string()}});
    plotSpec["reference"] = {{"label", "slope -1"}, {"form", "c/N"}};
    const fs::path specPath = fs::path(config.outputDir) / "plot_spec.json";
    atomic_write(specPath, plotSpec.dump(2));
    result.artifacts.push_back(specPath.string());
    result.summary["slope"] = rec.slope;
    const double tol = config.parameters.value("slopeTolerance", twoResolvent ? 0.4 : 0.3);
    result.pass = rec.slopeValid && std::abs(rec.slope + 1.0) <= tol;
    for (int i = 0; i < samples; ++i) result.perTaskSeeds.push_back(rng::task_seed(config.masterSeed, i));
}

void run_universality(const ExperimentConfig& config, ExperimentResult& result) {
    require_keys(config.parameters, {"configs", "z", "window", "bins"}, "universality parameters");
    BulkPoint z{config.parameters.at("z").at("a").get<double>(), config.parameters.at("z").at("b").get<double>()};
    const double window = config.parameters.value("window", 4.0);
    const int bins = config.parameters.value("bins", 24);
    std::vector<UniversalityConfig> configs;
    int idx = 0;
    for (const auto& cj : config.parameters.at("configs")) {
        require_keys(cj, {"label", "family", "N", "t", "sigma", "samples"}, "universality config");
        UniversalityConfig uc;
        uc.label = cj.value("label", "config" + std::to_string(idx));
        json specJson;
        specJson["family"] = cj.at("family");
        specJson["N"] = cj.at("N");
        uc.ensemble = spec_from_json(specJson);
        uc.t = cj.value("t", 0.0);
        uc.sigma = cj.value("sigma", 0.0);
        uc.samples = cj.value("samples", 100);
        uc.seed = rng::task_seed(config.masterSeed, 777 + idx);
        configs.push_back(uc);
        ++idx;
    }
    const UniversalityReport report = universality_report(configs, z, window, bins, config.workers);
    json summary;
    bool pass = true;
    for (const auto& entry : report.entries) {
        const fs::path path = fs::path(config.outputDir) / ("paircorr_" + entry.label + ".csv");
        atomic_write(path, estimate_csv(entry.estimate));
        result.artifacts.push_back(path.string());
        json ej;
        ej["label"] = entry.label;
        ej["sigma"] = entry.sigmaUsed;
        ej["chi2"] = entry.againstGinue.statistic;
        ej["dof"] = entry.againstGinue.dof;
        ej["pValue"] = entry.againstGinue.pValue;
        summary["entries"].push_back(ej);
    }
    for (const auto& [i, j, sigma] : report.pairwiseMaxSigma) {
        summary["pairwiseMaxSigma"].push_back({i, j, sigma});
        if (sigma > 3.0) pass = false;
    }
    json plotSpec;
    plotSpec["axes"] = {{"x", "pair separation r"}, {"y", "rho^(2)(r)"}};
    for (const auto& entry : report.entries)
        plotSpec["series"].push_back({{"label", entry.label}, {"file", "paircorr_" + entry.label + ".csv"}});
    plotSpec["reference"] = {{"label", "(1/pi^2)(1 - exp(-r^2))"}, {"form", "ginue_pair_radial"}};
    const fs::path specPath = fs::path(config.outputDir) / "plot_spec.json";
    atomic_write(specPath, plotSpec.dump(2));
    result.artifacts.push_back(specPath.string());
    result.summary = summary;
    result.pass = pass;
}

void run_identities(const ExperimentConfig& config, ExperimentResult& result) {
    require_keys(config.parameters,
                 {"checks", "N", "t", "shift", "mcSamples", "jacobianSeeds", "detRatioSeeds", "hcizPairs"},
                 "identities parameters");
    const auto checks = config.parameters.value("checks", std::vector<std::string>{"jacobian", "detRatio"});
    const int n = config.parameters.value("N", 5);
    const double t = config.parameters.value("t", 1.0);
    const long mcSamples = config.parameters.value("mcSamples", 100000L);
    const ShiftParams p = shift_from_json(config.parameters.value("shift", json::object()));

    std::vector<IdentityReport> reports;
    json extra;
    for (const std::string& check : checks) {
        if (check == "jacobian") {
            const int seeds = config.parameters.value("jacobianSeeds", 5);
            for (int s = 0; s < seeds; ++s)
                reports.push_back(verify_jacobian(random_phi_point(n, p.theta, rng::task_seed(config.masterSeed, s))));
        } else if (check == "pfaffian") {
            rng::Philox gen(rng::task_seed(config.masterSeed, 11));
            MatrixXd a2 = gaussian_matrix(n - 4, n - 4, gen);
            reports.push_back(verify_pfaffian_identity(n, t, Complex(0.3, 0.4), Complex(-0.1, 0.2), a2, mcSamples,
                                                       rng::task_seed(config.masterSeed, 12)));
        } else if (check == "stiefelGaussian") {
            reports.push_back(verify_stiefel_gaussian(std::max(n, 5), p, t, mcSamples,
                                                      rng::task_seed(config.masterSeed, 13)));
        } else if (check == "detRatio") {
            const int seeds = config.parameters.value("detRatioSeeds", 5);
            for (int s = 0; s < seeds; ++s) {
                EnsembleSpec spec;
                spec.N = std::max(n, 10);
                spec.seed = rng::task_seed(config.masterSeed, 100 + s);
                reports.push_back(verify_det_ratio(sample_matrix(spec), p, 0.5));
            }
        } else if (check == "hciz") {
            std::vector<std::pair<Complex, Complex>> zPairs;
            const int npairs = config.parameters.value("hcizPairs", 5);
            rng::Philox gen(rng::task_seed(config.masterSeed, 21));
            for (int q = 0; q < npairs; ++q)
                zPairs.emplace_back(Complex(gen.normal(), gen.normal()) * 0.5,
                                    Complex(gen.normal(), gen.normal()) * 0.5);
            const HcizReport hr = verify_hciz_ratio(zPairs, mcSamples, rng::task_seed(config.masterSeed, 22));
            reports.push_back(hr.summary);
            extra["hcizMaxPairDiff"] = hr.maxPairDiff;
            extra["hcizMaxDeviation"] = hr.maxDeviation;
        } else if (check == "threeVector") {
            EnsembleSpec spec;
            spec.N = std::max(n, 100);
            spec.seed = rng::task_seed(config.masterSeed, 31);
            const MatrixXd a = sample_matrix(spec);
            const BulkPoint z{p.a, p.b};
            const double eta = solve_eta_zt(a, z, t);
            const Vector3d v = three_vector(a, ShiftParams{p.a, p.b, 0.78539816339744830962}, eta, t);
            IdentityReport rep;
            rep.name = "threeVector";
            rep.lhs = v.cwiseAbs().maxCoeff();
            rep.rhs = 0.0;
            rep.absError = std::abs(rep.lhs);
            rep.relError = rep.absError / (spec.N / t);
            rep.pass = rep.relError < 1e-8;
            rep.params = "{\"N\":" + std::to_string(spec.N) + ",\"t\":" + std::to_string(t) + "}";
            reports.push_back(rep);
        } else {
            throw ValidationError("unknown identity check: " + check);
        }
    }

    json summary;
    std::ostringstream table;
    table << "name,lhs,rhs,relError,mcStderr,pass\n";
    bool pass = true;
    for (const auto& r : reports) {
        const fs::path path = fs::path(config.outputDir) / ("identity_" + r.name + "_" +
                                                            std::to_string(&r - reports.data()) + ".json");
        atomic_write(path, report_to_json(r).dump(2));
        result.artifacts.push_back(path.string());
        table.precision(12);
        table << r.name << "," << r.lhs.real() << "," << r.rhs.real() << "," << r.relError << "," << r.mcStderr
              << "," << (r.pass ? "true" : "false") << "\n";
        summary["reports"].push_back(report_to_json(r));
        pass = pass && r.pass;
    }
    if (!extra.is_null()) summary.update(extra);
    const fs::path tablePath = fs::path(config.outputDir) / "identities_summary.csv";
    atomic_write(tablePath, table.str());
    result.artifacts.push_back(tablePath.string());
    result.summary = summary;
    result.pass = pass;
}

void run_girko(const ExperimentConfig& config, ExperimentResult& result) {
    require_keys(config.parameters, {"mode", "family", "N", "seeds", "epsilon", "z", "f", "t", "delta", "samples"},
                 "girko parameters");
    const std::string mode = config.parameters.value("mode", "transfer");
    BulkPoint z{config.parameters.at("z").at("a").get<double>(), config.parameters.at("z").at("b").get<double>()};
    if (mode == "transfer") {
        const int n = config.parameters.value("N", 300);
        const int seeds = config.parameters.value("seeds", 20);
        const double epsilon = config.parameters.value("epsilon", 0.3);
        TestFunction f;
        if (config.parameters.contains("f")) {
            const auto& fj = config.parameters["f"];
            require_keys(fj, {"center", "radius", "amplitude"}, "girko test function");
            if (fj.contains("center")) f.center = Complex(fj["center"].at(0).get<double>(), fj["center"].at(1).get<double>());
            f.radius = fj.value("radius", 1.0);
            f.amplitude = fj.value("amplitude", 1.0);
        }
        EnsembleSpec spec;
        spec.family = family_from_name(config.parameters.value("family", "gaussian"));
        spec.N = n;
        std::vector<GirkoResult> rows(seeds);
        parallel_for(seeds, config.workers, [&](int i) {
            EnsembleSpec s = spec;
            s.seed = rng::task_seed(config.masterSeed, i);
            rows[i] = girko_functional(sample_matrix(s), f, z, epsilon);
        });
        std::ostringstream os;
        os.precision(17);
        os << "seed,direct,integral,discrepancy\n";
        std::vector<double> discrepancies;
        for (int i = 0; i < seeds; ++i) {
            os << rng::task_seed(config.masterSeed, i) << "," << rows[i].direct << "," << rows[i].integral << ","
               << rows[i].discrepancy << "\n";
            discrepancies.push_back(rows[i].discrepancy);
        }
        const fs::path path = fs::path(config.outputDir) / "girko.csv";
        atomic_write(path, os.str());
        result.artifacts.push_back(path.string());
        const double l1 = f.laplacian_l1();
        const double median = stats::percentile(discrepancies, 0.5);
        result.summary["medianDiscrepancy"] = median;
        result.summary["laplacianL1"] = l1;
        result.pass = median < 0.1 * l1;
    } else if (mode == "comparison") {
        EnsembleSpec target;
        target.family = family_from_name(config.parameters.value("family", "gaussian"));
        target.N = config.parameters.value("N", 400);
        const double t = config.parameters.value("t", 0.1);
        const double delta = config.parameters.value("delta", 0.1);
        const MatchedPair pair = construct_matched_pair(target, t, delta);
        std::vector<BulkPoint> points{z};
        std::vector<double> etas{1.0 / target.N};
        const int samples = config.parameters.value("samples", 200);
        const auto res = comparison_experiment(pair, points, etas, samples, config.masterSeed, config.workers);
        result.summary["difference"] = res.difference;
        result.summary["combinedSe"] = res.combinedSe;
        result.pass = std::abs(res.difference) <= 3.0 * res.combinedSe;
    } else {
        throw ValidationError("unknown girko mode: " + mode);
    }
}

void run_mde(const ExperimentConfig& config, ExperimentResult& result) {
    require_keys(config.parameters, {"shift", "etas"}, "mde parameters");
    const ShiftParams p = shift_from_json(config.parameters.value("shift", json::object()));
    std::vector<double> etas = config.parameters.value("etas", std::vector<double>{1.0, 1e-2, 1e-4});
    std::ostringstream os;
    os.precision(17);
    os << "eta,residual,iterations,minXEigenvalue\n";
    bool pass = true;
    for (double eta : etas) {
        const MdeSolution sol = solve_mde(p, eta);
        const StabilitySpectrum spec = x_spectrum(sol);
        double minAbs = 1e300;
        for (int i = 0; i < spec.eigenvalues.size(); ++i) minAbs = std::min(minAbs, std::abs(spec.eigenvalues[i]));
        os << eta << "," << sol.residual << "," << sol.iterations << "," << minAbs << "\n";
        pass = pass && sol.residual < 1e-12;
    }
    const fs::path path = fs::path(config.outputDir) / "mde.csv";
    atomic_write(path, os.str());
    result.artifacts.push_back(path.string());
    result.pass = pass;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    require_keys(j, {"kind", "parameters", "masterSeed", "workers", "outputDir"}, "experiment config");
    ExperimentConfig config;
    config.kind = j.at("kind").get<std::string>();
    config.parameters = j.value("parameters", json::object());
    if (j.contains("masterSeed")) config.masterSeed = j["masterSeed"].get<std::uint64_t>();
    if (j.contains("workers")) config.workers = j["workers"].get<int>();
    if (j.contains("outputDir")) config.outputDir = j["outputDir"].get<std::string>();
    return config;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file: " + path);
    json j;
    in >> j;
    return from_json(j);
}

json ExperimentConfig::to_json() const {
    json j;
    j["kind"] = kind;
    j["parameters"] = parameters;
    j["masterSeed"] = masterSeed;
    j["workers"] = workers;
    j["outputDir"] = outputDir;
    return j;
}

json ExperimentResult::to_json() const {
    json j;
    j["config"] = config.to_json();
    j["startedAt"] = startedAt;
    j["finishedAt"] = finishedAt;
    j["artifacts"] = artifacts;
    j["summary"] = summary;
    j["softwareVersion"] = softwareVersion;
    j["perTaskSeeds"] = perTaskSeeds;
    j["pass"] = pass;
    return j;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    static const std::set<std::string> kinds{"sample",       "localLaw", "twoResolvent", "universality",
                                             "identities",   "girko",    "mde"};
    if (!kinds.count(config.kind)) throw ValidationError("unknown experiment kind: " + config.kind);
    if (config.workers < 1) throw ValidationError("workers must be >= 1");

    // The BLAS pool is pinned to one thread so numeric artifacts are
    // bit-identical regardless of the worker count; parallelism comes from
    // the task pool alone.
    lapack::set_blas_threads(1);

    ExperimentResult result;
    result.config = config;
    result.softwareVersion = kSoftwareVersion;
    result.startedAt = timestamp();
    if (config.kind == "sample")
        run_sample(config, result);
    else if (config.kind == "localLaw")
        run_local_law(config, result, false);
    else if (config.kind == "twoResolvent")
        run_local_law(config, result, true);
    else if (config.kind == "universality")
        run_universality(config, result);
    else if (config.kind == "identities")
        run_identities(config, result);
    else if (config.kind == "girko")
        run_girko(config, result);
    else if (config.kind == "mde")
        run_mde(config, result);
    result.finishedAt = timestamp();

    const fs::path resultPath = fs::path(config.outputDir) / "result.json";
    atomic_write(resultPath, result.to_json().dump(2));
    result.artifacts.push_back(resultPath.string());
    return result;
}

}  // namespace rmtlab
