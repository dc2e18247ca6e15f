#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "rmtlab/experiment.hpp"

namespace {

struct SubOptions {
    std::string configPath;
    std::string outDir;
    std::uint64_t seed = 0;
    int workers = 0;
    CLI::Option* seedOpt = nullptr;
    CLI::Option* workersOpt = nullptr;
    CLI::Option* outOpt = nullptr;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"rmtlab: numerical laboratory for non-Hermitian bulk spectral statistics"};
    cli.require_subcommand(1);

    const std::vector<std::string> kinds{"sample", "localLaw", "twoResolvent", "universality",
                                         "identities", "girko", "mde"};
    int exitCode = 0;
    std::vector<std::shared_ptr<SubOptions>> allOpts;
    for (const auto& kind : kinds) {
        auto opts = std::make_shared<SubOptions>();
        allOpts.push_back(opts);
        auto* sub = cli.add_subcommand(kind, "run a '" + kind + "' experiment");
        sub->add_option("--config", opts->configPath, "JSON experiment config")->required();
        opts->seedOpt = sub->add_option("--seed", opts->seed, "override the master seed");
        opts->workersOpt = sub->add_option("--workers", opts->workers, "override the worker count");
        opts->outOpt = sub->add_option("--out", opts->outDir, "override the output directory");
        sub->callback([&exitCode, opts, kind]() {
            rmtlab::ExperimentConfig config = rmtlab::ExperimentConfig::load(opts->configPath);
            if (config.kind.empty()) config.kind = kind;
            if (config.kind != kind)
                throw CLI::ValidationError("config kind '" + config.kind + "' does not match subcommand '" + kind +
                                           "'");
            if (opts->seedOpt->count() > 0) config.masterSeed = opts->seed;
            if (opts->workersOpt->count() > 0) config.workers = opts->workers;
            if (opts->outOpt->count() > 0) config.outputDir = opts->outDir;
            const rmtlab::ExperimentResult result = rmtlab::run_experiment(config);
            std::cout << result.summary.dump(2) << "\n";
            std::cout << (result.pass ? "PASS" : "FAIL") << "\n";
            if (!result.pass) exitCode = 1;
        });
    }

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return cli.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return exitCode;
}
