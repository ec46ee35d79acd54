// Command-line entry point: learning-curve experiments, bound sweeps,
// perfect-model counterexamples, and CSV-to-SVG plotting.
//
// Exit codes: 0 success, 1 configuration/parse error, 2 inequality
// violation, 3 runtime failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "hdmc/config.hpp"
#include "hdmc/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitViolation = 2;
constexpr int kExitRuntime = 3;

hdmc::ExperimentConfig load_config(const std::string& profile, const std::string& config_path,
                                   std::uint64_t seed_override, bool has_seed, const std::string& output_dir) {
    hdmc::ExperimentConfig base;
    if (profile == "desk") base = hdmc::desk_profile();
    else if (profile == "paper") base = hdmc::paper_profile();
    else throw hdmc::ConfigError("unknown profile '" + profile + "' (expected desk or paper)");
    if (!config_path.empty()) {
        std::ifstream is(config_path);
        if (!is) throw hdmc::ConfigError("cannot open config file: " + config_path);
        base = hdmc::read_config(is, std::move(base));
    }
    if (has_seed) base.master_seed = seed_override;
    if (!output_dir.empty()) base.output_dir = output_dir;
    base.validate();
    return base;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Model-based RL workbench: hallucinated model training, exact value-error bounds"};
    app.require_subcommand(1);

    std::string profile = "desk";
    std::string config_path;
    std::string output_dir;
    std::uint64_t seed = 0;
    bool has_seed = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--profile", profile, "parameter profile: desk or paper")->default_val("desk");
        cmd->add_option("--config", config_path, "config file overriding the profile");
        cmd->add_option("--output", output_dir, "output directory");
        cmd->add_option("--seed", seed, "master seed override")->each([&](const std::string&) { has_seed = true; });
    };

    CLI::App* experiment = app.add_subcommand("experiment", "run learning-curve experiments");
    add_common(experiment);

    CLI::App* bounds = app.add_subcommand("bounds", "run the bound-inequality sweeps");
    add_common(bounds);

    CLI::App* counter = app.add_subcommand("counterexamples", "perfect-model counterexample values");

    CLI::App* plot = app.add_subcommand("plot", "render a learning-curve CSV as SVG");
    std::string csv_in, svg_out;
    plot->add_option("csv", csv_in, "input CSV path")->required();
    plot->add_option("svg", svg_out, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (experiment->parsed()) {
            hdmc::ExperimentConfig cfg = load_config(profile, config_path, seed, has_seed, output_dir);
            hdmc::ExperimentArtifacts art = hdmc::run_experiment(cfg);
            std::cout << "wrote " << art.csv_path << "\nwrote " << art.svg_path << "\nwrote " << art.summary_path
                      << "\n";
            return kExitOk;
        }
        if (bounds->parsed()) {
            hdmc::ExperimentConfig cfg = load_config(profile, config_path, seed, has_seed, output_dir);
            hdmc::SweepResult chain = hdmc::run_chain_sweep(cfg.sweep);
            hdmc::SweepResult lemmas = hdmc::run_lemma_sweep(cfg.sweep);
            std::filesystem::create_directories(cfg.output_dir);
            write_file(cfg.output_dir + "/chain_sweep.csv", chain.csv);
            write_file(cfg.output_dir + "/lemma_sweep.csv", lemmas.csv);
            std::cout << "chain sweep: " << chain.n_instances << " instances, " << chain.n_violations
                      << " violations\n";
            std::cout << "lemma sweep: " << lemmas.n_instances << " instances, " << lemmas.n_violations
                      << " violations\n";
            if (chain.n_violations + lemmas.n_violations > 0) {
                const std::string& dump =
                    chain.n_violations > 0 ? chain.counterexample_dump : lemmas.counterexample_dump;
                write_file(cfg.output_dir + "/counterexample.txt", dump);
                std::cerr << "inequality violated; instance dumped to " << cfg.output_dir
                          << "/counterexample.txt\n";
                return kExitViolation;
            }
            return kExitOk;
        }
        if (counter->parsed()) {
            hdmc::CounterexampleReport rep = hdmc::run_counterexamples();
            std::cout << rep.text;
            return kExitOk;
        }
        if (plot->parsed()) {
            std::ifstream is(csv_in, std::ios::binary);
            if (!is) throw hdmc::ConfigError("cannot open CSV: " + csv_in);
            std::ostringstream buf;
            buf << is.rdbuf();
            std::string svg = hdmc::render_curves(buf.str());
            write_file(svg_out, svg);
            std::cout << "wrote " << svg_out << "\n";
            return kExitOk;
        }
    } catch (const hdmc::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const hdmc::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}
