#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tsteer/cli.hpp"

// Command-line front end: one subcommand per experiment, flags mirroring the
// config-file keys, `--config` to load a key = value file (flags win).

namespace {

struct FlagValues {
    double g = 0, gamma = 0, coupling_j = 0, gamma1 = 0, t_max = 0, p = 0, q = 0, visibility = 0,
           smoothing = 0;
    int steps = 0, n_bases = 0, grid_n = 0, resamples = 0;
    std::uint64_t seed = 0;
    std::string input, out, format, config_path;
};

void add_curve_flags(CLI::App* cmd, FlagValues& v, bool rabi) {
    if (rabi) {
        cmd->add_option("--g", v.g, "Rabi frequency (units of gamma)");
        cmd->add_option("--gamma", v.gamma, "qubit decay rate");
    } else {
        cmd->add_option("--J", v.coupling_j, "system-ancilla coupling (units of gamma1)");
        cmd->add_option("--gamma1", v.gamma1, "system-qubit decay rate");
    }
    cmd->add_option("--t_max", v.t_max, "end of the time grid (units of 1/gamma)");
    cmd->add_option("--steps", v.steps, "integration steps (0 = automatic)");
    cmd->add_option("--n_bases", v.n_bases, "number of mutually unbiased bases (2 or 3)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"temporal steering inequality toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    FlagValues v;
    app.add_option("--out", v.out, "output file (default: stdout)");
    app.add_option("--format", v.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--config", v.config_path, "key = value config file")
        ->check(CLI::ExistingFile);

    CLI::App* rabi = app.add_subcommand("simulate-rabi", "S_N(t) for the decaying Rabi qubit");
    add_curve_flags(rabi, v, true);
    CLI::App* ancilla =
        app.add_subcommand("simulate-ancilla", "S_N(t) for the qubit-ancilla model");
    add_curve_flags(ancilla, v, false);

    CLI::App* sweep = app.add_subcommand("bb84-sweep", "S_2 and R_err over the (p,q) simplex");
    sweep->add_option("--grid_n", v.grid_n, "grid points per axis");

    app.add_subcommand("thresholds", "BB84 security thresholds");

    CLI::App* ordering = app.add_subcommand("ordering-test", "pre-measured vs entangled S_N");
    ordering->add_option("--n_bases", v.n_bases, "number of mutually unbiased bases (2 or 3)");

    CLI::App* records = app.add_subcommand("records-analyze", "estimate S_N from a records CSV");
    records->add_option("file", v.input, "records CSV file");
    records->add_option("--input", v.input, "records CSV file");
    records->add_option("--smoothing", v.smoothing, "additive smoothing weight");
    records->add_option("--resamples", v.resamples, "bootstrap resamples");
    records->add_option("--seed", v.seed, "bootstrap seed");

    CLI11_PARSE(app, argc, argv);

    try {
        tsteer::ExperimentConfig config;
        if (!v.config_path.empty()) {
            std::ifstream file(v.config_path, std::ios::binary);
            if (!file) throw std::runtime_error("cannot open config file '" + v.config_path + "'");
            std::ostringstream text;
            text << file.rdbuf();
            config = tsteer::parse_config(text.str());
        }

        tsteer::ExperimentConfig flags;
        auto set_if = [](const CLI::App* cmd, const char* name, auto& target, const auto& value) {
            if (cmd->count(name) > 0) target = value;
        };
        if (rabi->parsed()) flags.experiment = tsteer::ExperimentKind::Rabi;
        if (ancilla->parsed()) flags.experiment = tsteer::ExperimentKind::Ancilla;
        if (sweep->parsed()) flags.experiment = tsteer::ExperimentKind::Bb84Sweep;
        if (app.get_subcommand("thresholds")->parsed())
            flags.experiment = tsteer::ExperimentKind::Thresholds;
        if (ordering->parsed()) flags.experiment = tsteer::ExperimentKind::Ordering;
        if (records->parsed()) flags.experiment = tsteer::ExperimentKind::Records;

        set_if(rabi, "--g", flags.g, v.g);
        set_if(rabi, "--gamma", flags.gamma, v.gamma);
        set_if(ancilla, "--J", flags.coupling_j, v.coupling_j);
        set_if(ancilla, "--gamma1", flags.gamma1, v.gamma1);
        for (const CLI::App* cmd : {rabi, ancilla}) {
            set_if(cmd, "--t_max", flags.t_max, v.t_max);
            set_if(cmd, "--steps", flags.steps, v.steps);
            set_if(cmd, "--n_bases", flags.n_bases, v.n_bases);
        }
        set_if(sweep, "--grid_n", flags.grid_n, v.grid_n);
        set_if(ordering, "--n_bases", flags.n_bases, v.n_bases);
        if (records->count("file") > 0 || records->count("--input") > 0) flags.input = v.input;
        set_if(records, "--smoothing", flags.smoothing, v.smoothing);
        set_if(records, "--resamples", flags.resamples, v.resamples);
        set_if(records, "--seed", flags.seed, v.seed);
        if (app.count("--out") > 0) flags.out = v.out;
        if (app.count("--format") > 0)
            flags.format = v.format == "json" ? tsteer::OutputFormat::Json
                                              : tsteer::OutputFormat::Csv;

        return tsteer::run_safely(tsteer::merge_configs(config, flags), std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
