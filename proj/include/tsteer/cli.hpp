#ifndef TSTEER_CLI_HPP
#define TSTEER_CLI_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

// Named experiments behind the command-line front end. Runs are
// deterministic: identical configs produce byte-identical output files.

namespace tsteer {

enum class ExperimentKind { Rabi, Ancilla, Bb84Sweep, Thresholds, Ordering, Records };
enum class OutputFormat { Csv, Json };

ExperimentKind parse_experiment(const std::string& name);
const char* experiment_name(ExperimentKind kind);

struct ExperimentConfig {
    std::optional<ExperimentKind> experiment;
    std::optional<double> g;
    std::optional<double> gamma;
    std::optional<double> coupling_j;  // key "J"
    std::optional<double> gamma1;
    std::optional<double> t_max;
    std::optional<double> p;
    std::optional<double> q;
    std::optional<double> visibility;  // key "V"
    std::optional<double> smoothing;
    std::optional<int> steps;       // 0 or absent: default resolution
    std::optional<int> n_bases;
    std::optional<int> grid_n;
    std::optional<int> resamples;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> input;  // records file
    std::optional<std::string> out;    // absent: stdout
    std::optional<OutputFormat> format;
};

// Line-oriented `key = value` text. Unknown keys, duplicate keys and type
// mismatches are hard errors carrying the line number. Blank lines and
// lines starting with '#' are skipped.
ExperimentConfig parse_config(const std::string& text);

// Later settings override earlier ones field by field (flags over file).
ExperimentConfig merge_configs(const ExperimentConfig& base, const ExperimentConfig& override);

// Executes the experiment and writes its artifact to config.out (stdout if
// unset). Throws on invalid configs and I/O failures.
void run(const ExperimentConfig& config);

// Exception-to-exit-status wrapper: 0 on success, 1 with a single-line
// diagnostic otherwise.
int run_safely(const ExperimentConfig& config, std::ostream& diagnostics);

// Shortest-of-9-significant-digits decimal formatting used for all emitted
// numbers; locale independent.
std::string format_number(double value);

}  // namespace tsteer

#endif
