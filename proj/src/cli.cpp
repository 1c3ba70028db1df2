#include "tsteer/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "tsteer/bb84.hpp"
#include "tsteer/dynamics.hpp"
#include "tsteer/records.hpp"
#include "tsteer/steering.hpp"

namespace tsteer {

namespace {

[[noreturn]] void config_error(std::size_t line, const std::string& what) {
    throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        config_error(line, "value for '" + key + "' is not a number: '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value, std::size_t line) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size() || v < 0 || v > 1000000000LL)
            throw std::invalid_argument(value);
        return static_cast<int>(v);
    } catch (const std::exception&) {
        config_error(line, "value for '" + key + "' is not a nonnegative integer: '" + value + "'");
    }
}

std::uint64_t parse_seed(const std::string& value, std::size_t line) {
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
        config_error(line, "value for 'seed' is not a nonnegative integer: '" + value + "'");
    try {
        return std::stoull(value);
    } catch (const std::exception&) {
        config_error(line, "value for 'seed' is out of range: '" + value + "'");
    }
}

OutputFormat parse_format(const std::string& value, std::size_t line) {
    if (value == "csv") return OutputFormat::Csv;
    if (value == "json") return OutputFormat::Json;
    config_error(line, "format must be 'csv' or 'json', got '" + value + "'");
}

double require(const std::optional<double>& field, const char* key) {
    if (!field) throw std::runtime_error(std::string("missing parameter '") + key + "'");
    return *field;
}

double require_rate(const std::optional<double>& field, const char* key) {
    const double v = require(field, key);
    if (v < 0.0) throw std::runtime_error(std::string("parameter '") + key + "' must be >= 0");
    return v;
}

void write_output(const ExperimentConfig& config, const std::string& content) {
    if (!config.out || config.out->empty()) {
        std::cout << content;
        return;
    }
    std::ofstream file(*config.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output path '" + *config.out + "'");
    file << content;
    if (!file) throw std::runtime_error("failed while writing '" + *config.out + "'");
}

OutputFormat resolved_format(const ExperimentConfig& config, ExperimentKind kind) {
    if (config.format) return *config.format;
    const bool scalar = kind == ExperimentKind::Thresholds || kind == ExperimentKind::Ordering;
    return scalar ? OutputFormat::Json : OutputFormat::Csv;
}

// Tabular emitters shared by every experiment: a header plus string cells.
struct OutputTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const OutputTable& table) {
    std::ostringstream out;
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
        out << '\n';
    }
    return out.str();
}

std::string to_json_rows(const OutputTable& table, bool quote_last_column) {
    std::ostringstream out;
    out << "[\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << "{";
        for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
            const bool quoted = quote_last_column && c + 1 == table.rows[r].size();
            out << (c ? ", " : "") << '"' << table.columns[c] << "\": ";
            if (quoted)
                out << '"' << table.rows[r][c] << '"';
            else
                out << table.rows[r][c];
        }
        out << (r + 1 < table.rows.size() ? "},\n" : "}\n");
    }
    out << "]\n";
    return out.str();
}

std::string render_table(const OutputTable& table, OutputFormat format) {
    return format == OutputFormat::Csv ? to_csv(table) : to_json_rows(table, false);
}

std::string render_pairs(const std::vector<std::pair<std::string, double>>& pairs,
                         OutputFormat format) {
    std::ostringstream out;
    if (format == OutputFormat::Json) {
        out << "{";
        for (std::size_t i = 0; i < pairs.size(); ++i)
            out << (i ? ", " : "") << '"' << pairs[i].first << "\": "
                << format_number(pairs[i].second);
        out << "}\n";
    } else {
        out << "name,value\n";
        for (const auto& [name, value] : pairs) out << name << ',' << format_number(value) << '\n';
    }
    return out.str();
}

void run_curve_experiment(const ExperimentConfig& config, ExperimentKind kind) {
    LindbladModel model = kind == ExperimentKind::Rabi
                              ? rabi_model(require_rate(config.g, "g"),
                                           require_rate(config.gamma, "gamma"))
                              : ancilla_model(require_rate(config.coupling_j, "J"),
                                              require_rate(config.gamma1, "gamma1"));
    const double t_max = require_rate(config.t_max, "t_max");
    const int n_bases = config.n_bases.value_or(3);
    int steps = config.steps.value_or(0);
    if (steps == 0) steps = default_steps(model, t_max);

    DensityMatrix rho0 = kind == ExperimentKind::Rabi
                             ? DensityMatrix::maximally_mixed(2)
                             : DensityMatrix(tensor(ComplexMatrix::identity(2).scaled(0.5),
                                                    projector(Axis::Z, -1)));
    const TimeGrid grid(0.0, t_max, steps);
    const SteeringCurves curves = steering_components(model, rho0, grid, n_bases);

    OutputTable table;
    table.columns = {"t", "s_n", "e_x", "e_y", "e_z"};
    table.rows.reserve(curves.times.size());
    for (std::size_t k = 0; k < curves.times.size(); ++k)
        table.rows.push_back({format_number(curves.times[k]), format_number(curves.s_values[k]),
                              format_number(curves.contributions[static_cast<int>(Axis::X)][k]),
                              format_number(curves.contributions[static_cast<int>(Axis::Y)][k]),
                              format_number(curves.contributions[static_cast<int>(Axis::Z)][k])});
    write_output(config, render_table(table, resolved_format(config, kind)));
}

void run_bb84_sweep(const ExperimentConfig& config) {
    const int grid_n = config.grid_n.value_or(0);
    if (grid_n < 2) throw std::runtime_error("missing parameter 'grid_n' (must be >= 2)");
    std::vector<double> axis(grid_n);
    for (int i = 0; i < grid_n; ++i) axis[i] = static_cast<double>(i) / (grid_n - 1);
    OutputTable table;
    table.columns = {"p", "q", "s2", "r_err", "violates"};
    for (const SweepRow& row : sweep(axis, axis))
        table.rows.push_back({format_number(row.p), format_number(row.q), format_number(row.s2),
                              format_number(row.r_err), row.violates ? "true" : "false"});
    write_output(config, render_table(table, resolved_format(config, ExperimentKind::Bb84Sweep)));
}

void run_thresholds(const ExperimentConfig& config) {
    write_output(config, render_pairs({{"independent", threshold_independent()},
                                       {"entropic", threshold_entropic()}},
                                      resolved_format(config, ExperimentKind::Thresholds)));
}

void run_ordering(const ExperimentConfig& config) {
    const int n_bases = config.n_bases.value_or(3);
    const double pre =
        steering_parameter(ordering_scenario(OrderingKind::PreMeasured, n_bases)).s_value;
    const double ent =
        steering_parameter(ordering_scenario(OrderingKind::Entangled, n_bases)).s_value;
    write_output(config, render_pairs({{"pre_measured", pre}, {"entangled", ent}},
                                      resolved_format(config, ExperimentKind::Ordering)));
}

void run_records(const ExperimentConfig& config) {
    if (!config.input || config.input->empty())
        throw std::runtime_error("missing parameter 'input' (records file)");
    std::ifstream file(*config.input, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open records file '" + *config.input + "'");
    const std::vector<OutcomeRecord> records = parse_records(file);

    std::size_t matched = 0;
    for (const OutcomeRecord& r : records) matched += r.matched() ? 1 : 0;
    if (matched != records.size())
        std::cerr << "note: ignoring " << (records.size() - matched)
                  << " mismatched-basis rows out of " << records.size() << "\n";

    const double smoothing = config.smoothing.value_or(0.0);
    const ConditionalTable estimate = estimate_table(records, smoothing);
    const double s_n = steering_parameter(estimate).s_value;
    const BootstrapResult boot = bootstrap_uncertainty(records, config.resamples.value_or(200),
                                                       config.seed.value_or(0), smoothing);

    OutputTable table;
    table.columns = {"s_n", "s_std", "n_records"};
    table.rows.push_back(
        {format_number(s_n), format_number(boot.s_std), std::to_string(matched)});
    write_output(config, render_table(table, resolved_format(config, ExperimentKind::Records)));
}

}  // namespace

ExperimentKind parse_experiment(const std::string& name) {
    if (name == "rabi") return ExperimentKind::Rabi;
    if (name == "ancilla") return ExperimentKind::Ancilla;
    if (name == "bb84-sweep") return ExperimentKind::Bb84Sweep;
    if (name == "thresholds") return ExperimentKind::Thresholds;
    if (name == "ordering") return ExperimentKind::Ordering;
    if (name == "records") return ExperimentKind::Records;
    throw std::runtime_error("unknown experiment '" + name + "'");
}

const char* experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Rabi: return "rabi";
        case ExperimentKind::Ancilla: return "ancilla";
        case ExperimentKind::Bb84Sweep: return "bb84-sweep";
        case ExperimentKind::Thresholds: return "thresholds";
        case ExperimentKind::Ordering: return "ordering";
        case ExperimentKind::Records: return "records";
    }
    throw std::runtime_error("invalid experiment kind");
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig config;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const std::string stripped = trim(raw);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) config_error(line, "expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) config_error(line, "empty key");
        if (!seen.insert(key).second) config_error(line, "duplicate key '" + key + "'");

        if (key == "experiment") {
            try {
                config.experiment = parse_experiment(value);
            } catch (const std::exception& e) {
                config_error(line, e.what());
            }
        } else if (key == "g") {
            config.g = parse_double(key, value, line);
        } else if (key == "gamma") {
            config.gamma = parse_double(key, value, line);
        } else if (key == "J") {
            config.coupling_j = parse_double(key, value, line);
        } else if (key == "gamma1") {
            config.gamma1 = parse_double(key, value, line);
        } else if (key == "t_max") {
            config.t_max = parse_double(key, value, line);
        } else if (key == "p") {
            config.p = parse_double(key, value, line);
        } else if (key == "q") {
            config.q = parse_double(key, value, line);
        } else if (key == "V") {
            config.visibility = parse_double(key, value, line);
        } else if (key == "smoothing") {
            config.smoothing = parse_double(key, value, line);
        } else if (key == "steps") {
            config.steps = parse_int(key, value, line);
        } else if (key == "n_bases") {
            config.n_bases = parse_int(key, value, line);
        } else if (key == "grid_n") {
            config.grid_n = parse_int(key, value, line);
        } else if (key == "resamples") {
            config.resamples = parse_int(key, value, line);
        } else if (key == "seed") {
            config.seed = parse_seed(value, line);
        } else if (key == "input") {
            config.input = value;
        } else if (key == "out") {
            config.out = value;
        } else if (key == "format") {
            config.format = parse_format(value, line);
        } else {
            config_error(line, "unknown key '" + key + "'");
        }
    }
    return config;
}

ExperimentConfig merge_configs(const ExperimentConfig& base, const ExperimentConfig& override) {
    ExperimentConfig merged = base;
    if (override.experiment) merged.experiment = override.experiment;
    if (override.g) merged.g = override.g;
    if (override.gamma) merged.gamma = override.gamma;
    if (override.coupling_j) merged.coupling_j = override.coupling_j;
    if (override.gamma1) merged.gamma1 = override.gamma1;
    if (override.t_max) merged.t_max = override.t_max;
    if (override.p) merged.p = override.p;
    if (override.q) merged.q = override.q;
    if (override.visibility) merged.visibility = override.visibility;
    if (override.smoothing) merged.smoothing = override.smoothing;
    if (override.steps) merged.steps = override.steps;
    if (override.n_bases) merged.n_bases = override.n_bases;
    if (override.grid_n) merged.grid_n = override.grid_n;
    if (override.resamples) merged.resamples = override.resamples;
    if (override.seed) merged.seed = override.seed;
    if (override.input) merged.input = override.input;
    if (override.out) merged.out = override.out;
    if (override.format) merged.format = override.format;
    return merged;
}

void run(const ExperimentConfig& config) {
    if (!config.experiment) throw std::runtime_error("missing parameter 'experiment'");
    switch (*config.experiment) {
        case ExperimentKind::Rabi:
        case ExperimentKind::Ancilla:
            run_curve_experiment(config, *config.experiment);
            return;
        case ExperimentKind::Bb84Sweep: run_bb84_sweep(config); return;
        case ExperimentKind::Thresholds: run_thresholds(config); return;
        case ExperimentKind::Ordering: run_ordering(config); return;
        case ExperimentKind::Records: run_records(config); return;
    }
    throw std::runtime_error("invalid experiment kind");
}

int run_safely(const ExperimentConfig& config, std::ostream& diagnostics) {
    try {
        run(config);
        return 0;
    } catch (const std::exception& e) {
        diagnostics << "error: " << e.what() << "\n";
        return 1;
    }
}

std::string format_number(double value) {
    std::array<char, 40> buffer;
    const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                                         std::chars_format::general, 9);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buffer.data(), ptr);
}

}  // namespace tsteer
