#include "tsteer/records.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tsteer {

namespace {

constexpr const char* kHeader = "basis_a,outcome_a,basis_b,outcome_b,trial_id";

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
    throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

Axis parse_axis_field(const std::string& field, std::size_t line) {
    if (field == "z") return Axis::Z;
    if (field == "x") return Axis::X;
    if (field == "y") return Axis::Y;
    parse_error(line, "unknown basis label '" + field + "'");
}

int parse_outcome_field(const std::string& field, std::size_t line) {
    if (field == "1") return 1;
    if (field == "-1") return -1;
    parse_error(line, "outcome must be 1 or -1, got '" + field + "'");
}

std::uint64_t parse_trial_field(const std::string& field, std::size_t line) {
    if (field.empty() || field.find_first_not_of("0123456789") != std::string::npos)
        parse_error(line, "trial_id must be a nonnegative integer, got '" + field + "'");
    try {
        return std::stoull(field);
    } catch (const std::exception&) {
        parse_error(line, "trial_id out of range: '" + field + "'");
    }
}

std::vector<std::string> split_row(const std::string& row) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : row) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

// Uniform double in [0, 1) built directly from the engine's 64-bit output,
// so results do not depend on the standard library's distribution details.
double uniform_unit(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t CountTable::total(Axis basis) const {
    const auto& block = counts[static_cast<int>(basis)];
    return block[0][0] + block[0][1] + block[1][0] + block[1][1];
}

CountTable count_matched(const std::vector<OutcomeRecord>& records) {
    CountTable table;
    for (const OutcomeRecord& r : records) {
        if (!r.matched()) continue;
        table.counts[static_cast<int>(r.basis_a)][outcome_index(r.outcome_a)]
                    [outcome_index(r.outcome_b)] += 1;
    }
    return table;
}

std::vector<OutcomeRecord> parse_records(std::istream& in) {
    std::vector<OutcomeRecord> records;
    std::string row;
    std::size_t line = 0;
    while (std::getline(in, row)) {
        ++line;
        if (!row.empty() && row.back() == '\r') row.pop_back();
        if (line == 1) {
            if (row != kHeader)
                parse_error(line, "bad header, expected '" + std::string(kHeader) + "'");
            continue;
        }
        if (row.empty()) continue;
        const std::vector<std::string> fields = split_row(row);
        if (fields.size() != 5)
            parse_error(line, "expected 5 fields, got " + std::to_string(fields.size()));
        OutcomeRecord record;
        record.basis_a = parse_axis_field(fields[0], line);
        record.outcome_a = parse_outcome_field(fields[1], line);
        record.basis_b = parse_axis_field(fields[2], line);
        record.outcome_b = parse_outcome_field(fields[3], line);
        record.trial_id = parse_trial_field(fields[4], line);
        records.push_back(record);
    }
    if (line == 0) parse_error(1, "bad header, input is empty");
    return records;
}

ConditionalTable estimate_table(const std::vector<OutcomeRecord>& records, double smoothing) {
    const CountTable counts = count_matched(records);
    std::vector<Axis> bases;
    for (Axis axis : standard_bases(3))
        if (counts.total(axis) > 0) bases.push_back(axis);
    if (bases.empty())
        throw std::invalid_argument("estimate_table: no matched-basis records");
    return estimate_table(records, smoothing, bases);
}

ConditionalTable estimate_table(const std::vector<OutcomeRecord>& records, double smoothing,
                                const std::vector<Axis>& bases) {
    if (smoothing < 0.0)
        throw std::invalid_argument("estimate_table: smoothing must be >= 0");
    const CountTable counts = count_matched(records);
    ConditionalTable table = make_table(bases);
    for (std::size_t i = 0; i < bases.size(); ++i) {
        const auto& block = counts.counts[static_cast<int>(bases[i])];
        const double total = static_cast<double>(counts.total(bases[i]));
        if (total == 0.0 && smoothing == 0.0)
            throw std::invalid_argument(std::string("estimate_table: no records for basis ") +
                                        axis_label(bases[i]) + " and smoothing is 0");
        const double denom = total + 4.0 * smoothing;
        for (int ai = 0; ai < 2; ++ai)
            for (int bi = 0; bi < 2; ++bi)
                table.joint[i][ai][bi] = (static_cast<double>(block[ai][bi]) + smoothing) / denom;
    }
    validate_table(table);
    return table;
}

BootstrapResult bootstrap_uncertainty(const std::vector<OutcomeRecord>& records, int resamples,
                                      std::uint64_t seed, double smoothing) {
    if (resamples < 2)
        throw std::invalid_argument("bootstrap_uncertainty: resamples must be >= 2");
    std::vector<OutcomeRecord> matched;
    for (const OutcomeRecord& r : records)
        if (r.matched()) matched.push_back(r);
    if (matched.empty())
        throw std::invalid_argument("bootstrap_uncertainty: no matched-basis records");

    // Fix the basis set from the full sample so every resample estimates the
    // same parameter.
    const ConditionalTable full = estimate_table(records, smoothing);
    const std::vector<Axis> bases = full.bases;

    std::vector<double> values(resamples);
    std::vector<OutcomeRecord> resample(matched.size());
    for (int r = 0; r < resamples; ++r) {
        // Independent substream per resample index.
        std::mt19937_64 engine(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(r) + 1)));
        for (std::size_t k = 0; k < matched.size(); ++k)
            resample[k] = matched[engine() % matched.size()];
        values[r] = steering_parameter(estimate_table(resample, smoothing, bases)).s_value;
    }

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= resamples;
    double variance = 0.0;
    for (double v : values) variance += (v - mean) * (v - mean);
    variance /= (resamples - 1);
    return {mean, std::sqrt(variance)};
}

std::vector<OutcomeRecord> sample_records(const ConditionalTable& table, std::uint64_t n_trials,
                                          std::uint64_t seed) {
    validate_table(table);
    const int n_bases = table.n_bases();
    std::mt19937_64 engine(seed);
    std::vector<OutcomeRecord> records;
    records.reserve(n_trials);
    const int outcomes[2] = {1, -1};
    for (std::uint64_t trial = 0; trial < n_trials; ++trial) {
        int basis_index = static_cast<int>(uniform_unit(engine) * n_bases);
        if (basis_index >= n_bases) basis_index = n_bases - 1;
        const auto& block = table.joint[basis_index];
        const double block_sum = block[0][0] + block[0][1] + block[1][0] + block[1][1];
        const double u = uniform_unit(engine) * block_sum;
        double cumulative = 0.0;
        int ai = 1, bi = 1;
        bool chosen = false;
        for (int a = 0; a < 2 && !chosen; ++a) {
            for (int b = 0; b < 2 && !chosen; ++b) {
                cumulative += block[a][b];
                if (u < cumulative) {
                    ai = a;
                    bi = b;
                    chosen = true;
                }
            }
        }
        const Axis basis = table.bases[basis_index];
        records.push_back({basis, outcomes[ai], basis, outcomes[bi], trial});
    }
    return records;
}

}  // namespace tsteer
