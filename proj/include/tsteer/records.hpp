#ifndef TSTEER_RECORDS_HPP
#define TSTEER_RECORDS_HPP

#include <array>
#include <cstdint>
#include <istream>
#include <vector>

#include "tsteer/steering.hpp"

// Empirical measurement records: CSV ingestion, finite-sample table
// estimation, and bootstrap uncertainty for the steering parameter. Every
// sampling interface takes an explicit 64-bit seed and is bit-reproducible.

namespace tsteer {

struct OutcomeRecord {
    Axis basis_a;
    int outcome_a;
    Axis basis_b;
    int outcome_b;
    std::uint64_t trial_id;

    bool matched() const { return basis_a == basis_b; }
};

// counts[basis][a][b] over matched-basis trials, bases indexed by Axis.
struct CountTable {
    std::array<std::array<std::array<std::uint64_t, 2>, 2>, 3> counts{};
    std::uint64_t total(Axis basis) const;
};

CountTable count_matched(const std::vector<OutcomeRecord>& records);

// Header `basis_a,outcome_a,basis_b,outcome_b,trial_id`; bases lowercase
// x/y/z, outcomes 1/-1, LF or CRLF. Mismatched-basis rows are kept (see
// OutcomeRecord::matched); malformed input throws with the line number.
std::vector<OutcomeRecord> parse_records(std::istream& in);

// Additive smoothing: joint = (count + s) / (total_basis + 4 s). Bases
// default to those present among matched rows, in z, x, y order.
ConditionalTable estimate_table(const std::vector<OutcomeRecord>& records, double smoothing = 0.0);
ConditionalTable estimate_table(const std::vector<OutcomeRecord>& records, double smoothing,
                                const std::vector<Axis>& bases);

struct BootstrapResult {
    double s_mean;
    double s_std;
};

// Nonparametric bootstrap over matched trials. Identical
// (records, resamples, seed, smoothing) give bit-identical results.
BootstrapResult bootstrap_uncertainty(const std::vector<OutcomeRecord>& records, int resamples,
                                      std::uint64_t seed, double smoothing = 0.0);

// Draw matched-basis records from a ConditionalTable: basis uniform over the
// table's bases, then (a, b) from that basis block.
std::vector<OutcomeRecord> sample_records(const ConditionalTable& table, std::uint64_t n_trials,
                                          std::uint64_t seed);

}  // namespace tsteer

#endif
