#ifndef TSTEER_STEERING_HPP
#define TSTEER_STEERING_HPP

#include <array>
#include <optional>
#include <vector>

#include "tsteer/dynamics.hpp"
#include "tsteer/qmat.hpp"

// Conditional measurement tables and the steering parameter
//   S_N = sum_i E[<B_i>^2 | A_i],
// evaluated over the mutually unbiased set {sigma_z, sigma_x, sigma_y}
// (first two for N = 2). A hidden-state channel model caps S_N at 1; the
// quantum tables reach N at t = 0.

namespace tsteer {

struct MeasurementSetting {
    Axis basis;
    int outcome;  // +1 or -1
};

// outcome +1 -> slot 0, -1 -> slot 1
int outcome_index(int outcome);

// The first `n` bases of the mutually unbiased order z, x, y.
std::vector<Axis> standard_bases(int n);

// Per-basis joint distribution P(A_i = a, B_i = b). Each basis block sums
// to 1. Canonical construction paths emit 2 or 3 bases; estimation from
// measurement records may restrict to fewer.
struct ConditionalTable {
    std::vector<Axis> bases;
    std::vector<std::array<std::array<double, 2>, 2>> joint;  // [basis][a][b]

    int n_bases() const { return static_cast<int>(bases.size()); }
    double& entry(int basis_index, int a, int b) {
        return joint[basis_index][outcome_index(a)][outcome_index(b)];
    }
    double entry(int basis_index, int a, int b) const {
        return joint[basis_index][outcome_index(a)][outcome_index(b)];
    }
};

ConditionalTable make_table(const std::vector<Axis>& bases);
void validate_table(const ConditionalTable& table);

// Finite mixture of channels: weight q_lambda, classical response
// P_lambda(A_i = +1) per basis, and the channel state at Bob's time.
struct HiddenChannel {
    double weight;
    std::array<double, 3> response_plus;  // P(A_i = +1), bases in z, x, y order
    DensityMatrix state;
};

struct HiddenStateModel {
    std::vector<HiddenChannel> channels;
};

struct SteeringResult {
    double s_value;
    std::vector<double> contributions;  // per basis, same order as the table
};

struct TimeSeries {
    std::vector<double> times;
    std::vector<double> values;
};

struct ProjectionResult {
    double probability;
    std::optional<DensityMatrix> post_state;  // absent on zero-probability branches
};

// Projective measurement on a qubit. The post-measurement state is the
// projector itself (rank-1 collapse).
ProjectionResult project(const DensityMatrix& rho, const MeasurementSetting& setting);

// Alice projects at t = 0, the conditioned state evolves to t, Bob measures
// the same basis. For dim-4 models the measurements act on the first
// (system) qubit as Pi x I. `steps` = 0 picks the default resolution.
ConditionalTable quantum_table(const LindbladModel& model, const DensityMatrix& rho0, double t,
                               int n_bases, int steps = 0);

ConditionalTable hidden_table(const HiddenStateModel& model, int n_bases);

SteeringResult steering_parameter(const ConditionalTable& table);

// Two-basis entropic parameter sum_i H(B_i | A_i) in bits; >= 1 for any
// hidden-state channel.
double entropic_steering(const ConditionalTable& table);

// S_N(t) over the grid, one evolution pass per conditioned branch.
TimeSeries steering_curve(const LindbladModel& model, const DensityMatrix& rho0,
                          const TimeGrid& grid, int n_bases);

// E[<B_basis>^2](t) for a single conditioning basis.
TimeSeries basis_contribution_curve(const LindbladModel& model, const DensityMatrix& rho0,
                                    const TimeGrid& grid, Axis basis);

// S_N(t) together with all three per-basis contributions (z, x, y order).
struct SteeringCurves {
    std::vector<double> times;
    std::vector<double> s_values;                     // sum of the first n_bases contributions
    std::array<std::vector<double>, 3> contributions;  // indexed by Axis
};
SteeringCurves steering_components(const LindbladModel& model, const DensityMatrix& rho0,
                                   const TimeGrid& grid, int n_bases);

// Spatial reference: Werner state of visibility V, Alice on qubit 1, Bob on
// qubit 2, no dynamics. S_N = N V^2.
ConditionalTable werner_table(double visibility, int n_bases);

// Bob's conditioned reduced state after Alice measures `setting` on her half
// of the Werner state.
DensityMatrix werner_conditioned_state(double visibility, const MeasurementSetting& setting);

// The ordering test: Bob dictates Alice's basis after reception.
// pre_measured: Alice measured Bob's qubit beforehand in a random basis and
// answers from her record (or a coin). entangled: a shared singlet. Both
// tables are exact; Monte-Carlo sampling lives in the records module.
enum class OrderingKind { PreMeasured, Entangled };
ConditionalTable ordering_scenario(OrderingKind kind, int n_bases = 3);

}  // namespace tsteer

#endif
