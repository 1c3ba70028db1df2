#include "tsteer/steering.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tsteer {

namespace {

constexpr double kZeroBranch = 1e-12;   // Alice branches below this weight contribute 0
constexpr double kZeroProject = 1e-14;  // project() zero-branch flag threshold

double clamp_probability(double p) {
    return p < 0.0 && p > -1e-12 ? 0.0 : p;
}

// One conditioned Alice branch of the two-time protocol: branch weight and
// the joint state right after her projection.
struct AliceBranch {
    double weight;
    std::optional<DensityMatrix> state;
};

AliceBranch alice_branch(const LindbladModel& model, const DensityMatrix& rho0, Axis basis,
                         int outcome) {
    const ComplexMatrix proj = projector(basis, outcome);
    if (model.dim() == 2) {
        ProjectionResult r = project(rho0, {basis, outcome});
        if (!r.post_state) return {r.probability, std::nullopt};
        return {r.probability, r.post_state};
    }
    // Two-qubit model: Alice measures the system (first) qubit, Pi x I.
    const ComplexMatrix proj4 = tensor(proj, ComplexMatrix::identity(2));
    const ComplexMatrix conditioned = proj4 * rho0.matrix() * proj4;
    double p = clamp_probability(conditioned.trace().real());
    if (p < kZeroBranch) return {p, std::nullopt};
    return {p, DensityMatrix(conditioned.scaled(1.0 / p))};
}

// <B_i> for the conditioned state at Bob's time (reduced to the system qubit
// for two-qubit models).
double bob_expectation(const DensityMatrix& state, Axis basis) {
    const ComplexMatrix b = state.dim() == 2
                                ? state.matrix()
                                : detail::partial_trace_matrix(state.matrix(), 1);
    return detail::real_trace_product(pauli(basis), b);
}

double bob_probability(const DensityMatrix& state, Axis basis, int outcome) {
    const ComplexMatrix b = state.dim() == 2
                                ? state.matrix()
                                : detail::partial_trace_matrix(state.matrix(), 1);
    return clamp_probability(detail::real_trace_product(projector(basis, outcome), b));
}

double entropy_bits(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

}  // namespace

int outcome_index(int outcome) {
    if (outcome == 1) return 0;
    if (outcome == -1) return 1;
    throw std::invalid_argument("outcome must be +1 or -1");
}

std::vector<Axis> standard_bases(int n) {
    if (n < 1 || n > 3)
        throw std::invalid_argument("number of bases must be between 1 and 3");
    const std::array<Axis, 3> order{Axis::Z, Axis::X, Axis::Y};
    return std::vector<Axis>(order.begin(), order.begin() + n);
}

ConditionalTable make_table(const std::vector<Axis>& bases) {
    ConditionalTable t;
    t.bases = bases;
    t.joint.assign(bases.size(), {{{0.0, 0.0}, {0.0, 0.0}}});
    return t;
}

void validate_table(const ConditionalTable& table) {
    if (table.bases.empty() || table.bases.size() > 3)
        throw std::invalid_argument("ConditionalTable must hold 1 to 3 bases");
    if (table.joint.size() != table.bases.size())
        throw std::invalid_argument("ConditionalTable block count mismatch");
    for (std::size_t i = 0; i < table.joint.size(); ++i) {
        double sum = 0.0;
        for (const auto& row : table.joint[i])
            for (double p : row) {
                if (p < -1e-12)
                    throw std::invalid_argument("ConditionalTable entry below 0");
                sum += p;
            }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("ConditionalTable block for basis " +
                                        std::string(1, axis_label(table.bases[i])) +
                                        " sums to " + std::to_string(sum));
    }
}

ProjectionResult project(const DensityMatrix& rho, const MeasurementSetting& setting) {
    if (rho.dim() != 2)
        throw std::invalid_argument("project expects a single-qubit state");
    const ComplexMatrix proj = projector(setting.basis, setting.outcome);
    const double p = clamp_probability(detail::real_trace_product(proj, rho.matrix()));
    if (p < kZeroProject) return {p, std::nullopt};
    return {p, DensityMatrix::pure(proj)};
}

ConditionalTable quantum_table(const LindbladModel& model, const DensityMatrix& rho0, double t,
                               int n_bases, int steps) {
    if (t < 0.0) throw std::invalid_argument("quantum_table: t must be >= 0");
    if (n_bases != 2 && n_bases != 3)
        throw std::invalid_argument("quantum_table: n_bases must be 2 or 3");
    ConditionalTable table = make_table(standard_bases(n_bases));
    for (int i = 0; i < n_bases; ++i) {
        const Axis basis = table.bases[i];
        for (int a : {1, -1}) {
            AliceBranch branch = alice_branch(model, rho0, basis, a);
            if (!branch.state) continue;  // zero-weight branch: joint entries stay 0
            DensityMatrix at_t = *branch.state;
            if (t > 0.0) {
                const TimeGrid grid(0.0, t, steps > 0 ? steps : default_steps(model, t));
                at_t = evolve(model, at_t, grid).back();
            }
            for (int b : {1, -1})
                table.entry(i, a, b) = branch.weight * bob_probability(at_t, basis, b);
        }
    }
    validate_table(table);
    return table;
}

ConditionalTable hidden_table(const HiddenStateModel& model, int n_bases) {
    if (n_bases != 2 && n_bases != 3)
        throw std::invalid_argument("hidden_table: n_bases must be 2 or 3");
    double total_weight = 0.0;
    for (const HiddenChannel& ch : model.channels) {
        if (ch.weight < 0.0)
            throw std::invalid_argument("hidden_table: negative channel weight");
        for (double p : ch.response_plus)
            if (p < 0.0 || p > 1.0)
                throw std::invalid_argument("hidden_table: response probability outside [0,1]");
        total_weight += ch.weight;
    }
    if (std::abs(total_weight - 1.0) > 1e-12)
        throw std::invalid_argument("hidden_table: channel weights sum to " +
                                    std::to_string(total_weight));

    ConditionalTable table = make_table(standard_bases(n_bases));
    for (int i = 0; i < n_bases; ++i) {
        const Axis basis = table.bases[i];
        for (const HiddenChannel& ch : model.channels) {
            const double response[2] = {ch.response_plus[static_cast<int>(basis)],
                                        1.0 - ch.response_plus[static_cast<int>(basis)]};
            for (int a : {1, -1})
                for (int b : {1, -1})
                    table.entry(i, a, b) += ch.weight * response[outcome_index(a)] *
                                            bob_probability(ch.state, basis, b);
        }
    }
    validate_table(table);
    return table;
}

SteeringResult steering_parameter(const ConditionalTable& table) {
    validate_table(table);
    SteeringResult result;
    result.contributions.reserve(table.bases.size());
    double total = 0.0;
    for (std::size_t i = 0; i < table.bases.size(); ++i) {
        double contribution = 0.0;
        for (int a : {1, -1}) {
            const double p_plus = table.joint[i][outcome_index(a)][0];
            const double p_minus = table.joint[i][outcome_index(a)][1];
            const double p_a = p_plus + p_minus;
            if (p_a < kZeroBranch) continue;
            const double expectation = (p_plus - p_minus) / p_a;
            contribution += p_a * expectation * expectation;
        }
        result.contributions.push_back(contribution);
        total += contribution;
    }
    result.s_value = total;
    return result;
}

double entropic_steering(const ConditionalTable& table) {
    validate_table(table);
    if (table.n_bases() != 2)
        throw std::invalid_argument("entropic_steering requires a two-basis table");
    double total = 0.0;
    for (std::size_t i = 0; i < table.bases.size(); ++i) {
        for (int a : {1, -1}) {
            const double p_plus = table.joint[i][outcome_index(a)][0];
            const double p_minus = table.joint[i][outcome_index(a)][1];
            const double p_a = p_plus + p_minus;
            if (p_a < kZeroBranch) continue;
            total += p_a * entropy_bits(p_plus / p_a);
        }
    }
    return total;
}

SteeringCurves steering_components(const LindbladModel& model, const DensityMatrix& rho0,
                                   const TimeGrid& grid, int n_bases) {
    if (n_bases != 2 && n_bases != 3)
        throw std::invalid_argument("steering_components: n_bases must be 2 or 3");
    SteeringCurves curves;
    curves.times.resize(grid.steps + 1);
    for (int k = 0; k <= grid.steps; ++k) curves.times[k] = grid.time_at(k);
    for (auto& c : curves.contributions) c.assign(grid.steps + 1, 0.0);

    for (Axis basis : standard_bases(3)) {
        std::vector<double>& contribution = curves.contributions[static_cast<int>(basis)];
        for (int a : {1, -1}) {
            AliceBranch branch = alice_branch(model, rho0, basis, a);
            if (!branch.state) continue;
            evolve_observe(model, *branch.state, grid,
                           [&](int k, double, const DensityMatrix& state) {
                               const double e = bob_expectation(state, basis);
                               contribution[k] += branch.weight * e * e;
                           });
        }
    }

    curves.s_values.assign(grid.steps + 1, 0.0);
    for (Axis basis : standard_bases(n_bases))
        for (int k = 0; k <= grid.steps; ++k)
            curves.s_values[k] += curves.contributions[static_cast<int>(basis)][k];
    return curves;
}

TimeSeries steering_curve(const LindbladModel& model, const DensityMatrix& rho0,
                          const TimeGrid& grid, int n_bases) {
    SteeringCurves curves = steering_components(model, rho0, grid, n_bases);
    return {std::move(curves.times), std::move(curves.s_values)};
}

TimeSeries basis_contribution_curve(const LindbladModel& model, const DensityMatrix& rho0,
                                    const TimeGrid& grid, Axis basis) {
    TimeSeries series;
    series.times.resize(grid.steps + 1);
    for (int k = 0; k <= grid.steps; ++k) series.times[k] = grid.time_at(k);
    series.values.assign(grid.steps + 1, 0.0);
    for (int a : {1, -1}) {
        AliceBranch branch = alice_branch(model, rho0, basis, a);
        if (!branch.state) continue;
        evolve_observe(model, *branch.state, grid, [&](int k, double, const DensityMatrix& state) {
            const double e = bob_expectation(state, basis);
            series.values[k] += branch.weight * e * e;
        });
    }
    return series;
}

namespace {

ComplexMatrix werner_matrix(double visibility) {
    // |psi-> = (|eg> - |ge>)/sqrt(2), indices 1 and 2 in the product basis.
    ComplexMatrix singlet(4);
    singlet(1, 1) = 0.5;
    singlet(2, 2) = 0.5;
    singlet(1, 2) = -0.5;
    singlet(2, 1) = -0.5;
    return singlet.scaled(visibility) +
           ComplexMatrix::identity(4).scaled((1.0 - visibility) / 4.0);
}

}  // namespace

ConditionalTable werner_table(double visibility, int n_bases) {
    if (visibility < 0.0 || visibility > 1.0)
        throw std::invalid_argument("werner_table: visibility must lie in [0,1]");
    if (n_bases != 2 && n_bases != 3)
        throw std::invalid_argument("werner_table: n_bases must be 2 or 3");
    const ComplexMatrix rho_w = werner_matrix(visibility);
    ConditionalTable table = make_table(standard_bases(n_bases));
    for (int i = 0; i < n_bases; ++i) {
        const Axis basis = table.bases[i];
        for (int a : {1, -1}) {
            const ComplexMatrix proj4 = tensor(projector(basis, a), ComplexMatrix::identity(2));
            const ComplexMatrix conditioned = proj4 * rho_w * proj4;
            const double p_a = clamp_probability(conditioned.trace().real());
            if (p_a < kZeroBranch) continue;
            const ComplexMatrix bob = detail::partial_trace_matrix(conditioned, 2).scaled(1.0 / p_a);
            for (int b : {1, -1})
                table.entry(i, a, b) =
                    p_a * clamp_probability(detail::real_trace_product(projector(basis, b), bob));
        }
    }
    validate_table(table);
    return table;
}

DensityMatrix werner_conditioned_state(double visibility, const MeasurementSetting& setting) {
    const ComplexMatrix rho_w = werner_matrix(visibility);
    const ComplexMatrix proj4 =
        tensor(projector(setting.basis, setting.outcome), ComplexMatrix::identity(2));
    const ComplexMatrix conditioned = proj4 * rho_w * proj4;
    const double p = conditioned.trace().real();
    if (p < kZeroBranch)
        throw std::invalid_argument("werner_conditioned_state: zero-probability branch");
    return DensityMatrix(detail::partial_trace_matrix(conditioned, 2).scaled(1.0 / p));
}

ConditionalTable ordering_scenario(OrderingKind kind, int n_bases) {
    if (n_bases != 2 && n_bases != 3)
        throw std::invalid_argument("ordering_scenario: n_bases must be 2 or 3");
    if (kind == OrderingKind::Entangled)
        return werner_table(1.0, n_bases);

    // Pre-measured strategy, exact mixture. With probability 1/n Alice's
    // random pre-measurement basis k matches Bob's ordered basis i: her
    // record then agrees with Bob's later outcome exactly. Otherwise Bob
    // measures mutually unbiased to the collapsed state and Alice answers
    // with a fair coin, so a and b are independent coins.
    const double n = n_bases;
    ConditionalTable table = make_table(standard_bases(n_bases));
    for (int i = 0; i < n_bases; ++i)
        for (int a : {1, -1})
            for (int b : {1, -1})
                table.entry(i, a, b) =
                    (a == b ? 1.0 / (2.0 * n) : 0.0) + (n - 1.0) / (4.0 * n);
    validate_table(table);
    return table;
}

}  // namespace tsteer
