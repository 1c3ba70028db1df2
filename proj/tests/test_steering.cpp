#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "random_util.hpp"
#include "tsteer/bb84.hpp"
#include "tsteer/steering.hpp"

using namespace tsteer;

namespace {

ConditionalTable perfectly_correlated_table(int n_bases) {
    ConditionalTable table = make_table(standard_bases(n_bases));
    for (int i = 0; i < n_bases; ++i)
        for (int a : {1, -1}) table.entry(i, a, a) = 0.5;
    return table;
}

ConditionalTable uniform_table(int n_bases) {
    ConditionalTable table = make_table(standard_bases(n_bases));
    for (auto& block : table.joint)
        for (auto& row : block) row = {0.25, 0.25};
    return table;
}

DensityMatrix mixed_system_ground_ancilla() {
    return DensityMatrix(tensor(ComplexMatrix::identity(2).scaled(0.5), projector(Axis::Z, -1)));
}

// Strategy enumeration for the pre-measured ordering case, built from
// projector arithmetic rather than the closed-form mixture.
ConditionalTable enumerate_pre_measured(int n_bases) {
    const std::vector<Axis> bases = standard_bases(n_bases);
    ConditionalTable table = make_table(bases);
    for (int i = 0; i < n_bases; ++i) {
        for (std::size_t k = 0; k < bases.size(); ++k) {
            const double p_basis = 1.0 / n_bases;
            if (bases[k] == bases[i]) {
                // Alice's record is the actual outcome on I/2 and Bob's qubit
                // collapsed to that projector: he reproduces it exactly.
                for (int a : {1, -1}) {
                    ProjectionResult alice =
                        project(DensityMatrix::maximally_mixed(2), {bases[k], a});
                    REQUIRE(alice.post_state.has_value());
                    for (int b : {1, -1}) {
                        const double p_bob = detail::real_trace_product(
                            projector(bases[i], b), alice.post_state->matrix());
                        table.entry(i, a, b) += p_basis * alice.probability * p_bob;
                    }
                }
            } else {
                // Alice answers with a fair coin; Bob measures the collapsed
                // state in a mutually unbiased basis.
                for (int pre_outcome : {1, -1}) {
                    ProjectionResult pre =
                        project(DensityMatrix::maximally_mixed(2), {bases[k], pre_outcome});
                    REQUIRE(pre.post_state.has_value());
                    for (int a : {1, -1}) {
                        for (int b : {1, -1}) {
                            const double p_bob = detail::real_trace_product(
                                projector(bases[i], b), pre.post_state->matrix());
                            table.entry(i, a, b) += p_basis * pre.probability * 0.5 * p_bob;
                        }
                    }
                }
            }
        }
    }
    validate_table(table);
    return table;
}

}  // namespace

TEST_CASE("project: probabilities and collapse") {
    const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
    for (Axis axis : {Axis::Z, Axis::X, Axis::Y}) {
        for (int a : {1, -1}) {
            const ProjectionResult r = project(mixed, {axis, a});
            CHECK_NEAR(r.probability, 0.5, 1e-15);
            REQUIRE(r.post_state.has_value());
            CHECK(r.post_state->matrix().max_abs_diff(projector(axis, a)) <= 1e-15);
        }
    }

    const DensityMatrix up = DensityMatrix::pure(projector(Axis::Z, 1));
    const ProjectionResult same = project(up, {Axis::Z, 1});
    CHECK_NEAR(same.probability, 1.0, 1e-15);
    CHECK(same.post_state->matrix().max_abs_diff(projector(Axis::Z, 1)) <= 1e-15);

    const ProjectionResult unbiased = project(up, {Axis::X, 1});
    CHECK_NEAR(unbiased.probability, 0.5, 1e-15);
    CHECK(unbiased.post_state->matrix().max_abs_diff(projector(Axis::X, 1)) <= 1e-15);

    const ProjectionResult zero = project(up, {Axis::Z, -1});
    CHECK(zero.probability < 1e-14);
    CHECK_FALSE(zero.post_state.has_value());
}

TEST_CASE("quantum table at t = 0 reaches the ceiling") {
    const LindbladModel model = rabi_model(9.0, 1.0);
    const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);

    const ConditionalTable three = quantum_table(model, mixed, 0.0, 3);
    CHECK_NEAR(steering_parameter(three).s_value, 3.0, 1e-9);
    for (int i = 0; i < 3; ++i)
        for (int a : {1, -1}) {
            CHECK_NEAR(three.entry(i, a, a), 0.5, 1e-12);
            CHECK_NEAR(three.entry(i, a, -a), 0.0, 1e-12);
        }

    const ConditionalTable two = quantum_table(model, mixed, 0.0, 2);
    CHECK_NEAR(steering_parameter(two).s_value, 2.0, 1e-9);

    // Same ceiling for the two-qubit model measured on the system qubit.
    const ConditionalTable ancilla =
        quantum_table(ancilla_model(9.0, 1.0), mixed_system_ground_ancilla(), 0.0, 3);
    CHECK_NEAR(steering_parameter(ancilla).s_value, 3.0, 1e-9);
}

TEST_CASE("long after the decay has washed out conditioning, S_3 hits the Bloch length") {
    // g = 0: the steady state is |g><g|, Bloch length 1, and Bob's
    // conditional distribution no longer depends on Alice's outcome.
    const LindbladModel model = rabi_model(0.0, 1.0);
    const ConditionalTable table = quantum_table(model, DensityMatrix::maximally_mixed(2), 30.0, 3);
    const SteeringResult result = steering_parameter(table);
    CHECK_NEAR(result.s_value, 1.0, 1e-6);
    for (int i = 0; i < 3; ++i) {
        for (int b : {1, -1}) {
            const double p_plus =
                table.entry(i, 1, b) / (table.entry(i, 1, 1) + table.entry(i, 1, -1));
            const double p_minus =
                table.entry(i, -1, b) / (table.entry(i, -1, 1) + table.entry(i, -1, -1));
            CHECK_NEAR(p_plus, p_minus, 1e-6);
        }
    }
}

TEST_CASE("hidden-state tables") {
    HiddenStateModel uniform;
    uniform.channels.push_back({1.0, {0.5, 0.5, 0.5}, DensityMatrix::maximally_mixed(2)});
    const ConditionalTable flat = hidden_table(uniform, 3);
    for (int i = 0; i < 3; ++i)
        for (int a : {1, -1})
            for (int b : {1, -1}) CHECK_NEAR(flat.entry(i, a, b), 0.25, 1e-15);
    CHECK_NEAR(steering_parameter(flat).s_value, 0.0, 1e-15);

    HiddenStateModel deterministic;
    deterministic.channels.push_back(
        {1.0, {1.0, 0.5, 0.5}, DensityMatrix::pure(projector(Axis::Z, 1))});
    const ConditionalTable det = hidden_table(deterministic, 3);
    CHECK_NEAR(det.entry(0, 1, 1), 1.0, 1e-15);
    const SteeringResult result = steering_parameter(det);
    CHECK_NEAR(result.s_value, 1.0, 1e-12);
    CHECK_NEAR(result.contributions[0], 1.0, 1e-12);  // z
    CHECK_NEAR(result.contributions[1], 0.0, 1e-12);  // x
    CHECK_NEAR(result.contributions[2], 0.0, 1e-12);  // y

    HiddenStateModel unnormalized;
    unnormalized.channels.push_back({0.7, {0.5, 0.5, 0.5}, DensityMatrix::maximally_mixed(2)});
    CHECK_THROWS_AS(hidden_table(unnormalized, 3), std::invalid_argument);
}

TEST_CASE("hidden-state bound S_N <= 1 over random models") {
    std::mt19937_64 engine(2024);
    for (int rep = 0; rep < 2000; ++rep) {
        const HiddenStateModel model = testutil::random_hidden_model(engine);
        for (int n : {2, 3}) {
            const double s = steering_parameter(hidden_table(model, n)).s_value;
            CHECK(s <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("steering parameter on hand-built tables") {
    CHECK_NEAR(steering_parameter(uniform_table(3)).s_value, 0.0, 1e-15);
    CHECK_NEAR(steering_parameter(perfectly_correlated_table(3)).s_value, 3.0, 1e-15);
    CHECK_NEAR(steering_parameter(werner_table(0.8, 3)).s_value, 1.92, 1e-9);

    // Branches below the zero-probability threshold contribute nothing.
    ConditionalTable degenerate = make_table(standard_bases(2));
    for (int i = 0; i < 2; ++i) degenerate.entry(i, 1, 1) = 1.0;  // P(a = -1) = 0
    const SteeringResult r = steering_parameter(degenerate);
    CHECK_NEAR(r.s_value, 2.0, 1e-15);

    // Relabeling a -> -a together with b -> -b inside a block is a symmetry.
    std::mt19937_64 engine(5);
    for (int rep = 0; rep < 25; ++rep) {
        const ConditionalTable table = hidden_table(testutil::random_hidden_model(engine), 3);
        ConditionalTable flipped = table;
        for (int ai = 0; ai < 2; ++ai)
            for (int bi = 0; bi < 2; ++bi)
                flipped.joint[1][ai][bi] = table.joint[1][1 - ai][1 - bi];
        CHECK_NEAR(steering_parameter(flipped).s_value, steering_parameter(table).s_value, 1e-12);
    }
}

TEST_CASE("entropic steering parameter") {
    CHECK_NEAR(entropic_steering(perfectly_correlated_table(2)), 0.0, 1e-15);
    CHECK_NEAR(entropic_steering(uniform_table(2)), 2.0, 1e-15);
    CHECK_THROWS_AS(entropic_steering(uniform_table(3)), std::invalid_argument);

    // Eve's intercept-resend table at p = q with R_err at the entropic
    // threshold sits exactly on the S_2^(E) = 1 boundary.
    const double r_err = 0.110028;
    const ConditionalTable eve = bb84_table(EveParams(2.0 * r_err, 2.0 * r_err));
    CHECK_NEAR(entropic_steering(eve), 1.0, 1e-4);

    // Consistency with the standard parameter at the extremes.
    CHECK_NEAR(steering_parameter(perfectly_correlated_table(2)).s_value, 2.0, 1e-15);
    CHECK_NEAR(steering_parameter(uniform_table(2)).s_value, 0.0, 1e-15);
}

TEST_CASE("steering curve: ceiling at t = 0, range, monotone decay at g = 0") {
    const LindbladModel driven = rabi_model(2.0, 1.0);
    const TimeGrid grid(0.0, 2.0, 4000);
    const TimeSeries s3 = steering_curve(driven, DensityMatrix::maximally_mixed(2), grid, 3);
    REQUIRE(s3.values.size() == 4001);
    CHECK_NEAR(s3.values.front(), 3.0, 1e-9);
    for (double v : s3.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 3.0 + 1e-9);
    }

    const LindbladModel undriven = rabi_model(0.0, 1.0);
    const TimeSeries decay =
        steering_curve(undriven, DensityMatrix::maximally_mixed(2), TimeGrid(0.0, 4.0, 8000), 3);
    for (std::size_t k = 1; k < decay.values.size(); ++k)
        CHECK(decay.values[k] <= decay.values[k - 1] + 1e-12);
}

TEST_CASE("x-basis contribution: instantaneous unity, g-independence, pure exponential") {
    const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
    const TimeGrid grid(0.0, 2.0, 16000);

    const TimeSeries slow = basis_contribution_curve(rabi_model(2.0, 1.0), mixed, grid, Axis::X);
    const TimeSeries fast = basis_contribution_curve(rabi_model(9.0, 1.0), mixed, grid, Axis::X);
    CHECK_NEAR(slow.values.front(), 1.0, 1e-12);

    double max_gap = 0.0;
    for (std::size_t k = 0; k < slow.values.size(); ++k)
        max_gap = std::max(max_gap, std::abs(slow.values[k] - fast.values[k]));
    CHECK(max_gap <= 1e-8);

    std::vector<double> logs(slow.values.size());
    for (std::size_t k = 0; k < slow.values.size(); ++k) logs[k] = std::log(slow.values[k]);
    const testutil::AffineFit fit = testutil::fit_affine(slow.times, logs);
    CHECK(fit.max_residual < 1e-6);
    // Fitted decay rate in units of gamma; the dissipator convention of the
    // model fixes the coherence decay at gamma/2, hence kappa/gamma = 1.
    CHECK_NEAR(-fit.slope, 1.0, 1e-6);
}

TEST_CASE("werner tables") {
    CHECK_THROWS_AS(werner_table(1.2, 3), std::invalid_argument);

    const ConditionalTable flat = werner_table(0.0, 3);
    for (int i = 0; i < 3; ++i)
        for (int a : {1, -1})
            for (int b : {1, -1}) CHECK_NEAR(flat.entry(i, a, b), 0.25, 1e-12);
    CHECK_NEAR(steering_parameter(flat).s_value, 0.0, 1e-12);

    const ConditionalTable singlet = werner_table(1.0, 3);
    CHECK_NEAR(singlet.entry(0, 1, -1), 0.5, 1e-12);
    CHECK_NEAR(singlet.entry(0, 1, 1), 0.0, 1e-12);

    for (double v : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0})
        for (int n : {2, 3})
            CHECK_NEAR(steering_parameter(werner_table(v, n)).s_value, n * v * v, 1e-9);

    // Conditioned Bob states for the two cases displayed in the reference.
    for (double v : {0.3, 0.8}) {
        const DensityMatrix z_cond = werner_conditioned_state(v, {Axis::Z, 1});
        CHECK_NEAR(z_cond.matrix()(0, 0).real(), (1.0 - v) / 2.0, 1e-12);
        CHECK_NEAR(z_cond.matrix()(1, 1).real(), (1.0 + v) / 2.0, 1e-12);
        CHECK(std::abs(z_cond.matrix()(0, 1)) <= 1e-12);

        const DensityMatrix x_cond = werner_conditioned_state(v, {Axis::X, 1});
        CHECK_NEAR(x_cond.matrix()(0, 0).real(), 0.5, 1e-12);
        CHECK_NEAR(x_cond.matrix()(0, 1).real(), -v / 2.0, 1e-12);
        CHECK_NEAR(x_cond.matrix()(0, 1).imag(), 0.0, 1e-12);
    }
}

TEST_CASE("ordering scenarios against the strategy enumeration") {
    for (int n : {2, 3}) {
        const ConditionalTable table = ordering_scenario(OrderingKind::PreMeasured, n);
        const ConditionalTable oracle = enumerate_pre_measured(n);
        for (int i = 0; i < n; ++i)
            for (int a : {1, -1})
                for (int b : {1, -1})
                    CHECK_NEAR(table.entry(i, a, b), oracle.entry(i, a, b), 1e-15);
    }

    const ConditionalTable pre3 = ordering_scenario(OrderingKind::PreMeasured, 3);
    for (int i = 0; i < 3; ++i)
        for (int a : {1, -1})
            for (int b : {1, -1})
                CHECK_NEAR(pre3.entry(i, a, b), (a == b ? 1.0 / 6.0 : 0.0) + 1.0 / 6.0, 1e-15);
    CHECK_NEAR(steering_parameter(pre3).s_value, 1.0 / 3.0, 1e-12);

    CHECK_NEAR(steering_parameter(ordering_scenario(OrderingKind::PreMeasured, 2)).s_value, 0.5,
               1e-12);

    const ConditionalTable entangled = ordering_scenario(OrderingKind::Entangled, 3);
    CHECK_NEAR(steering_parameter(entangled).s_value, 3.0, 1e-12);
    for (int i = 0; i < 3; ++i)
        for (int a : {1, -1}) CHECK_NEAR(entangled.entry(i, a, -a), 0.5, 1e-12);
}

TEST_CASE("quantum ceiling S_N <= N for random evolutions") {
    std::mt19937_64 engine(99);
    for (int rep = 0; rep < 6; ++rep) {
        const double g = 9.0 * testutil::uniform_unit(engine);
        const double t = 1.5 * testutil::uniform_unit(engine);
        const DensityMatrix rho0 = testutil::random_qubit_state(engine);
        for (int n : {2, 3}) {
            const double s =
                steering_parameter(quantum_table(rabi_model(g, 1.0), rho0, t, n)).s_value;
            CHECK(s <= n + 1e-9);
        }
    }
}

TEST_CASE("table validation catches malformed tables") {
    ConditionalTable bad = make_table(standard_bases(2));
    bad.entry(0, 1, 1) = 0.6;  // block sums to 0.6
    bad.entry(1, 1, 1) = 1.0;
    CHECK_THROWS_AS(validate_table(bad), std::invalid_argument);

    ConditionalTable negative = uniform_table(2);
    negative.joint[0][0][0] = -1e-6;
    negative.joint[0][0][1] = 0.5 + 1e-6;
    CHECK_THROWS_AS(validate_table(negative), std::invalid_argument);

    CHECK_THROWS_AS(quantum_table(rabi_model(1.0, 1.0), DensityMatrix::maximally_mixed(2), -1.0, 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(quantum_table(rabi_model(1.0, 1.0), DensityMatrix::maximally_mixed(2), 1.0, 4),
                    std::invalid_argument);
}
