#include "tsteer/bb84.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tsteer {

namespace {

constexpr double kSimplexTol = 1e-9;

double bisect_root(double (*f)(double), double lo, double hi) {
    // f must change sign across [lo, hi]; 200 iterations pin the root far
    // below the 1e-10 contract.
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0))
        throw std::invalid_argument("bisect_root: no sign change over the bracket");
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double independent_gap(double r) { return 2.0 * (1.0 - 2.0 * r) * (1.0 - 2.0 * r) - 1.0; }
double entropic_gap(double r) { return 2.0 * binary_entropy(r) - 1.0; }

}  // namespace

EveParams::EveParams(double p_in, double q_in) : p(p_in), q(q_in) {
    if (p < 0.0 || q < 0.0)
        throw std::invalid_argument("EveParams: probabilities must be >= 0");
    if (p + q > 1.0 + kSimplexTol)
        throw std::invalid_argument("EveParams: p + q must not exceed 1, got " +
                                    std::to_string(p + q));
}

KrausChannel::KrausChannel(std::vector<ComplexMatrix> operators)
    : operators_(std::move(operators)) {
    if (operators_.empty())
        throw std::invalid_argument("KrausChannel: empty operator list");
    ComplexMatrix completeness(operators_.front().dim());
    for (const ComplexMatrix& k : operators_) completeness = completeness + k.adjoint() * k;
    if (completeness.max_abs_diff(ComplexMatrix::identity(completeness.dim())) > 1e-12)
        throw std::invalid_argument("KrausChannel: operators do not satisfy sum K^dag K = I");
}

ComplexMatrix KrausChannel::apply(const ComplexMatrix& rho) const {
    ComplexMatrix out(rho.dim());
    for (const ComplexMatrix& k : operators_) out = out + k * rho * k.adjoint();
    return out;
}

DensityMatrix KrausChannel::apply(const DensityMatrix& rho) const {
    return DensityMatrix(apply(rho.matrix()));
}

KrausChannel eve_channel(const EveParams& params) {
    const double pass = std::max(0.0, 1.0 - params.p - params.q);
    std::vector<ComplexMatrix> ops;
    ops.push_back(ComplexMatrix::identity(2).scaled(std::sqrt(pass)));
    for (int a : {1, -1}) ops.push_back(projector(Axis::Z, a).scaled(std::sqrt(params.q)));
    for (int a : {1, -1}) ops.push_back(projector(Axis::X, a).scaled(std::sqrt(params.p)));
    return KrausChannel(std::move(ops));
}

ConditionalTable bb84_table(const EveParams& params) {
    const KrausChannel channel = eve_channel(params);
    const DensityMatrix rho0 = DensityMatrix::maximally_mixed(2);
    ConditionalTable table = make_table(standard_bases(2));
    for (int i = 0; i < 2; ++i) {
        const Axis basis = table.bases[i];
        for (int a : {1, -1}) {
            ProjectionResult alice = project(rho0, {basis, a});
            if (!alice.post_state) continue;
            const DensityMatrix received = channel.apply(*alice.post_state);
            for (int b : {1, -1}) {
                const double conditional =
                    detail::real_trace_product(projector(basis, b), received.matrix());
                table.entry(i, a, b) = alice.probability * conditional;
            }
        }
    }
    validate_table(table);
    return table;
}

double bb84_error_rate(const EveParams& params) {
    const KrausChannel channel = eve_channel(params);
    const DensityMatrix rho0 = DensityMatrix::maximally_mixed(2);
    double total = 0.0;
    for (Axis basis : standard_bases(2)) {
        for (int a : {1, -1}) {
            ProjectionResult alice = project(rho0, {basis, a});
            if (!alice.post_state) continue;
            const DensityMatrix received = channel.apply(*alice.post_state);
            total += alice.probability * (1.0 - pure_fidelity(*alice.post_state, received));
        }
    }
    return 0.5 * total;
}

SteeringResult bb84_steering(const EveParams& params) {
    return steering_parameter(bb84_table(params));
}

double binary_entropy(double x) {
    if (x < 0.0 || x > 1.0)
        throw std::invalid_argument("binary_entropy: argument outside [0,1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double threshold_independent() {
    return bisect_root(independent_gap, 1e-9, 0.5 - 1e-9);
}

double threshold_entropic() {
    return bisect_root(entropic_gap, 1e-9, 0.5 - 1e-9);
}

std::vector<SweepRow> sweep(const std::vector<double>& p_grid, const std::vector<double>& q_grid) {
    std::vector<SweepRow> rows;
    rows.reserve(p_grid.size() * q_grid.size());
    for (double p : p_grid) {
        for (double q : q_grid) {
            if (p + q > 1.0 + kSimplexTol) continue;
            const EveParams params(p, q);
            const double s2 = bb84_steering(params).s_value;
            rows.push_back({p, q, s2, bb84_error_rate(params), s2 > 1.0});
        }
    }
    return rows;
}

}  // namespace tsteer
