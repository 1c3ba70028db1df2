#ifndef TSTEER_TESTS_RANDOM_UTIL_HPP
#define TSTEER_TESTS_RANDOM_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "tsteer/qmat.hpp"
#include "tsteer/steering.hpp"

// Deterministic generators and small fitting helpers shared by the unit
// tests and the acceptance suite.

namespace testutil {

inline double uniform_unit(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

inline tsteer::ComplexMatrix bloch_state_matrix(double bx, double by, double bz) {
    tsteer::ComplexMatrix m = tsteer::ComplexMatrix::identity(2).scaled(0.5);
    m = m + tsteer::pauli(tsteer::Axis::X).scaled(0.5 * bx);
    m = m + tsteer::pauli(tsteer::Axis::Y).scaled(0.5 * by);
    m = m + tsteer::pauli(tsteer::Axis::Z).scaled(0.5 * bz);
    return m;
}

// Uniformly distributed Bloch vector of length <= max_radius.
inline tsteer::DensityMatrix random_qubit_state(std::mt19937_64& engine, double max_radius = 1.0) {
    const double radius = max_radius * std::cbrt(uniform_unit(engine));
    const double cos_theta = 2.0 * uniform_unit(engine) - 1.0;
    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    const double phi = 2.0 * M_PI * uniform_unit(engine);
    return tsteer::DensityMatrix(bloch_state_matrix(radius * sin_theta * std::cos(phi),
                                                    radius * sin_theta * std::sin(phi),
                                                    radius * cos_theta));
}

inline tsteer::ComplexMatrix random_pure_qubit_projector(std::mt19937_64& engine) {
    const double cos_theta = 2.0 * uniform_unit(engine) - 1.0;
    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    const double phi = 2.0 * M_PI * uniform_unit(engine);
    return bloch_state_matrix(sin_theta * std::cos(phi), sin_theta * std::sin(phi), cos_theta);
}

inline tsteer::HiddenStateModel random_hidden_model(std::mt19937_64& engine) {
    const int n_channels = 1 + static_cast<int>(engine() % 8);
    std::vector<double> weights(n_channels);
    double total = 0.0;
    for (double& w : weights) {
        w = -std::log(1.0 - uniform_unit(engine));
        total += w;
    }
    tsteer::HiddenStateModel model;
    for (int i = 0; i < n_channels; ++i) {
        tsteer::HiddenChannel channel{
            weights[i] / total,
            {uniform_unit(engine), uniform_unit(engine), uniform_unit(engine)},
            random_qubit_state(engine)};
        model.channels.push_back(channel);
    }
    return model;
}

inline tsteer::ComplexMatrix random_hermitian(std::mt19937_64& engine, int dim) {
    tsteer::ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) {
        m(i, i) = 2.0 * uniform_unit(engine) - 1.0;
        for (int j = i + 1; j < dim; ++j) {
            const tsteer::Complex v(2.0 * uniform_unit(engine) - 1.0,
                                    2.0 * uniform_unit(engine) - 1.0);
            m(i, j) = v;
            m(j, i) = std::conj(v);
        }
    }
    return m;
}

struct AffineFit {
    double slope;
    double intercept;
    double max_residual;
};

inline AffineFit fit_affine(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_affine: need two samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    AffineFit fit{};
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.max_residual = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        fit.max_residual =
            std::max(fit.max_residual, std::abs(y[i] - fit.slope * x[i] - fit.intercept));
    return fit;
}

}  // namespace testutil

#ifdef DOCTEST_LIBRARY_INCLUDED
#define CHECK_NEAR(a, b, tol)                                                  \
    do {                                                                       \
        const double check_near_lhs = (a);                                     \
        const double check_near_rhs = (b);                                     \
        INFO("lhs = " << check_near_lhs << ", rhs = " << check_near_rhs);      \
        CHECK(std::abs(check_near_lhs - check_near_rhs) <= (tol));             \
    } while (0)
#endif

#endif
