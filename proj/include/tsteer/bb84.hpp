#ifndef TSTEER_BB84_HPP
#define TSTEER_BB84_HPP

#include <vector>

#include "tsteer/qmat.hpp"
#include "tsteer/steering.hpp"

// Intercept-resend eavesdropping on the BB84 channel. Eve measures sigma_z
// with probability q, sigma_x with probability p, and passes the qubit
// through otherwise. Everything here is computed by brute force from the
// Kraus map; the closed forms R_err = (p+q)/4 and S_2 = (1-p)^2 + (1-q)^2
// live in the tests as independent checks.

namespace tsteer {

struct EveParams {
    double p;  // probability of a sigma_x measurement
    double q;  // probability of a sigma_z measurement

    EveParams(double p_in, double q_in);
};

// Completely positive trace-preserving map as a finite Kraus-operator list.
class KrausChannel {
public:
    explicit KrausChannel(std::vector<ComplexMatrix> operators);

    const std::vector<ComplexMatrix>& operators() const { return operators_; }
    ComplexMatrix apply(const ComplexMatrix& rho) const;
    DensityMatrix apply(const DensityMatrix& rho) const;

private:
    std::vector<ComplexMatrix> operators_;
};

KrausChannel eve_channel(const EveParams& params);

// The four equally weighted BB84 input states (z and x eigenstates) sent
// through Eve's channel; the matched-basis conditional table Bob observes.
ConditionalTable bb84_table(const EveParams& params);

// Average bit error rate (1/2) sum_mu P(A=a) [1 - F(rho_A, E(rho_A))].
double bb84_error_rate(const EveParams& params);

// Two-basis steering parameter of bb84_table.
SteeringResult bb84_steering(const EveParams& params);

// h(x) = -x log2 x - (1-x) log2(1-x), with 0 log 0 = 0.
double binary_entropy(double x);

// Root of 2(1-2R)^2 - 1 = 0 on (0, 1/2): the independent-attack error-rate
// threshold, which coincides with the S_2 = 1 boundary at p = q.
double threshold_independent();

// Root of 2 h(R) = 1 on (0, 1/2): the coherent-attack threshold (~11%).
double threshold_entropic();

struct SweepRow {
    double p;
    double q;
    double s2;
    double r_err;
    bool violates;  // S_2 > 1
};

// Rows in row-major (p outer, q inner) order; grid points with p + q > 1
// are omitted.
std::vector<SweepRow> sweep(const std::vector<double>& p_grid, const std::vector<double>& q_grid);

}  // namespace tsteer

#endif
