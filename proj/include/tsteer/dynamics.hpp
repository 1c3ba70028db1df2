#ifndef TSTEER_DYNAMICS_HPP
#define TSTEER_DYNAMICS_HPP

#include <functional>
#include <vector>

#include "tsteer/qmat.hpp"

// The two open-system models of the toolkit and a fixed-step integrator for
// their master equations. Time is measured in units of the inverse decay
// rate; the Hamiltonian is stored as H/hbar (radians per unit time).

namespace tsteer {

struct DampingTerm {
    ComplexMatrix collapse_operator;
    double rate;  // >= 0
};

// drho/dt = -i[H, rho] + sum_k (rate_k/2)(2 L rho L^dag - L^dag L rho - rho L^dag L)
class LindbladModel {
public:
    LindbladModel(ComplexMatrix hamiltonian, std::vector<DampingTerm> damping);

    int dim() const { return hamiltonian_.dim(); }
    const ComplexMatrix& hamiltonian() const { return hamiltonian_; }
    const std::vector<DampingTerm>& damping_terms() const { return damping_; }

    ComplexMatrix rhs(const ComplexMatrix& rho) const;

private:
    ComplexMatrix hamiltonian_;
    std::vector<DampingTerm> damping_;
    // precomputed per damping term
    std::vector<ComplexMatrix> collapse_dag_;
    std::vector<ComplexMatrix> collapse_dag_collapse_;
};

struct TimeGrid {
    double t_start;
    double t_end;
    int steps;  // number of RK4 intervals; grid holds steps+1 points

    TimeGrid(double start, double end, int n);
    double time_at(int index) const;
};

// Single qubit: H = g*sigma_x, damping (sigma_minus, gamma).
LindbladModel rabi_model(double g, double gamma);

// Qubit exchanging excitation with an ancilla qubit:
// H = J(sigma_+ x sigma_- + sigma_- x sigma_+), damping (sigma_minus x I, gamma1)
// acting on the system (first) qubit only.
LindbladModel ancilla_model(double J, double gamma1);

// Classical fixed-step RK4. Returns the state at every grid point, endpoints
// included; each output is re-symmetrized and satisfies the DensityMatrix
// invariants. Any intermediate trace deviation above 1e-6 aborts with the
// offending time.
std::vector<DensityMatrix> evolve(const LindbladModel& model, const DensityMatrix& rho0,
                                  const TimeGrid& grid);

// Streaming variant: invokes the observer at every grid point instead of
// storing the trajectory.
using StateObserver = std::function<void(int index, double t, const DensityMatrix& state)>;
void evolve_observe(const LindbladModel& model, const DensityMatrix& rho0, const TimeGrid& grid,
                    const StateObserver& observer);

// Default resolution: 2000 steps per unit of (fastest model rate) * t_span.
int default_steps(const LindbladModel& model, double t_span);

}  // namespace tsteer

#endif
