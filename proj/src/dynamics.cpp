#include "tsteer/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tsteer {

LindbladModel::LindbladModel(ComplexMatrix hamiltonian, std::vector<DampingTerm> damping)
    : hamiltonian_(std::move(hamiltonian)), damping_(std::move(damping)) {
    if (hamiltonian_.hermiticity_defect() > 1e-12)
        throw std::invalid_argument("LindbladModel: Hamiltonian is not Hermitian");
    collapse_dag_.reserve(damping_.size());
    collapse_dag_collapse_.reserve(damping_.size());
    for (const DampingTerm& term : damping_) {
        if (term.rate < 0.0)
            throw std::invalid_argument("LindbladModel: negative damping rate");
        if (term.collapse_operator.dim() != hamiltonian_.dim())
            throw std::invalid_argument("LindbladModel: collapse operator dimension mismatch");
        ComplexMatrix dag = term.collapse_operator.adjoint();
        collapse_dag_collapse_.push_back(dag * term.collapse_operator);
        collapse_dag_.push_back(std::move(dag));
    }
}

ComplexMatrix LindbladModel::rhs(const ComplexMatrix& rho) const {
    ComplexMatrix out = (hamiltonian_ * rho - rho * hamiltonian_).scaled(Complex(0.0, -1.0));
    for (std::size_t k = 0; k < damping_.size(); ++k) {
        const double half_rate = 0.5 * damping_[k].rate;
        if (half_rate == 0.0) continue;
        const ComplexMatrix& l = damping_[k].collapse_operator;
        const ComplexMatrix& ldag = collapse_dag_[k];
        const ComplexMatrix& ldagl = collapse_dag_collapse_[k];
        ComplexMatrix jump = (l * rho * ldag).scaled(2.0);
        ComplexMatrix anti = ldagl * rho + rho * ldagl;
        out = out + (jump - anti).scaled(half_rate);
    }
    return out;
}

TimeGrid::TimeGrid(double start, double end, int n) : t_start(start), t_end(end), steps(n) {
    if (!(end > start)) throw std::invalid_argument("TimeGrid: t_end must exceed t_start");
    if (n < 1) throw std::invalid_argument("TimeGrid: steps must be >= 1");
}

double TimeGrid::time_at(int index) const {
    return t_start + (t_end - t_start) * index / steps;
}

LindbladModel rabi_model(double g, double gamma) {
    if (gamma < 0.0) throw std::invalid_argument("rabi_model: negative gamma");
    return LindbladModel(pauli(Axis::X).scaled(g), {{sigma_minus(), gamma}});
}

LindbladModel ancilla_model(double J, double gamma1) {
    if (gamma1 < 0.0) throw std::invalid_argument("ancilla_model: negative gamma1");
    ComplexMatrix exchange = tensor(sigma_plus(), sigma_minus()) + tensor(sigma_minus(), sigma_plus());
    return LindbladModel(exchange.scaled(J), {{tensor(sigma_minus(), ComplexMatrix::identity(2)), gamma1}});
}

namespace {

ComplexMatrix rk4_step(const LindbladModel& model, const ComplexMatrix& rho, double h) {
    ComplexMatrix k1 = model.rhs(rho);
    ComplexMatrix k2 = model.rhs(rho + k1.scaled(h / 2.0));
    ComplexMatrix k3 = model.rhs(rho + k2.scaled(h / 2.0));
    ComplexMatrix k4 = model.rhs(rho + k3.scaled(h));
    return rho + (k1 + k2.scaled(2.0) + k3.scaled(2.0) + k4).scaled(h / 6.0);
}

DensityMatrix symmetrized_state(const ComplexMatrix& rho) {
    return DensityMatrix((rho + rho.adjoint()).scaled(0.5));
}

}  // namespace

void evolve_observe(const LindbladModel& model, const DensityMatrix& rho0, const TimeGrid& grid,
                    const StateObserver& observer) {
    if (rho0.dim() != model.dim())
        throw std::invalid_argument("evolve: state dimension does not match model");
    const double h = (grid.t_end - grid.t_start) / grid.steps;
    ComplexMatrix rho = rho0.matrix();
    observer(0, grid.time_at(0), symmetrized_state(rho));
    for (int k = 0; k < grid.steps; ++k) {
        rho = rk4_step(model, rho, h);
        const double t = grid.time_at(k + 1);
        const double trace_defect = std::abs(rho.trace() - Complex(1.0, 0.0));
        if (trace_defect > 1e-6)
            throw std::runtime_error("evolve: step instability at t = " + std::to_string(t) +
                                     " (trace deviation " + std::to_string(trace_defect) + ")");
        try {
            observer(k + 1, t, symmetrized_state(rho));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("evolve: step instability at t = " + std::to_string(t) +
                                     " (" + e.what() + ")");
        }
    }
}

std::vector<DensityMatrix> evolve(const LindbladModel& model, const DensityMatrix& rho0,
                                  const TimeGrid& grid) {
    std::vector<DensityMatrix> states;
    states.reserve(grid.steps + 1);
    evolve_observe(model, rho0, grid,
                   [&states](int, double, const DensityMatrix& s) { states.push_back(s); });
    return states;
}

int default_steps(const LindbladModel& model, double t_span) {
    double scale = 0.0;
    const ComplexMatrix& h = model.hamiltonian();
    for (int i = 0; i < h.dim(); ++i)
        for (int j = 0; j < h.dim(); ++j)
            scale = std::max(scale, std::abs(h(i, j)));
    for (const DampingTerm& term : model.damping_terms()) scale = std::max(scale, term.rate);
    const double steps = std::ceil(2000.0 * scale * t_span);
    if (!(steps >= 1.0)) return 1;
    return static_cast<int>(steps);
}

}  // namespace tsteer
