#include "tsteer/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tsteer {

namespace {

constexpr double kHermitianTol = 1e-9;
constexpr double kTraceTol = 1e-9;
constexpr double kEigenFloor = -1e-9;
constexpr double kJacobiOffTol = 1e-13;

void require_dim(int dim) {
    if (dim != 2 && dim != 4)
        throw std::invalid_argument("matrix dimension must be 2 or 4, got " + std::to_string(dim));
}

}  // namespace

char axis_label(Axis axis) {
    switch (axis) {
        case Axis::Z: return 'z';
        case Axis::X: return 'x';
        case Axis::Y: return 'y';
    }
    throw std::invalid_argument("invalid axis");
}

ComplexMatrix::ComplexMatrix(int dim) : dim_(dim) {
    require_dim(dim);
}

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw std::invalid_argument("dimension mismatch in matrix addition");
    ComplexMatrix out(dim_);
    for (int i = 0; i < dim_ * dim_; ++i) out.entries_[i] = entries_[i] + rhs.entries_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw std::invalid_argument("dimension mismatch in matrix subtraction");
    ComplexMatrix out(dim_);
    for (int i = 0; i < dim_ * dim_; ++i) out.entries_[i] = entries_[i] - rhs.entries_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw std::invalid_argument("dimension mismatch in matrix product");
    ComplexMatrix out(dim_);
    for (int i = 0; i < dim_; ++i) {
        for (int k = 0; k < dim_; ++k) {
            const Complex a = entries_[i * dim_ + k];
            if (a == Complex{}) continue;
            for (int j = 0; j < dim_; ++j)
                out.entries_[i * dim_ + j] += a * rhs.entries_[k * dim_ + j];
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::scaled(Complex factor) const {
    ComplexMatrix out(dim_);
    for (int i = 0; i < dim_ * dim_; ++i) out.entries_[i] = entries_[i] * factor;
    return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            out(i, j) = std::conj((*this)(j, i));
    return out;
}

Complex ComplexMatrix::trace() const {
    Complex t{};
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::hermiticity_defect() const {
    double defect = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            defect = std::max(defect, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return defect;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw std::invalid_argument("dimension mismatch in matrix comparison");
    double d = 0.0;
    for (int i = 0; i < dim_ * dim_; ++i)
        d = std::max(d, std::abs(entries_[i] - rhs.entries_[i]));
    return d;
}

ComplexMatrix pauli(Axis axis) {
    ComplexMatrix m(2);
    switch (axis) {
        case Axis::X:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case Axis::Y:
            m(0, 1) = Complex(0.0, -1.0);
            m(1, 0) = Complex(0.0, 1.0);
            break;
        case Axis::Z:
            m(0, 0) = 1.0;
            m(1, 1) = -1.0;
            break;
    }
    return m;
}

ComplexMatrix sigma_plus() {
    ComplexMatrix m(2);
    m(0, 1) = 1.0;  // |e><g|
    return m;
}

ComplexMatrix sigma_minus() {
    ComplexMatrix m(2);
    m(1, 0) = 1.0;  // |g><e|
    return m;
}

ComplexMatrix projector(Axis axis, int outcome) {
    if (outcome != 1 && outcome != -1)
        throw std::invalid_argument("measurement outcome must be +1 or -1");
    ComplexMatrix p = pauli(axis).scaled(0.5 * outcome);
    ComplexMatrix half = ComplexMatrix::identity(2).scaled(0.5);
    return half + p;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != 2 || b.dim() != 2)
        throw std::invalid_argument("tensor product requires two 2x2 factors (4x4 ceiling)");
    ComplexMatrix out(4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    out(i * 2 + k, j * 2 + l) = a(i, j) * b(k, l);
    return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
    if (m.hermiticity_defect() > kHermitianTol)
        throw std::invalid_argument("hermitian_eigenvalues: input is not Hermitian");

    const int n = m.dim();
    // Exact symmetrization so the iteration works on a true Hermitian matrix.
    ComplexMatrix a = (m + m.adjoint()).scaled(0.5);

    auto off_norm = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };

    const int max_sweeps = 100;
    int sweep = 0;
    while (off_norm() >= kJacobiOffTol) {
        if (++sweep > max_sweeps)
            throw std::runtime_error("hermitian_eigenvalues: Jacobi iteration did not converge");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double r = std::abs(apq);
                if (r < 1e-300) continue;
                const Complex phase = apq / r;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // Rotation angle for the dephased real 2x2 block [[app, r], [r, aqq]].
                const double tau = (aqq - app) / (2.0 * r);
                double t;
                if (tau >= 0.0)
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                else
                    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // J = D*G with D = diag(..., e^{-i phi} at q) and G the real
                // Givens rotation in the (p,q) plane; A <- J^dag A J.
                ComplexMatrix j = ComplexMatrix::identity(n);
                j(p, p) = c;
                j(p, q) = s;
                j(q, p) = -s * std::conj(phase);
                j(q, q) = c * std::conj(phase);
                a = j.adjoint() * a * j;
            }
        }
    }

    std::vector<double> eigs(n);
    for (int i = 0; i < n; ++i) eigs[i] = a(i, i).real();
    std::sort(eigs.begin(), eigs.end());
    return eigs;
}

DensityMatrix::DensityMatrix(const ComplexMatrix& m) : matrix_(m) {
    const double trace_defect = std::abs(m.trace() - Complex(1.0, 0.0));
    if (trace_defect > kTraceTol)
        throw std::invalid_argument("density matrix trace deviates from 1 by " +
                                    std::to_string(trace_defect));
    if (m.hermiticity_defect() > kHermitianTol)
        throw std::invalid_argument("density matrix is not Hermitian");
    const std::vector<double> eigs = hermitian_eigenvalues(m);
    if (eigs.front() < kEigenFloor)
        throw std::invalid_argument("density matrix has negative eigenvalue " +
                                    std::to_string(eigs.front()));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    require_dim(dim);
    return DensityMatrix(ComplexMatrix::identity(dim).scaled(1.0 / dim));
}

DensityMatrix DensityMatrix::pure(const ComplexMatrix& rank1_projector) {
    return DensityMatrix(rank1_projector);
}

DensityMatrix partial_trace(const DensityMatrix& rho, int keep) {
    if (rho.dim() != 4)
        throw std::invalid_argument("partial_trace requires a two-qubit (dim-4) state");
    return DensityMatrix(detail::partial_trace_matrix(rho.matrix(), keep));
}

double pure_fidelity(const DensityMatrix& pure, const DensityMatrix& rho) {
    if (pure.dim() != rho.dim())
        throw std::invalid_argument("pure_fidelity: dimension mismatch");
    const std::vector<double> eigs = hermitian_eigenvalues(pure.matrix());
    for (std::size_t i = 0; i + 1 < eigs.size(); ++i) {
        if (std::abs(eigs[i]) > kHermitianTol)
            throw std::invalid_argument("pure_fidelity: first argument is not a pure state");
    }
    if (std::abs(eigs.back() - 1.0) > kHermitianTol)
        throw std::invalid_argument("pure_fidelity: first argument is not a pure state");
    // Rank-1 reference: Tr(sqrt(P) rho sqrt(P)) = Tr(P rho) = <psi|rho|psi>.
    return detail::real_trace_product(pure.matrix(), rho.matrix());
}

namespace detail {

ComplexMatrix partial_trace_matrix(const ComplexMatrix& m, int keep) {
    if (m.dim() != 4)
        throw std::invalid_argument("partial_trace requires a dim-4 matrix");
    ComplexMatrix out(2);
    if (keep == 1) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                out(i, j) = m(i * 2 + 0, j * 2 + 0) + m(i * 2 + 1, j * 2 + 1);
    } else if (keep == 2) {
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l)
                out(k, l) = m(0 * 2 + k, 0 * 2 + l) + m(1 * 2 + k, 1 * 2 + l);
    } else {
        throw std::invalid_argument("partial_trace keep label must be 1 or 2");
    }
    return out;
}

double real_trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("trace product dimension mismatch");
    Complex t{};
    for (int i = 0; i < a.dim(); ++i)
        for (int k = 0; k < a.dim(); ++k)
            t += a(i, k) * b(k, i);
    return t.real();
}

}  // namespace detail

}  // namespace tsteer
