#ifndef TSTEER_QMAT_HPP
#define TSTEER_QMAT_HPP

#include <array>
#include <complex>
#include <vector>

// Dense complex-matrix kernel for the 2x2 and 4x4 Hermitian operators used
// throughout the toolkit.
//
// Basis convention, used everywhere: |+z> = (1,0)^T is the excited state |e>,
// |-z> = (0,1)^T is the ground state |g>. Hence sigma_plus()|g> = |e> and the
// decay operator sigma_minus() lowers populations toward |g>.

namespace tsteer {

using Complex = std::complex<double>;

enum class Axis { Z = 0, X = 1, Y = 2 };

char axis_label(Axis axis);

// Row-major complex matrix of dimension 2 or 4. Values are immutable in
// spirit: every operation returns a fresh matrix.
class ComplexMatrix {
public:
    explicit ComplexMatrix(int dim);

    static ComplexMatrix zero(int dim) { return ComplexMatrix(dim); }
    static ComplexMatrix identity(int dim);

    int dim() const { return dim_; }

    Complex& operator()(int row, int col) { return entries_[row * dim_ + col]; }
    const Complex& operator()(int row, int col) const { return entries_[row * dim_ + col]; }

    ComplexMatrix operator+(const ComplexMatrix& rhs) const;
    ComplexMatrix operator-(const ComplexMatrix& rhs) const;
    ComplexMatrix operator*(const ComplexMatrix& rhs) const;
    ComplexMatrix scaled(Complex factor) const;

    ComplexMatrix adjoint() const;
    Complex trace() const;

    // max_ij |M_ij - conj(M_ji)|
    double hermiticity_defect() const;
    double max_abs_diff(const ComplexMatrix& rhs) const;

private:
    int dim_;
    std::array<Complex, 16> entries_{};  // first dim*dim slots in use
};

ComplexMatrix pauli(Axis axis);
ComplexMatrix sigma_plus();
ComplexMatrix sigma_minus();

// Pi_{i,a} = (I + a*sigma_i)/2, the rank-1 projector onto the eigenvector of
// sigma_i with eigenvalue a.
ComplexMatrix projector(Axis axis, int outcome);

// Kronecker product; rows of `a` index the outer (first) qubit.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

// Real eigenvalues in ascending order, computed by a cyclic complex Jacobi
// iteration (off-diagonal Frobenius norm < 1e-13). Rejects inputs with
// hermiticity defect above 1e-9.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

// Hermitian, unit-trace, positive matrix. The constructor validates
// trace within 1e-9, hermiticity defect <= 1e-9, min eigenvalue >= -1e-9.
class DensityMatrix {
public:
    explicit DensityMatrix(const ComplexMatrix& m);

    static DensityMatrix maximally_mixed(int dim);
    // From a rank-1 projector (probability-1 pure state).
    static DensityMatrix pure(const ComplexMatrix& rank1_projector);

    int dim() const { return matrix_.dim(); }
    const ComplexMatrix& matrix() const { return matrix_; }

private:
    ComplexMatrix matrix_;
};

// Reduced state of the kept qubit (1 = outer/first, 2 = inner/second).
DensityMatrix partial_trace(const DensityMatrix& rho, int keep);

// Tr(P rho) for a rank-1 projector P = |psi><psi|, i.e. <psi|rho|psi>.
// The first argument must be pure (eigenvalues {1, 0, ...} within 1e-9).
double pure_fidelity(const DensityMatrix& pure, const DensityMatrix& rho);

namespace detail {
// Partial trace on raw matrices, used for conditioned (unnormalized) branches.
ComplexMatrix partial_trace_matrix(const ComplexMatrix& m, int keep);
double real_trace_product(const ComplexMatrix& a, const ComplexMatrix& b);  // Re Tr(a*b)
}  // namespace detail

}  // namespace tsteer

#endif
