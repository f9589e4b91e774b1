// algebra.hpp — Dense operators on small tensor-product Hilbert spaces

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace pmode {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

// Factor dimensions of a composite space, system leftmost: [d_S, d_A, ...].
struct HilbertFactorization {
    std::vector<std::size_t> dims;

    std::size_t total() const;
};

// Unit-trace Hermitian operator. Construction checks shape, trace and
// Hermiticity, then symmetrizes exactly. Positivity is only checked by
// validate() / density_report().
class DensityMatrix {
public:
    explicit DensityMatrix(Operator op);

    const Operator& op() const { return op_; }
    std::size_t dim() const { return static_cast<std::size_t>(op_.rows()); }

    // Throws PreconditionError if the smallest eigenvalue is below -eig_tol.
    void validate(double eig_tol = 1e-8) const;

    static DensityMatrix pure(const StateVector& psi);
    static DensityMatrix basis(std::size_t dim, std::size_t index);

private:
    Operator op_;
};

struct DensityReport {
    double trace_error{0.0};       // |tr rho - 1|
    double hermiticity_error{0.0}; // max |rho - rho^dagger|
    double min_eigenvalue{0.0};
};

// Diagnostics for an arbitrary square operator interpreted as a state.
DensityReport density_report(const Operator& rho);

Operator dagger(const Operator& a);

// Lowering operator on a d-level truncated Fock space, <n-1|a|n> = sqrt(n).
Operator annihilation(std::size_t d);
Operator identity(std::size_t d);
Operator sigma_minus();
Operator sigma_plus();
Operator sigma_z();
Operator projector(std::size_t dim, std::size_t index);

// Row index (i*dB + k), column (j*dB + l) holds A(i,j) * B(k,l).
Operator kron(const Operator& a, const Operator& b);
Operator kron(const std::vector<Operator>& factors);

// Trace over every factor except `keep`. Linear; does not renormalize.
Operator partial_trace(const Operator& rho, const HilbertFactorization& fact, std::size_t keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const HilbertFactorization& fact, std::size_t keep);

// tr(A rho)
Complex expectation(const Operator& a, const DensityMatrix& rho);
Complex expectation(const Operator& a, const Operator& rho);

double max_abs(const Operator& a);
double hermiticity_error(const Operator& a);
void symmetrize(Operator& a);

// (1/2) || rho - sigma ||_1 for Hermitian arguments.
double trace_distance(const Operator& rho, const Operator& sigma);

} // namespace pmode
