// algebra.cpp — Dense operator algebra

#include "pmode/algebra.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "pmode/errors.hpp"

namespace pmode {

namespace {

void require_square(const Operator& a, const char* what) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        std::ostringstream msg;
        msg << what << ": expected a non-empty square operator, got " << a.rows() << "x" << a.cols();
        throw DimensionError(msg.str());
    }
}

} // namespace

std::size_t HilbertFactorization::total() const {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
}

DensityMatrix::DensityMatrix(Operator op) : op_(std::move(op)) {
    require_square(op_, "DensityMatrix");
    const double herm = hermiticity_error(op_);
    if (herm > 1e-9) {
        std::ostringstream msg;
        msg << "DensityMatrix: operator is not Hermitian (max |rho - rho^dagger| = " << herm << ")";
        throw PreconditionError(msg.str());
    }
    const Complex tr = op_.trace();
    if (std::abs(tr - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "DensityMatrix: trace " << tr.real() << " differs from 1";
        throw PreconditionError(msg.str());
    }
    symmetrize(op_);
}

void DensityMatrix::validate(double eig_tol) const {
    const DensityReport r = density_report(op_);
    if (r.min_eigenvalue < -eig_tol) {
        std::ostringstream msg;
        msg << "DensityMatrix: negative eigenvalue " << r.min_eigenvalue;
        throw PreconditionError(msg.str());
    }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    const double n = psi.norm();
    if (n == 0.0) {
        throw PreconditionError("DensityMatrix::pure: zero state vector");
    }
    const StateVector u = psi / n;
    return DensityMatrix(u * u.adjoint());
}

DensityMatrix DensityMatrix::basis(std::size_t dim, std::size_t index) {
    return DensityMatrix(projector(dim, index));
}

DensityReport density_report(const Operator& rho) {
    require_square(rho, "density_report");
    DensityReport r;
    r.trace_error = std::abs(rho.trace() - 1.0);
    r.hermiticity_error = hermiticity_error(rho);
    const Operator h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Operator> es(h, Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    return r;
}

Operator dagger(const Operator& a) { return a.adjoint(); }

Operator annihilation(std::size_t d) {
    if (d < 2) {
        throw DimensionError("annihilation: Fock truncation must be at least 2");
    }
    const auto n = static_cast<Eigen::Index>(d);
    Operator a = Operator::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k) {
        a(k - 1, k) = std::sqrt(static_cast<double>(k));
    }
    return a;
}

Operator identity(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    return Operator::Identity(n, n);
}

// Basis order {|g>, |e>}, so sigma_minus = |g><e|.
Operator sigma_minus() {
    Operator s = Operator::Zero(2, 2);
    s(0, 1) = 1.0;
    return s;
}

Operator sigma_plus() { return sigma_minus().adjoint(); }

Operator sigma_z() {
    Operator s = Operator::Zero(2, 2);
    s(0, 0) = -1.0;
    s(1, 1) = 1.0;
    return s;
}

Operator projector(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw DimensionError("projector: index outside the space");
    }
    const auto n = static_cast<Eigen::Index>(dim);
    Operator p = Operator::Zero(n, n);
    p(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
    return p;
}

Operator kron(const Operator& a, const Operator& b) {
    const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
    Operator out(ar * br, ac * bc);
    for (Eigen::Index i = 0; i < ar; ++i) {
        for (Eigen::Index j = 0; j < ac; ++j) {
            out.block(i * br, j * bc, br, bc) = a(i, j) * b;
        }
    }
    return out;
}

Operator kron(const std::vector<Operator>& factors) {
    if (factors.empty()) {
        throw DimensionError("kron: empty factor list");
    }
    Operator out = factors.front();
    for (std::size_t k = 1; k < factors.size(); ++k) {
        out = kron(out, factors[k]);
    }
    return out;
}

Operator partial_trace(const Operator& rho, const HilbertFactorization& fact, std::size_t keep) {
    require_square(rho, "partial_trace");
    if (fact.dims.empty() || keep >= fact.dims.size()) {
        throw DimensionError("partial_trace: kept factor index out of range");
    }
    for (std::size_t d : fact.dims) {
        if (d == 0) {
            throw DimensionError("partial_trace: zero factor dimension");
        }
    }
    if (fact.total() != static_cast<std::size_t>(rho.rows())) {
        std::ostringstream msg;
        msg << "partial_trace: factorization describes dimension " << fact.total()
            << " but operator has dimension " << rho.rows();
        throw DimensionError(msg.str());
    }

    // Index = outer * (d_keep * inner) + k * inner + rest.
    std::size_t inner = 1;
    for (std::size_t f = keep + 1; f < fact.dims.size(); ++f) {
        inner *= fact.dims[f];
    }
    const std::size_t dk = fact.dims[keep];
    const std::size_t outer = fact.total() / (dk * inner);

    const auto n = static_cast<Eigen::Index>(dk);
    Operator out = Operator::Zero(n, n);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t r = 0; r < inner; ++r) {
            for (std::size_t i = 0; i < dk; ++i) {
                const auto row = static_cast<Eigen::Index>(o * dk * inner + i * inner + r);
                for (std::size_t j = 0; j < dk; ++j) {
                    const auto col = static_cast<Eigen::Index>(o * dk * inner + j * inner + r);
                    out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += rho(row, col);
                }
            }
        }
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const HilbertFactorization& fact, std::size_t keep) {
    return DensityMatrix(partial_trace(rho.op(), fact, keep));
}

Complex expectation(const Operator& a, const Operator& rho) {
    if (a.rows() != rho.rows() || a.cols() != rho.cols()) {
        throw DimensionError("expectation: operator and state dimensions differ");
    }
    // tr(A rho) = sum_ij A_ij rho_ji
    return (a.array() * rho.transpose().array()).sum();
}

Complex expectation(const Operator& a, const DensityMatrix& rho) { return expectation(a, rho.op()); }

double max_abs(const Operator& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double hermiticity_error(const Operator& a) { return max_abs(a - a.adjoint()); }

void symmetrize(Operator& a) {
    Operator h = 0.5 * (a + a.adjoint());
    a = std::move(h);
}

double trace_distance(const Operator& rho, const Operator& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
        throw DimensionError("trace_distance: dimension mismatch");
    }
    Operator diff = rho - sigma;
    symmetrize(diff);
    Eigen::SelfAdjointEigenSolver<Operator> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

} // namespace pmode
