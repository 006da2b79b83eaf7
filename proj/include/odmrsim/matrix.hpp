#pragma once

#include <complex>
#include <vector>

#include "odmrsim/errors.hpp"

namespace odmrsim {

using Complex = std::complex<double>;

/// Dense complex square matrix, row-major storage. Carrier for spin
/// operators, Hamiltonians, density matrices and vectorized superoperators.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int dim) : dim_(dim), data_(static_cast<size_t>(dim) * dim) {}

    static ComplexMatrix identity(int dim);
    static ComplexMatrix zero(int dim) { return ComplexMatrix(dim); }

    int dim() const { return dim_; }

    Complex& at(int r, int c) { return data_[static_cast<size_t>(r) * dim_ + c]; }
    const Complex& at(int r, int c) const { return data_[static_cast<size_t>(r) * dim_ + c]; }

    std::vector<Complex>& data() { return data_; }
    const std::vector<Complex>& data() const { return data_; }

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(Complex s);

    ComplexMatrix dagger() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;

    Complex trace() const;
    double max_abs() const;
    double frobenius_norm() const;
    // max row sum of |entries|; the induced infinity norm
    double inf_norm() const;
    // max |A - A^dagger| entry
    double hermiticity_error() const;
    bool is_hermitian(double rel_tol = 1e-12) const;

private:
    int dim_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, Complex s);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product; dim = dim(a) * dim(b).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// trace(op * rho)
Complex expect(const ComplexMatrix& op, const ComplexMatrix& rho);

struct EigResult {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // eigenvectors as columns, same order
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix. Throws NotHermitian
/// if max|A - A^dagger| > herm_tol * max|A|.
EigResult eig_hermitian(const ComplexMatrix& a, double herm_tol = 1e-12);

/// Partial-pivot LU factorization for dense complex systems.
class LuDecomposition {
public:
    explicit LuDecomposition(ComplexMatrix a);
    double min_pivot() const { return min_pivot_; }
    double max_pivot() const { return max_pivot_; }
    std::vector<Complex> solve(std::vector<Complex> rhs) const;

private:
    ComplexMatrix lu_;
    std::vector<int> perm_;
    double min_pivot_ = 0.0;
    double max_pivot_ = 0.0;
};

}  // namespace odmrsim
