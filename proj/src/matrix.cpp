#include "odmrsim/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace odmrsim {

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

static void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("matrix dimensions differ: " + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()));
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    require_same_dim(*this, rhs);
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    require_same_dim(*this, rhs);
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& v : data_) v *= s;
    return *this;
}

ComplexMatrix ComplexMatrix::dagger() const {
    ComplexMatrix out(dim_);
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) out.at(c, r) = std::conj(at(r, c));
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(dim_);
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) out.at(c, r) = at(r, c);
    return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix out(dim_);
    for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = std::conj(data_[i]);
    return out;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    for (int i = 0; i < dim_; ++i) t += at(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
}

double ComplexMatrix::inf_norm() const {
    double m = 0.0;
    for (int r = 0; r < dim_; ++r) {
        double row = 0.0;
        for (int c = 0; c < dim_; ++c) row += std::abs(at(r, c));
        m = std::max(m, row);
    }
    return m;
}

double ComplexMatrix::hermiticity_error() const {
    double m = 0.0;
    for (int r = 0; r < dim_; ++r)
        for (int c = r; c < dim_; ++c)
            m = std::max(m, std::abs(at(r, c) - std::conj(at(c, r))));
    return m;
}

bool ComplexMatrix::is_hermitian(double rel_tol) const {
    const double scale = max_abs();
    return hermiticity_error() <= rel_tol * std::max(scale, 1e-300);
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b);
    const int n = a.dim();
    ComplexMatrix out(n);
    for (int r = 0; r < n; ++r) {
        for (int k = 0; k < n; ++k) {
            const Complex arik = a.at(r, k);
            if (arik == Complex(0.0)) continue;
            for (int c = 0; c < n; ++c) out.at(r, c) += arik * b.at(k, c);
        }
    }
    return out;
}

ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int na = a.dim(), nb = b.dim();
    ComplexMatrix out(na * nb);
    for (int ra = 0; ra < na; ++ra)
        for (int ca = 0; ca < na; ++ca) {
            const Complex f = a.at(ra, ca);
            if (f == Complex(0.0)) continue;
            for (int rb = 0; rb < nb; ++rb)
                for (int cb = 0; cb < nb; ++cb)
                    out.at(ra * nb + rb, ca * nb + cb) = f * b.at(rb, cb);
        }
    return out;
}

Complex expect(const ComplexMatrix& op, const ComplexMatrix& rho) {
    require_same_dim(op, rho);
    Complex t = 0.0;
    for (int r = 0; r < op.dim(); ++r)
        for (int k = 0; k < op.dim(); ++k) t += op.at(r, k) * rho.at(k, r);
    return t;
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi for Hermitian matrices. Dimensions in this project never
// exceed 81, so the O(n^3)-per-sweep cost is irrelevant.

EigResult eig_hermitian(const ComplexMatrix& input, double herm_tol) {
    const int n = input.dim();
    if (n == 0) return {};
    const double scale = input.max_abs();
    if (input.hermiticity_error() > herm_tol * std::max(scale, 1e-300))
        throw NotHermitian("matrix is not Hermitian within tolerance");

    // Work on the symmetrized copy so roundoff asymmetry cannot accumulate.
    ComplexMatrix a(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            a.at(r, c) = 0.5 * (input.at(r, c) + std::conj(input.at(c, r)));

    ComplexMatrix v = ComplexMatrix::identity(n);

    auto off_norm = [&a, n]() {
        double s = 0.0;
        for (int r = 0; r < n; ++r)
            for (int c = r + 1; c < n; ++c) s += 2.0 * std::norm(a.at(r, c));
        return std::sqrt(s);
    };

    const double fro = std::max(a.frobenius_norm(), 1e-300);
    const double tol = 1e-14 * fro;
    const int max_sweeps = 60;

    for (int sweep = 0; sweep < max_sweeps && off_norm() > tol; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex apq = a.at(p, q);
                const double mag = std::abs(apq);
                if (mag <= 1e-18 * fro) continue;

                // Phase that makes the off-diagonal element real, then a
                // standard real Jacobi rotation on the 2x2 block.
                const Complex phase = apq / mag;  // e^{i phi}
                const double app = a.at(p, p).real();
                const double aqq = a.at(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Unitary G = I except G(p,p)=c, G(p,q)=s, G(q,p)=-s*conj(phase),
                // G(q,q)=c*conj(phase); A <- G^dagger A G, V <- V G.
                const Complex gqp = -s * std::conj(phase);
                const Complex gqq = c * std::conj(phase);

                for (int k = 0; k < n; ++k) {
                    const Complex akp = a.at(k, p);
                    const Complex akq = a.at(k, q);
                    a.at(k, p) = akp * c + akq * gqp;
                    a.at(k, q) = akp * s + akq * gqq;
                }
                for (int k = 0; k < n; ++k) {
                    a.at(p, k) = std::conj(a.at(k, p));
                    a.at(q, k) = std::conj(a.at(k, q));
                }
                a.at(p, p) = Complex(app - t * mag, 0.0);
                a.at(q, q) = Complex(aqq + t * mag, 0.0);
                a.at(p, q) = 0.0;
                a.at(q, p) = 0.0;

                for (int k = 0; k < n; ++k) {
                    const Complex vkp = v.at(k, p);
                    const Complex vkq = v.at(k, q);
                    v.at(k, p) = vkp * c + vkq * gqp;
                    v.at(k, q) = vkp * s + vkq * gqq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&a](int i, int j) { return a.at(i, i).real() < a.at(j, j).real(); });

    EigResult out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n);
    for (int k = 0; k < n; ++k) {
        out.values[k] = a.at(order[k], order[k]).real();
        for (int r = 0; r < n; ++r) out.vectors.at(r, k) = v.at(r, order[k]);
    }
    return out;
}

// ---------------------------------------------------------------------------

LuDecomposition::LuDecomposition(ComplexMatrix a) : lu_(std::move(a)) {
    const int n = lu_.dim();
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), 0);
    min_pivot_ = std::numeric_limits<double>::infinity();
    max_pivot_ = 0.0;

    for (int col = 0; col < n; ++col) {
        int best = col;
        double best_mag = std::abs(lu_.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double mag = std::abs(lu_.at(r, col));
            if (mag > best_mag) {
                best_mag = mag;
                best = r;
            }
        }
        if (best != col) {
            for (int c = 0; c < n; ++c) std::swap(lu_.at(col, c), lu_.at(best, c));
            std::swap(perm_[col], perm_[best]);
        }
        min_pivot_ = std::min(min_pivot_, best_mag);
        max_pivot_ = std::max(max_pivot_, best_mag);
        if (best_mag == 0.0) continue;  // defer singularity handling to caller

        const Complex inv_piv = 1.0 / lu_.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            const Complex factor = lu_.at(r, col) * inv_piv;
            lu_.at(r, col) = factor;
            if (factor == Complex(0.0)) continue;
            for (int c = col + 1; c < n; ++c) lu_.at(r, c) -= factor * lu_.at(col, c);
        }
    }
}

std::vector<Complex> LuDecomposition::solve(std::vector<Complex> rhs) const {
    const int n = lu_.dim();
    if (static_cast<int>(rhs.size()) != n)
        throw DimensionMismatch("rhs length does not match LU dimension");

    std::vector<Complex> x(n);
    for (int i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= lu_.at(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= lu_.at(i, j) * x[j];
        x[i] /= lu_.at(i, i);
    }
    return x;
}

}  // namespace odmrsim
