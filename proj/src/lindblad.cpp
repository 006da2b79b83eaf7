#include "odmrsim/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace odmrsim {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

void DensityMatrix::validate(double trace_tol, double herm_tol, double psd_tol) const {
    if (std::abs(rho.trace().real() - 1.0) > trace_tol || std::abs(rho.trace().imag()) > trace_tol)
        throw std::runtime_error("density matrix trace deviates from 1");
    if (rho.hermiticity_error() > herm_tol)
        throw std::runtime_error("density matrix is not Hermitian");
    const EigResult eig = eig_hermitian(rho, 1e-8);
    if (eig.values.front() < psd_tol)
        throw std::runtime_error("density matrix has negative eigenvalue " +
                                 std::to_string(eig.values.front()));
}

std::vector<Complex> vec(const ComplexMatrix& rho) { return rho.data(); }

ComplexMatrix unvec(const std::vector<Complex>& v) {
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(v.size()))));
    if (static_cast<size_t>(n) * n != v.size())
        throw DimensionMismatch("vector length is not a perfect square");
    ComplexMatrix m(n);
    m.data() = v;
    return m;
}

std::vector<JumpOperator> jump_operators(const DefectParams& params) {
    const OpticalRates& k = params.rates;
    std::vector<JumpOperator> jumps;

    auto transfer = [&jumps](int dst, int src, double rate) {
        if (rate <= 0.0) return;
        ComplexMatrix op(level::count);
        op.at(dst, src) = 1.0;
        jumps.push_back({std::move(op), rate});
    };
    auto dephasing = [&jumps](int lvl, double rate) {
        if (rate <= 0.0) return;
        ComplexMatrix op(level::count);
        op.at(lvl, lvl) = 1.0;
        jumps.push_back({std::move(op), rate});
    };

    // Spin-conserving optical pumping.
    transfer(level::e0, level::g0, k.k_p);
    transfer(level::e_plus, level::g_plus, k.k_p);
    transfer(level::e_minus, level::g_minus, k.k_p);
    // Radiative decay.
    transfer(level::g0, level::e0, k.k_d);
    transfer(level::g_plus, level::e_plus, k.k_d);
    transfer(level::g_minus, level::e_minus, k.k_d);
    // ISC into the metastable singlet; k_45 is a decay rate of each +-1
    // excited level, so it applies at full value per branch.
    transfer(level::s, level::e_plus, k.k_45);
    transfer(level::s, level::e_minus, k.k_45);
    transfer(level::s, level::e0, k.k_35);
    // Metastable relaxation. Under the `split` convention k_52 is the total
    // rate into the +-1 pair; `per_branch` applies it to each branch.
    const double k52_branch =
        k.branching == OpticalRates::MetastableBranching::split ? 0.5 * k.k_52 : k.k_52;
    transfer(level::g_plus, level::s, k52_branch);
    transfer(level::g_minus, level::s, k52_branch);
    transfer(level::g0, level::s, k.k_51);
    // Pure dephasing of the +-1 ground coherences against g0.
    dephasing(level::g_plus, params.gamma_phi);
    dephasing(level::g_minus, params.gamma_phi);

    return jumps;
}

Liouvillian build_liouvillian(const ComplexMatrix& h, const std::vector<JumpOperator>& jumps) {
    const int n = h.dim();
    if (!h.is_hermitian())
        throw NotHermitian("Hamiltonian passed to build_liouvillian is not Hermitian");
    for (const auto& j : jumps)
        if (j.op.dim() != n)
            throw DimensionMismatch("jump operator dimension does not match Hamiltonian");

    ComplexMatrix l(n * n);
    const Complex m_i2pi(0.0, -kTwoPi);

    // Coherent part: -i 2pi (H x I - I x H^T) in row-major vectorization.
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const Complex hik = h.at(i, k);
            if (hik == Complex(0.0)) continue;
            for (int j = 0; j < n; ++j) l.at(i * n + j, k * n + j) += m_i2pi * hik;
        }
    for (int l_idx = 0; l_idx < n; ++l_idx)
        for (int j = 0; j < n; ++j) {
            const Complex hlj = h.at(l_idx, j);
            if (hlj == Complex(0.0)) continue;
            for (int i = 0; i < n; ++i) l.at(i * n + j, i * n + l_idx) -= m_i2pi * hlj;
        }

    for (const auto& jump : jumps) {
        const ComplexMatrix& a = jump.op;
        const ComplexMatrix ada = a.dagger() * a;
        ComplexMatrix term = kron(a, a.conjugate());
        term -= 0.5 * kron(ada, ComplexMatrix::identity(n));
        term -= 0.5 * kron(ComplexMatrix::identity(n), ada.transpose());
        l += jump.rate * term;
    }

    return {std::move(l)};
}

DensityMatrix steady_state(const Liouvillian& l) {
    const int n2 = l.mat.dim();
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n2))));
    if (n * n != n2) throw DimensionMismatch("Liouvillian dimension is not a perfect square");

    // Trace preservation makes the rows of L linearly dependent; replace the
    // (0,0) row by the trace constraint so the solution has unit trace.
    ComplexMatrix m = l.mat;
    for (int j = 0; j < n2; ++j) m.at(0, j) = (j % (n + 1) == 0) ? 1.0 : 0.0;
    std::vector<Complex> b(n2, 0.0);
    b[0] = 1.0;

    const LuDecomposition lu(m);
    if (lu.min_pivot() <= 1e-12 * std::max(lu.max_pivot(), 1e-300))
        throw DegenerateSteadyState("Liouvillian null space is not one-dimensional");

    std::vector<Complex> x = lu.solve(b);
    // One step of iterative refinement.
    std::vector<Complex> r(n2, 0.0);
    for (int i = 0; i < n2; ++i) {
        Complex acc = 0.0;
        for (int j = 0; j < n2; ++j) acc += m.at(i, j) * x[j];
        r[i] = b[i] - acc;
    }
    const std::vector<Complex> dx = lu.solve(r);
    for (int i = 0; i < n2; ++i) x[i] += dx[i];

    ComplexMatrix rho = unvec(x);
    ComplexMatrix herm(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) herm.at(i, j) = 0.5 * (rho.at(i, j) + std::conj(rho.at(j, i)));
    const double tr = herm.trace().real();
    if (std::abs(tr) < 1e-12) throw DegenerateSteadyState("steady-state trace vanished");
    herm *= Complex(1.0 / tr, 0.0);

    double resid = 0.0;
    const std::vector<Complex> vr = vec(herm);
    for (int i = 0; i < n2; ++i) {
        Complex acc = 0.0;
        for (int j = 0; j < n2; ++j) acc += l.mat.at(i, j) * vr[j];
        resid = std::max(resid, std::abs(acc));
    }
    if (resid > 1e-9)
        throw std::runtime_error("steady-state residual " + std::to_string(resid) +
                                 " exceeds 1e-9");

    return {std::move(herm)};
}

// ---------------------------------------------------------------------------
// RK4 integration. The jump set is compiled into a fast normal form first:
// population transfers and real diagonal dephasing get O(n) / O(n^2) updates,
// anything else falls back to dense products.

namespace {

struct CompiledJumps {
    struct Transfer {
        int src, dst;
        double rate;
    };
    std::vector<Transfer> transfers;
    std::vector<double> damp;  // elementwise coherence damping, n*n row-major
    std::vector<std::pair<ComplexMatrix, double>> general;  // (op, rate)
    std::vector<ComplexMatrix> general_ada;
};

CompiledJumps compile_jumps(const std::vector<JumpOperator>& jumps, int n) {
    CompiledJumps cj;
    cj.damp.assign(static_cast<size_t>(n) * n, 0.0);
    for (const auto& j : jumps) {
        int nonzeros = 0, row = -1, col = -1;
        bool diagonal_real = true;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                const Complex v = j.op.at(r, c);
                if (v == Complex(0.0)) continue;
                ++nonzeros;
                row = r;
                col = c;
                if (r != c || v.imag() != 0.0) diagonal_real = false;
            }
        if (nonzeros == 1 && row != col) {
            const double w = std::norm(j.op.at(row, col));
            cj.transfers.push_back({col, row, j.rate * w});
        } else if (diagonal_real) {
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) {
                    const double di = j.op.at(i, i).real();
                    const double dk = j.op.at(k, k).real();
                    cj.damp[static_cast<size_t>(i) * n + k] +=
                        0.5 * j.rate * (di - dk) * (di - dk);
                }
        } else {
            cj.general.emplace_back(j.op, j.rate);
            cj.general_ada.push_back(j.op.dagger() * j.op);
        }
    }
    return cj;
}

// out = -i 2pi [H, rho] + dissipator(rho); assumes rho Hermitian.
void lindblad_rhs(const ComplexMatrix& h, const CompiledJumps& cj, const ComplexMatrix& rho,
                  ComplexMatrix& tmp, ComplexMatrix& out) {
    const int n = rho.dim();
    // tmp = H * rho
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) tmp.at(r, c) = 0.0;
        for (int k = 0; k < n; ++k) {
            const Complex hrk = h.at(r, k);
            if (hrk == Complex(0.0)) continue;
            for (int c = 0; c < n; ++c) tmp.at(r, c) += hrk * rho.at(k, c);
        }
    }
    // [H, rho] = tmp - tmp^dagger for Hermitian H, rho.
    const Complex m_i2pi(0.0, -kTwoPi);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            out.at(r, c) = m_i2pi * (tmp.at(r, c) - std::conj(tmp.at(c, r)));

    for (const auto& t : cj.transfers) {
        out.at(t.dst, t.dst) += t.rate * rho.at(t.src, t.src);
        const double half = 0.5 * t.rate;
        for (int j = 0; j < n; ++j) {
            out.at(t.src, j) -= half * rho.at(t.src, j);
            out.at(j, t.src) -= half * rho.at(j, t.src);
        }
    }
    const double* damp = cj.damp.data();
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double g = damp[static_cast<size_t>(i) * n + k];
            if (g != 0.0) out.at(i, k) -= g * rho.at(i, k);
        }
    for (size_t g = 0; g < cj.general.size(); ++g) {
        const auto& [a, rate] = cj.general[g];
        const ComplexMatrix& ada = cj.general_ada[g];
        const ComplexMatrix ara = a * rho * a.dagger();
        const ComplexMatrix anti = ada * rho + rho * ada;
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                out.at(i, k) += rate * (ara.at(i, k) - 0.5 * anti.at(i, k));
    }
}

}  // namespace

DensityMatrix evolve(const ComplexMatrix& h, const std::vector<JumpOperator>& jumps,
                     const DensityMatrix& rho0, double t_final, double dt) {
    const int n = h.dim();
    if (rho0.rho.dim() != n) throw DimensionMismatch("rho0 dimension does not match Hamiltonian");
    if (t_final < 0.0 || dt <= 0.0) throw std::invalid_argument("t_final >= 0 and dt > 0 required");
    if (t_final == 0.0) return rho0;

    const Liouvillian l = build_liouvillian(h, jumps);
    const double lnorm = l.mat.inf_norm();
    if (dt * lnorm >= 0.1)
        throw StepTooLarge("dt * ||L|| = " + std::to_string(dt * lnorm) + " >= 0.1");

    const CompiledJumps cj = compile_jumps(jumps, n);
    const double trace0 = rho0.rho.trace().real();

    ComplexMatrix rho = rho0.rho;
    ComplexMatrix k1(n), k2(n), k3(n), k4(n), stage(n), tmp(n);

    const long n_steps = static_cast<long>(std::ceil(t_final / dt - 1e-12));
    double t = 0.0;
    for (long step = 0; step < n_steps; ++step) {
        const double hstep = std::min(dt, t_final - t);
        lindblad_rhs(h, cj, rho, tmp, k1);
        for (size_t i = 0; i < rho.data().size(); ++i)
            stage.data()[i] = rho.data()[i] + 0.5 * hstep * k1.data()[i];
        lindblad_rhs(h, cj, stage, tmp, k2);
        for (size_t i = 0; i < rho.data().size(); ++i)
            stage.data()[i] = rho.data()[i] + 0.5 * hstep * k2.data()[i];
        lindblad_rhs(h, cj, stage, tmp, k3);
        for (size_t i = 0; i < rho.data().size(); ++i)
            stage.data()[i] = rho.data()[i] + hstep * k3.data()[i];
        lindblad_rhs(h, cj, stage, tmp, k4);
        const double w = hstep / 6.0;
        for (size_t i = 0; i < rho.data().size(); ++i)
            rho.data()[i] += w * (k1.data()[i] + 2.0 * k2.data()[i] + 2.0 * k3.data()[i] +
                                  k4.data()[i]);
        t += hstep;
    }

    if (std::abs(rho.trace().real() - trace0) > 1e-7)
        throw std::runtime_error("trace drift exceeded 1e-7 during evolution");
    return {std::move(rho)};
}

double photoluminescence(const DensityMatrix& rho, const DefectParams& params) {
    if (rho.rho.dim() != level::count)
        throw DimensionMismatch("photoluminescence expects a 7-level density matrix");
    const double excited = rho.population(level::e0) + rho.population(level::e_plus) +
                           rho.population(level::e_minus);
    return params.rates.k_d * excited;
}

}  // namespace odmrsim
