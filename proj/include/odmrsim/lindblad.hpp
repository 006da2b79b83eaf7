#pragma once

#include <vector>

#include "odmrsim/hamiltonian.hpp"
#include "odmrsim/matrix.hpp"
#include "odmrsim/params.hpp"

namespace odmrsim {

/// One Lindblad channel: D[op] applied at `rate` (1/us). `op` is unitless --
/// a single-entry transfer matrix |target><source| for population jumps or a
/// diagonal projector for dephasing.
struct JumpOperator {
    ComplexMatrix op;
    double rate;
};

/// Density matrix of the 7-level model (unit trace, Hermitian, PSD).
struct DensityMatrix {
    ComplexMatrix rho;

    double population(int lvl) const { return rho.at(lvl, lvl).real(); }
    /// Throws if trace/Hermiticity/positivity tolerances are violated.
    void validate(double trace_tol = 1e-9, double herm_tol = 1e-10,
                  double psd_tol = -1e-8) const;
};

/// Vectorized Lindblad generator, L vec(rho) = vec(drho/dt), in 1/us.
/// Row-major vectorization: vec(rho)[i*n + j] = rho(i,j).
struct Liouvillian {
    ComplexMatrix mat;
};

std::vector<Complex> vec(const ComplexMatrix& rho);
ComplexMatrix unvec(const std::vector<Complex>& v);

/// The full jump set of the 7-level model for the given parameters:
/// spin-conserving pumping at k_p, radiative decay at k_d, ISC at k_45/k_35,
/// metastable relaxation at k_52 (per the branching convention) and k_51,
/// plus diagonal ground-state dephasing at gamma_phi. Channels with zero
/// rate are omitted.
std::vector<JumpOperator> jump_operators(const DefectParams& params);

/// L vec(rho) = vec(-i 2pi [H, rho] + sum_k rate_k D[A_k] rho). The factor
/// 2pi converts the MHz Hamiltonian to angular 1/us; this is the single
/// place where that conversion happens.
Liouvillian build_liouvillian(const ComplexMatrix& h, const std::vector<JumpOperator>& jumps);

/// Stationary density matrix: the trace-one element of the null space of L.
/// Throws DegenerateSteadyState if the null space is not one-dimensional at
/// tolerance (disconnected rate graph).
DensityMatrix steady_state(const Liouvillian& l);

/// Fixed-step RK4 integration of the master equation. Throws StepTooLarge
/// unless dt * ||L||_inf < 0.1.
DensityMatrix evolve(const ComplexMatrix& h, const std::vector<JumpOperator>& jumps,
                     const DensityMatrix& rho0, double t_final, double dt);

/// PL = k_d * (excited-manifold population), arbitrary units.
double photoluminescence(const DensityMatrix& rho, const DefectParams& params);

}  // namespace odmrsim
