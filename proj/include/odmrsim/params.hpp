#pragma once

#include <cmath>

#include "odmrsim/errors.hpp"

namespace odmrsim {

// Unit conventions used throughout: energies in MHz (h = 1), times in us,
// rates in 1/us, magnetic fields in mT. Bohr magneton / h = 13.9962 MHz/mT.
inline constexpr double kBohrMagnetonMHzPerMT = 13.9962;

inline double deg_to_rad(double deg) { return deg * M_PI / 180.0; }

inline double wrap_deg(double deg) {
    double m = std::fmod(deg, 360.0);
    if (m < 0.0) m += 360.0;
    return m;
}

/// Optical pumping, decay, intersystem-crossing and metastable relaxation
/// rates of the 7-level model, all in 1/us.
struct OpticalRates {
    double k_p = 7.0;      // spin-conserving optical pumping g_i -> e_i
    double k_d = 880.0;    // radiative decay e_i -> g_i
    double k_45 = 1150.0;  // ISC e_+ -> s and e_- -> s (1.15/ns)
    double k_35 = 220.0;   // ISC e_0 -> s
    double k_52 = 20.0;    // metastable relaxation into the +-1 ground pair
    double k_51 = 13.0;    // metastable relaxation s -> g_0

    // How k_52 distributes over the two +-1 branches. `split` treats k_52 as
    // the total rate into the pair (k_52/2 per branch), which reproduces the
    // merged-level rate equations with the rates as quoted; `per_branch`
    // applies the full value to each branch.
    enum class MetastableBranching { split, per_branch };
    MetastableBranching branching = MetastableBranching::split;

    void validate() const;
};

/// Static defect parameters: zero-field splittings, g-factor and the ground
/// state dephasing rate, plus the optical rate set.
struct DefectParams {
    double d_gs = 3490.0;      // longitudinal ZFS, MHz
    double e_gs = 65.0;        // transverse ZFS, MHz
    double g_factor = 2.002;   // Lande g-factor
    double gamma_phi = 100.0;  // ground-state dephasing rate, 1/us
    OpticalRates rates;

    // gyromagnetic ratio / 2pi in MHz per mT
    double gamma_e() const { return g_factor * kBohrMagnetonMHzPerMT; }

    void validate() const;
};

/// Static magnetic field along the defect symmetry axis (out of plane), mT.
struct StaticField {
    double b0 = 2.3;

    void validate() const;
};

/// Dual-arm microwave drive: two orthogonal linear components with Rabi
/// amplitudes omega1/omega2, an applied phase difference delta_deg, a fixed
/// path-length offset, and the carrier frequency.
struct DriveConfig {
    // Default amplitude keeps the drive below saturation so the maximum
    // selectivity plateaus cleanly with field.
    double omega1 = 2.0;       // Rabi amplitude gamma_e*B_MW1 of arm 1, MHz
    double omega2 = 2.0;       // arm 2, MHz
    double delta_deg = 0.0;    // applied phase difference, degrees
    double offset_deg = -30.0; // path-length offset between the two arms
    double freq = 3490.0;      // drive frequency, MHz

    double effective_phase_deg() const { return wrap_deg(delta_deg + offset_deg); }

    void validate() const;
};

/// Secular hyperfine coupling to the three nearest spin-1 nitrogen nuclei.
struct HyperfineParams {
    double a_zz = -47.0;  // MHz
    int n_nuclei = 3;

    void validate() const;
};

}  // namespace odmrsim
