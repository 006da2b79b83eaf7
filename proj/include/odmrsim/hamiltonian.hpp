#pragma once

#include <vector>

#include "odmrsim/matrix.hpp"
#include "odmrsim/params.hpp"

namespace odmrsim {

/// Static ground-state Hamiltonian (3x3, MHz) in the {|+1>,|0>,|-1>} basis:
/// H = d_gs (Sz^2 - 2/3) + e_gs (Sx^2 - Sy^2) + gamma_e b0 Sz.
ComplexMatrix build_ground_hamiltonian(const DefectParams& params, const StaticField& field);

struct ResonancePair {
    double f_minus;  // |0> -> lower mixed level, MHz
    double f_plus;   // |0> -> upper mixed level, MHz
};

/// Closed-form transition frequencies f_pm = d_gs +- sqrt(e_gs^2 + (gamma_e b0)^2).
ResonancePair resonance_frequencies(const DefectParams& params, const StaticField& field);

/// Decomposition of the dual-arm drive field into rotating components.
/// c_plus drives |0> -> |+1>-like and c_minus drives |0> -> |-1>-like
/// transitions; amp_pm = |c_pm|. Convention (with effective phase
/// D = delta + offset):
///     c_pm = (omega1 -+ i omega2 e^{-iD}) / 2
/// so D = 90 deg is pure sigma-minus and D = 270 deg pure sigma-plus,
/// matching the handedness that selects the lower/upper transition.
struct CircularComponents {
    double amp_plus;
    double amp_minus;
    Complex c_plus;
    Complex c_minus;
};

CircularComponents circular_components(const DriveConfig& drive);

/// Mixing angle of the +-1 ground doublet, theta = atan2(e_gs, gamma_e b0).
/// theta = 0 gives pure |+-1> eigenstates; theta = pi/2 (zero field) gives
/// equal superpositions.
double ground_mixing_angle(const DefectParams& params, const StaticField& field);

// Fixed index assignments of the 7-level model: ground triplet, excited
// triplet, metastable singlet. g_plus / g_minus (and their excited partners)
// label the dressed +-1 eigenstates of the static ground Hamiltonian, i.e.
// the levels at f_plus / f_minus above g0.
namespace level {
inline constexpr int g0 = 0;
inline constexpr int g_plus = 1;
inline constexpr int g_minus = 2;
inline constexpr int e0 = 3;
inline constexpr int e_plus = 4;
inline constexpr int e_minus = 5;
inline constexpr int s = 6;
inline constexpr int count = 7;
}  // namespace level

/// Rotating-frame 7-level Hamiltonian (7x7, MHz) at the drive frequency.
/// Ground levels g_pm carry detunings f_pm - f, the drive couples g0 to
/// both dressed levels with the sigma-pm amplitudes rotated by the mixing
/// angle, and the excited/metastable levels are diagonal and undriven.
ComplexMatrix build_rwa_hamiltonian(const DefectParams& params, const StaticField& field,
                                    const DriveConfig& drive);

enum class Branch { minus, plus };

struct StickLine {
    Branch branch;
    double frequency;  // MHz
    double weight;     // degeneracy count; sums to 27 per branch
};

/// Hyperfine stick spectrum: diagonalizes the 81-dim ground Hamiltonian
/// (electron spin-1 x three I=1 nuclei with secular a_zz Sz Iz coupling)
/// and returns the allowed ESR lines (nuclear projections conserved) with
/// degeneracy weights. Lines closer than 1e-6 MHz are merged.
std::vector<StickLine> hyperfine_stick_spectrum(const DefectParams& params,
                                                const StaticField& field,
                                                const HyperfineParams& hf);

}  // namespace odmrsim
