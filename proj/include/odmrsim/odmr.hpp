#pragma once

#include <optional>
#include <string>
#include <vector>

#include "odmrsim/fitting.hpp"
#include "odmrsim/lindblad.hpp"
#include "odmrsim/odmr_types.hpp"

namespace odmrsim {

/// Grid definition for CW-ODMR sweeps.
struct SweepConfig {
    double f_start = 3250.0;  // MHz
    double f_stop = 3750.0;
    int n_freq = 201;
    std::vector<double> delta_list = default_delta_grid();  // degrees
    std::vector<double> b_list = {2.3};                     // mT
    DriveConfig drive;
    DefectParams params;
    int n_threads = 1;

    static std::vector<double> default_delta_grid(double step_deg = 10.0);
    std::vector<double> freq_grid() const;
    void validate() const;
};

/// Integrated |contrast| below/above d_gs per phase, each curve min-max
/// normalized to [0, 1].
struct IntegratedContrast {
    std::vector<double> deltas;
    std::vector<double> below;
    std::vector<double> above;
};

/// Maximum selectivity over the phase grid for both transitions at one field.
struct SelectivityResult {
    double delta_star_minus = 0.0;
    double sel_minus = 0.0;
    double sel_minus_sigma = 0.0;
    double delta_star_plus = 0.0;
    double sel_plus = 0.0;
    double sel_plus_sigma = 0.0;
    bool degenerate_field = false;  // b0 = 0: the optimum phase is meaningless
};

/// find_max_selectivity per field value, plus the mean fitted peak
/// separation; `status` is "ok" or an error note per row.
struct SelectivityCurve {
    std::vector<double> b_values;
    std::vector<SelectivityResult> results;
    std::vector<double> peak_sep_mhz;
    std::vector<std::string> status;
};

/// Caches everything (delta, f)-independent for one (params, b0): the
/// dissipator superoperator and the drive-off photoluminescence. Solves are
/// const and safe to run concurrently.
class OdmrEngine {
public:
    OdmrEngine(const DefectParams& params, const StaticField& field,
               const DriveConfig& drive_template);

    double contrast_at(double f_mhz, double delta_deg) const;
    DensityMatrix steady_state_at(double f_mhz, double delta_deg) const;
    double pl_off() const { return pl_off_; }

private:
    DefectParams params_;
    StaticField field_;
    DriveConfig drive_;
    ComplexMatrix dissipator_;  // 49x49, Hamiltonian part excluded
    double pl_off_ = 0.0;
};

/// One-shot contrast: (PL_on - PL_off)/PL_off at one grid point.
double contrast_at(double f_mhz, const DriveConfig& drive, const StaticField& field,
                   const DefectParams& params);

/// Contrast over the frequency grid at (cfg.drive.delta_deg, cfg.b_list[0]).
Spectrum frequency_sweep(const SweepConfig& cfg);

/// Frequency sweeps for every phase in cfg.delta_list at cfg.b_list[0].
PhaseMap phase_sweep(const SweepConfig& cfg);

/// Trapezoidal integral of |contrast| over f < d_gs and f > d_gs per phase,
/// each curve normalized so its minimum is 0 and maximum is 1.
IntegratedContrast integrated_contrast(const PhaseMap& map, double d_gs);

/// Fits every phase's spectrum and returns the argmax selectivity per
/// transition at cfg.b_list[0]. FitFailed is rethrown with the offending
/// phase named.
SelectivityResult find_max_selectivity(const SweepConfig& cfg, const FitOptions& fitter = {});

/// find_max_selectivity per b in cfg.b_list; fit failures mark the row's
/// status and the sweep continues.
SelectivityCurve field_sweep(const SweepConfig& cfg, const FitOptions& fitter = {});

/// center_plus - center_minus from the double-Lorentzian fit.
double peak_separation(const Spectrum& spec, const DefectParams& params,
                       const FitOptions& fitter = {});

}  // namespace odmrsim
