#pragma once

#include <array>
#include <vector>

#include "odmrsim/odmr_types.hpp"
#include "odmrsim/params.hpp"

namespace odmrsim {

/// Area-parameterized Lorentzian dip. `area` is the unsigned dip area, so the
/// peak depth is 2*area / (pi*fwhm).
struct LorentzianPeak {
    double center = 0.0;  // MHz
    double fwhm = 0.0;    // MHz
    double area = 0.0;

    double height() const { return 2.0 * area / (M_PI * fwhm); }
};

// Fit parameter vector layout: {c-, w-, A-, c+, w+, A+, slope, offset}.
using FitParams = std::array<double, 8>;

/// Two Lorentzian dips on a linear background, fitted by least squares.
/// The background is offset + slope * (f - f_ref).
struct DoubleLorentzianFit {
    LorentzianPeak peak_minus;  // lower center after relabeling
    LorentzianPeak peak_plus;
    double bg_slope = 0.0;   // 1/MHz
    double bg_offset = 0.0;
    double f_ref = 0.0;      // background reference frequency, MHz
    double rms_residual = 0.0;
    std::array<std::array<double, 8>, 8> covariance{};
    int iterations = 0;
    bool poorly_separated = false;  // center distance < half the mean fwhm
};

struct Selectivity {
    double value = 0.0;  // in [0, 1]
    double sigma = 0.0;
};

struct FitOptions {
    int max_iterations = 500;
    double lambda0 = 1e-3;       // initial LM damping
    double cost_rel_tol = 1e-10;
    double gradient_tol = 1e-8;
    // Frequency windows (lo, hi) excluded from the residuals, e.g. around
    // instrument artifacts.
    std::vector<std::pair<double, double>> mask;
};

/// Least-squares line through the outer `wing_fraction` of samples on each
/// end, subtracted from the whole spectrum. Throws WingsContainPeak when a
/// wing sample deviates from the line by more than 5 robust sigma.
Spectrum subtract_linear_background(const Spectrum& spec, double wing_fraction);

/// Starting parameters for the double-Lorentzian fit: centers from the
/// resonance formula, widths at the dephasing scale, areas from local dip
/// depths (floored at 10% of the larger area so the optimizer never starts
/// on the zero-area boundary).
FitParams initial_guess(const Spectrum& spec, const DefectParams& params,
                        const StaticField& field);

/// Levenberg-Marquardt fit of two Lorentzian dips plus linear background.
DoubleLorentzianFit fit_double_lorentzian(const Spectrum& spec, const FitParams& guess,
                                          const FitOptions& opts = {});

enum class WhichPeak { minus, plus };

/// Area fraction of one peak with first-order error propagation from the
/// fit covariance. The two selectivities share a denominator and sum to 1.
Selectivity selectivity(const DoubleLorentzianFit& fit, WhichPeak which);

}  // namespace odmrsim
