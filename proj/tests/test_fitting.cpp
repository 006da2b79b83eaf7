#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "odmrsim/fitting.hpp"
#include "odmrsim/matrix.hpp"

using namespace odmrsim;

namespace {

std::mt19937_64 test_rng(uint64_t salt = 0) {
    uint64_t seed = 20250810;
    if (const char* env = std::getenv("ODMR_SIM_SEED")) seed = std::strtoull(env, nullptr, 10);
    return std::mt19937_64(seed + salt);
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

double lorentz(double f, double c, double w) {
    const double d = f - c;
    return (2.0 / M_PI) * w / (4.0 * d * d + w * w);
}

// Synthetic dip spectrum with the same background convention as the fitter
// (reference frequency = mean of the grid).
Spectrum synthesize(const FitParams& p, const std::vector<double>& freqs) {
    double f_ref = 0.0;
    for (double f : freqs) f_ref += f;
    f_ref /= freqs.size();
    Spectrum s;
    s.freqs = freqs;
    for (double f : freqs)
        s.contrasts.push_back(p[7] + p[6] * (f - f_ref) - p[2] * lorentz(f, p[0], p[1]) -
                              p[5] * lorentz(f, p[3], p[4]));
    return s;
}

}  // namespace

TEST_CASE("background subtraction: exact cases") {
    const auto freqs = linspace(3250.0, 3750.0, 101);

    Spectrum line;
    line.freqs = freqs;
    for (double f : freqs) line.contrasts.push_back(2e-4 * f - 0.7);
    const Spectrum zeroed = subtract_linear_background(line, 0.1);
    for (double y : zeroed.contrasts) CHECK(std::abs(y) < 1e-9);

    Spectrum flat;
    flat.freqs = freqs;
    flat.contrasts.assign(freqs.size(), 0.0);
    for (double y : subtract_linear_background(flat, 0.1).contrasts)
        CHECK(std::abs(y) < 1e-15);

    // Double dip on a line, with the dip signal truncated to the interior so
    // the wings carry exactly the line.
    const FitParams bare = {3400.0, 30.0, 2.0, 3580.0, 35.0, 1.0, 0.0, 0.0};
    Spectrum dips_only = synthesize(bare, freqs);
    for (size_t i = 0; i < freqs.size(); ++i)
        if (freqs[i] < 3330.0 || freqs[i] > 3670.0) dips_only.contrasts[i] = 0.0;
    Spectrum dips = dips_only;
    for (size_t i = 0; i < freqs.size(); ++i) dips.contrasts[i] += 3e-5 * freqs[i] - 0.01;
    const Spectrum recovered = subtract_linear_background(dips, 0.1);
    for (size_t i = 0; i < freqs.size(); ++i)
        CHECK(std::abs(recovered.contrasts[i] - dips_only.contrasts[i]) < 1e-9);
}

TEST_CASE("background subtraction: peak inside the wings is rejected") {
    const auto freqs = linspace(3250.0, 3750.0, 101);
    const FitParams edge_peak = {3270.0, 20.0, 2.0, 3580.0, 35.0, 1.0, 0.0, 0.0};
    const Spectrum spec = synthesize(edge_peak, freqs);
    CHECK_THROWS_AS(subtract_linear_background(spec, 0.15), WingsContainPeak);

    CHECK_THROWS_AS(subtract_linear_background(spec, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(subtract_linear_background(spec, 0.5), std::invalid_argument);
}

TEST_CASE("initial guess: seeded centers and the 10% area floor") {
    DefectParams params;
    StaticField field{2.3};
    const auto freqs = linspace(3250.0, 3750.0, 201);

    // Both dips visible at their physical positions.
    const FitParams truth = {3398.5, 30.0, 0.02, 3581.5, 30.0, 0.012, 0.0, 0.0};
    const FitParams g = initial_guess(synthesize(truth, freqs), params, field);
    CHECK(std::abs(g[0] - 3398.5) < 10.0);
    CHECK(std::abs(g[3] - 3581.5) < 10.0);
    CHECK(g[2] > 0.0);
    CHECK(g[5] > 0.0);

    // Only the lower dip visible: the other area is floored at 10%.
    const FitParams single = {3398.5, 30.0, 0.02, 3581.5, 30.0, 0.0, 0.0, 0.0};
    const FitParams gs = initial_guess(synthesize(single, freqs), params, field);
    CHECK(gs[5] == doctest::Approx(0.1 * gs[2]));
}

TEST_CASE("double-Lorentzian fit: the reference noiseless round trip") {
    const auto freqs = linspace(3250.0, 3750.0, 201);
    const FitParams truth = {3398.5, 40.0, 3.0, 3581.5, 40.0, 1.0, 0.0, 0.0};
    const Spectrum spec = synthesize(truth, freqs);

    FitParams guess = truth;
    guess[0] += 6.0;
    guess[3] -= 5.0;
    guess[1] = 25.0;
    guess[4] = 55.0;
    guess[2] = 1.0;
    guess[5] = 2.0;
    const DoubleLorentzianFit fit = fit_double_lorentzian(spec, guess);

    CHECK(fit.peak_minus.center == doctest::Approx(truth[0]).epsilon(1e-6));
    CHECK(fit.peak_minus.fwhm == doctest::Approx(truth[1]).epsilon(1e-6));
    CHECK(fit.peak_minus.area == doctest::Approx(truth[2]).epsilon(1e-6));
    CHECK(fit.peak_plus.center == doctest::Approx(truth[3]).epsilon(1e-6));
    CHECK(fit.peak_plus.fwhm == doctest::Approx(truth[4]).epsilon(1e-6));
    CHECK(fit.peak_plus.area == doctest::Approx(truth[5]).epsilon(1e-6));
    CHECK(fit.rms_residual < 1e-10);
    CHECK_FALSE(fit.poorly_separated);

    // peak height identity
    CHECK(fit.peak_minus.height() ==
          doctest::Approx(2.0 * fit.peak_minus.area / (M_PI * fit.peak_minus.fwhm)));
}

TEST_CASE("double-Lorentzian fit: random round trips recover parameters") {
    auto rng = test_rng(30);
    std::uniform_real_distribution<double> uc(3350.0, 3450.0), uw(15.0, 50.0),
        ua(0.005, 0.08), us(-1e-5, 1e-5), uo(-0.01, 0.01), usep(0.0, 120.0), uj(-1.0, 1.0);
    const auto freqs = linspace(3250.0, 3750.0, 251);

    for (int trial = 0; trial < 150; ++trial) {
        FitParams truth;
        truth[0] = uc(rng);
        truth[1] = uw(rng);
        truth[2] = ua(rng);
        truth[4] = uw(rng);
        truth[5] = ua(rng);
        truth[3] = truth[0] + 1.5 * std::max(truth[1], truth[4]) + usep(rng);
        truth[6] = us(rng);
        truth[7] = uo(rng);
        const Spectrum spec = synthesize(truth, freqs);

        FitParams guess = truth;
        guess[0] += 0.3 * truth[1] * uj(rng);
        guess[3] += 0.3 * truth[4] * uj(rng);
        guess[1] *= 1.0 + 0.3 * uj(rng);
        guess[4] *= 1.0 + 0.3 * uj(rng);
        guess[2] *= 1.0 + 0.5 * uj(rng);
        guess[5] *= 1.0 + 0.5 * uj(rng);

        const DoubleLorentzianFit fit = fit_double_lorentzian(spec, guess);
        const FitParams got = {fit.peak_minus.center, fit.peak_minus.fwhm, fit.peak_minus.area,
                               fit.peak_plus.center,  fit.peak_plus.fwhm,  fit.peak_plus.area,
                               fit.bg_slope,          fit.bg_offset};
        for (int k = 0; k < 8; ++k) {
            const double scale = std::max(std::abs(truth[k]), 1e-4);
            CHECK(std::abs(got[k] - truth[k]) <= 1e-4 * scale);
        }

        // Covariance is symmetric PSD.
        ComplexMatrix cov(8);
        for (int r = 0; r < 8; ++r)
            for (int c = 0; c < 8; ++c) {
                CHECK(std::abs(fit.covariance[r][c] - fit.covariance[c][r]) <= 1e-10);
                cov.at(r, c) = fit.covariance[r][c];
            }
        const EigResult eig = eig_hermitian(cov, 1e-3);
        CHECK(eig.values.front() >= -1e-10);

        // Selectivities share the denominator and sum to one exactly.
        const Selectivity sm = selectivity(fit, WhichPeak::minus);
        const Selectivity sp = selectivity(fit, WhichPeak::plus);
        CHECK(sm.value + sp.value == 1.0);
    }
}

TEST_CASE("double-Lorentzian fit: symmetric input gives equal areas") {
    const auto freqs = linspace(3250.0, 3730.0, 241);  // symmetric about 3490
    const FitParams truth = {3420.0, 30.0, 2.0, 3560.0, 30.0, 2.0, 0.0, 0.0};
    const Spectrum spec = synthesize(truth, freqs);
    FitParams guess = truth;
    guess[2] = 1.2;
    guess[5] = 1.2;
    guess[1] = 40.0;
    guess[4] = 40.0;
    const DoubleLorentzianFit fit = fit_double_lorentzian(spec, guess);
    CHECK(std::abs(fit.peak_minus.area - fit.peak_plus.area) <
          1e-9 * std::max(1.0, fit.peak_minus.area));
}

TEST_CASE("double-Lorentzian fit: noisy recovery within tolerance") {
    const auto freqs = linspace(3250.0, 3750.0, 201);
    const FitParams truth = {3398.5, 40.0, 3.0, 3581.5, 40.0, 1.0, 0.0, 0.0};
    const double depth = 2.0 * truth[2] / (M_PI * truth[1]);
    const double noise = 0.01 * depth;

    auto rng = test_rng(31);
    std::normal_distribution<double> gauss(0.0, noise);
    for (int seed = 0; seed < 25; ++seed) {
        Spectrum spec = synthesize(truth, freqs);
        for (double& y : spec.contrasts) y += gauss(rng);
        FitParams guess = truth;
        guess[0] -= 4.0;
        guess[3] += 4.0;
        const DoubleLorentzianFit fit = fit_double_lorentzian(spec, guess);
        CHECK(std::abs(fit.peak_minus.center - truth[0]) < 1.0);
        CHECK(std::abs(fit.peak_plus.center - truth[3]) < 1.0);
        CHECK(std::abs(fit.peak_minus.area - truth[2]) < 0.05 * truth[2]);
        CHECK(std::abs(fit.peak_plus.area - truth[5]) < 0.05 * truth[5]);
    }
}

TEST_CASE("double-Lorentzian fit: masking, flat input, feasibility") {
    const auto freqs = linspace(3250.0, 3950.0, 281);
    FitParams truth = {3398.5, 40.0, 3.0, 3581.5, 40.0, 1.0, 0.0, 0.0};
    Spectrum spec = synthesize(truth, freqs);
    // Narrow spurious artifact near 3900 MHz.
    for (size_t i = 0; i < spec.freqs.size(); ++i)
        if (std::abs(spec.freqs[i] - 3900.0) < 6.0) spec.contrasts[i] -= 0.03;

    FitOptions opts;
    opts.mask.push_back({3880.0, 3920.0});
    FitParams guess = truth;
    guess[2] = 2.0;
    const DoubleLorentzianFit fit = fit_double_lorentzian(spec, guess, opts);
    CHECK(fit.peak_minus.area == doctest::Approx(truth[2]).epsilon(1e-6));

    // A flat spectrum fails in the fit, not in the guess.
    Spectrum flat;
    flat.freqs = linspace(0.0, 100.0, 50);
    flat.contrasts.assign(50, 0.123);
    CHECK_NOTHROW(initial_guess(flat, DefectParams{}, StaticField{2.3}));
    CHECK_THROWS_AS(fit_double_lorentzian(flat, truth), FlatSpectrum);

    Spectrum tiny;
    tiny.freqs = linspace(0.0, 10.0, 10);
    tiny.contrasts.assign(10, 0.0);
    CHECK_THROWS_AS(fit_double_lorentzian(tiny, truth), std::invalid_argument);
}

TEST_CASE("double-Lorentzian fit: overlapping dips carry the flag") {
    const auto freqs = linspace(3400.0, 3580.0, 181);
    const FitParams truth = {3480.0, 40.0, 1.0, 3496.0, 40.0, 1.0, 0.0, 0.0};
    const Spectrum spec = synthesize(truth, freqs);
    const DoubleLorentzianFit fit = fit_double_lorentzian(spec, truth);
    CHECK(fit.poorly_separated);
}

TEST_CASE("selectivity arithmetic and errors") {
    DoubleLorentzianFit fit;
    fit.peak_minus = {3400.0, 30.0, 3.0};
    fit.peak_plus = {3580.0, 30.0, 1.0};
    CHECK(selectivity(fit, WhichPeak::minus).value == doctest::Approx(0.75));
    CHECK(selectivity(fit, WhichPeak::plus).value == doctest::Approx(0.25));

    fit.peak_plus.area = 0.0;
    CHECK(selectivity(fit, WhichPeak::minus).value == doctest::Approx(1.0));

    fit.peak_minus.area = 0.0;
    CHECK_THROWS_AS(selectivity(fit, WhichPeak::minus), ZeroTotalArea);

    fit.peak_minus.area = 2.0;
    fit.peak_plus.area = 2.0;
    CHECK(selectivity(fit, WhichPeak::minus).value == doctest::Approx(0.5));
}
