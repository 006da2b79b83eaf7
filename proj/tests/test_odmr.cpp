#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "odmrsim/odmr.hpp"

using namespace odmrsim;

namespace {

SweepConfig base_config() {
    SweepConfig cfg;
    cfg.drive.offset_deg = -30.0;
    return cfg;
}

int argmin(const std::vector<double>& v) {
    return static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
}

double phase_gap_deg(double a, double b) {
    const double d = wrap_deg(a - b);
    return std::min(d, 360.0 - d);
}

}  // namespace

TEST_CASE("contrast_at: off, far-detuned and resonant drive") {
    DefectParams p;
    StaticField f{2.3};

    DriveConfig off;
    off.omega1 = 0.0;
    off.omega2 = 0.0;
    off.freq = 3400.0;
    CHECK(contrast_at(3400.0, off, f, p) == 0.0);

    DriveConfig on;
    on.delta_deg = 120.0;  // effective 90 deg, pure sigma-minus
    on.freq = 1500.0;      // ~50 saturation-broadened linewidths below f_minus
    CHECK(std::abs(contrast_at(1500.0, on, f, p)) < 1e-4);
    CHECK(std::abs(contrast_at(5500.0, on, f, p)) < 1e-4);

    const double res = resonance_frequencies(p, f).f_minus;
    on.freq = res;
    CHECK(contrast_at(res, on, f, p) < -1e-3);
}

TEST_CASE("frequency sweep: selective excitation by drive handedness") {
    SweepConfig cfg = base_config();
    cfg.n_freq = 201;
    const ResonancePair res = resonance_frequencies(cfg.params, StaticField{2.3});

    cfg.drive.delta_deg = 120.0;  // effective 90 deg
    const Spectrum minus = frequency_sweep(cfg);
    const int i_minus = argmin(minus.contrasts);
    CHECK(std::abs(minus.freqs[i_minus] - res.f_minus) < 5.0);

    // The suppressed branch is weaker than the selected one; at the default
    // drive strength saturation compresses the depth ratio, so check a
    // lightly driven sweep for the clean coupling-ratio limit too.
    auto depth_near = [](const Spectrum& s, double f0) {
        double d = 0.0;
        for (size_t i = 0; i < s.freqs.size(); ++i)
            if (std::abs(s.freqs[i] - f0) < 40.0) d = std::max(d, -s.contrasts[i]);
        return d;
    };
    CHECK(depth_near(minus, res.f_plus) < 0.8 * depth_near(minus, res.f_minus));

    SweepConfig weak = cfg;
    weak.drive.delta_deg = 120.0;
    weak.drive.omega1 = 1.5;
    weak.drive.omega2 = 1.5;
    const Spectrum weak_sweep = frequency_sweep(weak);
    CHECK(depth_near(weak_sweep, res.f_plus) < 0.35 * depth_near(weak_sweep, res.f_minus));

    cfg.drive.delta_deg = 300.0;  // effective 270 deg
    const Spectrum plus = frequency_sweep(cfg);
    const int i_plus = argmin(plus.contrasts);
    CHECK(std::abs(plus.freqs[i_plus] - res.f_plus) < 5.0);

    cfg.drive.delta_deg = 30.0;  // effective 0 deg: linear polarization
    const Spectrum lin = frequency_sweep(cfg);
    const double d_lo = depth_near(lin, res.f_minus);
    const double d_hi = depth_near(lin, res.f_plus);
    CHECK(std::abs(d_lo - d_hi) < 0.01 * std::max(d_lo, d_hi));

    for (const Spectrum* s : {&minus, &plus, &lin})
        for (double c : s->contrasts) CHECK(c <= 1e-9);
}

TEST_CASE("mirror symmetry of the symmetric model") {
    DefectParams p;
    StaticField f{2.3};
    DriveConfig d;
    d.offset_deg = 0.0;
    const OdmrEngine engine(p, f, d);

    for (double delta : {20.0, 75.0, 130.0, 250.0}) {
        for (double df : {-160.0, -40.0, 12.5, 90.0}) {
            const double c1 = engine.contrast_at(p.d_gs + df, delta);
            const double c2 = engine.contrast_at(p.d_gs - df, wrap_deg(360.0 - delta));
            CHECK(std::abs(c1 - c2) < 1e-6);
        }
    }
}

TEST_CASE("phase sweep: maximum-selectivity phases are 180 deg apart") {
    SweepConfig cfg = base_config();
    cfg.n_freq = 151;
    const SelectivityResult res = find_max_selectivity(cfg);
    CHECK(phase_gap_deg(res.delta_star_plus, res.delta_star_minus) ==
          doctest::Approx(180.0).epsilon(10.0 / 180.0));
    CHECK(res.sel_minus == doctest::Approx(res.sel_plus).epsilon(0.01));
    CHECK_FALSE(res.degenerate_field);

    // The optimum phases sit where the effective phase is circular
    // (applied 120/300 deg for the -30 deg offset).
    CHECK(phase_gap_deg(res.delta_star_minus, 120.0) <= 10.0);
    CHECK(phase_gap_deg(res.delta_star_plus, 300.0) <= 10.0);
}

TEST_CASE("integrated contrast: normalization, 180 deg separation, mirror") {
    SweepConfig cfg = base_config();
    cfg.drive.offset_deg = 0.0;
    cfg.f_start = 3240.0;  // symmetric about d_gs = 3490
    cfg.f_stop = 3740.0;
    cfg.n_freq = 201;
    const PhaseMap map = phase_sweep(cfg);
    const IntegratedContrast ic = integrated_contrast(map, cfg.params.d_gs);

    CHECK(*std::min_element(ic.below.begin(), ic.below.end()) == 0.0);
    CHECK(*std::max_element(ic.below.begin(), ic.below.end()) == 1.0);
    CHECK(*std::min_element(ic.above.begin(), ic.above.end()) == 0.0);
    CHECK(*std::max_element(ic.above.begin(), ic.above.end()) == 1.0);

    const int i_below =
        static_cast<int>(std::max_element(ic.below.begin(), ic.below.end()) - ic.below.begin());
    const int i_above =
        static_cast<int>(std::max_element(ic.above.begin(), ic.above.end()) - ic.above.begin());
    CHECK(phase_gap_deg(ic.deltas[i_below], ic.deltas[i_above]) ==
          doctest::Approx(180.0).epsilon(10.0 / 180.0));

    // Handedness mirror at zero offset: below(delta) = above(360 - delta).
    const size_t nd = ic.deltas.size();
    for (size_t k = 0; k < nd; ++k) {
        const size_t mirrored = (nd - k) % nd;  // delta grid is uniform over [0,360)
        CHECK(std::abs(ic.below[k] - ic.above[mirrored]) < 1e-6);
    }
}

TEST_CASE("selectivity grows with field and is flat at zero field") {
    SweepConfig cfg = base_config();
    cfg.n_freq = 121;
    cfg.delta_list = SweepConfig::default_delta_grid(30.0);

    cfg.b_list = {1.0};
    const SelectivityResult at1 = find_max_selectivity(cfg);
    cfg.b_list = {5.0};
    const SelectivityResult at5 = find_max_selectivity(cfg);
    CHECK(at5.sel_minus > at1.sel_minus);
    CHECK(at5.sel_plus > at1.sel_plus);

    cfg.b_list = {0.0};
    cfg.f_start = 3300.0;
    cfg.f_stop = 3680.0;
    const SelectivityResult at0 = find_max_selectivity(cfg);
    CHECK(at0.degenerate_field);
    CHECK(at0.sel_minus == doctest::Approx(0.5).epsilon(0.04));
    CHECK(at0.sel_plus == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("field sweep rows and peak separations") {
    SweepConfig cfg = base_config();
    cfg.n_freq = 121;
    cfg.delta_list = SweepConfig::default_delta_grid(45.0);
    cfg.b_list = {1.0, 2.3, 5.0};
    const SelectivityCurve curve = field_sweep(cfg);
    REQUIRE(curve.b_values.size() == 3);
    for (const auto& s : curve.status) CHECK(s == "ok");
    for (size_t k = 0; k < 3; ++k)
        CHECK(curve.results[k].sel_minus ==
              doctest::Approx(curve.results[k].sel_plus).epsilon(0.011));
    // Separation follows the resonance formula and grows with field.
    CHECK(curve.peak_sep_mhz[0] < curve.peak_sep_mhz[1]);
    CHECK(curve.peak_sep_mhz[1] < curve.peak_sep_mhz[2]);
    CHECK(curve.peak_sep_mhz[1] == doctest::Approx(183.1).epsilon(1.0 / 183.1));
}

TEST_CASE("peak separation from single spectra") {
    SweepConfig cfg = base_config();
    cfg.n_freq = 201;
    cfg.drive.delta_deg = 30.0;  // near-linear polarization shows both dips

    cfg.b_list = {0.0};
    const Spectrum s0 = frequency_sweep(cfg);
    CHECK(peak_separation(s0, cfg.params) == doctest::Approx(130.0).epsilon(1.0 / 130.0));

    cfg.b_list = {2.3};
    const Spectrum s23 = frequency_sweep(cfg);
    CHECK(peak_separation(s23, cfg.params) == doctest::Approx(183.1).epsilon(1.0 / 183.1));
}

TEST_CASE("grid-point independence: serial and threaded sweeps match bitwise") {
    SweepConfig cfg = base_config();
    cfg.n_freq = 41;
    cfg.delta_list = {0.0, 90.0, 180.0, 270.0};

    cfg.n_threads = 1;
    const PhaseMap serial = phase_sweep(cfg);
    cfg.n_threads = 4;
    const PhaseMap threaded = phase_sweep(cfg);
    for (size_t di = 0; di < serial.deltas.size(); ++di)
        for (size_t fi = 0; fi < serial.freqs.size(); ++fi)
            CHECK(serial.contrast[di][fi] == threaded.contrast[di][fi]);
}

TEST_CASE("steady states stay positive across the physical grid") {
    std::mt19937_64 rng(20250810);
    std::uniform_real_distribution<double> uf(3250.0, 3750.0), ud(0.0, 360.0), ub(0.0, 8.2);
    DefectParams p;
    DriveConfig d;
    for (int trial = 0; trial < 100; ++trial) {
        const double b0 = ub(rng);
        const OdmrEngine engine(p, StaticField{b0}, d);
        const DensityMatrix rho = engine.steady_state_at(uf(rng), ud(rng));
        const EigResult eig = eig_hermitian(rho.rho, 1e-8);
        CHECK(eig.values.front() >= -1e-8);
        CHECK(std::abs(rho.rho.trace().real() - 1.0) < 1e-9);
    }
}

TEST_CASE("sweep config validation") {
    SweepConfig cfg = base_config();
    cfg.f_start = 4000.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = base_config();
    cfg.delta_list = {370.0};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = base_config();
    cfg.b_list = {500.0};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
