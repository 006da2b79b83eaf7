#include "odmrsim/odmr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "odmrsim/parallel.hpp"

namespace odmrsim {

std::vector<double> SweepConfig::default_delta_grid(double step_deg) {
    std::vector<double> deltas;
    for (double d = 0.0; d < 360.0 - 1e-9; d += step_deg) deltas.push_back(d);
    return deltas;
}

std::vector<double> SweepConfig::freq_grid() const {
    std::vector<double> freqs(n_freq);
    for (int i = 0; i < n_freq; ++i)
        freqs[i] = f_start + (f_stop - f_start) * i / (n_freq - 1);
    return freqs;
}

void SweepConfig::validate() const {
    if (!(f_start < f_stop)) throw ConfigError("f_start", "f_start must be < f_stop");
    if (n_freq < 2) throw ConfigError("n_freq", "must be >= 2");
    if (delta_list.empty()) throw ConfigError("delta_list", "must not be empty");
    for (double d : delta_list)
        if (!(d >= 0.0 && d < 360.0))
            throw ConfigError("delta_list", "phases must lie in [0, 360)");
    if (b_list.empty()) throw ConfigError("b_list", "must not be empty");
    for (double b : b_list) StaticField{b}.validate();
    if (n_threads < 1) throw ConfigError("threads", "must be >= 1");
    params.validate();
    drive.validate();
}

OdmrEngine::OdmrEngine(const DefectParams& params, const StaticField& field,
                       const DriveConfig& drive_template)
    : params_(params), field_(field), drive_(drive_template) {
    params_.validate();
    field_.validate();
    drive_.validate();

    const auto jumps = jump_operators(params_);
    dissipator_ = build_liouvillian(ComplexMatrix(level::count), jumps).mat;

    DriveConfig off = drive_;
    off.omega1 = 0.0;
    off.omega2 = 0.0;
    off.freq = params_.d_gs;
    const ComplexMatrix h_off = build_rwa_hamiltonian(params_, field_, off);
    Liouvillian l{dissipator_ + build_liouvillian(h_off, {}).mat};
    pl_off_ = photoluminescence(steady_state(l), params_);
}

DensityMatrix OdmrEngine::steady_state_at(double f_mhz, double delta_deg) const {
    DriveConfig d = drive_;
    d.freq = f_mhz;
    d.delta_deg = delta_deg;
    const ComplexMatrix h = build_rwa_hamiltonian(params_, field_, d);
    Liouvillian l{dissipator_ + build_liouvillian(h, {}).mat};
    return steady_state(l);
}

double OdmrEngine::contrast_at(double f_mhz, double delta_deg) const {
    const double pl_on = photoluminescence(steady_state_at(f_mhz, delta_deg), params_);
    return (pl_on - pl_off_) / pl_off_;
}

double contrast_at(double f_mhz, const DriveConfig& drive, const StaticField& field,
                   const DefectParams& params) {
    return OdmrEngine(params, field, drive).contrast_at(f_mhz, drive.delta_deg);
}

Spectrum frequency_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const OdmrEngine engine(cfg.params, StaticField{cfg.b_list.front()}, cfg.drive);
    Spectrum spec;
    spec.freqs = cfg.freq_grid();
    spec.contrasts.assign(spec.freqs.size(), 0.0);
    spec.delta_deg = cfg.drive.delta_deg;
    spec.b0 = cfg.b_list.front();
    parallel_for(cfg.n_freq, cfg.n_threads, [&](int i) {
        spec.contrasts[i] = engine.contrast_at(spec.freqs[i], spec.delta_deg);
    });
    return spec;
}

PhaseMap phase_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const OdmrEngine engine(cfg.params, StaticField{cfg.b_list.front()}, cfg.drive);
    PhaseMap map;
    map.deltas = cfg.delta_list;
    map.freqs = cfg.freq_grid();
    map.b0 = cfg.b_list.front();
    const int nd = static_cast<int>(map.deltas.size());
    const int nf = static_cast<int>(map.freqs.size());
    map.contrast.assign(nd, std::vector<double>(nf, 0.0));
    parallel_for(nd * nf, cfg.n_threads, [&](int k) {
        const int di = k / nf, fi = k % nf;
        map.contrast[di][fi] = engine.contrast_at(map.freqs[fi], map.deltas[di]);
    });
    return map;
}

namespace {

double trapezoid_abs(const std::vector<double>& freqs, const std::vector<double>& values,
                     bool below, double d_gs) {
    double integral = 0.0;
    for (size_t i = 1; i < freqs.size(); ++i) {
        const bool in_prev = below ? freqs[i - 1] < d_gs : freqs[i - 1] > d_gs;
        const bool in_here = below ? freqs[i] < d_gs : freqs[i] > d_gs;
        if (in_prev && in_here)
            integral += 0.5 * (std::abs(values[i - 1]) + std::abs(values[i])) *
                        (freqs[i] - freqs[i - 1]);
    }
    return integral;
}

void normalize_unit(std::vector<double>& v) {
    const double lo = *std::min_element(v.begin(), v.end());
    const double hi = *std::max_element(v.begin(), v.end());
    const double range = hi - lo;
    for (double& x : v) x = range > 0.0 ? (x - lo) / range : 0.0;
}

}  // namespace

IntegratedContrast integrated_contrast(const PhaseMap& map, double d_gs) {
    if (map.freqs.empty() || map.freqs.front() >= d_gs || map.freqs.back() <= d_gs)
        throw std::invalid_argument("phase map must straddle d_gs");
    IntegratedContrast out;
    out.deltas = map.deltas;
    for (size_t di = 0; di < map.deltas.size(); ++di) {
        out.below.push_back(trapezoid_abs(map.freqs, map.contrast[di], true, d_gs));
        out.above.push_back(trapezoid_abs(map.freqs, map.contrast[di], false, d_gs));
    }
    normalize_unit(out.below);
    normalize_unit(out.above);
    return out;
}

namespace {

struct PhaseFits {
    std::vector<double> deltas;
    std::vector<double> sel_minus, sel_minus_sigma;
    std::vector<double> sel_plus, sel_plus_sigma;
    std::vector<double> separation;
};

PhaseFits fit_all_phases(const SweepConfig& cfg, const FitOptions& fitter) {
    const PhaseMap map = phase_sweep(cfg);
    const StaticField field{map.b0};
    PhaseFits out;
    out.deltas = map.deltas;
    for (size_t di = 0; di < map.deltas.size(); ++di) {
        Spectrum spec;
        spec.freqs = map.freqs;
        spec.contrasts = map.contrast[di];
        spec.delta_deg = map.deltas[di];
        spec.b0 = map.b0;
        try {
            const FitParams guess = initial_guess(spec, cfg.params, field);
            const DoubleLorentzianFit fit = fit_double_lorentzian(spec, guess, fitter);
            const Selectivity sm = selectivity(fit, WhichPeak::minus);
            const Selectivity sp = selectivity(fit, WhichPeak::plus);
            out.sel_minus.push_back(sm.value);
            out.sel_minus_sigma.push_back(sm.sigma);
            out.sel_plus.push_back(sp.value);
            out.sel_plus_sigma.push_back(sp.sigma);
            out.separation.push_back(fit.peak_plus.center - fit.peak_minus.center);
        } catch (const FitFailed& e) {
            throw FitFailed("delta = " + std::to_string(map.deltas[di]) +
                                " deg: " + e.what(),
                            e.iterations);
        }
    }
    return out;
}

SelectivityResult max_selectivity_from(const PhaseFits& fits, double b0) {
    SelectivityResult res;
    res.degenerate_field = std::abs(b0) < 1e-12;
    size_t im = 0, ip = 0;
    for (size_t k = 1; k < fits.deltas.size(); ++k) {
        if (fits.sel_minus[k] > fits.sel_minus[im]) im = k;
        if (fits.sel_plus[k] > fits.sel_plus[ip]) ip = k;
    }
    res.delta_star_minus = fits.deltas[im];
    res.sel_minus = fits.sel_minus[im];
    res.sel_minus_sigma = fits.sel_minus_sigma[im];
    res.delta_star_plus = fits.deltas[ip];
    res.sel_plus = fits.sel_plus[ip];
    res.sel_plus_sigma = fits.sel_plus_sigma[ip];
    return res;
}

}  // namespace

SelectivityResult find_max_selectivity(const SweepConfig& cfg, const FitOptions& fitter) {
    const PhaseFits fits = fit_all_phases(cfg, fitter);
    return max_selectivity_from(fits, cfg.b_list.front());
}

SelectivityCurve field_sweep(const SweepConfig& cfg, const FitOptions& fitter) {
    cfg.validate();
    SelectivityCurve curve;
    for (double b : cfg.b_list) {
        SweepConfig sub = cfg;
        sub.b_list = {b};
        curve.b_values.push_back(b);
        try {
            const PhaseFits fits = fit_all_phases(sub, fitter);
            SelectivityResult res = max_selectivity_from(fits, b);
            double sep = 0.0;
            for (double s : fits.separation) sep += s;
            sep /= fits.separation.size();
            curve.results.push_back(res);
            curve.peak_sep_mhz.push_back(sep);
            curve.status.push_back(res.degenerate_field ? "degenerate_zero_field" : "ok");
        } catch (const FitFailed& e) {
            curve.results.push_back({});
            curve.peak_sep_mhz.push_back(std::numeric_limits<double>::quiet_NaN());
            curve.status.push_back(std::string("fit_failed: ") + e.what());
        }
    }
    return curve;
}

double peak_separation(const Spectrum& spec, const DefectParams& params,
                       const FitOptions& fitter) {
    const FitParams guess = initial_guess(spec, params, StaticField{spec.b0});
    const DoubleLorentzianFit fit = fit_double_lorentzian(spec, guess, fitter);
    return fit.peak_plus.center - fit.peak_minus.center;
}

}  // namespace odmrsim
