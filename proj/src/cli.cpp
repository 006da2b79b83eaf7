#include "odmrsim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "odmrsim/csv.hpp"
#include "odmrsim/svg.hpp"

namespace odmrsim {

namespace {

namespace fs = std::filesystem;

void prepare_output(const RunConfig& cfg) {
    cfg.validate();
    fs::create_directories(cfg.out_dir);
    std::ofstream echo(fs::path(cfg.out_dir) / "config_used.cfg", std::ios::binary);
    echo << config_to_string(cfg);
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << content;
}

uint64_t noise_seed() {
    if (const char* env = std::getenv("ODMR_SIM_SEED"))
        return std::strtoull(env, nullptr, 10);
    return 12345;
}

FitOptions fit_options(const RunConfig& cfg) {
    FitOptions opts;
    opts.mask = cfg.mask;
    return opts;
}

double lorentz(double f, double c, double w) {
    const double d = f - c;
    return (2.0 / M_PI) * w / (4.0 * d * d + w * w);
}

}  // namespace

void cmd_spectrum(const RunConfig& cfg) {
    prepare_output(cfg);
    Spectrum spec = frequency_sweep(cfg.sweep_config());

    if (cfg.noise_sigma > 0.0) {
        std::mt19937_64 rng(noise_seed());
        std::normal_distribution<double> gauss(0.0, cfg.noise_sigma);
        for (double& c : spec.contrasts) c += gauss(rng);
    }

    CsvTable table;
    table.header = {"frequency_mhz", "contrast"};
    for (size_t i = 0; i < spec.freqs.size(); ++i)
        table.add_row({format_double(spec.freqs[i]), format_double(spec.contrasts[i])});
    table.write(out_path(cfg, "spectrum.csv"));

    if (cfg.plot)
        write_text(out_path(cfg, "spectrum.svg"),
                   svg_line_plot(spec.freqs, spec.contrasts, "frequency (MHz)", "contrast",
                                 "ODMR spectrum"));
}

void cmd_phase_sweep(const RunConfig& cfg) {
    prepare_output(cfg);
    const PhaseMap map = phase_sweep(cfg.sweep_config());

    CsvTable grid;
    grid.header = {"delta_deg", "frequency_mhz", "contrast"};
    for (size_t di = 0; di < map.deltas.size(); ++di)
        for (size_t fi = 0; fi < map.freqs.size(); ++fi)
            grid.add_row({format_double(map.deltas[di]), format_double(map.freqs[fi]),
                          format_double(map.contrast[di][fi])});
    grid.write(out_path(cfg, "phase_sweep.csv"));

    const IntegratedContrast ic = integrated_contrast(map, cfg.defect.d_gs);
    CsvTable summary;
    summary.header = {"delta_deg", "below_norm", "above_norm"};
    for (size_t k = 0; k < ic.deltas.size(); ++k)
        summary.add_row({format_double(ic.deltas[k]), format_double(ic.below[k]),
                         format_double(ic.above[k])});
    summary.write(out_path(cfg, "integrated_contrast.csv"));

    if (cfg.plot)
        write_text(out_path(cfg, "phase_sweep.svg"),
                   svg_heatmap(map.deltas, map.freqs, map.contrast, "applied phase (deg)",
                               "frequency (MHz)", "ODMR spectra vs microwave phase"));
}

void cmd_field_sweep(const RunConfig& cfg) {
    prepare_output(cfg);
    SweepConfig sc = cfg.sweep_config();
    sc.b_list = cfg.b_list;
    const SelectivityCurve curve = field_sweep(sc, fit_options(cfg));

    CsvTable table;
    table.header = {"b0_mt",          "sel_minus",        "sel_minus_sigma",
                    "sel_plus",       "sel_plus_sigma",   "delta_star_minus",
                    "delta_star_plus", "peak_sep_mhz",    "status"};
    for (size_t k = 0; k < curve.b_values.size(); ++k) {
        const SelectivityResult& r = curve.results[k];
        table.add_row({format_double(curve.b_values[k]), format_double(r.sel_minus),
                       format_double(r.sel_minus_sigma), format_double(r.sel_plus),
                       format_double(r.sel_plus_sigma), format_double(r.delta_star_minus),
                       format_double(r.delta_star_plus), format_double(curve.peak_sep_mhz[k]),
                       curve.status[k]});
    }
    table.write(out_path(cfg, "field_sweep.csv"));

    if (cfg.plot) {
        std::vector<double> sel;
        for (const auto& r : curve.results) sel.push_back(r.sel_minus);
        write_text(out_path(cfg, "field_sweep.svg"),
                   svg_line_plot(curve.b_values, sel, "B0 (mT)", "max selectivity",
                                 "Maximum selectivity vs field"));
    }
}

void cmd_fit(const RunConfig& cfg, const std::string& input_csv) {
    prepare_output(cfg);
    const ParsedCsv parsed = read_numeric_csv(input_csv);
    const int fi = parsed.column("frequency_mhz");
    const int ci = parsed.column("contrast");

    std::vector<std::pair<double, double>> samples;
    for (const auto& row : parsed.rows) samples.emplace_back(row[fi], row[ci]);
    std::sort(samples.begin(), samples.end());

    Spectrum spec;
    spec.b0 = cfg.field.b0;
    for (const auto& [f, c] : samples) {
        spec.freqs.push_back(f);
        spec.contrasts.push_back(c);
    }
    spec.validate();

    const FitParams guess = initial_guess(spec, cfg.defect, cfg.field);
    const DoubleLorentzianFit fit = fit_double_lorentzian(spec, guess, fit_options(cfg));
    const Selectivity sm = selectivity(fit, WhichPeak::minus);
    const Selectivity sp = selectivity(fit, WhichPeak::plus);

    CsvTable table;
    table.header = {"quantity", "value", "sigma"};
    auto row = [&table](const std::string& name, double v, double s) {
        table.add_row({name, format_double(v), format_double(s)});
    };
    row("center_minus_mhz", fit.peak_minus.center, std::sqrt(fit.covariance[0][0]));
    row("fwhm_minus_mhz", fit.peak_minus.fwhm, std::sqrt(fit.covariance[1][1]));
    row("area_minus", fit.peak_minus.area, std::sqrt(fit.covariance[2][2]));
    row("center_plus_mhz", fit.peak_plus.center, std::sqrt(fit.covariance[3][3]));
    row("fwhm_plus_mhz", fit.peak_plus.fwhm, std::sqrt(fit.covariance[4][4]));
    row("area_plus", fit.peak_plus.area, std::sqrt(fit.covariance[5][5]));
    row("bg_slope_per_mhz", fit.bg_slope, std::sqrt(fit.covariance[6][6]));
    row("bg_offset", fit.bg_offset, std::sqrt(fit.covariance[7][7]));
    row("selectivity_minus", sm.value, sm.sigma);
    row("selectivity_plus", sp.value, sp.sigma);
    row("peak_separation_mhz", fit.peak_plus.center - fit.peak_minus.center, 0.0);
    row("rms_residual", fit.rms_residual, 0.0);
    row("poorly_separated", fit.poorly_separated ? 1.0 : 0.0, 0.0);
    row("iterations", fit.iterations, 0.0);
    table.write(out_path(cfg, "fit_params.csv"));

    if (cfg.plot) {
        std::vector<double> model, comp_m, comp_p;
        const double base_ref = fit.f_ref;
        for (double f : spec.freqs) {
            const double bg = fit.bg_offset + fit.bg_slope * (f - base_ref);
            const double lm = fit.peak_minus.area *
                              lorentz(f, fit.peak_minus.center, fit.peak_minus.fwhm);
            const double lp =
                fit.peak_plus.area * lorentz(f, fit.peak_plus.center, fit.peak_plus.fwhm);
            model.push_back(bg - lm - lp);
            comp_m.push_back(bg - lm);
            comp_p.push_back(bg - lp);
        }
        write_text(out_path(cfg, "fit.svg"),
                   svg_fit_overlay(spec.freqs, spec.contrasts, model, comp_m, comp_p,
                                   "Double-Lorentzian fit"));
    }
}

void cmd_stick_spectrum(const RunConfig& cfg) {
    prepare_output(cfg);
    const auto lines = hyperfine_stick_spectrum(cfg.defect, cfg.field, cfg.hyperfine);

    CsvTable table;
    table.header = {"frequency_mhz", "weight", "branch"};
    for (const auto& l : lines)
        table.add_row({format_double(l.frequency), format_double(l.weight),
                       l.branch == Branch::minus ? "minus" : "plus"});
    table.write(out_path(cfg, "stick_spectrum.csv"));

    if (cfg.plot) {
        std::vector<double> x, h;
        std::vector<int> series;
        for (const auto& l : lines) {
            x.push_back(l.frequency);
            h.push_back(l.weight);
            series.push_back(l.branch == Branch::minus ? 0 : 1);
        }
        write_text(out_path(cfg, "stick_spectrum.svg"),
                   svg_stem_plot(x, h, series, "frequency (MHz)", "weight",
                                 "Hyperfine stick spectrum"));
    }
}

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    bool plot = false;
    int threads = 0;
    double delta = 0.0;
    double b0 = 0.0;
    std::vector<std::string> masks;

    CLI::App* sub = nullptr;

    void attach(CLI::App* cmd) {
        sub = cmd;
        cmd->add_option("--config", config_path, "configuration file");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_flag("--plot", plot, "emit SVG plots");
        cmd->add_option("--threads", threads, "worker threads for grid solves");
        cmd->add_option("--delta", delta, "applied phase difference (deg)");
        cmd->add_option("--b0", b0, "static field (mT)");
        cmd->add_option("--mask", masks, "frequency window LO:HI excluded from fits")
            ->expected(-1);
    }

    RunConfig build() const {
        RunConfig cfg;
        if (sub->count("--config")) apply_config_file(cfg, config_path);
        if (sub->count("--out")) cfg.out_dir = out_dir;
        if (plot) cfg.plot = true;
        if (sub->count("--threads")) cfg.threads = threads;
        if (sub->count("--delta")) cfg.drive.delta_deg = delta;
        if (sub->count("--b0")) cfg.field.b0 = b0;
        for (const auto& m : masks) {
            const auto colon = m.find(':');
            if (colon == std::string::npos)
                throw ConfigError("mask", "expected LO:HI, got '" + m + "'");
            try {
                cfg.mask.emplace_back(std::stod(m.substr(0, colon)),
                                      std::stod(m.substr(colon + 1)));
            } catch (const std::exception&) {
                throw ConfigError("mask", "cannot parse '" + m + "'");
            }
        }
        return cfg;
    }
};

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"CW-ODMR simulation and analysis for spin-1 defects under "
                 "phase-controlled dual microwave drive"};
    app.require_subcommand(1);

    CommonFlags spectrum_flags, phase_flags, field_flags, fit_flags, stick_flags;
    double noise = 0.0;

    CLI::App* spectrum = app.add_subcommand("spectrum", "single ODMR frequency sweep");
    spectrum_flags.attach(spectrum);
    spectrum->add_option("--noise", noise,
                         "Gaussian noise sigma added to the contrast "
                         "(seeded by ODMR_SIM_SEED)");

    CLI::App* phase = app.add_subcommand(
        "phase-sweep", "spectra over the microwave phase grid plus integrated contrast");
    phase_flags.attach(phase);

    CLI::App* field = app.add_subcommand(
        "field-sweep", "maximum selectivity and peak separation per field value");
    field_flags.attach(field);

    std::string fit_input;
    CLI::App* fit = app.add_subcommand("fit", "double-Lorentzian fit of a spectrum CSV");
    fit_flags.attach(fit);
    fit->add_option("input", fit_input, "CSV with frequency_mhz and contrast columns")
        ->required();

    CLI::App* stick = app.add_subcommand("stick-spectrum", "hyperfine stick spectrum");
    stick_flags.attach(stick);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (spectrum->parsed()) {
            RunConfig cfg = spectrum_flags.build();
            if (spectrum->count("--noise")) cfg.noise_sigma = noise;
            cmd_spectrum(cfg);
        } else if (phase->parsed()) {
            cmd_phase_sweep(phase_flags.build());
        } else if (field->parsed()) {
            cmd_field_sweep(field_flags.build());
        } else if (fit->parsed()) {
            cmd_fit(fit_flags.build(), fit_input);
        } else if (stick->parsed()) {
            cmd_stick_spectrum(stick_flags.build());
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CsvError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

}  // namespace odmrsim
