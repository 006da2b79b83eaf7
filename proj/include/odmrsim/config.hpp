#pragma once

#include <string>
#include <utility>
#include <vector>

#include "odmrsim/odmr.hpp"
#include "odmrsim/params.hpp"

namespace odmrsim {

/// Everything a CLI run needs: model parameters, grids and output options.
/// Values come from defaults, then an optional config file, then
/// command-line flags (flag wins).
struct RunConfig {
    DefectParams defect;
    StaticField field;
    DriveConfig drive;
    HyperfineParams hyperfine;

    // sweep grids
    double f_start = 3250.0;
    double f_stop = 3750.0;
    int n_freq = 201;
    double delta_step_deg = 10.0;
    std::vector<double> delta_list;  // explicit list wins over the step
    std::vector<double> b_list = {0.5, 1.0, 2.3, 5.0, 8.0};

    // output / execution
    std::string out_dir = ".";
    bool plot = false;
    int threads = 1;
    std::vector<std::pair<double, double>> mask;
    double noise_sigma = 0.0;

    std::vector<double> resolved_delta_list() const;
    SweepConfig sweep_config() const;  // b_list = {field.b0}
    void validate() const;
};

/// Parses the flat key-value config format ([section] headers, key = value,
/// '#' comments) onto `cfg`. Unknown keys and malformed values raise
/// ConfigError naming the offending key.
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Canonical echo of the configuration, itself loadable as a config file.
std::string config_to_string(const RunConfig& cfg);

}  // namespace odmrsim
