#pragma once

#include <string>

#include "odmrsim/config.hpp"

namespace odmrsim {

// Command implementations behind the CLI front end. Each writes its output
// files under cfg.out_dir and throws on failure; run_cli maps exceptions to
// exit codes (0 success, 2 config/input error, 3 numerical failure).

void cmd_spectrum(const RunConfig& cfg);
void cmd_phase_sweep(const RunConfig& cfg);
void cmd_field_sweep(const RunConfig& cfg);
void cmd_fit(const RunConfig& cfg, const std::string& input_csv);
void cmd_stick_spectrum(const RunConfig& cfg);

int run_cli(int argc, char** argv);

}  // namespace odmrsim
