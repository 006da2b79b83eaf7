#pragma once

#include <string>
#include <vector>

#include "odmrsim/errors.hpp"
#include "odmrsim/params.hpp"

namespace odmrsim {

/// One CW-ODMR trace: (frequency, contrast) samples at fixed (delta, b0).
/// Contrast is (PL_on - PL_off)/PL_off, negative at the dips.
struct Spectrum {
    std::vector<double> freqs;      // MHz, strictly ascending
    std::vector<double> contrasts;  // unitless
    double delta_deg = 0.0;
    double b0 = 0.0;

    void validate() const {
        if (freqs.size() != contrasts.size())
            throw DimensionMismatch("spectrum frequency/contrast length mismatch");
        for (size_t i = 1; i < freqs.size(); ++i)
            if (!(freqs[i] > freqs[i - 1]))
                throw std::invalid_argument("spectrum frequencies must be strictly ascending");
    }
};

/// Contrast over a (delta, frequency) grid; contrast[i][j] belongs to
/// (deltas[i], freqs[j]).
struct PhaseMap {
    std::vector<double> deltas;  // degrees
    std::vector<double> freqs;   // MHz
    std::vector<std::vector<double>> contrast;
    double b0 = 0.0;
};

}  // namespace odmrsim
