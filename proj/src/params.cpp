#include "odmrsim/params.hpp"

namespace odmrsim {

void OpticalRates::validate() const {
    auto check = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ConfigError(name, "rate must be >= 0");
    };
    check(k_p, "k_p");
    check(k_d, "k_d");
    check(k_45, "k_45");
    check(k_35, "k_35");
    check(k_52, "k_52");
    check(k_51, "k_51");
}

void DefectParams::validate() const {
    if (!(d_gs > 0.0)) throw ConfigError("d_gs", "must be > 0");
    if (!(e_gs >= 0.0)) throw ConfigError("e_gs", "must be >= 0");
    if (!(g_factor > 1.5 && g_factor < 2.5))
        throw ConfigError("g_factor", "must lie in (1.5, 2.5)");
    if (!(gamma_phi >= 0.0)) throw ConfigError("gamma_phi", "must be >= 0");
    rates.validate();
}

void StaticField::validate() const {
    if (!(std::abs(b0) <= 100.0) || !std::isfinite(b0))
        throw ConfigError("b0", "|b0| must be <= 100 mT");
}

void DriveConfig::validate() const {
    if (!(omega1 >= 0.0)) throw ConfigError("omega1", "must be >= 0");
    if (!(omega2 >= 0.0)) throw ConfigError("omega2", "must be >= 0");
    if (!(freq > 0.0)) throw ConfigError("freq", "must be > 0");
    if (!std::isfinite(delta_deg)) throw ConfigError("delta_deg", "must be finite");
    if (!std::isfinite(offset_deg)) throw ConfigError("offset_deg", "must be finite");
}

void HyperfineParams::validate() const {
    if (n_nuclei != 3) throw ConfigError("n_nuclei", "must be 3 for this defect geometry");
    if (!(std::abs(a_zz) <= 200.0)) throw ConfigError("a_zz", "|a_zz| must be <= 200 MHz");
}

}  // namespace odmrsim
