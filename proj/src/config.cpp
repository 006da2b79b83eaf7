#include "odmrsim/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "odmrsim/csv.hpp"

namespace odmrsim {

std::vector<double> RunConfig::resolved_delta_list() const {
    if (!delta_list.empty()) return delta_list;
    return SweepConfig::default_delta_grid(delta_step_deg);
}

SweepConfig RunConfig::sweep_config() const {
    SweepConfig cfg;
    cfg.f_start = f_start;
    cfg.f_stop = f_stop;
    cfg.n_freq = n_freq;
    cfg.delta_list = resolved_delta_list();
    cfg.b_list = {field.b0};
    cfg.drive = drive;
    cfg.params = defect;
    cfg.n_threads = threads;
    return cfg;
}

void RunConfig::validate() const {
    defect.validate();
    field.validate();
    drive.validate();
    hyperfine.validate();
    if (!(delta_step_deg > 0.0 && delta_step_deg <= 360.0))
        throw ConfigError("delta_step_deg", "must lie in (0, 360]");
    for (double b : b_list) StaticField{b}.validate();
    if (b_list.empty()) throw ConfigError("b_list_mt", "must not be empty");
    if (threads < 1) throw ConfigError("threads", "must be >= 1");
    if (!(noise_sigma >= 0.0)) throw ConfigError("noise_sigma", "must be >= 0");
    for (const auto& [lo, hi] : mask)
        if (!(lo <= hi)) throw ConfigError("mask", "window must satisfy lo <= hi");
    sweep_config().validate();
}

namespace {

double parse_number(const std::string& key, const std::string& value) {
    const char* begin = value.data();
    const char* end = begin + value.size();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        throw ConfigError(key, "cannot parse number '" + value + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_number(key, value);
    const int i = static_cast<int>(v);
    if (i != v) throw ConfigError(key, "expected an integer, got '" + value + "'");
    return i;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError(key, "expected true/false, got '" + value + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep)) parts.push_back(part);
    return parts;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const auto& part : split(value, ',')) {
        const std::string t = trim(part);
        if (!t.empty()) out.push_back(parse_number(key, t));
    }
    if (out.empty()) throw ConfigError(key, "empty list");
    return out;
}

void apply_key(RunConfig& cfg, const std::string& section, const std::string& key,
               const std::string& value) {
    const std::string full = section.empty() ? key : section + "." + key;

    if (section == "defect") {
        if (key == "d_gs_mhz") cfg.defect.d_gs = parse_number(full, value);
        else if (key == "e_gs_mhz") cfg.defect.e_gs = parse_number(full, value);
        else if (key == "g_factor") cfg.defect.g_factor = parse_number(full, value);
        else if (key == "gamma_phi_per_us") cfg.defect.gamma_phi = parse_number(full, value);
        else throw ConfigError(full, "unknown key");
    } else if (section == "rates") {
        OpticalRates& r = cfg.defect.rates;
        if (key == "k_p") r.k_p = parse_number(full, value);
        else if (key == "k_d") r.k_d = parse_number(full, value);
        else if (key == "k_45") r.k_45 = parse_number(full, value);
        else if (key == "k_35") r.k_35 = parse_number(full, value);
        else if (key == "k_52") r.k_52 = parse_number(full, value);
        else if (key == "k_51") r.k_51 = parse_number(full, value);
        else if (key == "branching") {
            if (value == "split") r.branching = OpticalRates::MetastableBranching::split;
            else if (value == "per_branch")
                r.branching = OpticalRates::MetastableBranching::per_branch;
            else throw ConfigError(full, "expected split or per_branch");
        } else throw ConfigError(full, "unknown key");
    } else if (section == "field") {
        if (key == "b0_mt") cfg.field.b0 = parse_number(full, value);
        else throw ConfigError(full, "unknown key");
    } else if (section == "drive") {
        if (key == "omega1_mhz") cfg.drive.omega1 = parse_number(full, value);
        else if (key == "omega2_mhz") cfg.drive.omega2 = parse_number(full, value);
        else if (key == "delta_deg") cfg.drive.delta_deg = parse_number(full, value);
        else if (key == "offset_deg") cfg.drive.offset_deg = parse_number(full, value);
        else if (key == "freq_mhz") cfg.drive.freq = parse_number(full, value);
        else throw ConfigError(full, "unknown key");
    } else if (section == "sweep") {
        if (key == "f_start_mhz") cfg.f_start = parse_number(full, value);
        else if (key == "f_stop_mhz") cfg.f_stop = parse_number(full, value);
        else if (key == "n_freq") cfg.n_freq = parse_int(full, value);
        else if (key == "delta_step_deg") cfg.delta_step_deg = parse_number(full, value);
        else if (key == "delta_list_deg") cfg.delta_list = parse_list(full, value);
        else if (key == "b_list_mt") cfg.b_list = parse_list(full, value);
        else throw ConfigError(full, "unknown key");
    } else if (section == "hyperfine") {
        if (key == "a_zz_mhz") cfg.hyperfine.a_zz = parse_number(full, value);
        else if (key == "n_nuclei") cfg.hyperfine.n_nuclei = parse_int(full, value);
        else throw ConfigError(full, "unknown key");
    } else if (section == "output") {
        if (key == "threads") cfg.threads = parse_int(full, value);
        else if (key == "plot") cfg.plot = parse_bool(full, value);
        else if (key == "noise_sigma") cfg.noise_sigma = parse_number(full, value);
        else if (key == "mask_mhz") {
            cfg.mask.clear();
            for (const auto& w : split(value, ',')) {
                const auto bounds = split(trim(w), ':');
                if (bounds.size() != 2) throw ConfigError(full, "expected lo:hi");
                cfg.mask.emplace_back(parse_number(full, trim(bounds[0])),
                                      parse_number(full, trim(bounds[1])));
            }
        } else throw ConfigError(full, "unknown key");
    } else {
        throw ConfigError(full, "unknown section");
    }
}

}  // namespace

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError(path, "cannot open config file");

    std::string line, section;
    int line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no), "expected key = value");
        apply_key(cfg, section, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
}

std::string config_to_string(const RunConfig& cfg) {
    std::ostringstream out;
    auto num = [](double v) { return format_double(v); };

    out << "[defect]\n";
    out << "d_gs_mhz = " << num(cfg.defect.d_gs) << "\n";
    out << "e_gs_mhz = " << num(cfg.defect.e_gs) << "\n";
    out << "g_factor = " << num(cfg.defect.g_factor) << "\n";
    out << "gamma_phi_per_us = " << num(cfg.defect.gamma_phi) << "\n\n";

    out << "[rates]\n";
    out << "k_p = " << num(cfg.defect.rates.k_p) << "\n";
    out << "k_d = " << num(cfg.defect.rates.k_d) << "\n";
    out << "k_45 = " << num(cfg.defect.rates.k_45) << "\n";
    out << "k_35 = " << num(cfg.defect.rates.k_35) << "\n";
    out << "k_52 = " << num(cfg.defect.rates.k_52) << "\n";
    out << "k_51 = " << num(cfg.defect.rates.k_51) << "\n";
    out << "branching = "
        << (cfg.defect.rates.branching == OpticalRates::MetastableBranching::split
                ? "split"
                : "per_branch")
        << "\n\n";

    out << "[field]\n";
    out << "b0_mt = " << num(cfg.field.b0) << "\n\n";

    out << "[drive]\n";
    out << "omega1_mhz = " << num(cfg.drive.omega1) << "\n";
    out << "omega2_mhz = " << num(cfg.drive.omega2) << "\n";
    out << "delta_deg = " << num(cfg.drive.delta_deg) << "\n";
    out << "offset_deg = " << num(cfg.drive.offset_deg) << "\n";
    out << "freq_mhz = " << num(cfg.drive.freq) << "\n\n";

    out << "[sweep]\n";
    out << "f_start_mhz = " << num(cfg.f_start) << "\n";
    out << "f_stop_mhz = " << num(cfg.f_stop) << "\n";
    out << "n_freq = " << cfg.n_freq << "\n";
    if (cfg.delta_list.empty()) {
        out << "delta_step_deg = " << num(cfg.delta_step_deg) << "\n";
    } else {
        out << "delta_list_deg = ";
        for (size_t i = 0; i < cfg.delta_list.size(); ++i)
            out << (i ? "," : "") << num(cfg.delta_list[i]);
        out << "\n";
    }
    out << "b_list_mt = ";
    for (size_t i = 0; i < cfg.b_list.size(); ++i) out << (i ? "," : "") << num(cfg.b_list[i]);
    out << "\n\n";

    out << "[hyperfine]\n";
    out << "a_zz_mhz = " << num(cfg.hyperfine.a_zz) << "\n";
    out << "n_nuclei = " << cfg.hyperfine.n_nuclei << "\n\n";

    out << "[output]\n";
    out << "threads = " << cfg.threads << "\n";
    out << "plot = " << (cfg.plot ? "true" : "false") << "\n";
    out << "noise_sigma = " << num(cfg.noise_sigma) << "\n";
    if (!cfg.mask.empty()) {
        out << "mask_mhz = ";
        for (size_t i = 0; i < cfg.mask.size(); ++i)
            out << (i ? "," : "") << num(cfg.mask[i].first) << ":" << num(cfg.mask[i].second);
        out << "\n";
    }
    return out.str();
}

}  // namespace odmrsim
