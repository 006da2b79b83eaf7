#include "odmrsim/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "odmrsim/spin.hpp"

namespace odmrsim {

ComplexMatrix build_ground_hamiltonian(const DefectParams& params, const StaticField& field) {
    const SpinOps ops = spin1_operators();
    ComplexMatrix h = params.d_gs * (ops.sz * ops.sz - (2.0 / 3.0) * ComplexMatrix::identity(3));
    h += params.e_gs * (ops.sx * ops.sx - ops.sy * ops.sy);
    h += (params.gamma_e() * field.b0) * ops.sz;
    return h;
}

ResonancePair resonance_frequencies(const DefectParams& params, const StaticField& field) {
    const double zeeman = params.gamma_e() * field.b0;
    const double r = std::sqrt(params.e_gs * params.e_gs + zeeman * zeeman);
    return {params.d_gs - r, params.d_gs + r};
}

CircularComponents circular_components(const DriveConfig& drive) {
    const double delta_eff = deg_to_rad(drive.effective_phase_deg());
    const Complex rot = std::polar(1.0, -delta_eff);  // e^{-i delta_eff}
    const Complex i_w2(0.0, drive.omega2);
    const Complex c_plus = 0.5 * (drive.omega1 - i_w2 * rot);
    const Complex c_minus = 0.5 * (drive.omega1 + i_w2 * rot);
    return {std::abs(c_plus), std::abs(c_minus), c_plus, c_minus};
}

double ground_mixing_angle(const DefectParams& params, const StaticField& field) {
    return std::atan2(params.e_gs, params.gamma_e() * field.b0);
}

ComplexMatrix build_rwa_hamiltonian(const DefectParams& params, const StaticField& field,
                                    const DriveConfig& drive) {
    const ResonancePair res = resonance_frequencies(params, field);
    const CircularComponents cc = circular_components(drive);
    const double half_theta = 0.5 * ground_mixing_angle(params, field);
    const double ch = std::cos(half_theta);
    const double sh = std::sin(half_theta);

    // Matrix elements of the co-/counter-rotating drive against the dressed
    // +-1 eigenstates; i/sqrt(2) carries the spin-1 <+-1|Sx,y|0> factor and
    // the phase of the retained rotating term.
    const Complex i_rt2(0.0, 1.0 / std::sqrt(2.0));
    const Complex coupling_plus = i_rt2 * (ch * cc.c_plus + sh * cc.c_minus);
    const Complex coupling_minus = i_rt2 * (-sh * cc.c_plus + ch * cc.c_minus);

    ComplexMatrix h(level::count);
    h.at(level::g_plus, level::g_plus) = res.f_plus - drive.freq;
    h.at(level::g_minus, level::g_minus) = res.f_minus - drive.freq;
    h.at(level::g_plus, level::g0) = coupling_plus;
    h.at(level::g0, level::g_plus) = std::conj(coupling_plus);
    h.at(level::g_minus, level::g0) = coupling_minus;
    h.at(level::g0, level::g_minus) = std::conj(coupling_minus);
    return h;
}

std::vector<StickLine> hyperfine_stick_spectrum(const DefectParams& params,
                                                const StaticField& field,
                                                const HyperfineParams& hf) {
    hf.validate();
    const SpinOps ops = spin1_operators();
    const ComplexMatrix h_elec = build_ground_hamiltonian(params, field);
    const ComplexMatrix i3 = ComplexMatrix::identity(3);
    const ComplexMatrix iz = ops.sz;  // I=1 projection operator, same matrix

    // Electron x nuc1 x nuc2 x nuc3, electron index slowest.
    ComplexMatrix h81 = kron(kron(kron(h_elec, i3), i3), i3);
    h81 += hf.a_zz * kron(kron(kron(ops.sz, iz), i3), i3);
    h81 += hf.a_zz * kron(kron(kron(ops.sz, i3), iz), i3);
    h81 += hf.a_zz * kron(kron(kron(ops.sz, i3), i3), iz);

    // The secular coupling conserves every nuclear projection, so the 81-dim
    // problem block-diagonalizes into 27 electronic 3x3 blocks; diagonalize
    // each block and read the two transitions out of the m=0 level.
    const int n_config = 27;
    std::vector<std::pair<double, double>> lines_minus, lines_plus;  // (freq, weight)
    for (int cfg = 0; cfg < n_config; ++cfg) {
        ComplexMatrix block(3);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) block.at(r, c) = h81.at(r * n_config + cfg, c * n_config + cfg);

        const EigResult eig = eig_hermitian(block);
        // |0> is an exact eigenstate of every block; locate it by the
        // eigenvector weight on the electronic m=0 slot (index 1).
        int k0 = 0;
        double best = -1.0;
        for (int k = 0; k < 3; ++k) {
            const double w = std::abs(eig.vectors.at(1, k));
            if (w > best) {
                best = w;
                k0 = k;
            }
        }
        const double e0 = eig.values[k0];
        std::vector<double> others;
        for (int k = 0; k < 3; ++k)
            if (k != k0) others.push_back(eig.values[k]);
        lines_minus.emplace_back(std::min(others[0], others[1]) - e0, 1.0);
        lines_plus.emplace_back(std::max(others[0], others[1]) - e0, 1.0);
    }

    auto merge = [](std::vector<std::pair<double, double>>& lines, Branch branch,
                    std::vector<StickLine>& out) {
        std::sort(lines.begin(), lines.end());
        for (const auto& [freq, weight] : lines) {
            if (!out.empty() && out.back().branch == branch &&
                std::abs(out.back().frequency - freq) < 1e-6) {
                out.back().weight += weight;
            } else {
                out.push_back({branch, freq, weight});
            }
        }
    };

    std::vector<StickLine> result;
    merge(lines_minus, Branch::minus, result);
    merge(lines_plus, Branch::plus, result);
    return result;
}

}  // namespace odmrsim
