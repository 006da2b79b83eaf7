#include "odmrsim/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "odmrsim/hamiltonian.hpp"
#include "odmrsim/matrix.hpp"

namespace odmrsim {

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        const double lo = *std::max_element(v.begin(), v.begin() + mid);
        m = 0.5 * (m + lo);
    }
    return m;
}

// Unit-area Lorentzian with FWHM w centered at c.
inline double lorentz(double f, double c, double w) {
    const double d = f - c;
    return (2.0 / M_PI) * w / (4.0 * d * d + w * w);
}

inline double model_value(const FitParams& p, double f, double f_ref) {
    return p[7] + p[6] * (f - f_ref) - p[2] * lorentz(f, p[0], p[1]) -
           p[5] * lorentz(f, p[3], p[4]);
}

void model_jacobian_row(const FitParams& p, double f, double f_ref, double* row) {
    for (int peak = 0; peak < 2; ++peak) {
        const double c = p[3 * peak], w = p[3 * peak + 1], a = p[3 * peak + 2];
        const double d = f - c;
        const double q = 4.0 * d * d + w * w;
        const double lor = (2.0 / M_PI) * w / q;
        row[3 * peak] = -a * 16.0 * w * d / (M_PI * q * q);
        row[3 * peak + 1] = -a * 2.0 * (4.0 * d * d - w * w) / (M_PI * q * q);
        row[3 * peak + 2] = -lor;
    }
    row[6] = f - f_ref;
    row[7] = 1.0;
}

std::array<double, 8> solve_damped(const std::array<std::array<double, 8>, 8>& n,
                                   const std::array<double, 8>& g, double lambda) {
    double max_diag = 0.0;
    for (int k = 0; k < 8; ++k) max_diag = std::max(max_diag, n[k][k]);
    ComplexMatrix m(8);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) m.at(r, c) = n[r][c];
    for (int k = 0; k < 8; ++k)
        m.at(k, k) += lambda * std::max(n[k][k], 1e-14 * std::max(max_diag, 1e-300));
    const LuDecomposition lu(std::move(m));
    std::vector<Complex> rhs(8);
    for (int k = 0; k < 8; ++k) rhs[k] = -g[k];
    const std::vector<Complex> sol = lu.solve(rhs);
    std::array<double, 8> out{};
    for (int k = 0; k < 8; ++k) out[k] = sol[k].real();
    return out;
}

// Moore-Penrose inverse of the symmetric normal matrix via its spectrum;
// keeps the covariance PSD even when a parameter is unconstrained.
std::array<std::array<double, 8>, 8> scaled_pseudo_inverse(
    const std::array<std::array<double, 8>, 8>& n, double sigma2) {
    ComplexMatrix m(8);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) m.at(r, c) = 0.5 * (n[r][c] + n[c][r]);
    const EigResult eig = eig_hermitian(m, 1e-6);
    const double cut = 1e-12 * std::max(std::abs(eig.values.front()), eig.values.back());
    std::array<std::array<double, 8>, 8> cov{};
    for (int k = 0; k < 8; ++k) {
        if (eig.values[k] <= cut) continue;
        const double inv = sigma2 / eig.values[k];
        for (int r = 0; r < 8; ++r)
            for (int c = 0; c < 8; ++c)
                cov[r][c] += inv * (eig.vectors.at(r, k) * std::conj(eig.vectors.at(c, k))).real();
    }
    return cov;
}

}  // namespace

Spectrum subtract_linear_background(const Spectrum& spec, double wing_fraction) {
    spec.validate();
    if (!(wing_fraction > 0.0 && wing_fraction <= 0.4))
        throw std::invalid_argument("wing_fraction must lie in (0, 0.4]");
    const int n = static_cast<int>(spec.freqs.size());
    if (n < 4) throw std::invalid_argument("spectrum too short for background subtraction");

    const int k = std::max(2, static_cast<int>(std::lround(n * wing_fraction)));
    std::vector<int> wing;
    for (int i = 0; i < k; ++i) wing.push_back(i);
    for (int i = n - k; i < n; ++i) wing.push_back(i);

    // Least-squares line over the wing samples, centered for conditioning.
    double f_mid = 0.0;
    for (int i : wing) f_mid += spec.freqs[i];
    f_mid /= wing.size();
    double sxx = 0.0, sxy = 0.0, sy = 0.0;
    for (int i : wing) {
        const double x = spec.freqs[i] - f_mid;
        sxx += x * x;
        sxy += x * spec.contrasts[i];
        sy += spec.contrasts[i];
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    const double offset = sy / wing.size();

    std::vector<double> resid;
    double max_res = 0.0, max_y = 0.0;
    for (int i : wing) {
        const double r = spec.contrasts[i] - (offset + slope * (spec.freqs[i] - f_mid));
        resid.push_back(r);
        max_res = std::max(max_res, std::abs(r));
    }
    for (double y : spec.contrasts) max_y = std::max(max_y, std::abs(y));

    // Robust scale: a dip inside the wings inflates max_res far beyond the
    // MAD of the clean samples.
    const double med = median(resid);
    std::vector<double> dev;
    for (double r : resid) dev.push_back(std::abs(r - med));
    const double sigma = 1.4826 * median(dev);
    if (max_res > 5.0 * std::max(sigma, 1e-12 + 1e-9 * max_y))
        throw WingsContainPeak("wing samples deviate from the fitted line by > 5 sigma");

    Spectrum out = spec;
    for (int i = 0; i < n; ++i)
        out.contrasts[i] -= offset + slope * (spec.freqs[i] - f_mid);
    return out;
}

FitParams initial_guess(const Spectrum& spec, const DefectParams& params,
                        const StaticField& field) {
    spec.validate();
    const ResonancePair res = resonance_frequencies(params, field);
    const int n = static_cast<int>(spec.freqs.size());

    const double span = n > 1 ? spec.freqs.back() - spec.freqs.front() : 1.0;
    const double grid = n > 1 ? span / (n - 1) : 1.0;
    const double w0 = std::max(2.0 * params.gamma_phi / (2.0 * M_PI), 2.0 * grid);

    const double baseline = median(spec.contrasts);
    auto dip_depth = [&](double center) {
        const double window = std::max(w0, 10.0);
        double lowest = baseline;
        for (int i = 0; i < n; ++i)
            if (std::abs(spec.freqs[i] - center) <= window)
                lowest = std::min(lowest, spec.contrasts[i]);
        return std::max(0.0, baseline - lowest);
    };

    double area_minus = dip_depth(res.f_minus) * M_PI * w0 / 2.0;
    double area_plus = dip_depth(res.f_plus) * M_PI * w0 / 2.0;
    // Keep a barely-visible dip off the zero-area boundary.
    if (area_minus < 0.1 * area_plus) area_minus = 0.1 * area_plus;
    if (area_plus < 0.1 * area_minus) area_plus = 0.1 * area_minus;

    double slope = 0.0, offset = baseline;
    if (n > 1) {
        slope = (spec.contrasts.back() - spec.contrasts.front()) / span;
        offset = 0.5 * (spec.contrasts.front() + spec.contrasts.back());
    }
    return {res.f_minus, w0, area_minus, res.f_plus, w0, area_plus, slope, offset};
}

DoubleLorentzianFit fit_double_lorentzian(const Spectrum& spec, const FitParams& guess,
                                          const FitOptions& opts) {
    spec.validate();

    std::vector<int> idx;
    for (size_t i = 0; i < spec.freqs.size(); ++i) {
        bool masked = false;
        for (const auto& [lo, hi] : opts.mask)
            if (spec.freqs[i] >= lo && spec.freqs[i] <= hi) masked = true;
        if (!masked) idx.push_back(static_cast<int>(i));
    }
    const int m = static_cast<int>(idx.size());
    if (m < 20) throw std::invalid_argument("fit needs at least 20 unmasked samples");

    double y_min = std::numeric_limits<double>::infinity(), y_max = -y_min;
    for (int i : idx) {
        y_min = std::min(y_min, spec.contrasts[i]);
        y_max = std::max(y_max, spec.contrasts[i]);
    }
    if (y_max - y_min < 1e-12) throw FlatSpectrum("total variation below 1e-12");

    double f_ref = 0.0;
    for (double f : spec.freqs) f_ref += f;
    f_ref /= spec.freqs.size();

    auto cost_of = [&](const FitParams& p) {
        double c = 0.0;
        for (int i : idx) {
            const double r = model_value(p, spec.freqs[i], f_ref) - spec.contrasts[i];
            c += r * r;
        }
        return c;
    };
    auto valid = [](const FitParams& p) {
        for (double v : p)
            if (!std::isfinite(v)) return false;
        return p[1] > 0.0 && p[4] > 0.0 && p[2] >= 0.0 && p[5] >= 0.0;
    };

    FitParams p = guess;
    if (!valid(p)) throw std::invalid_argument("initial guess outside the feasible region");
    double cost = cost_of(p);
    double lambda = opts.lambda0;
    int iter = 0;
    bool converged = false;

    std::array<std::array<double, 8>, 8> normal{};
    std::array<double, 8> grad{};

    while (iter < opts.max_iterations) {
        // Normal equations at the current point.
        for (auto& row : normal) row.fill(0.0);
        grad.fill(0.0);
        double jrow[8];
        for (int i : idx) {
            const double f = spec.freqs[i];
            const double r = model_value(p, f, f_ref) - spec.contrasts[i];
            model_jacobian_row(p, f, f_ref, jrow);
            for (int a = 0; a < 8; ++a) {
                grad[a] += jrow[a] * r;
                for (int b = a; b < 8; ++b) normal[a][b] += jrow[a] * jrow[b];
            }
        }
        for (int a = 0; a < 8; ++a)
            for (int b = 0; b < a; ++b) normal[a][b] = normal[b][a];

        double gnorm = 0.0;
        for (double g : grad) gnorm += g * g;
        if (std::sqrt(gnorm) < opts.gradient_tol) {
            converged = true;
            break;
        }

        bool accepted = false;
        while (iter < opts.max_iterations && !accepted) {
            ++iter;
            const std::array<double, 8> step = solve_damped(normal, grad, lambda);
            FitParams trial;
            for (int k = 0; k < 8; ++k) trial[k] = p[k] + step[k];
            const double trial_cost = valid(trial) ? cost_of(trial)
                                                   : std::numeric_limits<double>::infinity();
            if (trial_cost < cost) {
                accepted = true;
                lambda = std::max(lambda * 0.1, 1e-13);
                const double drop = cost - trial_cost;
                p = trial;
                const bool cost_settled = drop <= opts.cost_rel_tol * std::max(cost, 1e-300);
                cost = trial_cost;
                if (cost_settled) converged = true;
            } else {
                lambda *= 10.0;
                if (lambda > 1e15) break;
            }
        }
        if (converged) break;
        if (!accepted) {
            // Damping exhausted without progress; accept only if the gradient
            // says we are at a minimum.
            if (std::sqrt(gnorm) < 1e3 * opts.gradient_tol) {
                converged = true;
                break;
            }
            throw FitFailed("Levenberg-Marquardt stalled after " + std::to_string(iter) +
                                " iterations",
                            iter);
        }
    }
    if (!converged)
        throw FitFailed("no convergence after " + std::to_string(opts.max_iterations) +
                            " iterations",
                        iter);

    // Final normal matrix (undamped) for the covariance estimate.
    for (auto& row : normal) row.fill(0.0);
    double jrow[8];
    for (int i : idx) {
        model_jacobian_row(p, spec.freqs[i], f_ref, jrow);
        for (int a = 0; a < 8; ++a)
            for (int b = a; b < 8; ++b) normal[a][b] += jrow[a] * jrow[b];
    }
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < a; ++b) normal[a][b] = normal[b][a];

    const double dof = std::max(1, m - 8);
    const double sigma2 = cost / dof;
    auto covariance = scaled_pseudo_inverse(normal, sigma2);

    // Relabel so peak_minus is the lower center; keep the covariance aligned.
    if (p[0] > p[3]) {
        std::swap(p[0], p[3]);
        std::swap(p[1], p[4]);
        std::swap(p[2], p[5]);
        const int perm[8] = {3, 4, 5, 0, 1, 2, 6, 7};
        std::array<std::array<double, 8>, 8> reordered{};
        for (int r = 0; r < 8; ++r)
            for (int c = 0; c < 8; ++c) reordered[r][c] = covariance[perm[r]][perm[c]];
        covariance = reordered;
    }

    DoubleLorentzianFit fit;
    fit.peak_minus = {p[0], p[1], p[2]};
    fit.peak_plus = {p[3], p[4], p[5]};
    fit.bg_slope = p[6];
    fit.bg_offset = p[7];
    fit.f_ref = f_ref;
    fit.rms_residual = std::sqrt(cost / m);
    fit.covariance = covariance;
    fit.iterations = iter;
    fit.poorly_separated = (p[3] - p[0]) < 0.25 * (p[1] + p[4]);
    return fit;
}

Selectivity selectivity(const DoubleLorentzianFit& fit, WhichPeak which) {
    const double a_minus = fit.peak_minus.area;
    const double a_plus = fit.peak_plus.area;
    const double total = a_minus + a_plus;
    if (total < 1e-12) throw ZeroTotalArea("total fitted area below 1e-12");

    // The plus share is the exact complement so the two values sum to 1.
    const double v_minus = a_minus / total;
    const double value = which == WhichPeak::minus ? v_minus : 1.0 - v_minus;

    // d(v_minus)/d(a_minus, a_plus); indices 2 and 5 in the parameter
    // layout. The complement has the same variance.
    const double g_minus = a_plus / (total * total);
    const double g_plus = -a_minus / (total * total);
    const double var = g_minus * g_minus * fit.covariance[2][2] +
                       2.0 * g_minus * g_plus * fit.covariance[2][5] +
                       g_plus * g_plus * fit.covariance[5][5];
    return {value, std::sqrt(std::max(var, 0.0))};
}

}  // namespace odmrsim
