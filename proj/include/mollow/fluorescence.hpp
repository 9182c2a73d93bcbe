#pragma once
#include "mollow/dynamics.hpp"
#include "mollow/parallel.hpp"

#include <array>
#include <cstdio>
#include <vector>

namespace mollow {

/// Inelastic fluorescence spectrum on rotating-frame offsets nu (lab frequency nu + wd).
/// The elastic line 2*pi*elastic_weight*delta(nu) is reported separately.
template<class T = double>
struct Spectrum {
    std::vector<T> nu;
    std::vector<T> values;
    T elastic_weight = 0;
};

/// 2001 points over +-max(4w, 20*gamma).
template<class T>
std::vector<T> default_nu_grid(T omega, T gamma, int points = 2001) {
    auto const half = std::max(4 * omega, 20 * gamma);
    std::vector<T> grid(points);
    for (int i = 0; i < points; ++i)
        grid[i] = -half + 2 * half * T(i) / T(points - 1);
    return grid;
}

/// g(nu) = -2 Re Tr{s- (i nu + R)^-1 [s+ rho - rho Tr(s+ rho)]}, solved on the
/// trace-free complement via the rank-one regularization R + vec(rho) tr^T.
template<class T>
Spectrum<T> spectrum_numeric(Generator<T> const& G, std::vector<T> const& nu_grid, unsigned threads = 1) {
    static constexpr double max_condition = 1e12;
    if (G.frame != Frame::LabRotatingAtDrive)
        throw Error{ErrorKind::Validation, "spectrum_numeric: generator must be in the frame rotating at the drive"};
    Vec4<T> const rho = steady_vec(G.R);
    Eigen::Matrix<Complex<T>, 1, 4> tr;
    tr << 1, 0, 0, 1;
    // vec(s+ rho): s+ = |e><g| moves row 0 into row 1
    Vec4<T> v;
    v << 0, 0, rho(0), rho(1);
    auto const coherent = v(0) + v(3);
    v -= rho * coherent;

    Super<T> const base = G.R + rho * tr;
    auto const scale = std::max(G.R.cwiseAbs().maxCoeff(), T(1));

    Spectrum<T> out;
    out.nu = nu_grid;
    out.values.resize(nu_grid.size());
    out.elastic_weight = std::norm(coherent);
    parallel_for(nu_grid.size(), threads, [&](std::size_t i) {
        Super<T> A = base;
        A.diagonal().array() += Complex<T>(0, nu_grid[i]);
        A /= scale;
        Eigen::JacobiSVD<Super<T>> svd{A, Eigen::ComputeFullU | Eigen::ComputeFullV};
        auto const sv = svd.singularValues();
        if (!(sv(3) > 0) || sv(0) / sv(3) > T(max_condition)) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", double(nu_grid[i]));
            throw Error{ErrorKind::Conditioning, std::string{"spectrum_numeric: resolvent singular at nu = "} + buf};
        }
        Vec4<T> const w = svd.solve(v / scale);
        // Tr{s- W} = W(1,0)
        out.values[i] = -2 * std::real(w(2));
    });
    return out;
}

template<class T>
Spectrum<T> spectrum_numeric(Generator<T> const& G, unsigned threads = 1) {
    return spectrum_numeric(G, default_nu_grid(G.omega, coherence_rate(G)), threads);
}

/// Resonant, transverse-only spectrum.
template<class T>
T g0_closed_form(T Omega, T G, T nu) {
    auto const G2 = G * G, O2 = Omega * Omega, n2 = nu * nu;
    auto const num = G2 * (G2 + n2) * (G2 + 4 * n2) + 2 * O2 * ((G2 + O2) * (G2 + O2) - (G2 + 2 * O2) * n2 + 4 * n2 * n2);
    auto const den = (G2 + 4 * n2) * (G2 + 2 * O2) * (G2 * (G2 + 4 * O2 + 5 * n2) + 4 * (n2 - O2) * (n2 - O2));
    return 4 * G * num / den;
}

/// First-order asymmetric correction in eps (odd in nu).
template<class T>
T g_eps_closed_form(T Omega, T G, T eps, T nu) {
    auto const G2 = G * G, O2 = Omega * Omega, n2 = nu * nu;
    auto const num = G2 * (13 * G2 + 11 * O2) + 4 * n2 * (G2 + 3 * O2);
    auto const den = (G2 + 4 * n2) * (G2 + 2 * O2) * (G2 * (G2 + 4 * O2 + 5 * n2) + 4 * (n2 - O2) * (n2 - O2));
    return 2 * eps * G * Omega * nu * num / den;
}

/// The three terms of the large-dephasing spectrum; their sum is doublet_closed_form.
template<class T>
std::array<T, 3> doublet_terms(T Omega, T Gz, T Delta, T nu) {
    auto const n2 = nu * nu;
    auto const a = Delta * Omega / Gz;
    auto const d = 4 * Gz * Gz * n2 + (n2 - Omega * Omega) * (n2 - Omega * Omega);
    return {Gz / (4 * Gz * Gz + n2) * (1 - a * a), n2 * Gz / d, nu * a * Omega * Gz / d};
}

template<class T>
T doublet_closed_form(T Omega, T Gz, T Delta, T nu) {
    auto const t = doublet_terms(Omega, Gz, Delta, nu);
    return t[0] + t[1] + t[2];
}

enum class Peak { Central, Red, Blue };

/// Full width at half maximum of the named local peak.
double linewidth(Spectrum<double> const& s, Peak peak);

} // namespace mollow
