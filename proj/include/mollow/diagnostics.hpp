#pragma once
#include "mollow/dynamics.hpp"
#include "mollow/parallel.hpp"
#include "mollow/spectral.hpp"

#include <limits>
#include <string>
#include <vector>

namespace mollow {

template<class T>
T determinant(QubitState<T> const& q) { return q.det(); }

/// Energy flow from the drive into the bath (hbar = 1).
template<class T>
T power_flow(QubitState<T> const& q, T Omega, T wd) { return wd * Omega * q.alpha.imag(); }

enum class Verdict { Yes, Marginal, No };

inline char const* to_string(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "yes";
        case Verdict::Marginal: return "marginal";
        case Verdict::No: return "no";
    }
    return "unknown";
}

struct RegimeThresholds {
    double marginal = 0.1;  // ratio >= marginal -> marginal
    double no = 0.3;        // ratio >= no -> no
    double drive = 0.1;     // w/wd above this voids both treatments
};

struct RegimeReport {
    Verdict lab_valid = Verdict::No;
    Verdict rotating_valid = Verdict::No;
    struct {
        double omega_over_bath = 0;
        double omega_over_T = 0;
        double max_gamma_over_omega = 0;
        double omega_over_wd = 0;
    } ratios;
};

/// Bath scales taken from the spectral model.
RegimeReport regime_report(RateSet<double> const& rates, DriveParams<double> const& drive,
                           SpectralModel const& model, RegimeThresholds const& th = {});

/// Bath scales inferred from the rates: w/w_bath ~ max|eps|, w/T ~ (G+z - G-z)/(G+z + G-z).
RegimeReport regime_report(RateSet<double> const& rates, DriveParams<double> const& drive,
                           RegimeThresholds const& th = {});

enum class Observable { NSteady, DetSteady, ImAlphaSteady };

inline char const* to_string(Observable o) {
    switch (o) {
        case Observable::NSteady: return "n_ss";
        case Observable::DetSteady: return "det_ss";
        case Observable::ImAlphaSteady: return "im_alpha_ss";
    }
    return "unknown";
}

struct Axis {
    std::string name;
    std::vector<double> values;
};

/// Row-major grid: value(i1, i2) = values[i1 * axis2.size() + i2].
struct ScanResult {
    Axis axis1, axis2;
    Observable observable = Observable::NSteady;
    std::vector<double> values;
    std::vector<std::string> status;  // "ok" or the error kind

    double operator()(std::size_t i, std::size_t j) const { return values[i * axis2.values.size() + j]; }
};

inline double observe(QubitState<double> const& q, Observable o) {
    switch (o) {
        case Observable::NSteady: return q.n;
        case Observable::DetSteady: return q.det();
        case Observable::ImAlphaSteady: return q.alpha.imag();
    }
    return std::numeric_limits<double>::quiet_NaN();
}

/// recipe(a1, a2) -> Generator<double>. Failing points become NaN with their
/// error kind in `status`; only an all-failed grid is an error.
template<class Recipe>
ScanResult scan2d(Recipe&& recipe, Axis const& axis1, Axis const& axis2, Observable obs, unsigned threads = 1) {
    if (axis1.values.empty() || axis2.values.empty())
        throw Error{ErrorKind::Validation, "scan2d: axes must be nonempty"};
    auto const n1 = axis1.values.size(), n2 = axis2.values.size();
    ScanResult out{axis1, axis2, obs, std::vector<double>(n1 * n2), std::vector<std::string>(n1 * n2)};
    parallel_for(n1 * n2, threads, [&](std::size_t k) {
        auto const i = k / n2, j = k % n2;
        try {
            auto const G = to_lab(recipe(axis1.values[i], axis2.values[j]));
            out.values[k] = observe(steady_state(G), obs);
            out.status[k] = "ok";
        } catch (Error const& e) {
            out.values[k] = std::numeric_limits<double>::quiet_NaN();
            out.status[k] = to_string(e.kind());
        }
    });
    for (auto const& s : out.status)
        if (s == "ok")
            return out;
    throw Error{ErrorKind::Scan, "scan2d: every grid point failed (first: " + out.status.front() + ")"};
}

} // namespace mollow
