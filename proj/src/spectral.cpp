#include "mollow/spectral.hpp"

#include <algorithm>
#include <limits>

namespace mollow {
namespace {

template<class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template<class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

double eval_component(SpectralComponent const& c, double nu) {
    return std::visit(overloaded{
        [](Flat const& f) { return f.K0; },
        [nu](LorentzianCavity const& l) {
            auto const d = nu - l.center;
            return l.amplitude * l.width * l.width / (l.width * l.width + d * d);
        },
        [nu](ThermalLinear const& t) { return t.K0 * (1 + nu / t.T); },
        [nu](Tabulated const& t) {
            auto const& s = t.samples;
            if (s.empty() || nu < s.front().first || nu > s.back().first)
                throw Error{ErrorKind::Range, "tabulated spectral density: nu = " + std::to_string(nu)
                                                  + " outside sample range"};
            auto hi = std::lower_bound(s.begin(), s.end(), nu,
                                       [](auto const& p, double x) { return p.first < x; });
            if (hi->first == nu)
                return hi->second;
            auto lo = hi - 1;
            auto const w = (nu - lo->first) / (hi->first - lo->first);
            return (1 - w) * lo->second + w * hi->second;
        },
    }, c);
}

} // namespace

void validate(SpectralModel const& model) {
    for (auto const& c : model.components) {
        if (auto t = std::get_if<Tabulated>(&c)) {
            if (t->samples.size() < 2)
                throw Error{ErrorKind::Validation, "tabulated spectral density needs at least two samples"};
            for (size_t i = 1; i < t->samples.size(); ++i)
                if (!(t->samples[i].first > t->samples[i - 1].first))
                    throw Error{ErrorKind::Validation, "tabulated spectral density: nu must be strictly increasing"};
        } else if (auto l = std::get_if<LorentzianCavity>(&c)) {
            if (!(l->width > 0))
                throw Error{ErrorKind::Validation, "lorentzian spectral density: width must be positive"};
        } else if (auto th = std::get_if<ThermalLinear>(&c)) {
            if (!(th->T > 0))
                throw Error{ErrorKind::Validation, "thermal spectral density: temperature must be positive"};
        }
    }
}

double eval_K(SpectralModel const& model, double nu, bool* clamped) {
    if (!std::isfinite(nu))
        throw Error{ErrorKind::Range, "spectral density evaluated at non-finite frequency"};
    double K = 0;
    for (auto const& c : model.components)
        K += eval_component(c, nu);
    if (K < 0) {
        if (clamped)
            *clamped = true;
        return 0;
    }
    return K;
}

LabRates<double> lab_rates(SpectralModel const& model, CouplingParams const& c, double w0) {
    if (!(w0 > 0))
        throw Error{ErrorKind::Validation, "lab_rates: qubit frequency must be positive"};
    auto const transverse = c.ax * c.ax + c.ay * c.ay;
    return {transverse * eval_K(model, w0), transverse * eval_K(model, -w0), c.az * c.az * eval_K(model, 0)};
}

RateSet<double> generalized_rates(SpectralModel const& model, CouplingParams const& c,
                                  DriveParams<double> const& drive, int order) {
    if (order != 1 && order != 2)
        throw Error{ErrorKind::Validation, "generalized_rates: order must be 1 or 2"};
    auto const w = drive.omega();
    if (!(w > 0))
        throw Error{ErrorKind::DegenerateDrive, "generalized_rates: generalized Rabi frequency is zero"};
    auto const wd = drive.wd;
    auto const transverse = c.ax * c.ax + c.ay * c.ay;
    auto const zz = c.az * c.az;
    auto K = [&](double nu) { return eval_K(model, nu); };

    RateSet<double> r;
    auto const Kd = K(wd), Ku = K(-wd);
    r.down = transverse * Kd;
    r.up = transverse * Ku;
    r.z0 = zz * K(0);
    r.zplus = zz * K(w);
    r.zminus = zz * K(-w);
    if (transverse != 0 && Kd > 0) {
        auto const p = K(wd + w), m = K(wd - w);
        r.eps = (p - m) / (2 * Kd);
        if (order == 2)
            r.upsilon = (p + m - 2 * Kd) / (2 * Kd);
    }
    if (transverse != 0 && Ku > 0)
        r.eps_e = (K(-wd + w) - K(-wd - w)) / (2 * Ku);
    return r;
}

double omega_bath_scale(SpectralModel const& model, double wd) {
    auto const h = 1e-4 * std::max(1.0, std::abs(wd));
    auto const slope = (eval_K(model, wd + h) - eval_K(model, wd - h)) / (2 * h);
    if (slope == 0)
        return std::numeric_limits<double>::infinity();
    return eval_K(model, wd) / std::abs(slope);
}

std::optional<double> thermal_temperature(SpectralModel const& model) {
    std::optional<double> T;
    for (auto const& c : model.components)
        if (auto t = std::get_if<ThermalLinear>(&c))
            T = T ? std::min(*T, t->T) : t->T;
    return T;
}

} // namespace mollow
