#include "mollow/diagnostics.hpp"
#include "mollow/generators.hpp"

#include <algorithm>

namespace mollow {
namespace {

Verdict grade(double r, RegimeThresholds const& th) {
    if (!(r < th.no))
        return Verdict::No;
    return r < th.marginal ? Verdict::Yes : Verdict::Marginal;
}

double max_rate(RateSet<double> const& r, DriveParams<double> const& d) {
    auto m = std::max({r.down * (1 + std::abs(r.eps)), r.up * (1 + std::abs(r.eps_e)), r.z0, r.zplus, r.zminus});
    if (d.omega() > 0)
        m = std::max(m, generalized_gamma_tilde(r, d));
    return m;
}

RegimeReport finish(RegimeReport rep, RateSet<double> const& rates, DriveParams<double> const& d,
                    RegimeThresholds const& th) {
    auto const w = d.omega();
    rep.ratios.max_gamma_over_omega =
        w > 0 ? max_rate(rates, d) / w : std::numeric_limits<double>::infinity();
    rep.ratios.omega_over_wd = w / d.wd;
    rep.lab_valid = grade(std::max(rep.ratios.omega_over_bath, rep.ratios.omega_over_T), th);
    rep.rotating_valid = grade(rep.ratios.max_gamma_over_omega, th);
    if (rep.ratios.omega_over_wd > th.drive)
        rep.lab_valid = rep.rotating_valid = Verdict::No;
    return rep;
}

} // namespace

RegimeReport regime_report(RateSet<double> const& rates, DriveParams<double> const& drive,
                           SpectralModel const& model, RegimeThresholds const& th) {
    RegimeReport rep;
    auto const w = drive.omega();
    auto const scale = omega_bath_scale(model, drive.wd);
    rep.ratios.omega_over_bath = std::isinf(scale) ? 0 : w / scale;
    if (auto T = thermal_temperature(model))
        rep.ratios.omega_over_T = w / *T;
    return finish(rep, rates, drive, th);
}

RegimeReport regime_report(RateSet<double> const& rates, DriveParams<double> const& drive,
                           RegimeThresholds const& th) {
    RegimeReport rep;
    rep.ratios.omega_over_bath = std::max(std::abs(rates.eps), std::abs(rates.eps_e));
    auto const zs = rates.zplus + rates.zminus;
    rep.ratios.omega_over_T = zs > 0 ? std::abs(rates.zplus - rates.zminus) / zs : 0;
    return finish(rep, rates, drive, th);
}

} // namespace mollow
