#pragma once
#include "mollow/types.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <array>
#include <numbers>

namespace mollow {

enum class Frame { LabRotatingAtDrive, DressedRotating };
enum class Backend { Lab, Rotating, Generalized, RedfieldAppendix };

/// Sign convention for the asymmetry terms of the generalized generator.
/// `Derived` follows from K(wd +- w) = K(wd)(1 +- eps); `AsPrinted` keeps the
/// alternative signs on the Gamma_down*eps*sin(beta) and Gamma_up*eps_e*cos(beta) terms.
enum class GeneralizedForm { Derived, AsPrinted };

inline char const* to_string(Frame f) {
    return f == Frame::LabRotatingAtDrive ? "lab-rotating-at-drive" : "dressed-rotating";
}

inline char const* to_string(Backend b) {
    switch (b) {
        case Backend::Lab: return "lab";
        case Backend::Rotating: return "rotating";
        case Backend::Generalized: return "generalized";
        case Backend::RedfieldAppendix: return "redfield-appendix";
    }
    return "unknown";
}

template<class T>
struct DerivedRates {
    std::optional<T> gamma_tilde;  // lab coherence decay
    std::optional<T> Gamma_tilde;  // generalized coherence decay
    std::optional<T> kappa_up, kappa_down, kappa_star;
};

template<class T = double>
struct Generator {
    Super<T> R = Super<T>::Zero();
    Frame frame = Frame::LabRotatingAtDrive;
    Backend backend = Backend::Lab;
    DerivedRates<T> derived;
    T beta = 0;   // dressing angle, needed to change frame
    T omega = 0;  // generalized Rabi frequency
};

namespace ops {

template<class T> Op2<T> identity() { return Op2<T>::Identity(); }
/// |g><e|
template<class T> Op2<T> sigma_minus() { Op2<T> m = Op2<T>::Zero(); m(0, 1) = 1; return m; }
/// |e><g|
template<class T> Op2<T> sigma_plus() { Op2<T> m = Op2<T>::Zero(); m(1, 0) = 1; return m; }
template<class T> Op2<T> sigma_z() { Op2<T> m = Op2<T>::Zero(); m(0, 0) = 1; m(1, 1) = -1; return m; }
template<class T> Op2<T> sigma_x() { return sigma_minus<T>() + sigma_plus<T>(); }

/// A rho B
template<class T> Super<T> sandwich(Op2<T> const& A, Op2<T> const& B) {
    return Eigen::kroneckerProduct(A, B.transpose()).eval();
}
template<class T> Super<T> left(Op2<T> const& A) { return sandwich<T>(A, identity<T>()); }
template<class T> Super<T> right(Op2<T> const& B) { return sandwich<T>(identity<T>(), B); }

/// -i[H, rho]
template<class T> Super<T> commutator(Op2<T> const& H) {
    return Complex<T>(0, -1) * (left<T>(H) - right<T>(H));
}

/// rate * (L rho L^+ - {L^+ L, rho}/2)
template<class T> Super<T> dissipator(Op2<T> const& L, T rate) {
    Op2<T> const LdL = L.adjoint() * L;
    return rate * (sandwich<T>(L, L.adjoint()) - T(0.5) * (left<T>(LdL) + right<T>(LdL)));
}

} // namespace ops

namespace detail {

template<class T> void require_drive(DriveParams<T> const& d, char const* who) {
    if (!(d.omega() > 0))
        throw Error{ErrorKind::DegenerateDrive,
                    std::string{who} + ": Omega = delta_omega = 0 leaves the dressing angle undefined; "
                                       "use the lab backend for an undriven qubit"};
}

template<class T> void require_rates(RateSet<T> const& r, char const* who) {
    if (!r.is_valid())
        throw Error{ErrorKind::Validation, std::string{who} + ": rates must be non-negative and |eps|, |eps_e| <= 1"};
}

} // namespace detail

/// Coherence decay rate of the generalized generator, including the EID shift.
template<class T>
T generalized_gamma_tilde(RateSet<T> const& r, DriveParams<T> const& d,
                          GeneralizedForm form = GeneralizedForm::Derived) {
    auto const b = d.beta();
    auto const s = std::sin(b), c = std::cos(b);
    auto const se = form == GeneralizedForm::Derived ? T(-1) : T(1);
    return r.down / 2 * (1 + se * r.eps * s) + r.up / 2 * (1 + r.eps_e * s)
         + (r.zplus + r.zminus) * c * c + 2 * r.z0 * s * s + r.down / 4 * r.upsilon;
}

template<class T>
Generator<T> lab_generator(LabRates<T> const& r, DriveParams<T> const& d) {
    if (!(r.down >= 0 && r.up >= 0 && r.zero >= 0))
        throw Error{ErrorKind::Validation, "lab_generator: rates must be non-negative"};
    Op2<T> const H = d.dw / 2 * ops::sigma_z<T>() + d.Omega / 2 * ops::sigma_x<T>();
    Generator<T> G;
    G.R = ops::commutator<T>(H)
        + ops::dissipator<T>(ops::sigma_minus<T>(), r.down)
        + ops::dissipator<T>(ops::sigma_plus<T>(), r.up)
        + ops::dissipator<T>(ops::sigma_z<T>(), r.zero);
    G.backend = Backend::Lab;
    G.derived.gamma_tilde = r.gamma_tilde();
    G.beta = d.beta();
    G.omega = d.omega();
    return G;
}

template<class T>
Generator<T> generalized_generator(RateSet<T> const& r, DriveParams<T> const& d,
                                   GeneralizedForm form = GeneralizedForm::Derived) {
    detail::require_drive(d, "generalized_generator");
    detail::require_rates(r, "generalized_generator");
    using C = Complex<T>;
    C const I{0, 1};
    auto const b = d.beta();
    auto const s = std::sin(b), c = std::cos(b);
    auto const se = form == GeneralizedForm::Derived ? T(-1) : T(1);
    auto const ce = se;
    auto const Gt = generalized_gamma_tilde(r, d, form);

    // dn/dt and dalpha/dt as rows over vec(rho); constants multiply rho00 + rho11
    Eigen::Matrix<C, 1, 4> dn = Eigen::Matrix<C, 1, 4>::Zero(), da = Eigen::Matrix<C, 1, 4>::Zero();
    auto const up = r.up * (1 + r.eps_e * s);
    dn(3) += -(r.down * (1 + se * r.eps * s) + up);
    dn(0) += up;
    dn(3) += up;
    dn(1) += -I * d.Omega / T(2);
    dn(2) += I * d.Omega / T(2);
    auto const k = c * (r.down * r.eps + ce * r.up * r.eps_e) / 4;
    dn(1) -= k;
    dn(2) -= k;

    da(1) += -(Gt + I * d.dw);
    C const coef = -I * d.Omega + s * c * (r.zplus + r.zminus - 2 * r.z0);
    da(3) += coef / T(2);
    da(0) -= coef / T(2);
    auto const cst = -(r.down * r.eps - ce * r.up * r.eps_e) / 4 * c - (r.zplus - r.zminus) / 2 * c;
    da(0) += cst;
    da(3) += cst;

    Generator<T> G;
    G.R.row(3) = dn;
    G.R.row(0) = -dn;
    G.R.row(1) = da;
    G.R.row(2) << std::conj(da(0)), std::conj(da(2)), std::conj(da(1)), std::conj(da(3));
    G.backend = Backend::Generalized;
    G.derived.Gamma_tilde = Gt;
    G.beta = b;
    G.omega = d.omega();
    return G;
}

/// Dressed eigenbasis of H = (dw sz + Omega sx)/2 as columns: (+w/2, -w/2).
template<class T>
Op2<T> dressed_basis(T beta) {
    auto const th = beta / 2 + std::numbers::pi_v<T> / 4;
    auto const st = std::sin(th), ct = std::cos(th);
    Op2<T> V;
    V << st, ct, ct, -st;
    return V;
}

/// Maps dressed vec(rho~) to lab vec(rho) = vec(V rho~ V^+).
template<class T>
Super<T> frame_matrix(T beta) {
    Op2<T> const V = dressed_basis(beta);
    return ops::sandwich<T>(V, V.adjoint());
}

template<class T>
Super<T> inverse_frame_matrix(T beta) {
    Op2<T> const V = dressed_basis(beta);
    return ops::sandwich<T>(V.adjoint(), V);
}

/// Dressed-frame state: u = population of the lower dressed level, x = dressed coherence.
template<class T = double>
struct DressedState {
    T u = 0;
    Complex<T> x = 0;
};

template<class T>
QubitState<T> frame_transform(T u, Complex<T> x, T beta) {
    auto const s = std::sin(beta), c = std::cos(beta);
    auto const du = u - T(0.5);
    return {T(0.5) + du * s - x.real() * c, Complex<T>(-du * c - x.real() * s, -x.imag())};
}

template<class T>
DressedState<T> inverse_frame_transform(QubitState<T> const& q, T beta) {
    auto const s = std::sin(beta), c = std::cos(beta);
    auto const dn = q.n - T(0.5);
    return {T(0.5) + dn * s - q.alpha.real() * c, Complex<T>(-dn * c - q.alpha.real() * s, -q.alpha.imag())};
}

template<class T>
Generator<T> to_lab(Generator<T> G) {
    if (G.frame == Frame::DressedRotating) {
        G.R = frame_matrix(G.beta) * G.R * inverse_frame_matrix(G.beta);
        G.frame = Frame::LabRotatingAtDrive;
    }
    return G;
}

template<class T>
Generator<T> to_dressed(Generator<T> G) {
    if (G.frame == Frame::LabRotatingAtDrive) {
        G.R = inverse_frame_matrix(G.beta) * G.R * frame_matrix(G.beta);
        G.frame = Frame::DressedRotating;
    }
    return G;
}

namespace detail {

// Excitation-induced dephasing acts as an extra flat longitudinal channel.
template<class T> RateSet<T> with_eid(RateSet<T> r) {
    auto const extra = r.down * r.upsilon / 8;
    r.z0 += extra;
    r.zplus += extra;
    r.zminus += extra;
    return r;
}

} // namespace detail

/// Secular (dressed-frame) generator; vec order (rho~_dd, x, x*, u).
template<class T>
Generator<T> rotating_generator(RateSet<T> const& rates, DriveParams<T> const& d) {
    detail::require_drive(d, "rotating_generator");
    detail::require_rates(rates, "rotating_generator");
    auto const r = detail::with_eid(rates);
    auto const w = d.omega();
    auto const b = d.beta();
    auto const s = std::sin(b), c = std::cos(b);
    auto const ku = (1 - s) * (1 - s) / 4 * r.down * (1 + r.eps) + (1 + s) * (1 + s) / 4 * r.up * (1 + r.eps_e)
                  + c * c * r.zplus;
    auto const kd = (1 + s) * (1 + s) / 4 * r.down * (1 - r.eps) + (1 - s) * (1 - s) / 4 * r.up * (1 - r.eps_e)
                  + c * c * r.zminus;
    auto const ks = 2 * s * s * r.z0 + c * c / 2 * (r.down + r.up);

    Generator<T> G;
    G.R(3, 0) = ku;
    G.R(3, 3) = -kd;
    G.R.row(0) = -G.R.row(3);
    G.R(1, 1) = Complex<T>(-((ku + kd) / 2 + ks), -w);
    G.R(2, 2) = std::conj(G.R(1, 1));
    G.frame = Frame::DressedRotating;
    G.backend = Backend::Rotating;
    G.derived.kappa_up = ku;
    G.derived.kappa_down = kd;
    G.derived.kappa_star = ks;
    G.beta = b;
    G.omega = d.omega();
    return G;
}

/// Redfield generator assembled in the dressed frame from the jump operators'
/// dressed-frequency components, keeping every cross-frequency pair (or only the
/// secular ones), then mapped to the frame rotating at the drive.
template<class T>
Generator<T> redfield_appendix_generator(RateSet<T> const& rates, DriveParams<T> const& d, bool secular = false) {
    detail::require_drive(d, "redfield_appendix_generator");
    detail::require_rates(rates, "redfield_appendix_generator");
    auto const r = detail::with_eid(rates);
    auto const w = d.omega();
    auto const b = d.beta();
    Op2<T> const V = dressed_basis(b);

    Op2<T> E = Op2<T>::Zero();
    E(0, 0) = w / 2;
    E(1, 1) = -w / 2;
    Super<T> Rt = ops::commutator<T>(E);

    struct Channel {
        Op2<T> P;
        std::array<T, 3> rate;  // at dressed frequency index k = -1, 0, +1
    };
    std::array<Channel, 3> const channels{{
        {ops::sigma_minus<T>(), {r.down * (1 - r.eps), r.down, r.down * (1 + r.eps)}},
        {ops::sigma_plus<T>(), {r.up * (1 - r.eps_e), r.up, r.up * (1 + r.eps_e)}},
        {ops::sigma_z<T>(), {r.zminus, r.z0, r.zplus}},
    }};

    for (auto const& ch : channels) {
        Op2<T> const Pt = V.adjoint() * ch.P * V;
        std::array<Op2<T>, 3> comp;
        for (auto& m : comp)
            m.setZero();
        comp[1](0, 0) = Pt(0, 0);
        comp[1](1, 1) = Pt(1, 1);
        comp[0](0, 1) = Pt(0, 1);  // E_1 - E_0 = -w
        comp[2](1, 0) = Pt(1, 0);  // +w
        for (int kn = 0; kn < 3; ++kn) {
            for (int km = 0; km < 3; ++km) {
                if (secular && kn != km)
                    continue;
                auto const& Pn = comp[kn];
                auto const& Pm = comp[km];
                auto const g = ch.rate[kn] / 2;
                // [Pn rho, Pm^+] + h.c.
                Rt += g * (ops::sandwich<T>(Pn, Pm.adjoint()) - ops::left<T>(Pm.adjoint() * Pn)
                           + ops::sandwich<T>(Pm, Pn.adjoint()) - ops::right<T>(Pn.adjoint() * Pm));
            }
        }
    }

    Generator<T> G;
    G.R = frame_matrix(b) * Rt * inverse_frame_matrix(b);
    G.backend = Backend::RedfieldAppendix;
    G.derived.Gamma_tilde = generalized_gamma_tilde(rates, d);
    G.beta = b;
    G.omega = d.omega();
    return G;
}

/// Coherence decay scale of any generator (used for default grids).
template<class T>
T coherence_rate(Generator<T> const& G) {
    if (G.derived.Gamma_tilde)
        return *G.derived.Gamma_tilde;
    if (G.derived.gamma_tilde)
        return *G.derived.gamma_tilde;
    if (G.derived.kappa_up)
        return (*G.derived.kappa_up + *G.derived.kappa_down) / 2 + *G.derived.kappa_star;
    return 0;
}

} // namespace mollow
