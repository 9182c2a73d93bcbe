#include "mollow/dynamics.hpp"
#include "mollow/generators.hpp"
#include "random.hpp"

#include <doctest.h>

#include <numbers>

using namespace mollow;
using C = std::complex<double>;

namespace {

double max_abs(Super<double> const& R) { return R.cwiseAbs().maxCoeff(); }

bool trace_preserving(Super<double> const& R, double tol = 1e-14) {
    return (R.row(0) + R.row(3)).cwiseAbs().maxCoeff() <= tol * std::max(1.0, max_abs(R));
}

// R[(i,j),(k,l)] = conj(R[(j,i),(l,k)])
bool hermiticity_preserving(Super<double> const& R, double tol = 1e-14) {
    auto const scale = std::max(1.0, max_abs(R));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    if (std::abs(R(2 * i + j, 2 * k + l) - std::conj(R(2 * j + i, 2 * l + k))) > tol * scale)
                        return false;
    return true;
}

RateSet<double> lab_like(LabRates<double> const& l) { return {l.down, l.up, l.zero, l.zero, l.zero, 0, 0, 0}; }

} // namespace

TEST_CASE("lab generator reproduces the Bloch equations") {
    LabRates<double> const r{0.7, 0.2, 0.3};
    DriveParams<double> const d{1.3, -0.4, 100};
    auto const G = lab_generator(r, d);
    QubitState<double> const q{0.3, {0.1, -0.2}};
    Vec4<double> const dv = G.R * q.vec();
    auto const dn = -(r.down + r.up) * q.n + r.up - C{0, 1} * d.Omega * (q.alpha - std::conj(q.alpha)) / 2.0;
    auto const da = -(r.gamma_tilde() + C{0, 1} * d.dw) * q.alpha - C{0, 1} * d.Omega * (q.n - 0.5);
    CHECK(std::abs(dv(3) - dn) < 1e-14);
    CHECK(std::abs(dv(1) - da) < 1e-14);
    CHECK(*G.derived.gamma_tilde == doctest::Approx(r.gamma_tilde()));
}

TEST_CASE("lab generator steady states") {
    auto q = steady_state(lab_generator<double>({1, 0, 0}, {0, 0, 1}));
    CHECK(q.n == doctest::Approx(0).epsilon(1e-14));
    CHECK(std::abs(q.alpha) < 1e-14);

    q = steady_state(lab_generator<double>({2, 1, 0}, {0, 0, 1}));
    CHECK(q.n == doctest::Approx(1.0 / 3));

    // resonant, pure decay: n = O^2/(G^2 + 2 O^2), alpha = i O G/(G^2 + 2 O^2) ... with G = gamma_down
    q = steady_state(lab_generator<double>({1, 0, 0}, {1, 0, 1}));
    CHECK(q.n == doctest::Approx(1.0 / 3));
    CHECK(q.alpha.real() == doctest::Approx(0).epsilon(1e-14));
    CHECK(std::abs(q.alpha.imag()) == doctest::Approx(1.0 / 3));
}

TEST_CASE("generalized reduces to lab with symmetric rates") {
    testing::Draw draw{1};
    for (int k = 0; k < 1000; ++k) {
        LabRates<double> const l{draw.uniform(0, 2), draw.uniform(0, 1), draw.uniform(0, 1)};
        auto d = draw.drive();
        auto const Rg = generalized_generator(lab_like(l), d).R;
        auto const Rl = lab_generator(l, d).R;
        CHECK(max_abs(Rg - Rl) <= 1e-14 * max_abs(Rl));
    }
}

TEST_CASE("all generators preserve trace and hermiticity") {
    testing::Draw draw{2};
    for (int k = 0; k < 1000; ++k) {
        auto const r = draw.rates();
        auto const d = draw.drive();
        CHECK(trace_preserving(lab_generator(r.lab(), d).R));
        CHECK(hermiticity_preserving(lab_generator(r.lab(), d).R));
        for (auto const& G : {generalized_generator(r, d), generalized_generator(r, d, GeneralizedForm::AsPrinted),
                              rotating_generator(r, d), redfield_appendix_generator(r, d),
                              redfield_appendix_generator(r, d, true)}) {
            CHECK(trace_preserving(G.R));
            CHECK(hermiticity_preserving(G.R));
        }
    }
}

TEST_CASE("appendix construction equals the generalized generator") {
    testing::Draw draw{3};
    for (int k = 0; k < 1000; ++k) {
        auto const r = draw.rates();
        auto const d = draw.drive();
        auto const Rg = generalized_generator(r, d).R;
        auto const Ra = redfield_appendix_generator(r, d).R;
        CHECK(max_abs(Rg - Ra) < 1e-12 * max_abs(Rg));
    }
}

TEST_CASE("secular truncation equals the rotating generator") {
    testing::Draw draw{4};
    for (int k = 0; k < 1000; ++k) {
        auto const r = draw.rates();
        auto const d = draw.drive();
        auto const Rs = to_dressed(redfield_appendix_generator(r, d, true)).R;
        auto const Rr = rotating_generator(r, d).R;
        CHECK(max_abs(Rs - Rr) < 1e-13 * max_abs(Rr));
    }
}

TEST_CASE("printed and derived forms agree on resonance without Gamma_up asymmetry") {
    testing::Draw draw{5};
    for (int k = 0; k < 100; ++k) {
        auto r = draw.rates();
        r.eps_e = 0;
        DriveParams<double> const d{draw.uniform(0.1, 5), 0, 100};
        CHECK(max_abs(generalized_generator(r, d).R - generalized_generator(r, d, GeneralizedForm::AsPrinted).R)
              < 1e-15);
    }
}

TEST_CASE("undriven limit decays at the golden-rule rate K(w0)") {
    // Omega -> 0 with dw > 0: w0 = wd - dw, K(w0) = K(wd - w) = Gamma_down (1 - eps)
    RateSet<double> r;
    r.down = 1;
    r.eps = 0.3;
    DriveParams<double> const d{0, 2, 100};
    auto const G = generalized_generator(r, d);
    CHECK(std::real(G.R(3, 3)) == doctest::Approx(-(1 - 0.3)));
    auto const Gp = generalized_generator(r, d, GeneralizedForm::AsPrinted);
    CHECK(std::real(Gp.R(3, 3)) == doctest::Approx(-(1 + 0.3)));
}

TEST_CASE("rotating rates at beta = pi/2") {
    RateSet<double> r{1.0, 0.4, 0.2, 0.3, 0.1, 0.2, 0.5, 0};
    auto const G = rotating_generator(r, {0, 3, 100});
    CHECK(*G.derived.kappa_up == doctest::Approx(0.4 * 1.5));
    CHECK(*G.derived.kappa_down == doctest::Approx(1.0 * 0.8));
    CHECK(*G.derived.kappa_star == doctest::Approx(2 * 0.2));
}

TEST_CASE("rotating backend: flat bath on resonance gives u = 1/2") {
    RateSet<double> r{1.0, 0.3, 0.4, 0.4, 0.4, 0, 0, 0};
    auto const G = rotating_generator(r, {2, 0, 100});
    CHECK(*G.derived.kappa_up == doctest::Approx(*G.derived.kappa_down));
    CHECK(steady_state(G).n == doctest::Approx(0.5));
}

TEST_CASE("rotating backend: coherence decouples") {
    RateSet<double> r{1.0, 0.3, 0.4, 0.5, 0.2, 0.1, -0.2, 0};
    DriveParams<double> const d{2, 1, 100};
    auto const G = rotating_generator(r, d);
    auto const rate = (*G.derived.kappa_up + *G.derived.kappa_down) / 2 + *G.derived.kappa_star;
    QubitState<double> const x0{0.3, {0.2, 0.1}};
    for (double t : {0.1, 0.7, 2.5}) {
        Vec4<double> const v = propagator(G, t) * x0.vec();
        auto const expect = x0.alpha * std::exp(-rate * t) * std::exp(C{0, -d.omega() * t});
        CHECK(std::abs(v(1) - expect) < 1e-13);
    }
    auto const q = steady_state(G);
    CHECK(q.n == doctest::Approx(*G.derived.kappa_up / (*G.derived.kappa_up + *G.derived.kappa_down)));
    CHECK(std::abs(q.alpha) < 1e-13);
}

TEST_CASE("pure dephasing limit of the generalized generator") {
    RateSet<double> r{0, 0, 0.4, 0.7, 0.2, 0, 0, 0};
    DriveParams<double> const d{1.5, 0.8, 100};
    auto const b = d.beta();
    auto const s = std::sin(b), c = std::cos(b);
    auto const G = generalized_generator(r, d);
    QubitState<double> const q{0.3, {0.1, -0.25}};
    Vec4<double> const dv = G.R * q.vec();
    C const I{0, 1};
    auto const dn = -I * d.Omega * (q.alpha - std::conj(q.alpha)) / 2.0;
    auto const Gt = (r.zplus + r.zminus) * c * c + 2 * r.z0 * s * s;
    auto const da = -(Gt + I * d.dw) * q.alpha + (-I * d.Omega + s * c * (r.zplus + r.zminus - 2 * r.z0)) * (q.n - 0.5)
                  - (r.zplus - r.zminus) / 2 * c;
    CHECK(std::abs(dv(3) - dn) < 1e-14);
    CHECK(std::abs(dv(1) - da) < 1e-14);
}

TEST_CASE("radiative-only limit matches a Lindblad-free closed form") {
    // a_z = 0, Gamma_up = 0: dalpha/dt = -(Gt + i dw) alpha - i Omega (n - 1/2) - Gamma_down eps c/4
    RateSet<double> r{1.2, 0, 0, 0, 0, 0.3, 0, 0};
    DriveParams<double> const d{1.1, 0.6, 100};
    auto const s = std::sin(d.beta()), c = std::cos(d.beta());
    auto const G = generalized_generator(r, d);
    QubitState<double> const q{0.2, {0.05, 0.3}};
    Vec4<double> const dv = G.R * q.vec();
    C const I{0, 1};
    auto const Gt = r.down / 2 * (1 - r.eps * s);
    auto const da = -(Gt + I * d.dw) * q.alpha - I * d.Omega * (q.n - 0.5) - r.down * r.eps / 4 * c;
    CHECK(std::abs(dv(1) - da) < 1e-14);
}

TEST_CASE("flat bath on resonance: appendix matches lab") {
    LabRates<double> const l{1, 0.2, 0.3};
    DriveParams<double> const d{2, 0, 100};
    auto const Ra = redfield_appendix_generator(lab_like(l), d).R;
    CHECK(max_abs(Ra - lab_generator(l, d).R) < 1e-14);
}

TEST_CASE("EID shifts only the coherence decay") {
    RateSet<double> r{1, 0.1, 0.2, 0.3, 0.1, 0.05, 0.02, 0};
    DriveParams<double> const d{2, 0.5, 100};
    auto const base = generalized_generator(r, d).R;
    r.upsilon = 0.4;
    auto const shifted = generalized_generator(r, d).R;
    Super<double> diff = shifted - base;
    CHECK(diff(1, 1).real() == doctest::Approx(-0.1));
    CHECK(diff(2, 2).real() == doctest::Approx(-0.1));
    diff(1, 1) = diff(2, 2) = 0;
    CHECK(max_abs(diff) < 1e-15);
}

TEST_CASE("degenerate drive is refused by the dressed-frame builders") {
    RateSet<double> r{1, 0, 0, 0, 0, 0, 0, 0};
    DriveParams<double> const d{0, 0, 100};
    CHECK_THROWS_AS(generalized_generator(r, d), Error);
    CHECK_THROWS_AS(rotating_generator(r, d), Error);
    CHECK_THROWS_AS(redfield_appendix_generator(r, d), Error);
    CHECK_NOTHROW(lab_generator(r.lab(), d));
    try {
        rotating_generator(r, d);
    } catch (Error const& e) {
        CHECK(e.kind() == ErrorKind::DegenerateDrive);
    }
}

TEST_CASE("frame transform") {
    auto q = frame_transform(0.3, C{0, 0}, std::numbers::pi / 2);
    CHECK(q.n == doctest::Approx(0.3));
    CHECK(std::abs(q.alpha) < 1e-15);

    q = frame_transform(0.5, C{0.5, 0}, 0.0);
    CHECK(q.n == doctest::Approx(0).epsilon(1e-15));
    CHECK(std::abs(q.alpha) < 1e-15);

    testing::Draw draw{6};
    for (int k = 0; k < 1000; ++k) {
        auto const beta = draw.uniform(-std::numbers::pi / 2, std::numbers::pi / 2);
        auto const u = draw.uniform(0, 1);
        C const x{draw.uniform(-0.5, 0.5), draw.uniform(-0.5, 0.5)};
        auto const back = inverse_frame_transform(frame_transform(u, x, beta), beta);
        CHECK(std::abs(back.u - u) < 1e-15);
        CHECK(std::abs(back.x - x) < 1e-15);

        // the closed form agrees with the superoperator frame matrix
        Vec4<double> dressed;
        dressed << 1 - u, x, std::conj(x), u;
        auto const viaM = QubitState<double>::from_vec(frame_matrix(beta) * dressed);
        auto const direct = frame_transform(u, x, beta);
        CHECK(std::abs(viaM.n - direct.n) < 1e-15);
        CHECK(std::abs(viaM.alpha - direct.alpha) < 1e-15);
    }
}

TEST_CASE("dressed basis diagonalizes the drive Hamiltonian") {
    testing::Draw draw{8};
    for (int k = 0; k < 100; ++k) {
        auto const d = draw.drive();
        Op2<double> const H = d.dw / 2 * ops::sigma_z<double>() + d.Omega / 2 * ops::sigma_x<double>();
        auto const V = dressed_basis(d.beta());
        Op2<double> const Ht = V.adjoint() * H * V;
        CHECK(std::abs(Ht(0, 0) - d.omega() / 2) < 1e-13);
        CHECK(std::abs(Ht(1, 1) + d.omega() / 2) < 1e-13);
        CHECK(std::abs(Ht(0, 1)) < 1e-13);
    }
}
