#include "mollow/spectral.hpp"
#include "random.hpp"

#include <doctest.h>

using namespace mollow;

TEST_CASE("eval_K on the basic models") {
    CHECK(eval_K(Flat{1}, 17) == 1);
    CHECK(eval_K(ThermalLinear{1, 10}, 2) == doctest::Approx(1.2));
    CHECK(eval_K(ThermalLinear{1, 10}, -2) == doctest::Approx(0.8));
    CHECK(eval_K(LorentzianCavity{1, 1, 0}, 0) == 1);
    CHECK(eval_K(LorentzianCavity{1, 1, 0}, 1) == doctest::Approx(0.5));
}

TEST_CASE("composite models sum their components") {
    auto const m = SpectralModel{Flat{0.5}} + SpectralModel{LorentzianCavity{2, 1, 3}};
    CHECK(eval_K(m, 3) == doctest::Approx(2.5));
    CHECK(eval_K(m, 4) == doctest::Approx(1.5));
}

TEST_CASE("negative values are clamped and flagged") {
    bool clamped = false;
    CHECK(eval_K(ThermalLinear{1, 1}, -3, &clamped) == 0);
    CHECK(clamped);
}

TEST_CASE("tabulated interpolation and range") {
    SpectralModel const m{Tabulated{{{-1, 0}, {0, 1}, {2, 3}}}};
    CHECK(eval_K(m, -0.5) == doctest::Approx(0.5));
    CHECK(eval_K(m, 1) == doctest::Approx(2));
    CHECK(eval_K(m, 2) == 3);
    CHECK_THROWS_AS(eval_K(m, 2.5), Error);
    CHECK_THROWS_AS(validate(SpectralModel{Tabulated{{{0, 1}, {0, 2}}}}), Error);
}

TEST_CASE("lab_rates") {
    auto r = lab_rates(Flat{1}, {1, 0, 0}, 5);
    CHECK(r.down == 1);
    CHECK(r.up == 1);
    CHECK(r.zero == 0);

    r = lab_rates(Flat{1}, {0, 0, 2}, 3);
    CHECK(r.down == 0);
    CHECK(r.zero == 4);

    r = lab_rates(ThermalLinear{1, 100}, {1, 0, 0}, 10);
    CHECK(r.down == doctest::Approx(1.1));
    CHECK(r.up == doctest::Approx(0.9));

    CHECK_THROWS_AS(lab_rates(Flat{1}, {1, 0, 0}, 0), Error);
}

TEST_CASE("generalized_rates: flat bath has no asymmetry") {
    auto const r = generalized_rates(Flat{0.7}, {1, 0.5, 0.3}, {3, 1, 100}, 2);
    CHECK(r.eps == 0);
    CHECK(r.eps_e == 0);
    CHECK(r.upsilon == 0);
    CHECK(r.zplus == r.z0);
    CHECK(r.zminus == r.z0);
    CHECK(r.down == doctest::Approx(1.25 * 0.7));
}

TEST_CASE("generalized_rates: Lorentzian cavity gives eps ~ 2w/w_bath") {
    double const center = 900, width = 0.5, wd = 1000;
    DriveParams<double> const d{0.5, 0, wd};
    auto const r = generalized_rates(LorentzianCavity{1, width, center}, {1, 0, 0}, d);
    auto const w_bath = wd - center;
    CHECK(r.eps == doctest::Approx(-2 * d.omega() / w_bath).epsilon(1e-2));
}

TEST_CASE("generalized_rates: thermal longitudinal rates") {
    double const T = 12.5;
    DriveParams<double> const d{1.8, 0, 1000};
    auto const r = generalized_rates(ThermalLinear{0.2, T}, {0, 0, 1}, d);
    CHECK(r.zplus == doctest::Approx(0.2 * (1 + d.omega() / T)));
    CHECK(r.zminus == doctest::Approx(0.2 * (1 - d.omega() / T)));
    CHECK((r.zplus + r.zminus) / 2 == doctest::Approx(r.z0));
}

TEST_CASE("generalized_rates: degenerate drive and zero channels") {
    CHECK_THROWS_AS(generalized_rates(Flat{1}, {1, 0, 0}, {0, 0, 10}), Error);
    auto const r = generalized_rates(ThermalLinear{1, 5}, {0, 0, 1}, {1, 0, 10});
    CHECK(r.eps == 0);
    CHECK(r.eps_e == 0);
}

TEST_CASE("property: small-w limit, scaling in couplings and K0") {
    testing::Draw draw{7};
    for (int k = 0; k < 200; ++k) {
        auto const wd = draw.uniform(5, 50);
        SpectralModel const m = SpectralModel{LorentzianCavity{draw.uniform(0.5, 2), draw.uniform(1, 5),
                                                               draw.uniform(-20, 20)}}
                              + SpectralModel{ThermalLinear{draw.uniform(0.1, 1), 1000}};
        CouplingParams const c{draw.uniform(-1, 1), draw.uniform(-1, 1), draw.uniform(-1, 1)};

        auto const small = generalized_rates(m, c, {1e-8 * wd, 0, wd});
        CHECK(std::abs(small.eps) < 1e-5);
        CHECK(small.down == doctest::Approx((c.ax * c.ax + c.ay * c.ay) * eval_K(m, wd)));
        CHECK(small.zplus == doctest::Approx(small.z0).epsilon(1e-5));

        DriveParams<double> const d{draw.uniform(0.1, 3), draw.uniform(-1, 1), wd};
        auto const a = generalized_rates(m, c, d, 2);
        auto const b = generalized_rates(m, {2 * c.ax, 2 * c.ay, 2 * c.az}, d, 2);
        CHECK(b.down == doctest::Approx(4 * a.down));
        CHECK(b.up == doctest::Approx(4 * a.up));
        CHECK(b.z0 == doctest::Approx(4 * a.z0));
        CHECK(b.zplus == doctest::Approx(4 * a.zplus));
        CHECK(b.zminus == doctest::Approx(4 * a.zminus));
        CHECK(b.eps == doctest::Approx(a.eps));
        CHECK(b.upsilon == doctest::Approx(a.upsilon));
    }
}

TEST_CASE("omega_bath_scale") {
    CHECK(std::isinf(omega_bath_scale(Flat{1}, 10)));
    // K/K' = (1 + wd/T) T = T + wd
    CHECK(omega_bath_scale(ThermalLinear{1, 12.5}, 100) == doctest::Approx(112.5));
}
