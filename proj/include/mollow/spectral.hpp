#pragma once
#include "mollow/types.hpp"

#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace mollow {

struct Flat { double K0 = 1; };
/// Peak value `amplitude` at `center`, half-width `width`.
struct LorentzianCavity { double amplitude = 1, width = 1, center = 0; };
/// Linearized detailed balance K(nu) = K0 (1 + nu/T).
struct ThermalLinear { double K0 = 1, T = 1; };
/// Linear interpolation over (nu, K) samples, nu strictly increasing.
struct Tabulated { std::vector<std::pair<double, double>> samples; };

using SpectralComponent = std::variant<Flat, LorentzianCavity, ThermalLinear, Tabulated>;

/// Sum of components.
struct SpectralModel {
    std::vector<SpectralComponent> components;

    SpectralModel() = default;
    SpectralModel(SpectralComponent c) : components{std::move(c)} {}
    template<class C>
        requires std::is_constructible_v<SpectralComponent, C>
    SpectralModel(C c) : components{SpectralComponent{std::move(c)}} {}
    SpectralModel(std::vector<SpectralComponent> cs) : components{std::move(cs)} {}
};

inline SpectralModel operator+(SpectralModel a, SpectralModel const& b) {
    a.components.insert(a.components.end(), b.components.begin(), b.components.end());
    return a;
}

struct CouplingParams { double ax = 0, ay = 0, az = 0; };

/// Throws Error{Validation} on malformed models (e.g. unsorted table).
void validate(SpectralModel const& model);

/// K(nu) >= 0. Negative values are clamped to zero and flagged through `clamped`.
double eval_K(SpectralModel const& model, double nu, bool* clamped = nullptr);

LabRates<double> lab_rates(SpectralModel const& model, CouplingParams const& c, double w0);

RateSet<double> generalized_rates(SpectralModel const& model, CouplingParams const& c,
                                  DriveParams<double> const& drive, int order = 1);

/// K(wd)/|K'(wd)| by symmetric difference; +inf when the slope vanishes.
double omega_bath_scale(SpectralModel const& model, double wd);

/// Smallest ThermalLinear temperature in the model, if any.
std::optional<double> thermal_temperature(SpectralModel const& model);

} // namespace mollow
