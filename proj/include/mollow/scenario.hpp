#pragma once
#include "mollow/diagnostics.hpp"
#include "mollow/fluorescence.hpp"
#include "mollow/generators.hpp"
#include "mollow/spectral.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mollow {

enum class Task { Evolve, Steady, Spectrum, Scan, Regime };

/// Rates that follow the drive: re-applied whenever Omega or delta_omega change.
struct RateRules {
    std::optional<double> longitudinal_T;          // G+-z = G0z (1 +- w/T)
    std::optional<double> longitudinal_asymmetry;  // G+-z = G0z (1 +- d)
    std::optional<double> longitudinal_Delta;      // G+-z = G0z +- Delta w
    std::optional<double> omega_bath;              // eps = w/w_bath
    bool eid = false;                              // upsilon = (w/w_bath)^2
};

struct SpectralSpec {
    SpectralModel model;
    CouplingParams coupling;
    int order = 1;
    nlohmann::json source;  // as declared, for the manifest
};

struct AxisSpec {
    std::string name;
    std::vector<double> values;
};

struct Scenario {
    std::string name;
    std::string figure;
    std::string note;
    Task task = Task::Steady;
    std::vector<Backend> backends;
    DriveParams<double> drive;
    std::optional<RateSet<double>> rates;
    std::optional<SpectralSpec> spectral;
    RateRules rules;
    GeneralizedForm form = GeneralizedForm::Derived;
    RegimeThresholds thresholds;
    std::string format = "csv";

    struct {
        double t_max = 10;
        int points = 201;
        QubitState<double> initial;
    } evolve;

    struct {
        std::optional<double> half_span;
        int points = 2001;
        std::optional<AxisSpec> sweep;
        std::optional<Peak> linewidth;
    } spectrum;

    struct {
        AxisSpec axis1, axis2;
        Observable observable = Observable::NSteady;
    } scan;
};

Scenario parse_scenario(nlohmann::json const& j);
Scenario load_scenario(std::filesystem::path const& file);
nlohmann::json to_json(Scenario const& s);

/// Sets a drive, rate or rule parameter by its scenario key.
void set_parameter(Scenario& s, std::string const& name, double value);

RateSet<double> resolve_rates(Scenario const& s);
Generator<double> build_generator(Scenario const& s, Backend b);
RegimeReport scenario_regime(Scenario const& s);
nlohmann::json to_json(RegimeReport const& r);

/// Runs the task and writes one file per backend plus `<name>_manifest.json`.
/// Returns the written paths.
std::vector<std::filesystem::path> run_scenario(Scenario const& s, std::filesystem::path const& out_dir,
                                                unsigned threads, std::optional<std::string> format = {});

struct CatalogEntry {
    std::string name, figure, file, note;
};

/// Bundled scenarios, in figure order.
std::vector<CatalogEntry> const& catalog();
std::filesystem::path scenario_dir();

std::string format_double(double x);

} // namespace mollow
