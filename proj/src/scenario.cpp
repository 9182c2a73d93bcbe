#include "mollow/scenario.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace mollow {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void invalid(std::string const& msg) { throw Error{ErrorKind::Validation, msg}; }

std::string join(std::string const& path, std::string const& key) { return path.empty() ? key : path + "." + key; }

void check_keys(json const& obj, std::string const& path, std::initializer_list<char const*> allowed) {
    if (!obj.is_object())
        invalid("field '" + path + "' must be an object");
    for (auto const& [key, _] : obj.items()) {
        bool ok = false;
        for (auto a : allowed)
            ok = ok || key == a;
        if (!ok)
            invalid("unknown field '" + join(path, key) + "'");
    }
}

double number(json const& obj, std::string const& path, char const* key) {
    if (!obj.contains(key))
        invalid("missing field '" + join(path, key) + "'");
    auto const& v = obj.at(key);
    if (!v.is_number())
        invalid("field '" + join(path, key) + "' must be a number");
    auto const x = v.get<double>();
    if (!std::isfinite(x))
        invalid("field '" + join(path, key) + "' must be finite");
    return x;
}

double number_or(json const& obj, std::string const& path, char const* key, double fallback) {
    return obj.contains(key) ? number(obj, path, key) : fallback;
}

std::optional<double> optional_number(json const& obj, std::string const& path, char const* key) {
    if (!obj.contains(key) || obj.at(key).is_null())
        return std::nullopt;
    return number(obj, path, key);
}

std::string string_field(json const& obj, std::string const& path, char const* key) {
    if (!obj.contains(key))
        invalid("missing field '" + join(path, key) + "'");
    if (!obj.at(key).is_string())
        invalid("field '" + join(path, key) + "' must be a string");
    return obj.at(key).get<std::string>();
}

int count_field(json const& obj, std::string const& path, char const* key, int fallback, int min) {
    if (!obj.contains(key))
        return fallback;
    auto const& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < min)
        invalid("field '" + join(path, key) + "' must be an integer >= " + std::to_string(min));
    return v.get<int>();
}

Backend parse_backend(std::string const& s) {
    for (auto b : {Backend::Lab, Backend::Rotating, Backend::Generalized, Backend::RedfieldAppendix})
        if (s == to_string(b))
            return b;
    invalid("unknown backend '" + s + "' (expected lab, rotating, generalized or redfield-appendix)");
}

Task parse_task(std::string const& s) {
    static std::map<std::string, Task> const tasks{{"evolve", Task::Evolve}, {"steady", Task::Steady},
                                                   {"spectrum", Task::Spectrum}, {"scan", Task::Scan},
                                                   {"regime", Task::Regime}};
    auto it = tasks.find(s);
    if (it == tasks.end())
        invalid("unknown task '" + s + "' (expected evolve, steady, spectrum, scan or regime)");
    return it->second;
}

char const* to_string(Task t) {
    switch (t) {
        case Task::Evolve: return "evolve";
        case Task::Steady: return "steady";
        case Task::Spectrum: return "spectrum";
        case Task::Scan: return "scan";
        case Task::Regime: return "regime";
    }
    return "unknown";
}

char const* to_string(Peak p) {
    switch (p) {
        case Peak::Central: return "central";
        case Peak::Red: return "red";
        case Peak::Blue: return "blue";
    }
    return "unknown";
}

Peak parse_peak(std::string const& s, std::string const& path) {
    for (auto p : {Peak::Central, Peak::Red, Peak::Blue})
        if (s == to_string(p))
            return p;
    invalid("field '" + path + "' must be central, red or blue");
}

Observable parse_observable(std::string const& s) {
    for (auto o : {Observable::NSteady, Observable::DetSteady, Observable::ImAlphaSteady})
        if (s == to_string(o))
            return o;
    invalid("unknown observable '" + s + "' (expected n_ss, det_ss or im_alpha_ss)");
}

AxisSpec parse_axis(json const& j, std::string const& path) {
    check_keys(j, path, {"name", "values", "min", "max", "points"});
    AxisSpec a;
    a.name = string_field(j, path, "name");
    if (j.contains("values")) {
        if (!j.at("values").is_array() || j.at("values").empty())
            invalid("field '" + path + ".values' must be a nonempty array");
        for (auto const& v : j.at("values")) {
            if (!v.is_number())
                invalid("field '" + path + ".values' must contain numbers");
            a.values.push_back(v.get<double>());
        }
    } else {
        auto const lo = number(j, path, "min"), hi = number(j, path, "max");
        auto const n = count_field(j, path, "points", 0, 1);
        if (n == 0)
            invalid("missing field '" + path + ".points'");
        for (int i = 0; i < n; ++i)
            a.values.push_back(n == 1 ? lo : lo + (hi - lo) * double(i) / double(n - 1));
    }
    return a;
}

SpectralComponent parse_component(json const& j, std::string const& path) {
    auto const kind = string_field(j, path, "kind");
    if (kind == "flat") {
        check_keys(j, path, {"kind", "K0"});
        return Flat{number(j, path, "K0")};
    }
    if (kind == "lorentzian") {
        check_keys(j, path, {"kind", "amplitude", "width", "center"});
        return LorentzianCavity{number(j, path, "amplitude"), number(j, path, "width"), number(j, path, "center")};
    }
    if (kind == "thermal") {
        check_keys(j, path, {"kind", "K0", "T"});
        return ThermalLinear{number(j, path, "K0"), number(j, path, "T")};
    }
    if (kind == "tabulated") {
        check_keys(j, path, {"kind", "samples"});
        Tabulated t;
        if (!j.contains("samples") || !j.at("samples").is_array())
            invalid("field '" + path + ".samples' must be an array of [nu, K] pairs");
        for (auto const& p : j.at("samples")) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                invalid("field '" + path + ".samples' must be an array of [nu, K] pairs");
            t.samples.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
        return t;
    }
    invalid("field '" + path + ".kind' must be flat, lorentzian, thermal or tabulated");
}

SpectralSpec parse_spectral(json const& j) {
    check_keys(j, "spectral", {"components", "coupling", "order"});
    SpectralSpec s;
    s.source = j;
    if (!j.contains("components") || !j.at("components").is_array() || j.at("components").empty())
        invalid("field 'spectral.components' must be a nonempty array");
    int i = 0;
    for (auto const& c : j.at("components"))
        s.model.components.push_back(parse_component(c, "spectral.components[" + std::to_string(i++) + "]"));
    validate(s.model);
    if (!j.contains("coupling"))
        invalid("missing field 'spectral.coupling'");
    auto const& c = j.at("coupling");
    check_keys(c, "spectral.coupling", {"a_x", "a_y", "a_z"});
    s.coupling = {number_or(c, "spectral.coupling", "a_x", 0), number_or(c, "spectral.coupling", "a_y", 0),
                  number_or(c, "spectral.coupling", "a_z", 0)};
    s.order = count_field(j, "spectral", "order", 1, 1);
    if (s.order > 2)
        invalid("field 'spectral.order' must be 1 or 2");
    return s;
}

RateSet<double> parse_rates(json const& j) {
    std::string const p = "rates";
    check_keys(j, p, {"Gamma_down", "Gamma_up", "Gamma0z", "Gamma_plus_z", "Gamma_minus_z", "epsilon", "epsilon_e",
                      "upsilon"});
    RateSet<double> r;
    r.down = number(j, p, "Gamma_down");
    r.up = number_or(j, p, "Gamma_up", 0);
    r.z0 = number_or(j, p, "Gamma0z", 0);
    r.zplus = number_or(j, p, "Gamma_plus_z", r.z0);
    r.zminus = number_or(j, p, "Gamma_minus_z", r.z0);
    r.eps = number_or(j, p, "epsilon", 0);
    r.eps_e = number_or(j, p, "epsilon_e", 0);
    r.upsilon = number_or(j, p, "upsilon", 0);
    if (!r.is_valid())
        invalid("field 'rates': rates must be non-negative and |epsilon|, |epsilon_e| <= 1");
    return r;
}

json rates_json(RateSet<double> const& r) {
    return {{"Gamma_down", r.down}, {"Gamma_up", r.up},           {"Gamma0z", r.z0}, {"Gamma_plus_z", r.zplus},
            {"Gamma_minus_z", r.zminus}, {"epsilon", r.eps}, {"epsilon_e", r.eps_e}, {"upsilon", r.upsilon}};
}

json derived_json(DerivedRates<double> const& d) {
    json j = json::object();
    if (d.gamma_tilde) j["gamma_tilde"] = *d.gamma_tilde;
    if (d.Gamma_tilde) j["Gamma_tilde"] = *d.Gamma_tilde;
    if (d.kappa_up) j["kappa_up"] = *d.kappa_up;
    if (d.kappa_down) j["kappa_down"] = *d.kappa_down;
    if (d.kappa_star) j["kappa_star"] = *d.kappa_star;
    return j;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = n == 1 ? lo : lo + (hi - lo) * double(i) / double(n - 1);
    return v;
}

// --- output -----------------------------------------------------------------

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;  // pre-formatted cells
    std::vector<std::vector<json>> cells;        // same data for json output
};

void write_text(fs::path const& file, std::string const& text) {
    std::ofstream out{file, std::ios::binary};
    if (!out)
        throw Error{ErrorKind::Io, "cannot open '" + file.string() + "' for writing"};
    out << text;
    if (!out)
        throw Error{ErrorKind::Io, "failed writing '" + file.string() + "'"};
}

void write_table(fs::path const& file, Table const& t, std::string const& format) {
    if (format == "csv") {
        std::string s;
        for (size_t i = 0; i < t.columns.size(); ++i)
            s += (i ? "," : "") + t.columns[i];
        s += '\n';
        for (auto const& row : t.rows) {
            for (size_t i = 0; i < row.size(); ++i)
                s += (i ? "," : "") + row[i];
            s += '\n';
        }
        write_text(file, s);
    } else {
        json rows = json::array();
        for (auto const& row : t.cells) {
            json r = json::object();
            for (size_t i = 0; i < row.size(); ++i)
                r[t.columns[i]] = row[i];
            rows.push_back(r);
        }
        write_text(file, json{{"columns", t.columns}, {"rows", rows}}.dump(2) + "\n");
    }
}

void add_row(Table& t, std::vector<double> const& xs, std::vector<std::string> const& extra = {}) {
    std::vector<std::string> row;
    std::vector<json> cells;
    for (auto x : xs) {
        row.push_back(format_double(x));
        cells.emplace_back(std::isfinite(x) ? json(x) : json(nullptr));
    }
    for (auto const& e : extra) {
        row.push_back(e);
        cells.emplace_back(e);
    }
    t.rows.push_back(std::move(row));
    t.cells.push_back(std::move(cells));
}

double nu_half_span(Scenario const& s) {
    if (s.spectrum.half_span)
        return *s.spectrum.half_span;
    auto const w = s.drive.omega();
    auto const rates = resolve_rates(s);
    auto const gamma = w > 0 ? generalized_gamma_tilde(rates, s.drive) : rates.lab().gamma_tilde();
    return std::max(4 * w, 20 * gamma);
}

} // namespace

std::string format_double(double x) {
    if (std::isnan(x))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Scenario parse_scenario(json const& j) {
    check_keys(j, "", {"name", "figure", "note", "task", "backends", "drive", "rates", "spectral", "rules",
                       "generalized_form", "evolve", "spectrum", "scan", "regime", "output", "derived", "outputs",
                       "results"});
    Scenario s;
    s.name = string_field(j, "", "name");
    if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos)
        invalid("field 'name' must be a nonempty file-name-safe string");
    if (j.contains("figure")) s.figure = string_field(j, "", "figure");
    if (j.contains("note")) s.note = string_field(j, "", "note");
    s.task = parse_task(string_field(j, "", "task"));

    if (!j.contains("backends") || !j.at("backends").is_array() || j.at("backends").empty())
        invalid("field 'backends' must be a nonempty array");
    for (auto const& b : j.at("backends")) {
        if (!b.is_string())
            invalid("field 'backends' must contain strings");
        s.backends.push_back(parse_backend(b.get<std::string>()));
    }

    if (!j.contains("drive"))
        invalid("missing field 'drive'");
    auto const& d = j.at("drive");
    check_keys(d, "drive", {"Omega", "delta_omega", "omega_d"});
    s.drive.Omega = number(d, "drive", "Omega");
    s.drive.dw = number_or(d, "drive", "delta_omega", 0);
    s.drive.wd = number_or(d, "drive", "omega_d", 1000);
    if (s.drive.Omega < 0)
        invalid("field 'drive.Omega' must be non-negative");
    if (!(s.drive.wd > 0))
        invalid("field 'drive.omega_d' must be positive");

    if (j.contains("rates") == j.contains("spectral"))
        invalid("exactly one of 'rates' and 'spectral' must be given");
    if (j.contains("rates"))
        s.rates = parse_rates(j.at("rates"));
    else
        s.spectral = parse_spectral(j.at("spectral"));

    if (j.contains("rules")) {
        auto const& r = j.at("rules");
        check_keys(r, "rules", {"longitudinal_T", "longitudinal_asymmetry", "longitudinal_Delta", "omega_bath", "eid"});
        s.rules.longitudinal_T = optional_number(r, "rules", "longitudinal_T");
        s.rules.longitudinal_asymmetry = optional_number(r, "rules", "longitudinal_asymmetry");
        s.rules.longitudinal_Delta = optional_number(r, "rules", "longitudinal_Delta");
        s.rules.omega_bath = optional_number(r, "rules", "omega_bath");
        if (r.contains("eid")) {
            if (!r.at("eid").is_boolean())
                invalid("field 'rules.eid' must be a boolean");
            s.rules.eid = r.at("eid").get<bool>();
        }
        int const longitudinal = s.rules.longitudinal_T.has_value() + s.rules.longitudinal_asymmetry.has_value()
                               + s.rules.longitudinal_Delta.has_value();
        if (longitudinal > 1)
            invalid("field 'rules': at most one longitudinal rule may be given");
        if (s.rules.longitudinal_T && !(*s.rules.longitudinal_T > 0))
            invalid("field 'rules.longitudinal_T' must be positive");
        if (s.rules.omega_bath && *s.rules.omega_bath == 0)
            invalid("field 'rules.omega_bath' must be nonzero");
        if (s.rules.eid && !s.rules.omega_bath)
            invalid("field 'rules.eid' requires 'rules.omega_bath'");
    }

    if (j.contains("generalized_form")) {
        auto const f = string_field(j, "", "generalized_form");
        if (f == "derived") s.form = GeneralizedForm::Derived;
        else if (f == "as-printed") s.form = GeneralizedForm::AsPrinted;
        else invalid("field 'generalized_form' must be derived or as-printed");
    }

    if (j.contains("regime")) {
        auto const& r = j.at("regime");
        check_keys(r, "regime", {"marginal", "no", "drive"});
        s.thresholds.marginal = number_or(r, "regime", "marginal", s.thresholds.marginal);
        s.thresholds.no = number_or(r, "regime", "no", s.thresholds.no);
        s.thresholds.drive = number_or(r, "regime", "drive", s.thresholds.drive);
        if (!(s.thresholds.marginal <= s.thresholds.no))
            invalid("field 'regime': marginal threshold must not exceed the no threshold");
    }

    if (j.contains("output")) {
        auto const& o = j.at("output");
        check_keys(o, "output", {"format"});
        if (o.contains("format")) s.format = string_field(o, "output", "format");
    }
    if (s.format != "csv" && s.format != "json")
        invalid("field 'output.format' must be csv or json");

    switch (s.task) {
        case Task::Evolve: {
            if (!j.contains("evolve"))
                invalid("missing field 'evolve'");
            auto const& e = j.at("evolve");
            check_keys(e, "evolve", {"t_max", "points", "initial"});
            s.evolve.t_max = number(e, "evolve", "t_max");
            s.evolve.points = count_field(e, "evolve", "points", 201, 2);
            if (!(s.evolve.t_max > 0))
                invalid("field 'evolve.t_max' must be positive");
            if (e.contains("initial")) {
                auto const& i = e.at("initial");
                check_keys(i, "evolve.initial", {"n", "re_alpha", "im_alpha"});
                s.evolve.initial.n = number_or(i, "evolve.initial", "n", 0);
                s.evolve.initial.alpha = {number_or(i, "evolve.initial", "re_alpha", 0),
                                          number_or(i, "evolve.initial", "im_alpha", 0)};
            }
            break;
        }
        case Task::Spectrum: {
            if (j.contains("spectrum")) {
                auto const& sp = j.at("spectrum");
                check_keys(sp, "spectrum", {"half_span", "points", "sweep", "linewidth"});
                s.spectrum.half_span = optional_number(sp, "spectrum", "half_span");
                if (s.spectrum.half_span && !(*s.spectrum.half_span > 0))
                    invalid("field 'spectrum.half_span' must be positive");
                s.spectrum.points = count_field(sp, "spectrum", "points", 2001, 3);
                if (sp.contains("sweep"))
                    s.spectrum.sweep = parse_axis(sp.at("sweep"), "spectrum.sweep");
                if (sp.contains("linewidth"))
                    s.spectrum.linewidth = parse_peak(string_field(sp, "spectrum", "linewidth"), "spectrum.linewidth");
            }
            break;
        }
        case Task::Scan: {
            if (!j.contains("scan"))
                invalid("missing field 'scan'");
            auto const& sc = j.at("scan");
            check_keys(sc, "scan", {"axis1", "axis2", "observable"});
            if (!sc.contains("axis1") || !sc.contains("axis2"))
                invalid("missing field 'scan.axis1' or 'scan.axis2'");
            s.scan.axis1 = parse_axis(sc.at("axis1"), "scan.axis1");
            s.scan.axis2 = parse_axis(sc.at("axis2"), "scan.axis2");
            s.scan.observable = parse_observable(string_field(sc, "scan", "observable"));
            break;
        }
        default: break;
    }

    // parameter names must be known before any computation starts
    auto probe = s;
    if (s.task == Task::Scan) {
        set_parameter(probe, s.scan.axis1.name, s.scan.axis1.values.front());
        set_parameter(probe, s.scan.axis2.name, s.scan.axis2.values.front());
    }
    if (s.task == Task::Spectrum && s.spectrum.sweep)
        set_parameter(probe, s.spectrum.sweep->name, s.spectrum.sweep->values.front());
    return s;
}

Scenario load_scenario(fs::path const& file) {
    std::ifstream in{file};
    if (!in)
        throw Error{ErrorKind::Io, "cannot open scenario file '" + file.string() + "'"};
    json j;
    try {
        j = json::parse(in);
    } catch (json::parse_error const& e) {
        invalid(file.string() + ": " + e.what());
    }
    try {
        return parse_scenario(j);
    } catch (Error const& e) {
        if (e.kind() != ErrorKind::Validation)
            throw;
        invalid(file.string() + ": " + e.what());
    }
}

json to_json(Scenario const& s) {
    json j;
    j["name"] = s.name;
    j["figure"] = s.figure;
    j["note"] = s.note;
    j["task"] = to_string(s.task);
    json backends = json::array();
    for (auto b : s.backends)
        backends.push_back(to_string(b));
    j["backends"] = backends;
    j["drive"] = {{"Omega", s.drive.Omega}, {"delta_omega", s.drive.dw}, {"omega_d", s.drive.wd}};
    if (s.rates)
        j["rates"] = rates_json(*s.rates);
    else
        j["spectral"] = s.spectral->source;
    json rules = json::object();
    if (s.rules.longitudinal_T) rules["longitudinal_T"] = *s.rules.longitudinal_T;
    if (s.rules.longitudinal_asymmetry) rules["longitudinal_asymmetry"] = *s.rules.longitudinal_asymmetry;
    if (s.rules.longitudinal_Delta) rules["longitudinal_Delta"] = *s.rules.longitudinal_Delta;
    if (s.rules.omega_bath) rules["omega_bath"] = *s.rules.omega_bath;
    if (s.rules.eid) rules["eid"] = true;
    if (!rules.empty())
        j["rules"] = rules;
    j["generalized_form"] = s.form == GeneralizedForm::Derived ? "derived" : "as-printed";
    j["regime"] = {{"marginal", s.thresholds.marginal}, {"no", s.thresholds.no}, {"drive", s.thresholds.drive}};
    j["output"] = {{"format", s.format}};
    auto axis = [](AxisSpec const& a) { return json{{"name", a.name}, {"values", a.values}}; };
    switch (s.task) {
        case Task::Evolve:
            j["evolve"] = {{"t_max", s.evolve.t_max},
                           {"points", s.evolve.points},
                           {"initial", {{"n", s.evolve.initial.n},
                                        {"re_alpha", s.evolve.initial.alpha.real()},
                                        {"im_alpha", s.evolve.initial.alpha.imag()}}}};
            break;
        case Task::Spectrum: {
            json sp{{"points", s.spectrum.points}};
            if (s.spectrum.half_span) sp["half_span"] = *s.spectrum.half_span;
            if (s.spectrum.sweep) sp["sweep"] = axis(*s.spectrum.sweep);
            if (s.spectrum.linewidth) sp["linewidth"] = to_string(*s.spectrum.linewidth);
            j["spectrum"] = sp;
            break;
        }
        case Task::Scan:
            j["scan"] = {{"axis1", axis(s.scan.axis1)},
                         {"axis2", axis(s.scan.axis2)},
                         {"observable", to_string(s.scan.observable)}};
            break;
        default: break;
    }
    return j;
}

void set_parameter(Scenario& s, std::string const& name, double v) {
    if (!std::isfinite(v))
        invalid("parameter '" + name + "' must be finite");
    if (name == "Omega") { s.drive.Omega = v; return; }
    if (name == "delta_omega") { s.drive.dw = v; return; }
    if (name == "omega_d") { s.drive.wd = v; return; }
    if (name == "longitudinal_T") { s.rules.longitudinal_T = v; s.rules.longitudinal_asymmetry.reset(); s.rules.longitudinal_Delta.reset(); return; }
    if (name == "longitudinal_asymmetry") { s.rules.longitudinal_asymmetry = v; s.rules.longitudinal_T.reset(); s.rules.longitudinal_Delta.reset(); return; }
    if (name == "longitudinal_Delta") { s.rules.longitudinal_Delta = v; s.rules.longitudinal_T.reset(); s.rules.longitudinal_asymmetry.reset(); return; }
    if (name == "omega_bath") { s.rules.omega_bath = v; return; }

    static std::map<std::string, double RateSet<double>::*> const fields{
        {"Gamma_down", &RateSet<double>::down},       {"Gamma_up", &RateSet<double>::up},
        {"Gamma0z", &RateSet<double>::z0},            {"Gamma_plus_z", &RateSet<double>::zplus},
        {"Gamma_minus_z", &RateSet<double>::zminus},  {"epsilon", &RateSet<double>::eps},
        {"epsilon_e", &RateSet<double>::eps_e},       {"upsilon", &RateSet<double>::upsilon}};
    auto it = fields.find(name);
    if (it == fields.end())
        invalid("unknown parameter '" + name + "'");
    if (!s.rates)
        invalid("parameter '" + name + "' needs directly specified rates");
    (*s.rates).*(it->second) = v;
}

RateSet<double> resolve_rates(Scenario const& s) {
    RateSet<double> r;
    auto const w = s.drive.omega();
    if (s.rates) {
        r = *s.rates;
    } else if (w > 0) {
        r = generalized_rates(s.spectral->model, s.spectral->coupling, s.drive, s.spectral->order);
    } else {
        auto const lab = lab_rates(s.spectral->model, s.spectral->coupling, s.drive.w0());
        r = {lab.down, lab.up, lab.zero, lab.zero, lab.zero, 0, 0, 0};
    }
    if (s.rules.longitudinal_T) {
        r.zplus = r.z0 * (1 + w / *s.rules.longitudinal_T);
        r.zminus = r.z0 * (1 - w / *s.rules.longitudinal_T);
    }
    if (s.rules.longitudinal_asymmetry) {
        r.zplus = r.z0 * (1 + *s.rules.longitudinal_asymmetry);
        r.zminus = r.z0 * (1 - *s.rules.longitudinal_asymmetry);
    }
    if (s.rules.longitudinal_Delta) {
        r.zplus = r.z0 + *s.rules.longitudinal_Delta * w;
        r.zminus = r.z0 - *s.rules.longitudinal_Delta * w;
    }
    if (s.rules.omega_bath) {
        r.eps = w / *s.rules.omega_bath;
        if (s.rules.eid)
            r.upsilon = r.eps * r.eps;
    }
    return r;
}

Generator<double> build_generator(Scenario const& s, Backend b) {
    switch (b) {
        case Backend::Lab:
            if (s.spectral)
                return lab_generator(lab_rates(s.spectral->model, s.spectral->coupling, s.drive.w0()), s.drive);
            return lab_generator(resolve_rates(s).lab(), s.drive);
        case Backend::Rotating: return rotating_generator(resolve_rates(s), s.drive);
        case Backend::Generalized: return generalized_generator(resolve_rates(s), s.drive, s.form);
        case Backend::RedfieldAppendix: return redfield_appendix_generator(resolve_rates(s), s.drive);
    }
    invalid("unknown backend");
}

RegimeReport scenario_regime(Scenario const& s) {
    auto const rates = resolve_rates(s);
    if (s.spectral)
        return regime_report(rates, s.drive, s.spectral->model, s.thresholds);
    return regime_report(rates, s.drive, s.thresholds);
}

json to_json(RegimeReport const& r) {
    return {{"lab_valid", to_string(r.lab_valid)},
            {"rotating_valid", to_string(r.rotating_valid)},
            {"ratios",
             {{"omega_over_omega_bath", r.ratios.omega_over_bath},
              {"omega_over_T", r.ratios.omega_over_T},
              {"max_Gamma_over_omega", r.ratios.max_gamma_over_omega},
              {"omega_over_omega_d", r.ratios.omega_over_wd}}}};
}

std::vector<fs::path> run_scenario(Scenario const& scenario, fs::path const& out_dir, unsigned threads,
                                   std::optional<std::string> format_override) {
    auto s = scenario;
    if (format_override)
        s.format = *format_override;
    if (s.format != "csv" && s.format != "json")
        invalid("output format must be csv or json");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw Error{ErrorKind::Io, "cannot create output directory '" + out_dir.string() + "': " + ec.message()};

    auto const ext = "." + s.format;
    std::vector<fs::path> written;
    auto file = [&](std::string const& stem) {
        written.push_back(out_dir / (s.name + "_" + stem + ext));
        return written.back();
    };
    json results = json::object();
    std::optional<std::string> failure;
    ErrorKind failure_kind = ErrorKind::Scan;

    try {
        switch (s.task) {
            case Task::Evolve: {
                auto const times = linspace(0, s.evolve.t_max, s.evolve.points);
                for (auto b : s.backends) {
                    auto const traj = evolve(to_lab(build_generator(s, b)), s.evolve.initial, times);
                    Table t{{"t", "n", "re_alpha", "im_alpha"}, {}, {}};
                    for (size_t k = 0; k < times.size(); ++k) {
                        auto const& q = traj.states[k];
                        add_row(t, {times[k], q.n, q.alpha.real(), q.alpha.imag()});
                    }
                    write_table(file(std::string{to_string(b)} + "_trajectory"), t, s.format);
                    auto const& last = traj.states.back();
                    results[to_string(b)] = {{"final_n", last.n}, {"final_re_alpha", last.alpha.real()},
                                             {"final_im_alpha", last.alpha.imag()}};
                }
                break;
            }
            case Task::Steady: {
                for (auto b : s.backends) {
                    auto const q = steady_state(to_lab(build_generator(s, b)));
                    Table t{{"n", "re_alpha", "im_alpha", "det", "power_flow"}, {}, {}};
                    add_row(t, {q.n, q.alpha.real(), q.alpha.imag(), determinant(q),
                                power_flow(q, s.drive.Omega, s.drive.wd)});
                    write_table(file(std::string{to_string(b)} + "_steady"), t, s.format);
                }
                break;
            }
            case Task::Spectrum: {
                std::vector<double> sweep_values{std::numeric_limits<double>::quiet_NaN()};
                if (s.spectrum.sweep)
                    sweep_values = s.spectrum.sweep->values;
                for (auto b : s.backends) {
                    Table widths{{s.spectrum.sweep ? s.spectrum.sweep->name : "index", "fwhm", "status"}, {}, {}};
                    json elastic = json::array();
                    for (size_t k = 0; k < sweep_values.size(); ++k) {
                        auto sk = s;
                        if (s.spectrum.sweep)
                            set_parameter(sk, s.spectrum.sweep->name, sweep_values[k]);
                        auto const half = nu_half_span(sk);
                        auto const spec = spectrum_numeric(to_lab(build_generator(sk, b)),
                                                           linspace(-half, half, s.spectrum.points), threads);
                        Table t{{"nu", "g"}, {}, {}};
                        for (size_t i = 0; i < spec.nu.size(); ++i)
                            add_row(t, {spec.nu[i], spec.values[i]});
                        auto stem = std::string{to_string(b)} + "_spectrum";
                        if (s.spectrum.sweep)
                            stem += "_" + std::to_string(k);
                        write_table(file(stem), t, s.format);
                        elastic.push_back(spec.elastic_weight);
                        if (s.spectrum.linewidth) {
                            auto const key = s.spectrum.sweep ? sweep_values[k] : double(k);
                            try {
                                add_row(widths, {key, linewidth(spec, *s.spectrum.linewidth)}, {"ok"});
                            } catch (Error const& e) {
                                add_row(widths, {key, std::numeric_limits<double>::quiet_NaN()}, {to_string(e.kind())});
                            }
                        }
                    }
                    if (s.spectrum.linewidth)
                        write_table(file(std::string{to_string(b)} + "_linewidth"), widths, s.format);
                    results[to_string(b)] = {{"elastic_weight", elastic}};
                }
                break;
            }
            case Task::Scan: {
                for (auto b : s.backends) {
                    auto recipe = [&](double a1, double a2) {
                        auto sk = s;
                        set_parameter(sk, s.scan.axis1.name, a1);
                        set_parameter(sk, s.scan.axis2.name, a2);
                        return build_generator(sk, b);
                    };
                    auto const res = scan2d(recipe, Axis{s.scan.axis1.name, s.scan.axis1.values},
                                            Axis{s.scan.axis2.name, s.scan.axis2.values}, s.scan.observable, threads);
                    Table t{{"axis1", "axis2", "value", "status"}, {}, {}};
                    size_t failed = 0;
                    for (size_t i = 0; i < s.scan.axis1.values.size(); ++i)
                        for (size_t j = 0; j < s.scan.axis2.values.size(); ++j) {
                            auto const k = i * s.scan.axis2.values.size() + j;
                            failed += res.status[k] != "ok";
                            add_row(t, {s.scan.axis1.values[i], s.scan.axis2.values[j], res.values[k]},
                                    {res.status[k]});
                        }
                    write_table(file(std::string{to_string(b)} + "_scan"), t, s.format);
                    results[to_string(b)] = {{"failed_points", failed}};
                }
                break;
            }
            case Task::Regime: {
                written.push_back(out_dir / (s.name + "_regime.json"));
                write_text(written.back(), to_json(scenario_regime(s)).dump(2) + "\n");
                break;
            }
        }
    } catch (Error const& e) {
        if (e.kind() == ErrorKind::Io)
            throw;
        failure = std::string{to_string(e.kind())} + ": " + e.what();
        failure_kind = e.kind();
    }

    // the manifest is a valid scenario: re-running it reproduces these outputs
    auto manifest = to_json(s);
    json derived;
    derived["drive"] = {{"omega", s.drive.omega()}, {"beta", s.drive.beta()}, {"omega0", s.drive.w0()}};
    try {
        derived["rates"] = rates_json(resolve_rates(s));
        json gens = json::object();
        for (auto b : s.backends) {
            try {
                gens[to_string(b)] = derived_json(build_generator(s, b).derived);
            } catch (Error const& e) {
                gens[to_string(b)] = {{"error", e.what()}};
            }
        }
        derived["backends"] = gens;
        derived["regime"] = to_json(scenario_regime(s));
    } catch (Error const& e) {
        derived["error"] = e.what();
    }
    manifest["derived"] = derived;
    manifest["results"] = results;
    json outputs = json::array();
    for (auto const& p : written)
        outputs.push_back(p.filename().string());
    manifest["outputs"] = outputs;
    if (failure)
        manifest["results"]["error"] = *failure;
    auto const manifest_path = out_dir / (s.name + "_manifest.json");
    write_text(manifest_path, manifest.dump(2) + "\n");
    written.push_back(manifest_path);

    if (failure)
        throw Error{failure_kind, *failure};
    return written;
}

std::vector<CatalogEntry> const& catalog() {
    static std::vector<CatalogEntry> const entries{
        {"fig2", "Fig. 2", "fig2.json", "transient evolution, three backends"},
        {"fig3a", "Fig. 3a", "fig3a.json", "population inversion vs epsilon and detuning"},
        {"fig3b", "Fig. 3b", "fig3b.json", "population inversion vs longitudinal asymmetry and detuning"},
        {"fig4a", "Fig. 4a", "fig4a.json", "fluorescence, Omega = 1.8"},
        {"fig4b", "Fig. 4b", "fig4b.json", "fluorescence, Omega = 10"},
        {"fig4c", "Fig. 4c", "fig4c.json", "qualitative-only (caption ambiguity)"},
        {"fig5-eid", "Fig. 5", "fig5-eid.json", "EID linewidth sweep"},
        {"fig6", "Fig. 6", "fig6.json", "steady-state determinant map"},
        {"fig7a", "Fig. 7a", "fig7a.json", "power flow map, Gamma_up = Gamma_down/4"},
        {"fig7b", "Fig. 7b", "fig7b.json", "power flow map, Gamma_up = Gamma_down/2"},
    };
    return entries;
}

fs::path scenario_dir() {
    if (auto env = std::getenv("MOLLOW_SCENARIOS"))
        return env;
#ifdef MOLLOW_SCENARIO_DIR
    return MOLLOW_SCENARIO_DIR;
#else
    return "scenarios";
#endif
}

} // namespace mollow
