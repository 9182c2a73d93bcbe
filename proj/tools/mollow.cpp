#include "mollow/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

enum Exit { ok = 0, validation = 2, computation = 3, io = 4 };

int exit_code(mollow::ErrorKind k) {
    switch (k) {
        case mollow::ErrorKind::Validation: return validation;
        case mollow::ErrorKind::Io: return io;
        default: return computation;
    }
}

// A bundled scenario may be named instead of given as a path.
std::filesystem::path locate(std::string const& arg) {
    std::filesystem::path p{arg};
    if (std::filesystem::exists(p))
        return p;
    for (auto const& e : mollow::catalog())
        if (e.name == arg)
            return mollow::scenario_dir() / e.file;
    return p;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Driven dissipative qubit: lab, rotating and generalized master equations"};
    app.require_subcommand(1);

    std::string file, out = ".", format;
    unsigned threads = mollow::default_threads();

    auto run = app.add_subcommand("run", "Run a scenario and write its outputs and manifest");
    run->add_option("scenario", file, "Scenario file (JSON) or bundled scenario name")->required();
    run->add_option("--out", out, "Output directory");
    run->add_option("--threads", threads, "Worker threads for scans and spectra")->check(CLI::PositiveNumber);
    run->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    auto list = app.add_subcommand("list-scenarios", "List bundled scenarios");

    auto regime = app.add_subcommand("regime", "Print the validity report for a scenario");
    regime->add_option("scenario", file, "Scenario file (JSON) or bundled scenario name")->required();

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        auto const code = app.exit(e);
        return code == 0 ? ok : validation;
    }

    try {
        if (*list) {
            for (auto const& e : mollow::catalog())
                std::printf("%-9s  %-8s  %-14s  %s\n", e.name.c_str(), e.figure.c_str(), e.file.c_str(), e.note.c_str());
            return ok;
        }
        auto const scenario = mollow::load_scenario(locate(file));
        if (*regime) {
            std::cout << mollow::to_json(mollow::scenario_regime(scenario)).dump(2) << "\n";
            return ok;
        }
        std::optional<std::string> fmt;
        if (!format.empty())
            fmt = format;
        for (auto const& p : mollow::run_scenario(scenario, out, threads, fmt))
            std::cout << p.string() << "\n";
        return ok;
    } catch (mollow::Error const& e) {
        std::cerr << "error (" << mollow::to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << "\n";
        return computation;
    }
}
