// Command-line front end: sqed {spectrum|couplings|evolve|surface} --config FILE [--out DIR]
// Exit codes: 0 success, 1 configuration error, 2 physics or numerics error.

#include "sqed/commands.hpp"
#include "sqed/errors.hpp"
#include "sqed/run_config.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Two atoms in a coated microsphere: Green spectra, couplings, and entanglement dynamics"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    bool seedless = false;
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_dir, "output directory (overrides outputs.directory)");
    app.add_flag("--seedless", seedless, "deterministic run; accepted for compatibility, no command uses an RNG");

    auto* spectrum = app.add_subcommand("spectrum", "Im G spectra for the atom pairs, resonance report, radial map");
    auto* couplings = app.add_subcommand("couplings", "coupling matrix at the resonance");
    auto* evolve = app.add_subcommand("evolve", "two-atom dynamics trajectory");
    std::string mode = "factored";
    evolve->add_option("--mode", mode, "factored, general or lindblad")
        ->check(CLI::IsMember({"factored", "general", "lindblad"}));
    auto* surface = app.add_subcommand("surface", "concurrence over a (chi1, chi2) grid");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const sqed::RunConfig cfg = sqed::load_config(config_path);
        const std::filesystem::path out = out_dir.empty() ? cfg.output_directory : std::filesystem::path(out_dir);
        if (spectrum->parsed()) sqed::cmd_spectrum(cfg, out, std::cout);
        if (couplings->parsed()) sqed::cmd_couplings(cfg, out, std::cout);
        if (evolve->parsed()) sqed::cmd_evolve(cfg, sqed::parse_evolve_mode(mode), out, std::cout);
        if (surface->parsed()) sqed::cmd_surface(cfg, out, std::cout);
    } catch (const sqed::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const sqed::InvalidInput& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const sqed::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const sqed::DomainError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
