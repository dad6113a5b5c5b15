#pragma once

// Pipeline commands behind the CLI verbs. Each command writes its CSV files
// into `out_dir`, prints a short report to `log`, and returns the numbers it
// printed. Errors propagate as ConfigError (bad or inconsistent config) or
// NumericalError / DomainError (physics or numerics).

#include "sqed/layered_green.hpp"
#include "sqed/run_config.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace sqed {

struct SpectrumReport {
    std::optional<ResonanceInfo> resonance;  ///< absent when the window has fewer than 5 samples
    GreenValue at_peak;                      ///< G(a1, a1) at the peak, with the dominant-term diagnostic
    int unconverged_samples = 0;
};

struct CouplingReport {
    double frequency = 0.0;  // Hz, where the couplings were evaluated
    std::optional<ResonanceInfo> resonance;
    CouplingMatrix coupling;
    GreenValue g11, g12, g22;
};

enum class EvolveMode { factored, general, lindblad };

struct EvolveSummary {
    double max_tangle = 0.0;
    double plateau_fraction = 0.0;  ///< fraction of samples with C^2 > 0.5
    double gamma1 = 0.0;            ///< lindblad mode only
    bool step_converged = true;
};

struct SurfaceSummary {
    double max_concurrence = 0.0;
    double chi1_at_max = 0.0;
    double chi2_at_max = 0.0;
};

SpectrumReport cmd_spectrum(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
CouplingReport cmd_couplings(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
EvolveSummary cmd_evolve(const RunConfig& cfg, EvolveMode mode, const std::filesystem::path& out_dir, std::ostream& log);
SurfaceSummary cmd_surface(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

EvolveMode parse_evolve_mode(const std::string& name);

/// Uniform grid of `samples` points from lo to hi inclusive (a single point is lo).
std::vector<double> linspace(double lo, double hi, int samples);

}  // namespace sqed
