#pragma once

// Run configuration for the command-line tool. The file is JSON; every
// physical quantity carries its unit in the key name (_um, _thz, _omega_at).
// Unknown keys are rejected. See configs/ for complete examples.

#include "sqed/layered_green.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sqed {

struct FrequencyWindow {
    double f_min = 200e12;  // Hz
    double f_max = 280e12;  // Hz
    int samples = 801;
};

struct RadialMap {
    bool enabled = true;
    double r_min = 0.05e-6;  // m
    double r_max = 0.0;      // m; 0 selects just inside the outermost interface
    int samples = 200;
};

struct GreenConfig {
    int max_n = 0;
    double coupling_scale = kDefaultCouplingScale;
    std::optional<double> coupling_frequency;  // Hz; default is the detected resonance
};

struct DynamicsConfig {
    std::optional<double> chi1, chi2;
    std::optional<Eigen::Matrix2d> gbar;
    bool couplings_from_stack = false;
    double detuning = 0.5;  // units of omega_at
    int lambda0 = 1;
    double tau_max = 200.0;
    int samples = 4000;
};

struct DissipationConfig {
    std::optional<double> gamma1;  // units of omega_at
    bool derive_from_bandwidth = false;
    int photon_cutoff = 2;
    double dt = 1e-3;
    bool check_halving = true;
    bool dump_states = false;
};

struct SurfaceConfig {
    double chi1_min = 0.0, chi1_max = 1.0;
    int chi1_samples = 101;
    double chi2_min = 0.0, chi2_max = 1.0;
    int chi2_samples = 101;
    double tau = 27.0;
    std::optional<double> detuning;  // defaults to dynamics.detuning
    std::optional<int> lambda0;      // defaults to dynamics.lambda0
};

struct RunConfig {
    std::optional<LayerStack> stack;
    std::vector<AtomPlacement> atoms;  // exactly two when present
    FrequencyWindow window;
    RadialMap radial;
    GreenConfig green;
    DynamicsConfig dynamics;
    DissipationConfig dissipation;
    SurfaceConfig surface;
    std::filesystem::path output_directory = "out";
};

/// Parses and validates a configuration. Throws ConfigError with the offending key.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace sqed
