#include "sqed/commands.hpp"

#include "sqed/csv.hpp"
#include "sqed/errors.hpp"
#include "sqed/lindblad_dynamics.hpp"
#include "sqed/lossless_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace sqed {

namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

const LayerStack& need_stack(const RunConfig& cfg) {
    if (!cfg.stack) throw ConfigError("this command needs a 'stack' section");
    if (cfg.atoms.size() != 2) throw ConfigError("this command needs an 'atoms' section with two atoms");
    return *cfg.stack;
}

GreenOptions green_options(const RunConfig& cfg) {
    GreenOptions o;
    o.max_n = cfg.green.max_n;
    return o;
}

void write_spectrum(const fs::path& path, const GreenSpectrum& s) {
    CsvWriter w(path, {"frequency_hz", "im_g_phiphi"});
    for (std::size_t i = 0; i < s.frequencies.size(); ++i) w.row({s.frequencies[i], s.values[i]});
}

const char* pol_name(Polarization p) { return p == Polarization::TE ? "TE" : "TM"; }

// Resonance of the atom-1 self-spectrum.
ResonanceInfo self_resonance(const RunConfig& cfg) {
    const auto& stack = need_stack(cfg);
    const double a1 = cfg.atoms[0].position;
    return locate_resonance(stack, a1, a1, cfg.window.f_min, cfg.window.f_max, std::max(5, cfg.window.samples),
                            nullptr, green_options(cfg));
}

CouplingMatrix resolve_coupling(const RunConfig& cfg, std::ostream& log) {
    const auto& d = cfg.dynamics;
    if (d.chi1) return CouplingMatrix::from_chi(*d.chi1, *d.chi2);
    if (d.gbar) {
        Eigen::Matrix2d g = *d.gbar;
        if (std::abs(g(0, 1) - g(1, 0)) > 1e-12 * std::max(1.0, std::abs(g(0, 1))))
            throw ConfigError("dynamics.gbar must be symmetric");
        g(1, 0) = g(0, 1);
        try {
            return CouplingMatrix::from_matrix(g);
        } catch (const InvalidInput& e) {
            throw ConfigError(std::string("dynamics.gbar: ") + e.what());
        }
    }
    if (d.couplings_from_stack) {
        std::ostream null_stream(nullptr);
        const CouplingReport rep = cmd_couplings(cfg, fs::path(), null_stream);
        log << "couplings from stack at " << fmt("%.6f", rep.frequency * 1e-12) << " THz: chi1="
            << fmt("%.6g", rep.coupling.chi1) << " chi2=" << fmt("%.6g", rep.coupling.chi2) << "\n";
        return rep.coupling;
    }
    throw ConfigError("dynamics needs chi1/chi2, gbar, or couplings_from_stack");
}

double plateau_fraction(const std::vector<double>& tangle) {
    if (tangle.empty()) return 0.0;
    std::size_t n = 0;
    for (double t : tangle)
        if (t > 0.5) ++n;
    return static_cast<double>(n) / static_cast<double>(tangle.size());
}

}  // namespace

std::vector<double> linspace(double lo, double hi, int samples) {
    if (samples < 1) throw InvalidInput("grid needs at least one sample");
    std::vector<double> g(static_cast<std::size_t>(samples));
    if (samples == 1) {
        g[0] = lo;
        return g;
    }
    for (int i = 0; i < samples; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (samples - 1.0);
    g.back() = hi;
    return g;
}

EvolveMode parse_evolve_mode(const std::string& name) {
    if (name == "factored") return EvolveMode::factored;
    if (name == "general") return EvolveMode::general;
    if (name == "lindblad") return EvolveMode::lindblad;
    throw ConfigError("unknown evolve mode '" + name + "' (expected factored, general or lindblad)");
}

SpectrumReport cmd_spectrum(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
    const auto& stack = need_stack(cfg);
    const GreenOptions opt = green_options(cfg);
    const double a1 = cfg.atoms[0].position, a2 = cfg.atoms[1].position;
    const auto& w = cfg.window;
    fs::create_directories(out_dir);

    SpectrumReport rep;
    const struct {
        const char* name;
        double r, rs;
    } pairs[] = {{"spectrum_a1_a1.csv", a1, a1}, {"spectrum_a1_a2.csv", a1, a2}, {"spectrum_a2_a2.csv", a2, a2}};
    for (const auto& p : pairs) {
        const GreenSpectrum s = spectrum_scan(stack, p.r, p.rs, w.f_min, w.f_max, w.samples, opt);
        write_spectrum(out_dir / p.name, s);
        rep.unconverged_samples += s.unconverged_samples;
    }
    if (rep.unconverged_samples > 0)
        log << "warning: " << rep.unconverged_samples << " spectrum samples have series tail ratio > "
            << fmt("%.0e", kTailTolerance) << "\n";

    if (w.samples < 5) {
        log << "window has fewer than 5 samples; resonance search skipped\n";
        return rep;
    }
    rep.resonance = self_resonance(cfg);
    const auto& r = *rep.resonance;
    rep.at_peak = green_phiphi(stack, a1, a1, kTwoPi * r.peak_frequency, opt);
    log << "peak_frequency_thz=" << fmt("%.6f", r.peak_frequency * 1e-12)
        << " fwhm_thz=" << fmt("%.6f", r.bandwidth_fwhm * 1e-12) << " q=" << fmt("%.2f", r.quality_factor) << "\n";
    log << "dominant term at peak: n=" << rep.at_peak.dominant_n << " " << pol_name(rep.at_peak.dominant_polarization)
        << ", Im G(a1,a1)=" << fmt("%.6g", rep.at_peak.value.imag()) << " um^-1\n";

    if (cfg.radial.enabled) {
        const double r_max = cfg.radial.r_max > 0.0 ? cfg.radial.r_max : 0.999 * stack.outer_interface();
        CsvWriter out(out_dir / "radial_map.csv", {"radius_m", "im_g_phiphi"});
        const auto radii = linspace(cfg.radial.r_min, r_max, cfg.radial.samples);
        for (double rr : radii)
            out.row({rr, green_phiphi(stack, rr, a2, kTwoPi * r.peak_frequency, opt).value.imag()});
    }
    return rep;
}

CouplingReport cmd_couplings(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
    const auto& stack = need_stack(cfg);
    const GreenOptions opt = green_options(cfg);
    CouplingReport rep;
    if (cfg.green.coupling_frequency) {
        rep.frequency = *cfg.green.coupling_frequency;
    } else {
        rep.resonance = self_resonance(cfg);
        rep.frequency = rep.resonance->peak_frequency;
    }
    const double omega = kTwoPi * rep.frequency;
    const double a1 = cfg.atoms[0].position, a2 = cfg.atoms[1].position;
    rep.coupling = coupling_matrix(stack, cfg.atoms[0], cfg.atoms[1], omega, cfg.green.coupling_scale, opt);
    rep.g11 = green_phiphi(stack, a1, a1, omega, opt);
    rep.g12 = green_phiphi(stack, a1, a2, omega, opt);
    rep.g22 = green_phiphi(stack, a2, a2, omega, opt);

    const auto& c = rep.coupling;
    log << "coupling frequency_thz=" << fmt("%.6f", rep.frequency * 1e-12) << "\n";
    log << "gbar=[[" << fmt("%.6g", c.g(0, 0)) << ", " << fmt("%.6g", c.g(0, 1)) << "], [" << fmt("%.6g", c.g(1, 0))
        << ", " << fmt("%.6g", c.g(1, 1)) << "]]\n";
    log << "chi1=" << fmt("%.6g", c.chi1) << " chi2=" << fmt("%.6g", c.chi2)
        << " chi2/chi1=" << fmt("%.4f", c.chi1 > 0.0 ? c.chi2 / c.chi1 : 0.0)
        << " rank_one_defect=" << fmt("%.4g", c.rank_one_defect) << "\n";
    log << "dominant term of G(a1,a1): n=" << rep.g11.dominant_n << " " << pol_name(rep.g11.dominant_polarization)
        << "; of G(a2,a2): n=" << rep.g22.dominant_n << " " << pol_name(rep.g22.dominant_polarization) << "\n";
    for (const auto* g : {&rep.g11, &rep.g12, &rep.g22})
        if (!g->converged)
            log << "warning: Green series not converged (tail ratio " << fmt("%.2e", g->tail_ratio) << " at n="
                << g->terms << ")\n";

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        CsvWriter w(out_dir / "couplings.csv", {"frequency_hz", "g11", "g12", "g22", "chi1", "chi2", "rank_one_defect"});
        w.row({rep.frequency, c.g(0, 0), c.g(0, 1), c.g(1, 1), c.chi1, c.chi2, c.rank_one_defect});
    }
    return rep;
}

EvolveSummary cmd_evolve(const RunConfig& cfg, EvolveMode mode, const fs::path& out_dir, std::ostream& log) {
    const auto& d = cfg.dynamics;
    const CouplingMatrix coupling = resolve_coupling(cfg, log);
    const std::vector<double> grid = linspace(0.0, d.tau_max, d.samples);
    fs::create_directories(out_dir);
    EvolveSummary sum;

    if (mode == EvolveMode::factored || mode == EvolveMode::general) {
        AmplitudeTrajectory tr;
        if (mode == EvolveMode::factored) {
            if (!d.chi1 && coupling.rank_one_defect >= 1e-3)
                throw ConfigError("factored mode needs rank-one couplings (rank_one_defect " +
                                  fmt("%.3g", coupling.rank_one_defect) + " >= 1e-3) or explicit chi1/chi2");
            tr = solve_factored(coupling.chi1, coupling.chi2, d.detuning, d.lambda0, grid);
        } else {
            tr = solve_general(DynamicsParams{coupling, d.detuning, d.lambda0, grid});
        }
        const ConcurrenceSeries cs = concurrence_series(tr);
        CsvWriter w(out_dir / (mode == EvolveMode::factored ? "trajectory_factored.csv" : "trajectory_general.csv"),
                    {"tau", "re_c1", "im_c1", "re_c2", "im_c2", "re_c3", "im_c3", "concurrence", "tangle", "mean_photon"});
        for (std::size_t i = 0; i < grid.size(); ++i)
            w.row({grid[i], tr.c1[i].real(), tr.c1[i].imag(), tr.c2[i].real(), tr.c2[i].imag(), tr.c3[i].real(),
                   tr.c3[i].imag(), cs.concurrence[i], cs.tangle[i], cs.mean_photon[i]});
        sum.max_tangle = *std::max_element(cs.tangle.begin(), cs.tangle.end());
        sum.plateau_fraction = plateau_fraction(cs.tangle);
    } else {
        if (coupling.rank_one_defect >= 1e-3)
            throw ConfigError("lindblad mode couples both atoms to one field mode and needs rank-one couplings");
        double gamma1 = 0.0;
        if (cfg.dissipation.gamma1) {
            gamma1 = *cfg.dissipation.gamma1;
        } else if (cfg.dissipation.derive_from_bandwidth) {
            const ResonanceInfo r = self_resonance(cfg);
            // Half the FWHM in units of omega_at, with omega_f = (1 + detuning) omega_at.
            gamma1 = 0.5 * r.bandwidth_fwhm * (1.0 + d.detuning) / r.peak_frequency;
            log << "gamma1 from bandwidth: fwhm_thz=" << fmt("%.6f", r.bandwidth_fwhm * 1e-12)
                << " f_f_thz=" << fmt("%.6f", r.peak_frequency * 1e-12) << "\n";
        }
        sum.gamma1 = gamma1;
        SystemSpec spec;
        spec.omega_f = 1.0 + d.detuning;
        spec.chi1 = coupling.chi1;
        spec.chi2 = coupling.g(0, 1) < 0.0 ? -coupling.chi2 : coupling.chi2;
        spec.gamma1 = gamma1;
        spec.photon_cutoff = cfg.dissipation.photon_cutoff;
        const JointDensityMatrix rho0 =
            d.lambda0 == 1 ? single_excitation_state(1.0, 0.0, 0.0, spec.photon_cutoff)
                           : single_excitation_state(0.0, 1.0, 0.0, spec.photon_cutoff);
        EvolveOptions opt;
        opt.dt = cfg.dissipation.dt;
        opt.check_halving = cfg.dissipation.check_halving;
        opt.keep_states = cfg.dissipation.dump_states;
        const DensityTrajectory tr = evolve(spec, rho0, grid, opt);
        CsvWriter w(out_dir / "trajectory_lindblad.csv",
                    {"tau", "concurrence", "tangle", "mean_photon", "trace", "min_eigenvalue"});
        for (std::size_t i = 0; i < grid.size(); ++i)
            w.row({grid[i], tr.concurrence[i], tr.tangle[i], tr.mean_photon[i], tr.trace[i], tr.min_eigenvalue[i]});
        if (cfg.dissipation.dump_states) {
            std::vector<std::string> header{"tau"};
            const int dim = spec.dimension();
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) {
                    header.push_back("re_" + std::to_string(i) + "_" + std::to_string(j));
                    header.push_back("im_" + std::to_string(i) + "_" + std::to_string(j));
                }
            CsvWriter sw(out_dir / "lindblad_states.csv", header);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                std::vector<double> row{grid[k]};
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j) {
                        row.push_back(tr.states[k](i, j).real());
                        row.push_back(tr.states[k](i, j).imag());
                    }
                sw.row(row);
            }
        }
        sum.max_tangle = *std::max_element(tr.tangle.begin(), tr.tangle.end());
        sum.plateau_fraction = plateau_fraction(tr.tangle);
        sum.step_converged = tr.step_converged;
        log << "gamma1=" << fmt("%.6g", gamma1) << " max_trace_drift=" << fmt("%.3e", tr.max_trace_drift)
            << " max_hermiticity_defect=" << fmt("%.3e", tr.max_hermiticity_defect) << "\n";
        if (cfg.dissipation.check_halving && !tr.step_converged)
            log << "warning: step halving changed the concurrence by " << fmt("%.3e", tr.halving_change) << "\n";
    }
    log << "max_tangle=" << fmt("%.6f", sum.max_tangle) << " plateau_fraction=" << fmt("%.4f", sum.plateau_fraction)
        << "\n";
    return sum;
}

SurfaceSummary cmd_surface(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
    const auto& s = cfg.surface;
    const auto chi1 = linspace(s.chi1_min, s.chi1_max, s.chi1_samples);
    const auto chi2 = linspace(s.chi2_min, s.chi2_max, s.chi2_samples);
    const double detuning = s.detuning.value_or(cfg.dynamics.detuning);
    const int lambda0 = s.lambda0.value_or(cfg.dynamics.lambda0);
    const Eigen::MatrixXd surf = concurrence_surface(chi1, chi2, detuning, lambda0, s.tau);

    fs::create_directories(out_dir);
    CsvWriter w(out_dir / "surface.csv", {"chi1", "chi2", "concurrence"});
    SurfaceSummary sum;
    sum.max_concurrence = -1.0;
    for (std::size_t i = 0; i < chi1.size(); ++i)
        for (std::size_t j = 0; j < chi2.size(); ++j) {
            const double c = surf(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            w.row({chi1[i], chi2[j], c});
            if (c > sum.max_concurrence) {
                sum.max_concurrence = c;
                sum.chi1_at_max = chi1[i];
                sum.chi2_at_max = chi2[j];
            }
        }
    log << "max_concurrence=" << fmt("%.6f", sum.max_concurrence) << " at chi1=" << fmt("%.6g", sum.chi1_at_max)
        << " chi2=" << fmt("%.6g", sum.chi2_at_max) << "\n";
    return sum;
}

}  // namespace sqed
