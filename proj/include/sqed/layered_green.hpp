#pragma once

// Layered dielectric sphere: tangential Green function G_phiphi(r, r', omega)
// for two points on the equator (theta = pi/2, phi = 0), resonance location,
// and the atom-field coupling matrix.
//
// Units: the public API takes lengths in meters and angular frequencies in
// rad/s. Internally lengths are converted to micrometers, so returned Green
// function values are in um^-1 (free space: Im G(r, r) = k/(6 pi)).

#include "sqed/wave_basis.hpp"

#include <Eigen/Core>

#include <limits>
#include <optional>
#include <vector>

namespace sqed {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

enum class Polarization { TE, TM };

/// One spherical shell, described by its outer radius. The outermost layer
/// (the surrounding medium) has outer_radius = +inf.
struct Layer {
    double outer_radius = std::numeric_limits<double>::infinity();  // m
    cplx index{1.0, 0.0};
};

/// Immutable, validated list of layers, innermost (core) first.
class LayerStack {
public:
    explicit LayerStack(std::vector<Layer> layers);

    const std::vector<Layer>& layers() const { return layers_; }
    std::size_t size() const { return layers_.size(); }
    /// Index of the layer containing radius r (m). An interface radius belongs
    /// to the outer layer.
    std::size_t layer_of(double r) const;
    /// Largest finite interface radius, m.
    double outer_interface() const;
    /// max |Re n| over all layers.
    double max_index() const;

private:
    std::vector<Layer> layers_;
};

/// Input row for build_stack: give either a thickness or an absolute outer
/// radius (both in m). For the core, the thickness is its radius.
struct LayerSpec {
    std::optional<double> thickness;
    std::optional<double> outer_radius;
    cplx index{1.0, 0.0};
};

/// Validates finite layers (innermost first) and appends the ambient medium.
LayerStack build_stack(const std::vector<LayerSpec>& finite_layers, cplx ambient_index = {1.0, 0.0});

/// Quarter-wave thickness lambda0 / (4 n).
double quarter_wave_thickness(double lambda0, double index);

/// Homogeneous sphere of the given radius (m) and index in a medium of index 1.
LayerStack homogeneous_sphere(double radius, cplx index);

struct AtomPlacement {
    double position = 0.0;  // radial coordinate, m
    double dipole = 1.0;    // dimensionless magnitude, tangential orientation
};

/// Radial wave amplitudes for one spherical order. Inside layer l the regular
/// solution is a_l psi_n(k_l r) + b_l xi_n(k_l r) (a = 1, b = 0 in the core) and
/// the outgoing solution is c_l psi_n + d_l xi_n (c = 0, d = 1 outside).
struct ScatteringCoefficients {
    int n = 1;
    Polarization polarization = Polarization::TE;
    std::vector<cplx> a, b, c, d;
    /// Largest relative mismatch of the matched quantities across interfaces.
    double continuity_residual = 0.0;
};

ScatteringCoefficients scattering_coefficients(const LayerStack& stack, const SphericalOrder& order, double omega,
                                               Polarization polarization);

enum class DirectTerm {
    closed_form,  ///< free-space dyadic term in closed form, regularized at r = r'
    series,       ///< free-space term summed in the same spherical expansion (r != r' only)
    none,         ///< scattering part only
};

struct GreenOptions {
    int max_n = 0;   ///< 0 selects max(20, ceil(k_max R_outer) + 12), extended to 100 if the tail is large
    int max_m = -1;  ///< < 0 sums m fully
    DirectTerm direct = DirectTerm::closed_form;
};

struct GreenValue {
    cplx value;       ///< direct + scattering
    cplx scattering;  ///< series part
    cplx direct;
    int terms = 0;           ///< number of n terms summed
    double tail_ratio = 0.0;  ///< |last n term| / |series sum|
    bool converged = true;    ///< tail_ratio <= 1e-6
    int dominant_n = 0;       ///< n with the largest |Im| contribution
    Polarization dominant_polarization = Polarization::TE;
};

inline constexpr double kTailTolerance = 1e-6;
inline constexpr int kMaxOrder = 100;

/// G_phiphi(r, r_src, omega) with both points at theta = pi/2, phi = 0.
GreenValue green_phiphi(const LayerStack& stack, double r, double r_src, double omega,
                        const GreenOptions& options = {});

/// Angular weight of order n after the m-sum, for the TE or TM channel.
/// Equals (2n+1)/2 when m is summed fully.
double angular_weight(int n, int max_m, Polarization polarization);

struct GreenSpectrum {
    std::vector<double> frequencies;  // Hz
    std::vector<double> values;       // Im G_phiphi, um^-1
    double source_position = 0.0;     // m
    double field_position = 0.0;      // m
    int unconverged_samples = 0;
};

GreenSpectrum spectrum_scan(const LayerStack& stack, double r, double r_src, double f_min, double f_max,
                            int samples, const GreenOptions& options = {});

struct ResonanceInfo {
    double peak_frequency = 0.0;  // Hz
    double peak_value = 0.0;
    double bandwidth_fwhm = 0.0;  // Hz
    double quality_factor = 0.0;
};

/// Parabolic peak of the global maximum and linear-interpolated FWHM.
ResonanceInfo find_resonance(const GreenSpectrum& spectrum);

/// Coarse scan, fine rescan around the coarse maximum, then find_resonance on
/// the merged grid. Returns the merged spectrum through `merged` if given.
ResonanceInfo locate_resonance(const LayerStack& stack, double r, double r_src, double f_min, double f_max,
                               int coarse_samples, GreenSpectrum* merged = nullptr,
                               const GreenOptions& options = {});

/// Scale turning Im G (um^-1) into the dimensionless coupling Gbar. Calibrated
/// once so that the reference coated sphere gives chi1 = 1.72 for an atom at
/// 0.9 um at its self-spectrum peak (215.05 THz); only ratios of couplings are
/// physical.
inline constexpr double kDefaultCouplingScale = 0.6718;

struct CouplingMatrix {
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    double chi1 = 0.0;
    double chi2 = 0.0;
    double rank_one_defect = 0.0;

    static CouplingMatrix from_matrix(const Eigen::Matrix2d& g);
    /// Rank-one matrix with Gbar(i,j) = chi_i chi_j.
    static CouplingMatrix from_chi(double chi1, double chi2);
};

CouplingMatrix coupling_matrix(const LayerStack& stack, const AtomPlacement& atom1, const AtomPlacement& atom2,
                               double omega_f, double scale = kDefaultCouplingScale,
                               const GreenOptions& options = {});

}  // namespace sqed
