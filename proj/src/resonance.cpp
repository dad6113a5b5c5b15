#include "parallel.hpp"
#include "sqed/errors.hpp"
#include "sqed/layered_green.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>

namespace sqed {

GreenSpectrum spectrum_scan(const LayerStack& stack, double r, double r_src, double f_min, double f_max, int samples,
                            const GreenOptions& options) {
    if (!(f_min > 0.0) || !(f_min < f_max)) throw InvalidInput("spectrum window needs 0 < f_min < f_max");
    if (samples < 2) throw InvalidInput("spectrum needs at least 2 samples");
    GreenSpectrum s;
    s.source_position = r_src;
    s.field_position = r;
    const auto count = static_cast<std::size_t>(samples);
    s.frequencies.resize(count);
    s.values.resize(count);
    for (std::size_t i = 0; i < count; ++i)
        s.frequencies[i] = f_min + (f_max - f_min) * static_cast<double>(i) / static_cast<double>(samples - 1);
    s.frequencies.back() = f_max;
    std::atomic<int> unconverged{0};
    detail::parallel_for(count, [&](std::size_t i) {
        const GreenValue g = green_phiphi(stack, r, r_src, 2.0 * std::numbers::pi * s.frequencies[i], options);
        s.values[i] = g.value.imag();
        if (!g.converged) ++unconverged;
    });
    s.unconverged_samples = unconverged.load();
    return s;
}

ResonanceInfo find_resonance(const GreenSpectrum& spectrum) {
    const auto& f = spectrum.frequencies;
    const auto& v = spectrum.values;
    if (f.size() != v.size()) throw InvalidInput("spectrum frequency and value lengths differ");
    if (f.size() < 5) throw InvalidInput("resonance search needs at least 5 samples");
    for (std::size_t i = 1; i < f.size(); ++i)
        if (!(f[i] > f[i - 1])) throw InvalidInput("spectrum frequencies must be strictly increasing");

    const auto top = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    if (top == 0 || top + 1 == v.size() || !(v[top] > v[top - 1]) || !(v[top] > v[top + 1]))
        throw NumericalError("spectrum has no strict interior maximum");

    // Parabola through the three samples around the maximum.
    const double x0 = f[top - 1], x1 = f[top], x2 = f[top + 1];
    const double y0 = v[top - 1], y1 = v[top], y2 = v[top + 1];
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double curv = (d12 - d01) / (x2 - x0);
    ResonanceInfo info;
    if (curv < 0.0) {
        const double slope_mid = d01 + curv * (x1 - x0);
        // y(x) = y1 + slope_mid (x - x1) + curv (x - x1)^2
        const double dx = -slope_mid / (2.0 * curv);
        info.peak_frequency = x1 + std::clamp(dx, x0 - x1, x2 - x1);
        info.peak_value = y1 + slope_mid * (info.peak_frequency - x1) +
                          curv * (info.peak_frequency - x1) * (info.peak_frequency - x1);
    } else {
        info.peak_frequency = x1;
        info.peak_value = y1;
    }

    const double half = 0.5 * info.peak_value;
    double left = -1.0, right = -1.0;
    for (std::size_t i = top; i > 0; --i) {
        if (v[i - 1] < half) {
            left = f[i - 1] + (half - v[i - 1]) * (f[i] - f[i - 1]) / (v[i] - v[i - 1]);
            break;
        }
    }
    for (std::size_t i = top; i + 1 < v.size(); ++i) {
        if (v[i + 1] < half) {
            right = f[i] + (v[i] - half) * (f[i + 1] - f[i]) / (v[i] - v[i + 1]);
            break;
        }
    }
    if (left < 0.0 || right < 0.0) throw NumericalError("half maximum is not bracketed inside the spectrum window");
    info.bandwidth_fwhm = right - left;
    info.quality_factor = info.peak_frequency / info.bandwidth_fwhm;
    return info;
}

ResonanceInfo locate_resonance(const LayerStack& stack, double r, double r_src, double f_min, double f_max,
                               int coarse_samples, GreenSpectrum* merged, const GreenOptions& options) {
    GreenSpectrum coarse = spectrum_scan(stack, r, r_src, f_min, f_max, coarse_samples, options);
    const auto& v = coarse.values;
    const auto top = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    if (top == 0 || top + 1 == v.size()) throw NumericalError("spectrum has no strict interior maximum");

    const double step = coarse.frequencies[1] - coarse.frequencies[0];
    const GreenSpectrum fine = spectrum_scan(stack, r, r_src, coarse.frequencies[top] - step,
                                             coarse.frequencies[top] + step, 41, options);
    GreenSpectrum all = coarse;
    for (std::size_t i = 0; i < fine.frequencies.size(); ++i) {
        all.frequencies.push_back(fine.frequencies[i]);
        all.values.push_back(fine.values[i]);
    }
    std::vector<std::size_t> order(all.frequencies.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return all.frequencies[x] < all.frequencies[y]; });
    GreenSpectrum sorted = coarse;
    sorted.frequencies.clear();
    sorted.values.clear();
    for (std::size_t i : order) {
        if (!sorted.frequencies.empty() && !(all.frequencies[i] > sorted.frequencies.back())) continue;
        sorted.frequencies.push_back(all.frequencies[i]);
        sorted.values.push_back(all.values[i]);
    }
    sorted.unconverged_samples = coarse.unconverged_samples + fine.unconverged_samples;
    const ResonanceInfo info = find_resonance(sorted);
    if (merged) *merged = std::move(sorted);
    return info;
}

}  // namespace sqed
