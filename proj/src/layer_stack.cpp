#include "sqed/errors.hpp"
#include "sqed/layered_green.hpp"

#include <cmath>
#include <string>

namespace sqed {

LayerStack::LayerStack(std::vector<Layer> layers) : layers_(std::move(layers)) {
    if (layers_.size() < 2) throw InvalidInput("a layer stack needs at least a core and a surrounding medium");
    double prev = 0.0;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const auto& l = layers_[i];
        const bool last = i + 1 == layers_.size();
        if (!std::isfinite(l.index.real()) || !std::isfinite(l.index.imag()))
            throw InvalidInput("layer " + std::to_string(i) + " has a non-finite index");
        if (l.index.imag() < 0.0)
            throw InvalidInput("layer " + std::to_string(i) + " has negative Im n (gain medium)");
        if (l.index.real() <= 0.0) throw InvalidInput("layer " + std::to_string(i) + " needs Re n > 0");
        if (last) {
            if (!std::isinf(l.outer_radius)) throw InvalidInput("outermost layer must extend to infinity");
        } else {
            if (!std::isfinite(l.outer_radius) || !(l.outer_radius > prev))
                throw InvalidInput("layer radii must be finite and strictly increasing");
            prev = l.outer_radius;
        }
    }
}

std::size_t LayerStack::layer_of(double r) const {
    for (std::size_t i = 0; i + 1 < layers_.size(); ++i)
        if (r < layers_[i].outer_radius) return i;
    return layers_.size() - 1;
}

double LayerStack::outer_interface() const { return layers_[layers_.size() - 2].outer_radius; }

double LayerStack::max_index() const {
    double m = 0.0;
    for (const auto& l : layers_) m = std::max(m, std::abs(l.index.real()));
    return m;
}

LayerStack build_stack(const std::vector<LayerSpec>& finite_layers, cplx ambient_index) {
    if (finite_layers.empty()) throw InvalidInput("at least one finite layer (the core) is required");
    std::vector<Layer> layers;
    double radius = 0.0;
    for (std::size_t i = 0; i < finite_layers.size(); ++i) {
        const auto& s = finite_layers[i];
        if (s.thickness.has_value() == s.outer_radius.has_value())
            throw InvalidInput("layer " + std::to_string(i) + ": give exactly one of thickness and outer radius");
        if (s.thickness) {
            if (!(*s.thickness > 0.0)) throw InvalidInput("layer " + std::to_string(i) + ": thickness must be > 0");
            radius += *s.thickness;
        } else {
            radius = *s.outer_radius;
        }
        layers.push_back({radius, s.index});
    }
    layers.push_back({std::numeric_limits<double>::infinity(), ambient_index});
    return LayerStack(std::move(layers));
}

double quarter_wave_thickness(double lambda0, double index) {
    if (!(lambda0 > 0.0) || !(index > 0.0)) throw InvalidInput("quarter-wave helper needs lambda0 > 0 and n > 0");
    return lambda0 / (4.0 * index);
}

LayerStack homogeneous_sphere(double radius, cplx index) {
    return build_stack({LayerSpec{radius, std::nullopt, index}});
}

}  // namespace sqed
