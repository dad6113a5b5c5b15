#pragma once

#include <Eigen/Core>

#include <array>

namespace sqed::detail {

// Eigen-decomposition of the symmetric coupling matrix. Eigenvalues ascending;
// each eigenvector is normalized with a non-negative component sum.
struct CouplingModes {
    std::array<double, 2> alpha{};
    std::array<Eigen::Vector2d, 2> v;
    int dominant = 1;  // index of the largest eigenvalue
};

CouplingModes coupling_modes(const Eigen::Matrix2d& g);

}  // namespace sqed::detail
