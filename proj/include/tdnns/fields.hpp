#pragma once

#include <functional>

#include "tdnns/linalg.hpp"

namespace tdnns {

/// Analytic input fields evaluated at physical points.
struct ScalarField {
    std::function<double(const Vec3&)> value;
    std::function<Vec3(const Vec3&)> gradient;
};

struct VectorField {
    std::function<Vec3(const Vec3&)> value;
    /// jacobian(i, j) = d v_i / d x_j
    std::function<Mat3(const Vec3&)> jacobian;
};

struct TensorField {
    std::function<SymTensor3(const Vec3&)> value;
};

} // namespace tdnns
