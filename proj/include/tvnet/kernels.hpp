#pragma once

#include "tvnet/types.hpp"

#include <cmath>

namespace tvnet {

/// Compactly supported kernels on [-1,1]. Normalization constants are fixed
/// for reproducibility; they cancel in the equivalent weights.
///   tricube       K(u) = (70/81) (1 - |u|^3)^3
///   epanechnikov  K(u) = (3/4)  (1 - u^2)
///   uniform       K(u) = 1/2
inline double kernel_value(KernelKind kind, double u) {
    double a = std::abs(u);
    if (a > 1.0) return 0.0;
    switch (kind) {
        case KernelKind::tricube: {
            double w = 1.0 - a * a * a;
            return (70.0 / 81.0) * w * w * w;
        }
        case KernelKind::epanechnikov:
            return 0.75 * (1.0 - u * u);
        case KernelKind::uniform:
            return 0.5;
    }
    return 0.0;
}

} // namespace tvnet
