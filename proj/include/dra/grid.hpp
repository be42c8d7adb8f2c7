#pragma once

#include "dra/errors.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace dra {

/// Evenly spaced axis with inclusive endpoints; steps == 1 yields {min}.
struct GridAxis {
    double min = 0.0;
    double max = 0.0;
    std::size_t steps = 1;

    void validate(const std::string& name) const {
        if (steps < 1) throw DomainError(name + "-steps must be >= 1");
        if (!std::isfinite(min) || !std::isfinite(max)) throw DomainError(name + " bounds must be finite");
        if (max < min) throw DomainError(name + "-max must be >= " + name + "-min");
    }

    double at(std::size_t i) const {
        if (steps == 1) return min;
        if (i + 1 == steps) return max;
        return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
    }

    std::vector<double> values() const {
        std::vector<double> out(steps);
        for (std::size_t i = 0; i < steps; ++i) out[i] = at(i);
        return out;
    }
};

} // namespace dra
