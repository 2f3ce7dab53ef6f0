#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rwlab/numerics/summation.hpp"

namespace rwlab {

/// Real weights on the consecutive sites offset, offset+1, ...
struct LatticeDistribution {
    long long offset = 0;
    std::vector<double> weights;

    [[nodiscard]] long long lo() const noexcept { return offset; }
    [[nodiscard]] long long hi() const noexcept {
        return offset + static_cast<long long>(weights.size()) - 1;
    }
    [[nodiscard]] bool empty() const noexcept { return weights.empty(); }

    [[nodiscard]] double at(long long y) const noexcept {
        if (y < lo() || y > hi()) return 0.0;
        return weights[static_cast<std::size_t>(y - offset)];
    }

    [[nodiscard]] double mass() const { return numerics::compensated_total(weights); }

    /// Sum of weights over the sites in [a, b].
    [[nodiscard]] double mass_between(long long a, long long b) const {
        numerics::CompensatedSum s;
        for (long long y = std::max(a, lo()); y <= std::min(b, hi()); ++y)
            s.add(weights[static_cast<std::size_t>(y - offset)]);
        return s.value();
    }

    static LatticeDistribution point_mass(long long x) {
        LatticeDistribution d;
        d.offset = x;
        d.weights = {1.0};
        return d;
    }
};

}  // namespace rwlab
