#pragma once

#include <string>
#include <vector>

#include "rwlab/walk_model.hpp"

namespace rwlab::laws {

/// Simple random walk, +-1 with probability 1/2.
inline StepLaw srw() { return build_law({{-1, Rational(1, 2)}, {1, Rational(1, 2)}}, "srw"); }

/// Right-continuous law with jumps down to -2.
inline StepLaw l1() {
    return build_law({{-2, Rational(1, 6)}, {-1, Rational(1, 6)}, {0, Rational(1, 6)}, {1, Rational(1, 2)}},
                     "l1");
}

/// Period 3, congruence class 2.
inline StepLaw skip3() { return build_law({{-1, Rational(2, 3)}, {2, Rational(1, 3)}}, "skip3"); }

/// Symmetric with period 2.
inline StepLaw odd_symmetric() {
    return build_law({{-3, Rational(1, 4)}, {-1, Rational(1, 4)}, {1, Rational(1, 4)}, {3, Rational(1, 4)}},
                     "odd_symmetric");
}

/// Asymmetric, neither left nor right continuous.
inline StepLaw wide() {
    return build_law({{-4, Rational(1, 5)}, {-1, Rational(1, 5)}, {1, Rational(1, 5)}, {2, Rational(2, 5)}},
                     "wide");
}

inline std::vector<StepLaw> all() { return {srw(), l1(), skip3(), odd_symmetric(), wide()}; }

}  // namespace rwlab::laws
