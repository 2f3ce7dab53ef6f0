#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rwlab/error.hpp"

namespace rwlab {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kDefaultMaxSpan = 64;

struct RawPair {
    int increment = 0;
    Rational weight;
};

/// Finite-support increment law with exact weights.
///
/// `weights[k]` is the mass at `support_min + k`. Construct through build_law,
/// which enforces unit mass, zero mean and irreducibility.
struct StepLaw {
    std::string name;
    int support_min = 0;
    int support_max = 0;
    std::vector<Rational> weights;
    std::vector<double> probs;
    bool left_continuous = false;
    bool right_continuous = false;

    [[nodiscard]] int span() const noexcept { return support_max - support_min; }

    [[nodiscard]] double p(int z) const noexcept {
        if (z < support_min || z > support_max) return 0.0;
        return probs[static_cast<std::size_t>(z - support_min)];
    }

    [[nodiscard]] Rational p_exact(int z) const {
        if (z < support_min || z > support_max) return Rational(0);
        return weights[static_cast<std::size_t>(z - support_min)];
    }

    /// Increments carrying positive mass, ascending.
    [[nodiscard]] std::vector<int> support() const {
        std::vector<int> out;
        for (int z = support_min; z <= support_max; ++z)
            if (p_exact(z) > 0) out.push_back(z);
        return out;
    }

    /// P[Y <= t].
    [[nodiscard]] double cdf(int t) const noexcept {
        double s = 0.0;
        for (int z = support_min; z <= std::min(t, support_max); ++z) s += p(z);
        return s;
    }

    /// P[Y >= t].
    [[nodiscard]] double survival(int t) const noexcept {
        double s = 0.0;
        for (int z = std::max(t, support_min); z <= support_max; ++z) s += p(z);
        return s;
    }
};

struct Moments {
    Rational sigma2;
    Rational m3_pos;
    Rational m3_neg;
    Rational lambda3;
    bool left_continuous = false;
    bool right_continuous = false;

    [[nodiscard]] double sigma2_d() const { return static_cast<double>(sigma2); }
    [[nodiscard]] double lambda3_d() const { return static_cast<double>(lambda3); }
};

struct LatticeStructure {
    int period = 1;
    int congruence_class = 0;
};

namespace detail {

inline long long floor_mod(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

inline double to_double(const Rational& r) { return static_cast<double>(r); }

}  // namespace detail

inline StepLaw build_law(std::vector<RawPair> pairs, std::string name = {},
                         int max_span = kDefaultMaxSpan) {
    require(!pairs.empty(), ErrorCode::InvalidArgument, "step law has no pairs");
    std::sort(pairs.begin(), pairs.end(),
              [](const RawPair& a, const RawPair& b) { return a.increment < b.increment; });
    for (std::size_t i = 1; i < pairs.size(); ++i)
        require(pairs[i].increment != pairs[i - 1].increment, ErrorCode::InvalidArgument,
                "duplicate increment " + std::to_string(pairs[i].increment));

    Rational total = 0;
    Rational mean = 0;
    int lo = 0, hi = 0;
    bool any = false;
    for (const auto& pr : pairs) {
        require(pr.weight >= 0, ErrorCode::InvalidArgument,
                "negative weight at increment " + std::to_string(pr.increment));
        total += pr.weight;
        mean += pr.weight * pr.increment;
        if (pr.weight > 0) {
            if (!any) lo = pr.increment;
            hi = pr.increment;
            any = true;
        }
    }
    require(total == 1, ErrorCode::NonUnitMass, "weights sum to " + total.str());
    require(mean == 0, ErrorCode::NonzeroMean, "mean is " + mean.str());
    require(hi - lo <= max_span, ErrorCode::SupportTooWide,
            "support span " + std::to_string(hi - lo) + " exceeds " + std::to_string(max_span));

    long long g = 0;
    for (const auto& pr : pairs)
        if (pr.weight > 0) g = std::gcd(g, static_cast<long long>(std::abs(pr.increment)));
    require(g == 1, ErrorCode::Reducible,
            "support generates " + std::to_string(g) + "Z, not the full lattice");

    StepLaw law;
    law.name = std::move(name);
    law.support_min = lo;
    law.support_max = hi;
    law.weights.assign(static_cast<std::size_t>(hi - lo + 1), Rational(0));
    for (const auto& pr : pairs)
        if (pr.weight > 0) law.weights[static_cast<std::size_t>(pr.increment - lo)] = pr.weight;
    law.probs.reserve(law.weights.size());
    for (const auto& w : law.weights) law.probs.push_back(detail::to_double(w));
    law.left_continuous = lo >= -1;
    law.right_continuous = hi <= 1;
    return law;
}

inline Moments moments(const StepLaw& law) {
    Moments m;
    Rational third = 0;
    for (int z = law.support_min; z <= law.support_max; ++z) {
        const Rational w = law.p_exact(z);
        m.sigma2 += w * z * z;
        const Rational c = w * z * z * z;
        if (z > 0) m.m3_pos += c;
        if (z < 0) m.m3_neg += c;
        third += c;
    }
    m.lambda3 = third / (3 * m.sigma2);
    m.left_continuous = law.left_continuous;
    m.right_continuous = law.right_continuous;
    return m;
}

/// Exact raw moment E[Y^k].
inline Rational raw_moment(const StepLaw& law, int k) {
    Rational s = 0;
    for (int z = law.support_min; z <= law.support_max; ++z) {
        Rational w = law.p_exact(z);
        if (w == 0) continue;
        Rational zk = 1;
        for (int i = 0; i < k; ++i) zk *= z;
        s += w * zk;
    }
    return s;
}

inline LatticeStructure lattice_structure(const StepLaw& law) {
    const auto sup = law.support();
    long long d = 0;
    for (int z : sup) d = std::gcd(d, static_cast<long long>(z - sup.front()));
    LatticeStructure ls;
    ls.period = d == 0 ? 1 : static_cast<int>(d);
    ls.congruence_class = static_cast<int>(detail::floor_mod(sup.front(), ls.period));
    return ls;
}

/// Characteristic function E[e^{ilY}] split into real and imaginary parts.
inline std::pair<double, double> char_fn(const StepLaw& law, double l) {
    double c = 0.0, s = 0.0;
    for (int z = law.support_min; z <= law.support_max; ++z) {
        const double w = law.p(z);
        if (w == 0.0) continue;
        c += w * std::cos(z * l);
        s += w * std::sin(z * l);
    }
    return {c, s};
}

/// The law of -Y.
inline StepLaw reflected(const StepLaw& law) {
    StepLaw r;
    r.name = law.name.empty() ? std::string("reflected") : law.name + "*";
    r.support_min = -law.support_max;
    r.support_max = -law.support_min;
    r.weights.assign(law.weights.rbegin(), law.weights.rend());
    r.probs.assign(law.probs.rbegin(), law.probs.rend());
    r.left_continuous = law.right_continuous;
    r.right_continuous = law.left_continuous;
    return r;
}

/// True iff a displacement is reachable in n steps on the walk's sublattice.
inline bool reachable(const LatticeStructure& ls, long long n, long long displacement) {
    const long long d = ls.period;
    return detail::floor_mod(displacement - n * ls.congruence_class, d) == 0;
}

}  // namespace rwlab
