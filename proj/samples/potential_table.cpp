// Prints the potential kernel of a law on a small window together with the
// asymptotic constants.
//
//   sample_potential_table [law.json]

#include <cstdio>

#include "rwlab/rwlab.hpp"

int main(int argc, char** argv) {
    using namespace rwlab;
    try {
        const StepLaw law = argc > 1 ? load_law(argv[1]) : laws::l1();
        const auto t = a_fourier_table(law, 120);
        const auto hp = harmonic_pair(law);
        const auto c = constants(law, t, hp);
        std::printf("law %s, sigma^2 = %.17g\n", law.name.c_str(), t.sigma2);
        std::printf("%6s %22s %22s\n", "x", "a(x)", "sigma^2 a(x) - |x|");
        for (long long x : {-20LL, -5LL, -2LL, -1LL, 1LL, 2LL, 5LL, 20LL})
            std::printf("%6lld %22.15f %22.15f\n", x, t.a(x), t.sigma2 * t.a(x) - std::fabs(double(x)));
        std::printf("C+ = %.12g  C- = %.12g  C* = %.12g  lambda3 = %.12g\n", c.C_plus.value, c.C_minus.value,
                    c.C_star.value, c.lambda3);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
