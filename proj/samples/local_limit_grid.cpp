// Compares the point-absorbed kernel of the default law with its local limit
// on a small ladder of n and prints the convergence summary.

#include <cstdio>

#include "rwlab/rwlab.hpp"

int main() {
    using namespace rwlab;
    const auto ctx = build_context(laws::l1());
    ExactOracle ex(ctx.law);
    GridSpec g;
    g.theorem = TheoremId::T11i;
    g.xi = {0.2};
    g.eta = {0.2, -0.2};
    g.n = {64, 256, 1024};
    const auto r = compare_grid(g, ctx, ex);
    std::fputs(report_csv(r).c_str(), stdout);
    std::fputs(convergence_report({r}).text().c_str(), stdout);
    return 0;
}
