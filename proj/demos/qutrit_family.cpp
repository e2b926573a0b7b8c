// Walks the qutrit example family: entangled for every F > 0, yet extendible
// (so no one-way distillable entanglement) up to F = 1/2.

#include "symext/symext.hpp"

#include <cstdio>

int main() {
    using namespace symext;
    std::printf("%6s  %-20s  %10s  %10s  %6s\n", "F", "verdict", "negativity", "hashing", "iters");
    for (int i = 0; i <= 10; ++i) {
        const double f = 0.1 * i;
        const auto rho = example_state(f);
        const auto cert = solve_extension({rho});
        std::printf("%6.2f  %-20s  %10.4f  %10.4f  %6d\n", f, to_string(cert.verdict), negativity(rho),
                    hashing_lower_bound(rho), cert.iterations);
    }
}
