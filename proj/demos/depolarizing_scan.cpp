// Symmetric-extension test of the qubit depolarizing channel across p.
// The Choi fidelity is 1 - 3p/4; the verdict flips at p = 1/3.

#include "symext/symext.hpp"

#include <cstdio>

int main() {
    using namespace symext;
    for (int i = 0; i <= 10; ++i) {
        const double p = 0.05 * i;
        const auto res = test_channel(depolarizing_channel(2, p));
        std::printf("p = %.2f  F = %.4f  %-20s %s\n", p, 1.0 - 0.75 * p, to_string(res.certificate.verdict),
                    res.conclusion.c_str());
    }
}
