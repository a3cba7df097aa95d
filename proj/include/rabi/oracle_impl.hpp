#pragma once

namespace rabi {

template <class KernelFn>
ParityBlocks parity_blocks(KernelFn&& K, double x, double y) {
    // spin conjugation by the Hadamard matrix, then the reflection blocks
    auto had = [](const Kernel2x2& k) {
        const Kernel2x2 c{0.5, 0.5, 0.5, -0.5};
        return 2.0 * (c * k * c);
    };
    const Kernel2x2 a = had(K(x, y)), b = had(K(x, -y)), c = had(K(-x, y)), d = had(K(-x, -y));
    ParityBlocks r;
    r.plus = 0.5 * (a.k11 + b.k12 + c.k21 + d.k22);
    r.off_pm = 0.5 * (a.k11 - b.k12 + c.k21 - d.k22);
    r.off_mp = 0.5 * (a.k11 + b.k12 - c.k21 - d.k22);
    r.minus = 0.5 * (a.k11 - b.k12 - c.k21 + d.k22);
    return r;
}

}  // namespace rabi
