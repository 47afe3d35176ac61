#pragma once

#include <cstdint>
#include <optional>

namespace empathic::core {

struct Thresholds {
    double eps_prime = 0.01;   // smallest meaningful intensity
    double delta = 0.015;      // distributed tolerance on |omega_j - 1|
    double rho0 = 0.9;         // density threshold for high resilience
    double eps_min = 1e-4;     // strictness slack when eps is not the objective
    std::optional<double> big_m;  // defaults to 2n + 1
    int starts = 32;
    std::uint64_t seed = 20240521;

    double m_for(int n) const { return big_m ? *big_m : 2.0 * n + 1.0; }

    // Throws ValidationError when a value is non-positive or eps' >= 1/n.
    void validate(int n) const;
};

}  // namespace empathic::core
