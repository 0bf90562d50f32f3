#pragma once

#include <cmath>

#include "csitlab/core.hpp"
#include "csitlab/maxent.hpp"

namespace csitlab {

/// Version tag of the pinned constants below; bump when any of them changes.
inline constexpr int kConstantsVersion = 1;

/// M(1/2) as computed by m_of_delta(0.5) and frozen. Tests recompute it and
/// compare against an independent high-precision evaluation.
inline constexpr double kPinnedMHalf = 13.25481656685325;

/// Universal constants of the sum-rate bound, in nats.
struct DerivedConstants {
    double m_half = 0.0;
    double gamma = 0.0;
    double gamma_prime = 0.0;

    friend bool operator==(const DerivedConstants&, const DerivedConstants&) = default;
};

/// gamma = ln(pi/2) + 3 M(1/2) + (9/2) ln(2 pi) - (1/4) ln(2 pi e)
/// gamma' = gamma + 1/e + (10/4) ln(2 pi e)
[[nodiscard]] inline DerivedConstants compose_constants(double m_half) {
    DerivedConstants k;
    k.m_half = m_half;
    k.gamma = std::log(kPi / 2.0) + 3.0 * m_half + 4.5 * std::log(kTwoPi) - 0.25 * kLog2PiE;
    k.gamma_prime = k.gamma + 1.0 / kE + 2.5 * kLog2PiE;
    return k;
}

/// Recomputes M(1/2) from the max-entropy solver and composes the constants.
[[nodiscard]] inline DerivedConstants derive_constants() { return compose_constants(m_of_delta(0.5)); }

/// The constants built from the pinned M(1/2); what the checks and the bound use.
[[nodiscard]] inline const DerivedConstants& pinned_constants() {
    static const DerivedConstants k = compose_constants(kPinnedMHalf);
    return k;
}

}  // namespace csitlab
