#pragma once

#include <string>

#include "kolflow/spectral.hpp"

namespace kolflow::testing {

/// Deterministic dense real field with entries in (-1/2, 1/2); the linear
/// congruence keeps every grid point nonzero so transforms get no shortcuts.
inline PhysicalField dense_field(const GridSpec& g, const PrecisionConfig& p, long seed = 11) {
    PhysicalField f = PhysicalField::zeros(g, p);
    for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.n; ++j) {
            long v = (131L * i + 37L * j + seed) % 1009 - 504;
            if (v == 0) v = 211;
            BigReal x = BigReal::of_long(v, p);
            div_long(f.at(i, j), x, 1013);
        }
    }
    return f;
}

/// Hermitian, zero-mean, dealias-truncated spectral field (a transform of a
/// real field with the mean removed), suitable for every operator under test.
inline SpectralField dense_state(const GridSpec& g, const PrecisionConfig& p, long seed = 11) {
    SpectralField w = fft_forward(dense_field(g, p, seed));
    cset_zero(w.mode(0, 0));
    return dealias_truncate(w);
}

inline std::string show(const BigReal& x) { return to_decimal_string(x, 6); }

}  // namespace kolflow::testing
