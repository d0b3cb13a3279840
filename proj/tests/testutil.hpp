// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <random>

#include "ictrl/sysobs.hpp"

namespace ictrl::test {

using Rng = std::mt19937_64;

inline Rational rand_rational(Rng &rng, int num_lim = 4, int den_lim = 3) {
    std::uniform_int_distribution<int> num(-num_lim, num_lim);
    std::uniform_int_distribution<int> den(1, den_lim);
    return Rational(num(rng), den(rng));
}

inline RatMatrix rand_matrix(Rng &rng, size_t rows, size_t cols, int num_lim = 4, int den_lim = 3) {
    RatMatrix m(rows, cols);
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) m(i, j) = rand_rational(rng, num_lim, den_lim);
    return m;
}

inline RatMatrix rand_int_matrix(Rng &rng, size_t rows, size_t cols, int lim = 3) {
    return rand_matrix(rng, rows, cols, lim, 1);
}

/// Random controller with H of full row rank and (F, H) observable
/// (rejection sampling; dense random pairs are observable almost surely).
inline ControllerSpec rand_observable_spec(Rng &rng, size_t n, size_t m, size_t p,
                                           bool integer_entries = false) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        RatMatrix F = integer_entries ? rand_int_matrix(rng, n, n) : rand_matrix(rng, n, n);
        RatMatrix H = integer_entries ? rand_int_matrix(rng, m, n) : rand_matrix(rng, m, n);
        RatMatrix G = integer_entries ? rand_int_matrix(rng, n, p) : rand_matrix(rng, n, p);
        RatMatrix x0 = integer_entries ? rand_int_matrix(rng, n, 1) : rand_matrix(rng, n, 1);
        if (rank(H) != m) continue;
        if (!is_observable(F, H)) continue;
        return ControllerSpec(F, G, H, x0, "random");
    }
    throw std::runtime_error("failed to sample an observable controller");
}

inline std::vector<RatVec> rand_inputs(Rng &rng, size_t p, size_t horizon, int num_lim = 4,
                                       int den_lim = 3) {
    std::vector<RatVec> ys(horizon);
    for (auto &y : ys) {
        y.resize(p);
        for (auto &v : y) v = rand_rational(rng, num_lim, den_lim);
    }
    return ys;
}

inline bool outputs_equal(const std::vector<RatVec> &a, const std::vector<RatVec> &b) {
    if (a.size() != b.size()) return false;
    for (size_t t = 0; t < a.size(); ++t) {
        if (a[t] != b[t]) return false;
    }
    return true;
}

}  // namespace ictrl::test
