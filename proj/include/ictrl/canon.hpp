// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "ictrl/sysobs.hpp"

namespace ictrl {

/// Output of the basis-chain construction: T together with the column
/// blocks W_1..W_n it inverts, T * [W_n, ..., W_1] = I.
struct Algorithm1Output {
    RatMatrix T;                      // n x n, invertible
    std::vector<RatMatrix> W_blocks;  // W_1..W_n, n x k_i each
    std::vector<size_t> block_sizes;  // k_1 <= ... <= k_n = m, sum = n
};

/// Converted controller: with R and T_u chosen from the chain basis, the
/// transformed state matrix A_bar = T(F - R H)T^-1 and output matrix
/// C_bar = T_u H T^-1 consist of {0,1} entries only, and A_bar is a
/// nilpotent block shift.
struct ConversionResult {
    RatMatrix T, T_inv;
    RatMatrix R;    // n x m output-injection gain
    RatMatrix T_u;  // m x m output transform
    RatMatrix A_bar, B_y, B_u, C_bar;
    RatMatrix A_blocks;  // T F W_n, the eliminated first block column
    std::vector<size_t> block_sizes;
    std::string name;

    size_t n() const { return T.rows(); }
    size_t m() const { return T_u.rows(); }
    size_t p() const { return B_y.cols(); }
};

/// Basis-chain construction of the transformation T. Requires (F, H)
/// observable and H of full row rank.
Algorithm1Output algorithm1(const RatMatrix &F, const RatMatrix &H);

ConversionResult build_conversion(const ControllerSpec &spec);

struct CheckReport {
    bool ok = true;
    std::vector<std::string> failures;

    void fail(const std::string &what) {
        ok = false;
        failures.push_back(what);
    }
};

/// Re-derives the transformed matrices from (spec, T, R, T_u) by exact
/// multiplication and checks every structural predicate. Violations are
/// report entries, never exceptions.
CheckReport verify_canonical(const ConversionResult &c, const ControllerSpec &spec);

}  // namespace ictrl
