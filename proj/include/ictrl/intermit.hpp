// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ictrl/sysobs.hpp"

namespace ictrl {

/// Result of the re-encryption-period validity test: the period k is
/// admissible iff raising the eigenvalues to the k-th power keeps distinct
/// eigenvalues distinct. Computed exactly via squarefree degrees.
struct PeriodCheck {
    unsigned k = 1;
    bool valid = true;
    size_t distinct_root_count = 0;   // distinct eigenvalues of the state matrix
    size_t distinct_power_count = 0;  // distinct k-th powers of those eigenvalues
};

PeriodCheck check_period(const RatMatrix &F, unsigned k);

/// Smallest k >= k_min accepted by check_period.
unsigned suggest_period(const RatMatrix &F, unsigned k_min);

/// Exact splitting of the state space into the zero-eigenvalue part and
/// the invertible part: T0 F T0^-1 = blockdiag(F1, F2) with F1 nilpotent
/// of size n0 and F2 invertible, realized as ker(F^n) + im(F^n).
struct NilpotentSplit {
    RatMatrix T0, T0_inv;
    size_t n0 = 0;
    RatMatrix F1, F2;  // n0 x n0 nilpotent, (n-n0) x (n-n0) invertible
    RatMatrix H1, H2;  // column blocks of H T0^-1
};

NilpotentSplit split_nilpotent(const RatMatrix &F, const RatMatrix &H);

/// Output-injection gain making F2k - R2 H2 nilpotent (all eigenvalues
/// zero). Requires the pair observable; H2 may be row-rank deficient.
RatMatrix deadbeat_gain(const RatMatrix &F2k, const RatMatrix &H2);

/// Exact similarity to the nilpotent canonical form: T1 N T1^-1 = J with J
/// strictly upper triangular, superdiagonal entries in {0,1}, zeros
/// elsewhere (kernel-chain construction).
std::pair<RatMatrix, RatMatrix> nilpotent_canonical(const RatMatrix &N);

/// Lifted controller with period-k state updates and a k-periodic output
/// schedule; the state matrix T(F^k - R H)T^-1 is a {0,1} nilpotent shift.
struct IntermittentResult {
    unsigned k = 1;
    RatMatrix T, T_inv, R;
    RatMatrix A_bar;                  // T(F^k - R H)T^-1
    RatMatrix B_Y;                    // T G_k, n x (k p)
    RatMatrix B_u;                    // T R
    std::vector<RatMatrix> out_state;  // H F^i T^-1, i = 0..k-1
    std::vector<RatMatrix> out_input;  // H G_i, m x (i p); the i = 0 entry is null
    std::string name;

    size_t n() const { return T.rows(); }
    size_t m() const { return out_state.empty() ? 0 : out_state[0].rows(); }
    size_t p() const { return B_Y.cols() / k; }
};

/// Stacked input matrix G_i = [F^{i-1} G, ..., G] (n x i p; null for i = 0).
RatMatrix lifted_input_matrix(const RatMatrix &F, const RatMatrix &G, unsigned i);

IntermittentResult build_intermittent(const ControllerSpec &spec, unsigned k);

}  // namespace ictrl
