// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "ictrl/matrix.hpp"

namespace ictrl {

/// Linear dynamic controller
///     x(t+1) = F x(t) + G y(t),  x(0) = x0,
///     u(t)   = H x(t).
/// H is required to have full row rank at construction.
struct ControllerSpec {
    RatMatrix F;   // n x n
    RatMatrix G;   // n x p
    RatMatrix H;   // m x n
    RatMatrix x0;  // n x 1
    std::string name;

    ControllerSpec(RatMatrix F_, RatMatrix G_, RatMatrix H_, RatMatrix x0_, std::string name_ = "");

    size_t n() const { return F.rows(); }
    size_t p() const { return G.cols(); }
    size_t m() const { return H.rows(); }
};

/// Nested kernels of the stacked output maps, largest index first:
/// bases[j] spans the common kernel of H, HF, ..., HF^(n-j-1); bases[n]
/// spans the whole state space.
struct SubspaceChain {
    std::vector<RatMatrix> bases;  // bases[j] = basis of U_{n-j}, j = 0..n

    size_t n() const { return bases.size() - 1; }
    /// Basis of U_i (columns).
    const RatMatrix &U(size_t i) const { return bases[n() - i]; }
    size_t dim(size_t i) const { return U(i).cols(); }
};

SubspaceChain unobs_chain(const RatMatrix &F, const RatMatrix &H);

bool is_observable(const RatMatrix &F, const RatMatrix &H);

/// Observability reduction: returns an input-output-equivalent spec whose
/// pair (F, H) is observable; returns the input unchanged when it already
/// is. The initial state is projected onto the observable coordinates.
ControllerSpec kalman_reduce(const ControllerSpec &spec);

/// Maximal independent row subset of H, in row order.
struct RowBasis {
    RatMatrix reduced;            // m' x n, the selected rows
    RatMatrix selection;          // m' x m with reduced = selection * full
    std::vector<size_t> indices;  // selected row indices, increasing
};

RowBasis row_basis(const RatMatrix &H);

}  // namespace ictrl
