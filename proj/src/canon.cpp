// SPDX-License-Identifier: Apache-2.0
#include "ictrl/canon.hpp"

#include "ictrl/errors.hpp"

namespace ictrl {

Algorithm1Output algorithm1(const RatMatrix &F, const RatMatrix &H) {
    const size_t n = F.rows();
    if (F.cols() != n || H.cols() != n) {
        throw DimensionMismatch("algorithm1: inconsistent dimensions");
    }
    if (rank(H) != H.rows()) {
        throw NotFullRowRank("algorithm1 requires an output matrix of full row rank");
    }
    const auto chain = unobs_chain(F, H);
    if (chain.dim(n) != 0) {
        throw NotObservable("algorithm1 requires an observable pair; reduce the controller first");
    }

    Algorithm1Output out;
    if (n == 1) {
        // Degenerate chain {0} = U_1 <= U_0: a single one-column block.
        out.W_blocks.push_back(RatMatrix::identity(1));
        out.block_sizes.push_back(1);
        out.T = RatMatrix::identity(1);
        return out;
    }

    // W_1 spans U_{n-1}; each later block is [F W_{i-1}, V_i] with V_i a
    // deterministic completion inside U_{n-i} (empty when nothing is
    // missing).
    out.W_blocks.push_back(chain.U(n - 1));
    RatMatrix all = out.W_blocks.back();  // [W_1 ... W_{i-1}] accumulated
    for (size_t i = 2; i <= n; ++i) {
        const RatMatrix FW = F * out.W_blocks.back();
        const RatMatrix base = hstack(all, FW);
        const RatMatrix &target = chain.U(n - i);  // U_0 = identity at i = n
        const RatMatrix Vi = complete_basis(base, target, target.cols());
        out.W_blocks.push_back(hstack(FW, Vi));
        all = hstack(all, out.W_blocks.back());
    }

    for (const auto &w : out.W_blocks) out.block_sizes.push_back(w.cols());

    RatMatrix T_inv(n, 0);
    for (size_t i = out.W_blocks.size(); i-- > 0;) T_inv = hstack(T_inv, out.W_blocks[i]);
    out.T = inverse(T_inv);
    return out;
}

ConversionResult build_conversion(const ControllerSpec &spec) {
    const size_t n = spec.n();
    auto a1 = algorithm1(spec.F, spec.H);

    const RatMatrix &W_n = a1.W_blocks.back();
    const RatMatrix HWn = spec.H * W_n;  // m x m, invertible by construction
    ConversionResult c;
    c.T = a1.T;
    c.T_inv = inverse(a1.T);
    c.T_u = inverse(HWn);
    c.R = spec.F * W_n * c.T_u;
    c.A_bar = c.T * (spec.F - c.R * spec.H) * c.T_inv;
    c.B_y = c.T * spec.G;
    c.B_u = c.T * c.R;
    c.C_bar = c.T_u * spec.H * c.T_inv;
    c.A_blocks = c.T * spec.F * W_n;
    c.block_sizes = a1.block_sizes;
    c.name = spec.name;

    if (!c.A_bar.entries_01() || !c.C_bar.entries_01() || !pow(c.A_bar, static_cast<unsigned>(n)).is_zero()) {
        throw Error("internal: converted matrices violate the {0,1} shift structure");
    }
    return c;
}

namespace {

// Expected shift structure: block columns ordered (k_n, ..., k_1); the
// first block column is zero and block (j-1, j) is [I_{k}; 0] for the
// width-k column block above it.
RatMatrix expected_shift(const std::vector<size_t> &block_sizes) {
    size_t n = 0;
    for (size_t k : block_sizes) n += k;
    std::vector<size_t> order(block_sizes.rbegin(), block_sizes.rend());  // k_n, ..., k_1
    std::vector<size_t> offset(order.size() + 1, 0);
    for (size_t b = 0; b < order.size(); ++b) offset[b + 1] = offset[b] + order[b];
    RatMatrix a = RatMatrix::zero(n, n);
    for (size_t b = 1; b < order.size(); ++b) {
        // Column block b holds Gamma over the rows of block b-1.
        const size_t w = order[b];  // k_{n-b}
        for (size_t j = 0; j < w; ++j) a(offset[b - 1] + j, offset[b] + j) = 1;
    }
    return a;
}

}  // namespace

CheckReport verify_canonical(const ConversionResult &c, const ControllerSpec &spec) {
    CheckReport rep;
    const size_t n = spec.n();
    const size_t m = spec.m();
    if (c.T.rows() != n || c.T.cols() != n) {
        rep.fail("transform dimensions do not match the controller");
        return rep;
    }

    RatMatrix T_inv;
    try {
        T_inv = inverse(c.T);
    } catch (const SingularMatrix &) {
        rep.fail("T is not invertible");
        return rep;
    }
    if (!(c.T_inv == T_inv)) rep.fail("stored T_inv is not the inverse of T");

    const RatMatrix A = c.T * (spec.F - c.R * spec.H) * T_inv;
    const RatMatrix C = c.T_u * spec.H * T_inv;
    if (!(A == c.A_bar)) rep.fail("A_bar does not equal T(F - R H)T^-1");
    if (!(C == c.C_bar)) rep.fail("C_bar does not equal T_u H T^-1");
    if (!A.entries_01()) rep.fail("state matrix has entries outside {0,1}");
    if (!C.entries_01()) rep.fail("output matrix has entries outside {0,1}");
    if (!pow(A, static_cast<unsigned>(n)).is_zero()) rep.fail("state matrix is not nilpotent");

    // C_bar = [I_m, 0, ..., 0]
    RatMatrix expectC = RatMatrix::zero(m, n);
    for (size_t i = 0; i < m && i < n; ++i) expectC(i, i) = 1;
    if (!(C == expectC)) rep.fail("output matrix is not [I, 0]");

    size_t total = 0;
    for (size_t k : c.block_sizes) total += k;
    if (total != n || c.block_sizes.empty() || c.block_sizes.back() != m) {
        rep.fail("block sizes do not partition the state dimension with k_n = m");
    } else {
        for (size_t i = 1; i < c.block_sizes.size(); ++i) {
            if (c.block_sizes[i - 1] > c.block_sizes[i]) {
                rep.fail("block sizes are not non-decreasing");
                break;
            }
        }
        if (!(A == expected_shift(c.block_sizes))) {
            rep.fail("state matrix does not match the block shift for its block sizes");
        }
    }

    // Defining equations for R and T_u from the last basis block.
    const RatMatrix W_n = T_inv.block(0, 0, n, m);
    const RatMatrix HWn = spec.H * W_n;
    try {
        const RatMatrix HWn_inv = inverse(HWn);
        if (!(c.T_u == HWn_inv)) rep.fail("T_u does not equal (H W_n)^-1");
        if (!(c.R == spec.F * W_n * HWn_inv)) rep.fail("R does not equal F W_n (H W_n)^-1");
    } catch (const SingularMatrix &) {
        rep.fail("H W_n is not invertible");
    }

    if (!(c.B_y == c.T * spec.G)) rep.fail("B_y does not equal T G");
    if (!(c.B_u == c.T * c.R)) rep.fail("B_u does not equal T R");
    if (!(c.A_blocks == c.T * spec.F * W_n)) rep.fail("A_blocks does not equal T F W_n");
    return rep;
}

}  // namespace ictrl
