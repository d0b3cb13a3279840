// SPDX-License-Identifier: Apache-2.0
#include "ictrl/sysobs.hpp"

#include "ictrl/errors.hpp"

namespace ictrl {

ControllerSpec::ControllerSpec(RatMatrix F_, RatMatrix G_, RatMatrix H_, RatMatrix x0_,
                               std::string name_)
    : F(std::move(F_)), G(std::move(G_)), H(std::move(H_)), x0(std::move(x0_)), name(std::move(name_)) {
    const size_t nn = F.rows();
    if (F.cols() != nn || nn == 0) {
        throw DimensionMismatch("state matrix must be square and nonempty");
    }
    if (G.rows() != nn || G.cols() == 0) {
        throw DimensionMismatch("input matrix must be n x p with p >= 1");
    }
    if (H.cols() != nn || H.rows() == 0) {
        throw DimensionMismatch("output matrix must be m x n with m >= 1");
    }
    if (x0.rows() != nn || x0.cols() != 1) {
        throw DimensionMismatch("initial state must be n x 1");
    }
    if (rank(H) != H.rows()) {
        throw NotFullRowRank("output matrix does not have full row rank");
    }
}

SubspaceChain unobs_chain(const RatMatrix &F, const RatMatrix &H) {
    const size_t n = F.rows();
    if (F.cols() != n) throw DimensionMismatch("state matrix must be square");
    if (H.cols() != n) throw DimensionMismatch("output matrix column count must match state dimension");

    SubspaceChain chain;
    chain.bases.resize(n + 1);
    chain.bases[n] = RatMatrix::identity(n);  // U_0

    RatMatrix stacked = H;  // [H; HF; ...; HF^{i-1}] grown incrementally
    RatMatrix HFi = H;
    for (size_t i = 1; i <= n; ++i) {
        chain.bases[n - i] = kernel_basis(stacked);
        if (i < n) {
            HFi = HFi * F;
            stacked = vstack(stacked, HFi);
        }
    }
    return chain;
}

bool is_observable(const RatMatrix &F, const RatMatrix &H) {
    return unobs_chain(F, H).dim(F.rows()) == 0;
}

RowBasis row_basis(const RatMatrix &H) {
    RowBasis rb;
    RatMatrix acc(0, H.cols());
    size_t r = 0;
    for (size_t i = 0; i < H.rows(); ++i) {
        RatMatrix trial = vstack(acc, H.row(i));
        const size_t tr = rank(trial);
        if (tr > r) {
            acc = std::move(trial);
            rb.indices.push_back(i);
            r = tr;
        }
    }
    rb.reduced = acc;
    rb.selection = RatMatrix::zero(rb.indices.size(), H.rows());
    for (size_t k = 0; k < rb.indices.size(); ++k) rb.selection(k, rb.indices[k]) = 1;
    return rb;
}

ControllerSpec kalman_reduce(const ControllerSpec &spec) {
    const size_t n = spec.n();
    const auto chain = unobs_chain(spec.F, spec.H);
    const RatMatrix &Un = chain.U(n);
    const size_t d = Un.cols();
    if (d == 0) return spec;

    // Basis [observable completion | unobservable subspace]: the
    // unobservable block is F-invariant and annihilated by H, so the top
    // block of the transformed system is self-contained.
    const RatMatrix comp = complete_basis(Un, RatMatrix::identity(n), n);
    const RatMatrix P = hstack(comp, Un);
    const RatMatrix P_inv = inverse(P);
    const size_t keep = n - d;

    const RatMatrix Ft = P_inv * spec.F * P;
    const RatMatrix Gt = P_inv * spec.G;
    const RatMatrix Ht = spec.H * P;
    const RatMatrix x0t = P_inv * spec.x0;

    return ControllerSpec(Ft.block(0, 0, keep, keep), Gt.block(0, 0, keep, spec.p()),
                          Ht.block(0, 0, spec.m(), keep), x0t.block(0, 0, keep, 1),
                          spec.name.empty() ? "" : spec.name + "-reduced");
}

}  // namespace ictrl
