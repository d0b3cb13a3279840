// SPDX-License-Identifier: Apache-2.0
#include "ictrl/intermit.hpp"

#include "ictrl/canon.hpp"
#include "ictrl/errors.hpp"
#include "ictrl/poly.hpp"

namespace ictrl {

PeriodCheck check_period(const RatMatrix &F, unsigned k) {
    if (F.rows() != F.cols()) throw DimensionMismatch("check_period: state matrix must be square");
    if (k == 0) throw Error("period must be positive");
    PeriodCheck pc;
    pc.k = k;
    const RatPoly rho = char_poly(F);
    pc.distinct_root_count = distinct_root_count(rho);
    // The k-th powers of the eigenvalues are the roots of char_poly(F^k)
    // (spectral mapping), so the power map is injective on the spectrum iff
    // the squarefree degrees agree.
    const RatPoly q = k == 1 ? rho : char_poly(pow(F, k));
    pc.distinct_power_count = distinct_root_count(q);
    pc.valid = pc.distinct_root_count == pc.distinct_power_count;
    return pc;
}

unsigned suggest_period(const RatMatrix &F, unsigned k_min) {
    if (k_min == 0) throw Error("period must be positive");
    // Only multiples of finitely many l >= 2 can fail, so the loop always
    // terminates; the cap guards against misuse.
    for (unsigned k = k_min; k < k_min + 10000; ++k) {
        if (check_period(F, k).valid) return k;
    }
    throw Error("internal: no valid re-encryption period found");
}

NilpotentSplit split_nilpotent(const RatMatrix &F, const RatMatrix &H) {
    const size_t n = F.rows();
    if (F.cols() != n) throw DimensionMismatch("split_nilpotent: state matrix must be square");
    if (H.cols() != n) throw DimensionMismatch("split_nilpotent: output matrix width must match");

    const RatMatrix Fn = pow(F, static_cast<unsigned>(n));
    const RatMatrix ker = kernel_basis(Fn);
    // Column-space basis of F^n: the pivot columns, in order.
    const auto piv = rref(Fn).pivot_cols;
    RatMatrix image(n, 0);
    for (size_t c : piv) image = hstack(image, Fn.col(c));

    NilpotentSplit sp;
    sp.n0 = ker.cols();
    sp.T0_inv = hstack(ker, image);
    sp.T0 = inverse(sp.T0_inv);

    const RatMatrix M = sp.T0 * F * sp.T0_inv;
    const size_t d = n - sp.n0;
    sp.F1 = M.block(0, 0, sp.n0, sp.n0);
    sp.F2 = M.block(sp.n0, sp.n0, d, d);
    if (!M.block(0, sp.n0, sp.n0, d).is_zero() || !M.block(sp.n0, 0, d, sp.n0).is_zero()) {
        throw Error("internal: kernel/image split is not F-invariant");
    }
    const RatMatrix Ht = H * sp.T0_inv;
    sp.H1 = Ht.block(0, 0, H.rows(), sp.n0);
    sp.H2 = Ht.block(0, sp.n0, H.rows(), d);
    return sp;
}

RatMatrix deadbeat_gain(const RatMatrix &F2k, const RatMatrix &H2) {
    const size_t d = F2k.rows();
    if (F2k.cols() != d) throw DimensionMismatch("deadbeat_gain: state matrix must be square");
    if (H2.cols() != d) throw DimensionMismatch("deadbeat_gain: output matrix width must match");
    if (d == 0) return RatMatrix::zero(0, H2.rows());

    // Work with a row basis of H2 so the chain construction sees a
    // full-row-rank output map; the selection matrix routes the gain back
    // to the original output coordinates.
    const RowBasis rb = row_basis(H2);
    if (rb.reduced.rows() == 0 || !is_observable(F2k, rb.reduced)) {
        throw NotObservable("deadbeat_gain: pair is not observable");
    }
    const auto a1 = algorithm1(F2k, rb.reduced);
    const RatMatrix &W_last = a1.W_blocks.back();
    const RatMatrix R2p = F2k * W_last * inverse(rb.reduced * W_last);
    const RatMatrix R2 = R2p * rb.selection;

    const RatMatrix closed = F2k - R2 * H2;
    if (!(char_poly(closed) == RatPoly::monomial(d))) {
        throw Error("internal: deadbeat gain is not deadbeat");
    }
    return R2;
}

std::pair<RatMatrix, RatMatrix> nilpotent_canonical(const RatMatrix &N) {
    const size_t n = N.rows();
    if (N.cols() != n) throw DimensionMismatch("nilpotent_canonical: matrix must be square");
    if (n == 0) return {RatMatrix(), RatMatrix()};
    if (!pow(N, static_cast<unsigned>(n)).is_zero()) {
        throw NotNilpotent("matrix has a nonzero eigenvalue");
    }

    // Kernel filtration ker N^0 <= ker N^1 <= ... <= ker N^d = R^n.
    std::vector<RatMatrix> powers{RatMatrix::identity(n)};
    while (!powers.back().is_zero()) powers.push_back(powers.back() * N);
    const size_t depth = powers.size() - 1;  // nilpotency index

    std::vector<RatMatrix> kernels(depth + 1);
    kernels[0] = RatMatrix(n, 0);
    for (size_t j = 1; j <= depth; ++j) kernels[j] = kernel_basis(powers[j]);

    struct Chain {
        RatMatrix top;
        size_t height;
    };
    std::vector<Chain> chains;
    for (size_t j = depth; j >= 1; --j) {
        // Existing chains contribute their element at height j.
        RatMatrix span = kernels[j - 1];
        for (const auto &ch : chains) span = hstack(span, powers[ch.height - j] * ch.top);
        const RatMatrix added = complete_basis(span, kernels[j], kernels[j].cols());
        for (size_t c = 0; c < added.cols(); ++c) chains.push_back({added.col(c), j});
        if (j == 1) break;
    }

    RatMatrix basis(n, 0);
    for (const auto &ch : chains) {
        for (size_t a = ch.height; a-- > 0;) basis = hstack(basis, powers[a] * ch.top);
    }
    const RatMatrix T1 = inverse(basis);
    const RatMatrix J = T1 * N * basis;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            const bool super = (j == i + 1);
            const Rational &e = J(i, j);
            if ((super && !e.is_zero() && !e.is_one()) || (!super && !e.is_zero())) {
                throw Error("internal: nilpotent canonical form is not a {0,1} shift");
            }
        }
    }
    return {T1, J};
}

RatMatrix lifted_input_matrix(const RatMatrix &F, const RatMatrix &G, unsigned i) {
    RatMatrix Gi(F.rows(), 0);
    for (unsigned j = 0; j < i; ++j) {
        Gi = hstack(Gi, pow(F, i - 1 - j) * G);
    }
    return Gi;
}

IntermittentResult build_intermittent(const ControllerSpec &spec, unsigned k) {
    if (!is_observable(spec.F, spec.H)) {
        throw NotObservable("build_intermittent requires an observable pair; reduce the controller first");
    }
    const PeriodCheck pc = check_period(spec.F, k);
    if (!pc.valid) {
        throw InvalidPeriod("period " + std::to_string(k) +
                            " merges distinct eigenvalues; pick another (see suggest_period)");
    }

    const NilpotentSplit sp = split_nilpotent(spec.F, spec.H);
    const RatMatrix Fk = pow(spec.F, k);
    const RatMatrix F2k = pow(sp.F2, k);
    const RatMatrix R2 = deadbeat_gain(F2k, sp.H2);
    const RatMatrix R = sp.T0_inv * vstack(RatMatrix::zero(sp.n0, spec.m()), R2);

    const RatMatrix F_conv = sp.T0 * (Fk - R * spec.H) * sp.T0_inv;
    auto [T1, J] = nilpotent_canonical(F_conv);

    IntermittentResult ir;
    ir.k = k;
    ir.T = T1 * sp.T0;
    ir.T_inv = inverse(ir.T);
    ir.R = R;
    ir.A_bar = J;
    if (!(ir.A_bar == ir.T * (Fk - R * spec.H) * ir.T_inv)) {
        throw Error("internal: lifted state matrix mismatch");
    }
    ir.B_Y = ir.T * lifted_input_matrix(spec.F, spec.G, k);
    ir.B_u = ir.T * R;
    for (unsigned i = 0; i < k; ++i) {
        ir.out_state.push_back(spec.H * pow(spec.F, i) * ir.T_inv);
        ir.out_input.push_back(spec.H * lifted_input_matrix(spec.F, spec.G, i));
    }
    ir.name = spec.name;
    return ir;
}

}  // namespace ictrl
