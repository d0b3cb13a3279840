// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ictrl/canon.hpp"
#include "ictrl/errors.hpp"
#include "ictrl/poly.hpp"
#include "ictrl/qrt.hpp"
#include "testutil.hpp"

using namespace ictrl;

namespace {

// Structural predicate from the basis-chain argument: at every iteration
// the columns of [W_1..W_{j-1}, F W_{j-1}] are independent vectors inside
// the right kernel subspace.
bool chain_predicate_holds(const RatMatrix &F, const RatMatrix &H, const Algorithm1Output &a1) {
    const size_t n = F.rows();
    const auto chain = unobs_chain(F, H);
    RatMatrix prefix(n, 0);
    for (size_t i = 2; i <= a1.W_blocks.size(); ++i) {
        prefix = hstack(prefix, a1.W_blocks[i - 2]);
        const RatMatrix probe = hstack(prefix, F * a1.W_blocks[i - 2]);
        if (probe.cols() != rank(probe)) return false;
        const RatMatrix &target = chain.U(n - i);
        for (size_t c = 0; c < probe.cols(); ++c) {
            if (!in_span(target, probe.col(c))) return false;
        }
    }
    return true;
}

bool algorithm1_invariants_hold(const RatMatrix &F, const RatMatrix &H, const Algorithm1Output &a1) {
    const size_t n = F.rows();
    size_t total = 0;
    for (size_t i = 0; i < a1.block_sizes.size(); ++i) {
        total += a1.block_sizes[i];
        if (i > 0 && a1.block_sizes[i - 1] > a1.block_sizes[i]) return false;
    }
    if (total != n) return false;
    if (a1.block_sizes.back() != H.rows()) return false;
    RatMatrix T_inv(n, 0);
    for (size_t i = a1.W_blocks.size(); i-- > 0;) T_inv = hstack(T_inv, a1.W_blocks[i]);
    if (!(a1.T * T_inv).is_identity()) return false;
    return n == 1 || chain_predicate_holds(F, H, a1);
}

}  // namespace

TEST_CASE("algorithm1: worked n=2 example, deterministic instance") {
    const RatMatrix F{{0, 1}, {0, 0}};
    const RatMatrix H{{1, 1}};
    const auto a1 = algorithm1(F, H);
    REQUIRE(a1.W_blocks.size() == 2);
    CHECK(a1.W_blocks[0] == RatMatrix{{1}, {-1}});
    CHECK(a1.W_blocks[1] == RatMatrix{{-1}, {0}});  // F W_1
    CHECK(a1.block_sizes == std::vector<size_t>{1, 1});
    CHECK(a1.T == RatMatrix{{-1, -1}, {0, -1}});
    CHECK(algorithm1_invariants_hold(F, H, a1));
}

TEST_CASE("algorithm1: invertible H collapses the chain") {
    test::Rng rng(211);
    const RatMatrix F = test::rand_matrix(rng, 3, 3);
    const auto a1 = algorithm1(F, RatMatrix::identity(3));
    CHECK(a1.block_sizes == std::vector<size_t>{0, 0, 3});
    CHECK(a1.W_blocks[2].is_identity());
    CHECK(a1.T.is_identity());
}

TEST_CASE("algorithm1: rejects unobservable and rank-deficient inputs") {
    const RatMatrix F{{-1, 0}, {0, 1}};
    CHECK_THROWS_AS(algorithm1(F * F, RatMatrix{{1, 1}}), NotObservable);
    CHECK_THROWS_AS(algorithm1(F, RatMatrix{{1, 1}, {2, 2}}), NotFullRowRank);
}

TEST_CASE("algorithm1: random observable pairs satisfy the structural predicates") {
    test::Rng rng(223);
    for (int trial = 0; trial < 40; ++trial) {
        const size_t n = 1 + trial % 4;
        const size_t m = 1 + std::min<size_t>(trial % 2, n - 1);
        const auto spec = test::rand_observable_spec(rng, n, m, 1);
        const auto a1 = algorithm1(spec.F, spec.H);
        CHECK(algorithm1_invariants_hold(spec.F, spec.H, a1));
    }
}

TEST_CASE("build_conversion: worked n=2 example") {
    const ControllerSpec spec(RatMatrix{{0, 1}, {0, 0}}, RatMatrix{{0}, {1}}, RatMatrix{{1, 1}},
                              RatMatrix::zero(2, 1), "shift");
    const auto c = build_conversion(spec);
    CHECK(c.R == RatMatrix::zero(2, 1));
    CHECK(c.T_u == RatMatrix{{-1}});
    CHECK(c.A_bar == RatMatrix{{0, 1}, {0, 0}});
    CHECK(c.C_bar == RatMatrix{{1, 0}});
    CHECK(c.A_bar == c.T * (spec.F - c.R * spec.H) * c.T_inv);
    CHECK(c.C_bar == c.T_u * spec.H * c.T_inv);
    CHECK(verify_canonical(c, spec).ok);
}

TEST_CASE("build_conversion: scalar controller") {
    const ControllerSpec spec(RatMatrix{{Rational(7, 3)}}, RatMatrix{{1}}, RatMatrix{{1}},
                              RatMatrix{{0}}, "scalar");
    const auto c = build_conversion(spec);
    CHECK(c.T == RatMatrix::identity(1));
    CHECK(c.R == RatMatrix{{Rational(7, 3)}});
    CHECK(c.T_u == RatMatrix::identity(1));
    CHECK(c.A_bar == RatMatrix{{0}});
    CHECK(c.C_bar == RatMatrix{{1}});
}

TEST_CASE("build_conversion: diag(1,4) example gives the known gain") {
    const ControllerSpec spec(RatMatrix{{1, 0}, {0, 4}}, RatMatrix{{1}, {1}}, RatMatrix{{1, 1}},
                              RatMatrix::zero(2, 1), "diag14");
    const auto c = build_conversion(spec);
    CHECK(c.R == RatMatrix{{Rational(-1, 3)}, {Rational(16, 3)}});
    const RatMatrix FRH = spec.F - c.R * spec.H;
    CHECK(FRH == RatMatrix{{Rational(4, 3), Rational(1, 3)}, {Rational(-16, 3), Rational(-4, 3)}});
    CHECK(char_poly(FRH) == RatPoly::monomial(2));
    CHECK(verify_canonical(c, spec).ok);
}

TEST_CASE("verify_canonical flags injected faults") {
    test::Rng rng(227);
    const auto spec = test::rand_observable_spec(rng, 3, 1, 1);
    const auto good = build_conversion(spec);
    CHECK(verify_canonical(good, spec).ok);

    auto bad = good;
    bad.A_bar(0, 1) = Rational(2);
    const auto rep1 = verify_canonical(bad, spec);
    CHECK_FALSE(rep1.ok);
    bool mentions_01 = false;
    for (const auto &f : rep1.failures) {
        if (f.find("{0,1}") != std::string::npos || f.find("A_bar") != std::string::npos)
            mentions_01 = true;
    }
    CHECK(mentions_01);

    auto bad2 = good;
    bad2.T = RatMatrix::zero(3, 3);
    const auto rep2 = verify_canonical(bad2, spec);
    CHECK_FALSE(rep2.ok);
    bool mentions_inv = false;
    for (const auto &f : rep2.failures) {
        if (f.find("invert") != std::string::npos) mentions_inv = true;
    }
    CHECK(mentions_inv);
}

TEST_CASE("conversion invariants on random observable specs") {
    test::Rng rng(229);
    for (int trial = 0; trial < 60; ++trial) {
        const size_t n = 1 + trial % 5;
        const size_t m = 1 + std::min<size_t>(trial % 2, n - 1);
        const size_t p = 1 + (trial / 3) % 2;
        const auto spec = test::rand_observable_spec(rng, n, m, p);
        const auto c = build_conversion(spec);
        CHECK(c.A_bar.entries_01());
        CHECK(c.C_bar.entries_01());
        CHECK(pow(c.A_bar, static_cast<unsigned>(n)).is_zero());
        CHECK(verify_canonical(c, spec).ok);
    }
}

TEST_CASE("R-invariance and transform invariance of the I/O map") {
    test::Rng rng(233);
    for (int trial = 0; trial < 25; ++trial) {
        const size_t n = 1 + trial % 4;
        const size_t m = 1 + std::min<size_t>(trial % 2, n - 1);
        const size_t p = 1 + trial % 2;
        const auto spec = test::rand_observable_spec(rng, n, m, p);
        const auto ys = test::rand_inputs(rng, p, 21);
        const auto ref = run_exact(spec, ys, 21);

        // Any gain R leaves the I/O map unchanged when the true output is
        // fed back.
        const RatMatrix R = test::rand_matrix(rng, n, m);
        CHECK(test::outputs_equal(run_exact_reenc(spec, R, ys, 21), ref));

        // The transformed system reproduces the output exactly.
        const auto c = build_conversion(spec);
        CHECK(test::outputs_equal(run_exact(c, spec.x0, ys, 21), ref));
    }
}
