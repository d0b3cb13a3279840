// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ictrl/errors.hpp"
#include "ictrl/qrt.hpp"
#include "testutil.hpp"

using namespace ictrl;

namespace {

ControllerSpec shift_spec(RatMatrix x0 = RatMatrix::zero(2, 1)) {
    return ControllerSpec(RatMatrix{{0, 1}, {0, 0}}, RatMatrix{{0}, {1}}, RatMatrix{{1, 1}},
                          std::move(x0), "shift");
}

ControllerSpec diag14_spec() {
    return ControllerSpec(RatMatrix{{1, 0}, {0, 4}}, RatMatrix{{1}, {1}}, RatMatrix{{1, 1}},
                          RatMatrix{{Rational(1, 7)}, {Rational(-1, 7)}}, "diag14");
}

Rational max_output_error(const std::vector<TraceRecord> &trace) {
    Rational err(0);
    for (const auto &rec : trace) {
        for (size_t i = 0; i < rec.u_hat.size(); ++i) {
            const Rational d = abs(rec.u_hat[i] - rec.u_exact[i]);
            if (d > err) err = d;
        }
    }
    return err;
}

std::vector<RatVec> step_input(size_t p, size_t horizon, const Rational &height) {
    return std::vector<RatVec>(horizon, RatVec(p, height));
}

}  // namespace

TEST_CASE("quantize: componentwise rounding with away-from-zero ties") {
    CHECK(quantize({Rational(1, 2)}, Rational(1)) == IntVec{1});
    CHECK(quantize({Rational(-1, 2)}, Rational(1)) == IntVec{-1});
    CHECK(quantize({Rational(3, 2), Rational(-7, 3)}, Rational(1, 10)) == IntVec{15, -23});
}

TEST_CASE("run_exact: zero input and zero state give zero output") {
    const auto spec = shift_spec();
    const auto out = run_exact(spec, step_input(1, 10, Rational(0)), 10);
    for (const auto &u : out) CHECK(u == RatVec{Rational(0)});
}

TEST_CASE("run_exact variants coincide exactly") {
    test::Rng rng(401);
    for (int trial = 0; trial < 10; ++trial) {
        const size_t n = 1 + trial % 4;
        const auto spec = test::rand_observable_spec(rng, n, 1, 1);
        const auto ys = test::rand_inputs(rng, 1, 20);
        const auto ref = run_exact(spec, ys, 20);
        const auto c = build_conversion(spec);
        CHECK(test::outputs_equal(run_exact(c, spec.x0, ys, 20), ref));
        const unsigned k = suggest_period(spec.F, 2);
        const auto ir = build_intermittent(spec, k);
        CHECK(test::outputs_equal(run_exact(ir, spec.x0, ys, 20), ref));
    }
}

TEST_CASE("run_converted: integer data with r = s = 1 is exact") {
    const auto spec = shift_spec(RatMatrix{{1}, {-2}});
    const auto c = build_conversion(spec);
    // T is integral here, so nothing is ever rounded.
    CHECK(c.T.is_integral());
    CHECK(c.B_y.is_integral());
    test::Rng rng(403);
    const auto ys = test::rand_inputs(rng, 1, 15, 3, 1);  // integer inputs
    const QuantParams q{Rational(1), Rational(1)};
    const auto trace = run_converted(c, q, spec.x0, ys, 15);
    for (const auto &rec : trace) {
        CHECK(rec.u_hat == rec.u_exact);
        CHECK(rec.residual_norm == Rational(0));
    }
}

TEST_CASE("run_converted: decimal scaling stays exact when matrices divide out") {
    // The literal worked example: integer transformed matrices and a step
    // input keep the runtime exact for every decimal r = s.
    const auto spec = shift_spec();
    const auto c = build_conversion(spec);
    for (int dec = 1; dec <= 4; ++dec) {
        Rational rs(1);
        for (int i = 0; i < dec; ++i) rs = rs / Rational(10);
        const auto trace = run_converted(c, QuantParams{rs, rs}, spec.x0, step_input(1, 20, Rational(1)), 20);
        CHECK(max_output_error(trace) == Rational(0));
    }
}

TEST_CASE("run_converted: zero input, zero state stays zero") {
    const auto spec = shift_spec();
    const auto c = build_conversion(spec);
    const auto trace = run_converted(c, QuantParams{Rational(1, 1000), Rational(1, 1000)}, spec.x0,
                                     step_input(1, 10, Rational(0)), 10);
    for (const auto &rec : trace) {
        CHECK(rec.u_hat == RatVec{Rational(0)});
        CHECK(rec.zbar_min == 0);
        CHECK(rec.zbar_max == 0);
    }
}

TEST_CASE("run_converted: error strictly decreases over decades when rounding is active") {
    const auto spec = diag14_spec();  // thirds everywhere: rounding is real
    const auto c = build_conversion(spec);
    test::Rng rng(409);
    const auto ys = test::rand_inputs(rng, 1, 20, 3, 7);
    Rational prev(-1);
    for (int dec = 1; dec <= 4; ++dec) {
        Rational rs(1);
        for (int i = 0; i < dec; ++i) rs = rs / Rational(10);
        const auto trace = run_converted(c, QuantParams{rs, rs}, spec.x0, ys, 20);
        const Rational err = max_output_error(trace);
        if (prev >= Rational(0)) CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("exact-scaling case: runtime equals the scaled exact trace with zero residual") {
    test::Rng rng(419);
    for (int trial = 0; trial < 8; ++trial) {
        const size_t n = 1 + trial % 3;
        const auto base = test::rand_observable_spec(rng, n, 1, 1, /*integer_entries=*/true);
        const ControllerSpec spec(base.F, base.G, base.H, RatMatrix::zero(n, 1), "int");
        const auto c = build_conversion(spec);
        const Rational s = exact_scale_factor(c);
        const Rational r(1, 5);
        // Integer outputs are automatically multiples of r = 1/5.
        const auto ys = test::rand_inputs(rng, 1, 15, 3, 1);
        const auto trace = run_converted(c, QuantParams{r, s}, spec.x0, ys, 15);

        // Reference: exact transformed state z(t), which must equal r s zbar(t).
        RatVec z((c.T * spec.x0).col_vec(0));
        const RatMatrix Tu_inv = inverse(c.T_u);
        for (size_t t = 0; t < trace.size(); ++t) {
            const auto &rec = trace[t];
            CHECK(rec.residual_norm == Rational(0));
            CHECK(rec.u_hat == rec.u_exact);
            REQUIRE(rec.z_bar.size() == z.size());
            for (size_t i = 0; i < z.size(); ++i) {
                CHECK(Rational(rec.z_bar[i]) * r * s == z[i]);
            }
            const RatVec u = Tu_inv * (c.C_bar * z);
            RatVec next = c.A_bar * z;
            const RatVec by = c.B_y * ys[t];
            const RatVec bu = c.B_u * u;
            for (size_t i = 0; i < next.size(); ++i) next[i] += by[i] + bu[i];
            z = std::move(next);
        }
    }
}

TEST_CASE("exact_scale_factor finds the least common denominator") {
    const RatMatrix a{{Rational(1, 6), Rational(3, 4)}};
    const RatMatrix b{{Rational(2, 3)}};
    CHECK(exact_scale_factor({&a, &b}) == Rational(1, 12));
    const RatMatrix c{{1, 2}};
    CHECK(exact_scale_factor({&c}) == Rational(1));
}

TEST_CASE("run_intermittent_rt: k = 1 with integer data is exact") {
    const auto spec = shift_spec(RatMatrix{{2}, {1}});
    const auto ir = build_intermittent(spec, 1);
    test::Rng rng(421);
    const auto ys = test::rand_inputs(rng, 1, 12, 3, 1);
    const auto trace = run_intermittent_rt(ir, QuantParams{Rational(1), Rational(1)}, spec.x0, ys, 12);
    for (const auto &rec : trace) {
        CHECK(rec.u_hat == rec.u_exact);
        CHECK(rec.state_updated);
    }
}

TEST_CASE("run_intermittent_rt: worked k = 2 example, events only at even steps") {
    const auto spec = shift_spec();
    const auto ir = build_intermittent(spec, 2);
    test::Rng rng(431);
    const auto ys = test::rand_inputs(rng, 1, 20, 3, 7);
    const Rational rs(1, 1000);
    const auto trace = run_intermittent_rt(ir, QuantParams{rs, rs}, spec.x0, ys, 20);
    CHECK(max_output_error(trace) < Rational(1, 100));
    for (const auto &rec : trace) {
        CHECK(rec.state_updated == (rec.t % 2 == 0));
    }
}

TEST_CASE("run_intermittent_rt: scale consistency validates the r s^2 recovery") {
    // Integer system, r = 1/2, s = 1/3: every scaled matrix and every
    // quantized signal is exact, so the recovered output must equal the
    // plain recursion output exactly.
    const auto spec = shift_spec();
    const auto ir = build_intermittent(spec, 2);
    CHECK(ir.T.is_identity());
    test::Rng rng(433);
    std::vector<RatVec> ys(16);
    for (auto &y : ys) y = {Rational(std::uniform_int_distribution<int>(-6, 6)(rng), 2)};
    const auto trace =
        run_intermittent_rt(ir, QuantParams{Rational(1, 2), Rational(1, 3)}, spec.x0, ys, 16);
    for (const auto &rec : trace) {
        CHECK(rec.u_hat == rec.u_exact);
        CHECK(rec.residual_norm == Rational(0));
    }
}

TEST_CASE("run_intermittent_rt: scalar sweep improves with finer quantization") {
    const ControllerSpec spec(RatMatrix{{Rational(1, 2)}}, RatMatrix{{1}}, RatMatrix{{1}},
                              RatMatrix{{Rational(1, 7)}}, "scalar");
    const auto ir = build_intermittent(spec, 3);
    test::Rng rng(439);
    const auto ys = test::rand_inputs(rng, 1, 24, 3, 7);
    const auto coarse =
        run_intermittent_rt(ir, QuantParams{Rational(1, 100), Rational(1, 100)}, spec.x0, ys, 24);
    const auto fine =
        run_intermittent_rt(ir, QuantParams{Rational(1, 10000), Rational(1, 10000)}, spec.x0, ys, 24);
    CHECK(max_output_error(fine) < max_output_error(coarse));
}

TEST_CASE("quant_residual: exact-scaling zero, zero data zero, finer is smaller") {
    const auto spec = diag14_spec();
    const auto c = build_conversion(spec);

    // Exact-scaling: s clears every denominator, data are multiples of r.
    const Rational s = exact_scale_factor(c);
    CHECK(quant_residual(c, QuantParams{Rational(1, 4), s}, {Rational(3, 2)}, {Rational(-5, 4)}) ==
          Rational(0));

    CHECK(quant_residual(c, QuantParams{Rational(1, 100), Rational(1, 100)}, {Rational(0)},
                         {Rational(0)}) == Rational(0));

    const RatVec y{Rational(9, 7)};
    const RatVec u{Rational(-3, 11)};
    const Rational coarse = quant_residual(c, QuantParams{Rational(1, 100), Rational(1, 100)}, y, u);
    const Rational fine = quant_residual(c, QuantParams{Rational(1, 1000), Rational(1, 1000)}, y, u);
    CHECK(fine < coarse);
}

TEST_CASE("range_report: trivial bounds and bit counts") {
    CHECK(bits_for(Int(0)) == 1);
    CHECK(bits_for(Int(1)) == 2);
    CHECK(bits_for(Int(9)) == 5);

    const auto spec = shift_spec();
    const auto c = build_conversion(spec);
    const QuantParams q{Rational(1, 100), Rational(1, 100)};
    const auto trace = run_converted(c, q, spec.x0, step_input(1, 10, Rational(0)), 10);
    ConvertedRuntime rt(c, q, spec.x0);
    const auto rep = range_report(trace, rt.system_matrices());
    CHECK(rep.per_signal.at("z_bar") == 0);

    CHECK_THROWS_AS(range_report({}, {}), EmptyTrace);

    // A single synthetic record pins the z-range accounting.
    TraceRecord rec;
    rec.z_bar = {Int(5), Int(-9)};
    rec.signal_max["z_bar"] = 9;
    const auto rep2 = range_report({rec}, {});
    CHECK(rep2.max_abs >= 9);
    CHECK(rep2.required_bits == 5);
}

TEST_CASE("double-scaled output variant needs a larger plaintext space") {
    const auto spec = diag14_spec();
    const auto c = build_conversion(spec);
    test::Rng rng(443);
    const auto ys = test::rand_inputs(rng, 1, 25, 3, 7);
    const QuantParams q{Rational(1, 1000), Rational(1, 1000)};

    const auto plain = run_converted(c, q, spec.x0, ys, 25);
    const auto scaled = run_converted_scaled_output(c, q, spec.x0, ys, 25);

    // Identical recovered outputs (1/s is an integer), different ranges.
    for (size_t t = 0; t < plain.size(); ++t) CHECK(plain[t].u_hat == scaled[t].u_hat);

    ConvertedRuntime rt_plain(c, q, spec.x0);
    ConvertedRuntime rt_scaled(c, q, spec.x0, true);
    const auto rep_plain = range_report(plain, rt_plain.system_matrices());
    const auto rep_scaled = range_report(scaled, rt_scaled.system_matrices());
    const unsigned bits_plain = bits_for(rep_plain.per_signal.at("u_z_bar"));
    const unsigned bits_scaled = bits_for(rep_scaled.per_signal.at("u_z_bar"));
    CHECK(bits_plain < bits_scaled);
    // The gap is the scale factor: ~log2(1000) bits.
    CHECK(bits_scaled - bits_plain >= 9);
    CHECK(bits_scaled - bits_plain <= 11);
}

TEST_CASE("integer closure: state and transformed output are integer vectors") {
    const auto spec = diag14_spec();
    const auto c = build_conversion(spec);
    test::Rng rng(449);
    const auto ys = test::rand_inputs(rng, 1, 10);
    const auto trace =
        run_converted(c, QuantParams{Rational(1, 50), Rational(1, 50)}, spec.x0, ys, 10);
    // IntVec by type; the recovered output is r*s*T_u^{-1} times an integer
    // vector, which the trace must reflect exactly.
    const RatMatrix Tu_inv = inverse(c.T_u);
    for (const auto &rec : trace) {
        RatVec expect = Tu_inv * RatVec{Rational(rec.u_z_bar[0])};
        for (auto &e : expect) e = e * Rational(1, 50) * Rational(1, 50);
        CHECK(rec.u_hat == expect);
    }
}
