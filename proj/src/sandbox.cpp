// SPDX-License-Identifier: Apache-2.0
#include "ictrl/sandbox.hpp"

#include "ictrl/errors.hpp"

namespace ictrl {

namespace {

RatVec to_rational(const IntVec &v) {
    RatVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = Rational(v[i]);
    return r;
}

RatVec scaled(const Rational &s, const RatVec &v) {
    RatVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
    return r;
}

void min_max(const IntVec &v, Int &mn, Int &mx) {
    mn = 0;
    mx = 0;
    if (v.empty()) return;
    mn = v[0];
    mx = v[0];
    for (const auto &x : v) {
        if (x < mn) mn = x;
        if (x > mx) mx = x;
    }
}

void note(std::map<std::string, Int> &sig, const std::string &key, const Int &val) {
    auto it = sig.find(key);
    if (it == sig.end() || it->second < val) sig[key] = val;
}

MockCiphertext concat(const std::vector<MockCiphertext> &parts) {
    MockCiphertext out;
    out.origin = MockCiphertext::Origin::derived;
    for (const auto &p : parts) out.payload.insert(out.payload.end(), p.payload.begin(), p.payload.end());
    return out;
}

}  // namespace

ModulusConfig::ModulusConfig(Int q_) : q(std::move(q_)) {
    if (q < 2) throw Error("plaintext modulus must be at least 2");
}

ModulusConfig ModulusConfig::bits(unsigned b) {
    Int q = 1;
    q <<= b;
    return ModulusConfig(q);
}

Int ModulusConfig::reduce(const Int &x) const {
    Int rem;
    mpz_fdiv_r(rem.get_mpz_t(), x.get_mpz_t(), q.get_mpz_t());
    const Int half = (q + 1) / 2;  // ceil(q/2)
    if (rem >= half) rem -= q;
    return rem;
}

MockCiphertext SandboxContext::encrypt(const IntVec &plain) const {
    MockCiphertext ct;
    ct.origin = MockCiphertext::Origin::fresh;
    ct.payload.reserve(plain.size());
    for (const auto &x : plain) ct.payload.push_back(mod_.reduce(x));
    return ct;
}

IntVec SandboxContext::decrypt(const MockCiphertext &ct) const { return ct.payload; }

MockCiphertext SandboxContext::add(const MockCiphertext &a, const MockCiphertext &b) {
    if (a.payload.size() != b.payload.size()) {
        throw DimensionMismatch("ciphertext addition sizes differ");
    }
    MockCiphertext out;
    out.origin = MockCiphertext::Origin::derived;
    out.payload.resize(a.payload.size());
    for (size_t i = 0; i < a.payload.size(); ++i) {
        out.payload[i] = mod_.reduce(a.payload[i] + b.payload[i]);
        ++counters_.add_count;
    }
    return out;
}

MockCiphertext SandboxContext::plaintext_mult(const RatMatrix &plain, const MockCiphertext &ct) {
    for (size_t i = 0; i < plain.rows(); ++i) {
        for (size_t j = 0; j < plain.cols(); ++j) {
            if (!plain(i, j).is_integer()) {
                throw NonIntegerPlaintext("plaintext matrix entry (" + std::to_string(i) + "," +
                                          std::to_string(j) + ") = " + plain(i, j).str() +
                                          " is not an integer");
            }
        }
    }
    return plaintext_mult(IntMatrix::from_exact(plain), ct);
}

MockCiphertext SandboxContext::plaintext_mult(const IntMatrix &plain, const MockCiphertext &ct) {
    if (plain.cols() != ct.payload.size()) {
        throw DimensionMismatch("plaintext matrix width does not match ciphertext length");
    }
    MockCiphertext out;
    out.origin = MockCiphertext::Origin::derived;
    out.payload.resize(plain.rows());
    for (size_t i = 0; i < plain.rows(); ++i) {
        Int acc = 0;
        for (size_t j = 0; j < plain.cols(); ++j) {
            const Int &e = plain(i, j);
            if (e == 0) continue;
            if (e != 1) ++counters_.pmult_count;  // 1 is a shift/copy, not a multiply
            acc = mod_.reduce(acc + e * ct.payload[j]);
            ++counters_.add_count;
        }
        out.payload[i] = acc;
    }
    return out;
}

SandboxTrace run_sandboxed(const ConversionResult &c, const QuantParams &q, const ModulusConfig &mod,
                           const RatMatrix &x0, const std::vector<RatVec> &inputs, size_t horizon) {
    const auto shadow = run_converted(c, q, x0, inputs, horizon);

    SandboxContext state_ctx(mod), input_ctx(mod);
    const IntMatrix A = IntMatrix::from_exact(c.A_bar);
    const IntMatrix C = IntMatrix::from_exact(c.C_bar);
    const IntMatrix TG = round_matrix(c.B_y, q.s);
    const IntMatrix TR = round_matrix(c.B_u, q.s);
    const RatMatrix Tu_inv = inverse(c.T_u);
    const Rational recovery = q.r * q.s;

    SandboxTrace trace;
    MockCiphertext ct_z = state_ctx.encrypt(round_vec((c.T * x0).col_vec(0), q.r * q.s));
    for (size_t t = 0; t < horizon; ++t) {
        const long long adds0 = state_ctx.counters().add_count + input_ctx.counters().add_count;
        const long long pmults0 = state_ctx.counters().pmult_count + input_ctx.counters().pmult_count;
        TraceRecord rec;
        rec.t = static_cast<long>(t);
        rec.y = inputs[t];
        rec.z_bar = state_ctx.decrypt(ct_z);
        min_max(rec.z_bar, rec.zbar_min, rec.zbar_max);
        if (rec.z_bar != shadow[t].z_bar) trace.wraparound_detected = true;

        const MockCiphertext ct_uz = state_ctx.plaintext_mult(C, ct_z);
        rec.u_z_bar = state_ctx.decrypt(ct_uz);
        if (rec.u_z_bar != shadow[t].u_z_bar) trace.wraparound_detected = true;

        // Key-holder round trip: decrypt, recover, requantize, re-encrypt.
        rec.u_hat = scaled(recovery, Tu_inv * to_rational(rec.u_z_bar));
        const IntVec qu = quantize(rec.u_hat, q.r);
        const MockCiphertext ct_u = [&] {
            MockCiphertext f = input_ctx.encrypt(qu);
            f.origin = MockCiphertext::Origin::reencrypted;
            return f;
        }();
        trace.key_access_times.push_back(rec.t);
        ++trace.reenc_count;

        const IntVec qy = quantize(inputs[t], q.r);
        const MockCiphertext ct_y = input_ctx.encrypt(qy);

        ct_z = state_ctx.add(state_ctx.plaintext_mult(A, ct_z),
                             input_ctx.add(input_ctx.plaintext_mult(TG, ct_y),
                                           input_ctx.plaintext_mult(TR, ct_u)));

        rec.u_exact = shadow[t].u_exact;
        rec.residual_norm = shadow[t].residual_norm;
        rec.state_updated = true;
        note(rec.signal_max, "z_bar", max_abs(rec.z_bar));
        note(rec.signal_max, "u_z_bar", max_abs(rec.u_z_bar));
        note(rec.signal_max, "y_quant", max_abs(qy));
        note(rec.signal_max, "u_hat_quant", max_abs(qu));
        trace.records.push_back(std::move(rec));
        trace.step_adds.push_back(state_ctx.counters().add_count + input_ctx.counters().add_count - adds0);
        trace.step_pmults.push_back(state_ctx.counters().pmult_count + input_ctx.counters().pmult_count -
                                    pmults0);
        trace.step_wrap.push_back(trace.wraparound_detected);
    }
    trace.pmult_state = state_ctx.counters().pmult_count;
    trace.pmult_input = input_ctx.counters().pmult_count;
    trace.pmult_count = trace.pmult_state + trace.pmult_input;
    trace.add_count = state_ctx.counters().add_count + input_ctx.counters().add_count;
    return trace;
}

SandboxTrace run_sandboxed(const IntermittentResult &ir, const QuantParams &q,
                           const ModulusConfig &mod, const RatMatrix &x0,
                           const std::vector<RatVec> &inputs, size_t horizon) {
    const auto shadow = run_intermittent_rt(ir, q, x0, inputs, horizon);

    SandboxContext state_ctx(mod), input_ctx(mod);
    const IntMatrix A = IntMatrix::from_exact(ir.A_bar);
    const IntMatrix BY = round_matrix(ir.B_Y, q.s);
    const IntMatrix BU = round_matrix(ir.B_u, q.s);
    std::vector<IntMatrix> OS, OI;
    for (unsigned i = 0; i < ir.k; ++i) {
        OS.push_back(round_matrix(ir.out_state[i], q.s));
        OI.push_back(round_matrix(ir.out_input[i], q.s * q.s));
    }
    const Rational recovery = q.r * q.s * q.s;

    SandboxTrace trace;
    MockCiphertext ct_z = state_ctx.encrypt(round_vec((ir.T * x0).col_vec(0), q.r * q.s));
    MockCiphertext ct_u_feedback;
    std::vector<MockCiphertext> window;
    for (size_t t = 0; t < horizon; ++t) {
        const long long adds0 = state_ctx.counters().add_count + input_ctx.counters().add_count;
        const long long pmults0 = state_ctx.counters().pmult_count + input_ctx.counters().pmult_count;
        const unsigned phase = static_cast<unsigned>(t % ir.k);
        TraceRecord rec;
        rec.t = static_cast<long>(t);
        rec.y = inputs[t];
        rec.z_bar = state_ctx.decrypt(ct_z);
        min_max(rec.z_bar, rec.zbar_min, rec.zbar_max);
        if (rec.z_bar != shadow[t].z_bar) trace.wraparound_detected = true;

        MockCiphertext ct_uz = input_ctx.plaintext_mult(OS[phase], ct_z);
        if (phase > 0) {
            ct_uz = input_ctx.add(ct_uz, input_ctx.plaintext_mult(OI[phase], concat(window)));
        }
        rec.u_z_bar = input_ctx.decrypt(ct_uz);
        if (rec.u_z_bar != shadow[t].u_z_bar) trace.wraparound_detected = true;
        rec.u_hat = scaled(recovery, to_rational(rec.u_z_bar));

        if (phase == 0) {
            // Key-holder round trip at the period start only.
            const IntVec qu = quantize(rec.u_hat, q.r);
            ct_u_feedback = input_ctx.encrypt(qu);
            ct_u_feedback.origin = MockCiphertext::Origin::reencrypted;
            trace.key_access_times.push_back(rec.t);
            ++trace.reenc_count;
            note(rec.signal_max, "u_hat_quant", max_abs(qu));
        }

        const IntVec qy = quantize(inputs[t], q.r);
        window.push_back(input_ctx.encrypt(qy));
        if (window.size() == ir.k) {
            ct_z = state_ctx.add(state_ctx.plaintext_mult(A, ct_z),
                                 input_ctx.add(input_ctx.plaintext_mult(BY, concat(window)),
                                               input_ctx.plaintext_mult(BU, ct_u_feedback)));
            window.clear();
        }

        rec.u_exact = shadow[t].u_exact;
        rec.residual_norm = shadow[t].residual_norm;
        rec.state_updated = phase == 0;
        note(rec.signal_max, "z_bar", max_abs(rec.z_bar));
        note(rec.signal_max, "u_z_bar", max_abs(rec.u_z_bar));
        note(rec.signal_max, "y_quant", max_abs(qy));
        trace.records.push_back(std::move(rec));
        trace.step_adds.push_back(state_ctx.counters().add_count + input_ctx.counters().add_count - adds0);
        trace.step_pmults.push_back(state_ctx.counters().pmult_count + input_ctx.counters().pmult_count -
                                    pmults0);
        trace.step_wrap.push_back(trace.wraparound_detected);
    }
    trace.pmult_state = state_ctx.counters().pmult_count;
    trace.pmult_input = input_ctx.counters().pmult_count;
    trace.pmult_count = trace.pmult_state + trace.pmult_input;
    trace.add_count = state_ctx.counters().add_count + input_ctx.counters().add_count;
    return trace;
}

SandboxTrace run_sandboxed_raw(const ControllerSpec &spec, const ModulusConfig &mod,
                               const std::vector<RatVec> &inputs, size_t horizon) {
    SandboxContext state_ctx(mod), input_ctx(mod);
    SandboxTrace trace;

    const IntVec x0_int = round_vec(spec.x0.col_vec(0), Rational(1));
    MockCiphertext ct_x = state_ctx.encrypt(x0_int);

    // Unbounded shadow of the same rounded recursion (wrap detection);
    // only well-defined once the matrices are integral, which is exactly
    // what plaintext_mult enforces below.
    IntVec x_shadow = x0_int;
    const auto exact = run_exact(spec, inputs, horizon);

    for (size_t t = 0; t < horizon; ++t) {
        const long long adds0 = state_ctx.counters().add_count + input_ctx.counters().add_count;
        const long long pmults0 = state_ctx.counters().pmult_count + input_ctx.counters().pmult_count;
        TraceRecord rec;
        rec.t = static_cast<long>(t);
        rec.y = inputs[t];
        rec.z_bar = state_ctx.decrypt(ct_x);
        min_max(rec.z_bar, rec.zbar_min, rec.zbar_max);
        if (rec.z_bar != x_shadow) trace.wraparound_detected = true;

        // The recursive state multiplication is the step that demands an
        // integer state matrix; it comes first.
        const MockCiphertext ct_fx = state_ctx.plaintext_mult(spec.F, ct_x);
        const MockCiphertext ct_u = state_ctx.plaintext_mult(spec.H, ct_x);
        rec.u_z_bar = state_ctx.decrypt(ct_u);
        rec.u_hat = to_rational(rec.u_z_bar);
        rec.u_exact = exact[t];

        const IntVec qy = quantize(inputs[t], Rational(1));
        const MockCiphertext ct_y = input_ctx.encrypt(qy);
        ct_x = state_ctx.add(ct_fx, input_ctx.plaintext_mult(spec.G, ct_y));

        const IntMatrix Fi = IntMatrix::from_exact(spec.F);
        const IntMatrix Gi = IntMatrix::from_exact(spec.G);
        x_shadow = add(mul(Fi, x_shadow), mul(Gi, qy));

        rec.state_updated = false;  // no re-encryption anywhere in the raw run
        note(rec.signal_max, "z_bar", max_abs(rec.z_bar));
        note(rec.signal_max, "u_z_bar", max_abs(rec.u_z_bar));
        note(rec.signal_max, "y_quant", max_abs(qy));
        trace.records.push_back(std::move(rec));
        trace.step_adds.push_back(state_ctx.counters().add_count + input_ctx.counters().add_count - adds0);
        trace.step_pmults.push_back(state_ctx.counters().pmult_count + input_ctx.counters().pmult_count -
                                    pmults0);
        trace.step_wrap.push_back(trace.wraparound_detected);
    }
    trace.pmult_state = state_ctx.counters().pmult_count;
    trace.pmult_input = input_ctx.counters().pmult_count;
    trace.pmult_count = trace.pmult_state + trace.pmult_input;
    trace.add_count = state_ctx.counters().add_count + input_ctx.counters().add_count;
    return trace;
}

}  // namespace ictrl
