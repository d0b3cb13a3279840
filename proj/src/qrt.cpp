// SPDX-License-Identifier: Apache-2.0
#include "ictrl/qrt.hpp"

#include <algorithm>

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

RatVec sub(const RatVec &a, const RatVec &b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector subtraction sizes differ");
    RatVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

RatVec addv(const RatVec &a, const RatVec &b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector addition sizes differ");
    RatVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Rational max_norm(const RatVec &v) {
    Rational m(0);
    for (const auto &x : v) {
        Rational a = abs(x);
        if (a > m) m = a;
    }
    return m;
}

RatVec stack_window(const std::vector<RatVec> &window) {
    RatVec out;
    for (const auto &y : window) out.insert(out.end(), y.begin(), y.end());
    return out;
}

void check_inputs(const std::vector<RatVec> &inputs, size_t horizon) {
    if (inputs.size() < horizon) {
        throw DimensionMismatch("input sequence shorter than the requested horizon");
    }
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

}  // namespace

QuantParams::QuantParams(Rational r_, Rational s_) : r(std::move(r_)), s(std::move(s_)) {
    if (r.sign() <= 0) throw Error("quantization step must be positive");
    if (s.sign() <= 0 || s > Rational(1)) throw Error("scale divisor must satisfy 0 < s <= 1");
}

IntVec quantize(const RatVec &v, const Rational &step) { return round_vec(v, step); }

unsigned bits_for(const Int &max_abs) {
    if (max_abs == 0) return 1;
    return static_cast<unsigned>(mpz_sizeinbase(max_abs.get_mpz_t(), 2)) + 1;
}

RangeReport range_report(const std::vector<TraceRecord> &trace,
                         const std::vector<IntMatrix> &system_matrices) {
    if (trace.empty()) throw EmptyTrace("range report of an empty trace");
    RangeReport rep;
    rep.max_abs = 0;
    for (const auto &rec : trace) {
        for (const auto &[key, val] : rec.signal_max) {
            note(rep.per_signal, key, val);
            if (val > rep.max_abs) rep.max_abs = val;
        }
    }
    for (const auto &m : system_matrices) {
        note(rep.per_signal, "plaintext_matrix", m.max_abs());
        if (m.max_abs() > rep.max_abs) rep.max_abs = m.max_abs();
    }
    rep.required_bits = bits_for(rep.max_abs);
    return rep;
}

// ---- exact rational reference runs -------------------------------------

std::vector<RatVec> run_exact(const ControllerSpec &spec, const std::vector<RatVec> &inputs,
                              size_t horizon) {
    check_inputs(inputs, horizon);
    std::vector<RatVec> outputs;
    outputs.reserve(horizon);
    RatVec x = spec.x0.col_vec(0);
    for (size_t t = 0; t < horizon; ++t) {
        outputs.push_back(spec.H * x);
        RatVec next = addv(spec.F * x, spec.G * inputs[t]);
        x = std::move(next);
    }
    return outputs;
}

std::vector<RatVec> run_exact_reenc(const ControllerSpec &spec, const RatMatrix &R,
                                    const std::vector<RatVec> &inputs, size_t horizon) {
    check_inputs(inputs, horizon);
    if (R.rows() != spec.n() || R.cols() != spec.m()) {
        throw DimensionMismatch("gain must be n x m");
    }
    const RatMatrix FRH = spec.F - R * spec.H;
    std::vector<RatVec> outputs;
    outputs.reserve(horizon);
    RatVec x = spec.x0.col_vec(0);
    for (size_t t = 0; t < horizon; ++t) {
        const RatVec u = spec.H * x;
        outputs.push_back(u);
        x = addv(addv(FRH * x, spec.G * inputs[t]), R * u);
    }
    return outputs;
}

std::vector<RatVec> run_exact(const ConversionResult &c, const RatMatrix &x0,
                              const std::vector<RatVec> &inputs, size_t horizon) {
    check_inputs(inputs, horizon);
    const RatMatrix Tu_inv = inverse(c.T_u);
    std::vector<RatVec> outputs;
    outputs.reserve(horizon);
    RatVec z = (c.T * x0).col_vec(0);
    for (size_t t = 0; t < horizon; ++t) {
        const RatVec u = Tu_inv * (c.C_bar * z);
        outputs.push_back(u);
        z = addv(addv(c.A_bar * z, c.B_y * inputs[t]), c.B_u * u);
    }
    return outputs;
}

std::vector<RatVec> run_exact(const IntermittentResult &ir, const RatMatrix &x0,
                              const std::vector<RatVec> &inputs, size_t horizon) {
    check_inputs(inputs, horizon);
    std::vector<RatVec> outputs(horizon);
    RatVec z = (ir.T * x0).col_vec(0);
    RatVec u_period;  // output at the period start, fed back at the update
    std::vector<RatVec> window;
    for (size_t t = 0; t < horizon; ++t) {
        const unsigned i = static_cast<unsigned>(t % ir.k);
        RatVec u = ir.out_state[i] * z;
        if (i > 0) u = addv(u, ir.out_input[i] * stack_window(window));
        if (i == 0) u_period = u;
        outputs[t] = std::move(u);
        window.push_back(inputs[t]);
        if (window.size() == ir.k) {
            z = addv(addv(ir.A_bar * z, ir.B_Y * stack_window(window)), ir.B_u * u_period);
            window.clear();
        }
    }
    return outputs;
}

// ---- quantized integer runtimes -----------------------------------------

ConvertedRuntime::ConvertedRuntime(const ConversionResult &c, const QuantParams &q,
                                   const RatMatrix &x0, bool scale_output_too)
    : TG_rat_(c.B_y), TR_rat_(c.B_u), Tu_inv_(inverse(c.T_u)), q_(q) {
    A_ = IntMatrix::from_exact(c.A_bar);
    C_ = scale_output_too ? round_matrix(c.C_bar, q.s) : IntMatrix::from_exact(c.C_bar);
    TG_ = round_matrix(c.B_y, q.s);
    TR_ = round_matrix(c.B_u, q.s);
    recovery_ = scale_output_too ? q.r * q.s * q.s : q.r * q.s;
    if (x0.rows() != c.n() || x0.cols() != 1) {
        throw DimensionMismatch("initial state must be n x 1");
    }
    zbar_ = round_vec((c.T * x0).col_vec(0), q.r * q.s);
    mats_ = {A_, C_, TG_, TR_};
}

TraceRecord ConvertedRuntime::step(const RatVec &y) {
    TraceRecord rec;
    rec.t = t_;
    rec.y = y;
    rec.z_bar = zbar_;
    min_max(zbar_, rec.zbar_min, rec.zbar_max);

    RangeTracker out_tr;
    rec.u_z_bar = mul(C_, zbar_, &out_tr);
    rec.u_hat = scaled(recovery_, Tu_inv_ * to_rational(rec.u_z_bar));

    const IntVec qy = quantize(y, q_.r);
    const IntVec qu = quantize(rec.u_hat, q_.r);
    RangeTracker state_tr, input_tr;
    const IntVec shift = mul(A_, zbar_, &state_tr);
    const IntVec gy = mul(TG_, qy, &input_tr);
    const IntVec gu = mul(TR_, qu, &input_tr);

    const RatVec rounded = scaled(q_.r * q_.s, to_rational(add(gy, gu)));
    const RatVec ideal = addv(TG_rat_ * y, TR_rat_ * rec.u_hat);
    rec.residual_norm = max_norm(sub(rounded, ideal));

    zbar_ = add(add(shift, gy), gu);

    note(rec.signal_max, "z_bar", max_abs(rec.z_bar));
    note(rec.signal_max, "z_bar", max_abs(zbar_));
    note(rec.signal_max, "u_z_bar", max_abs(rec.u_z_bar));
    note(rec.signal_max, "y_quant", max_abs(qy));
    note(rec.signal_max, "u_hat_quant", max_abs(qu));
    note(rec.signal_max, "state_path", state_tr.max_abs);
    note(rec.signal_max, "input_path", input_tr.max_abs);
    note(rec.signal_max, "output_path", out_tr.max_abs);
    rec.state_updated = true;
    ++t_;
    return rec;
}

IntermittentRuntime::IntermittentRuntime(const IntermittentResult &ir, const QuantParams &q,
                                         const RatMatrix &x0)
    : k_(ir.k), q_(q) {
    A_ = IntMatrix::from_exact(ir.A_bar);
    BY_ = round_matrix(ir.B_Y, q.s);
    BU_ = round_matrix(ir.B_u, q.s);
    const Rational s2 = q.s * q.s;
    for (unsigned i = 0; i < k_; ++i) {
        OS_.push_back(round_matrix(ir.out_state[i], q.s));
        OI_.push_back(round_matrix(ir.out_input[i], s2));
    }
    recovery_ = q.r * s2;
    if (x0.rows() != ir.n() || x0.cols() != 1) {
        throw DimensionMismatch("initial state must be n x 1");
    }
    zbar_ = round_vec((ir.T * x0).col_vec(0), q.r * q.s);
    os_rat_.assign(ir.out_state.begin(), ir.out_state.end());
    oi_rat_.assign(ir.out_input.begin(), ir.out_input.end());
    mats_ = {A_, BY_, BU_};
    mats_.insert(mats_.end(), OS_.begin(), OS_.end());
    mats_.insert(mats_.end(), OI_.begin(), OI_.end());
}

TraceRecord IntermittentRuntime::step(const RatVec &y) {
    TraceRecord rec;
    rec.t = t_;
    rec.y = y;
    rec.z_bar = zbar_;
    min_max(zbar_, rec.zbar_min, rec.zbar_max);

    const RatVec Yi = stack_window(period_inputs_);
    const IntVec qY = quantize(Yi, q_.r);
    RangeTracker out_tr;
    rec.u_z_bar = add(mul(OS_[phase_], zbar_, &out_tr), mul(OI_[phase_], qY, &out_tr));
    rec.u_hat = scaled(recovery_, to_rational(rec.u_z_bar));

    // Residual of the output path against the unrounded schedule matrices
    // applied to the same integer state and quantized inputs.
    const RatVec ideal = addv(scaled(q_.r * q_.s, os_rat_[phase_] * to_rational(zbar_)),
                              scaled(q_.r, oi_rat_[phase_] * to_rational(qY)));
    rec.residual_norm = max_norm(sub(rec.u_hat, ideal));

    rec.state_updated = phase_ == 0;
    if (phase_ == 0) u_feedback_ = quantize(rec.u_hat, q_.r);

    note(rec.signal_max, "z_bar", max_abs(zbar_));
    note(rec.signal_max, "u_z_bar", max_abs(rec.u_z_bar));
    note(rec.signal_max, "y_quant", max_abs(qY));
    note(rec.signal_max, "u_hat_quant", max_abs(u_feedback_));
    note(rec.signal_max, "output_path", out_tr.max_abs);

    period_inputs_.push_back(y);
    if (period_inputs_.size() == k_) {
        const IntVec qYk = quantize(stack_window(period_inputs_), q_.r);
        RangeTracker state_tr, input_tr;
        zbar_ = add(add(mul(A_, zbar_, &state_tr), mul(BY_, qYk, &input_tr)),
                    mul(BU_, u_feedback_, &input_tr));
        period_inputs_.clear();
        phase_ = 0;
        note(rec.signal_max, "z_bar", max_abs(zbar_));
        note(rec.signal_max, "y_quant", max_abs(qYk));
        note(rec.signal_max, "state_path", state_tr.max_abs);
        note(rec.signal_max, "input_path", input_tr.max_abs);
    } else {
        ++phase_;
    }
    ++t_;
    return rec;
}

std::vector<TraceRecord> run_converted(const ConversionResult &c, const QuantParams &q,
                                       const RatMatrix &x0, const std::vector<RatVec> &inputs,
                                       size_t horizon) {
    check_inputs(inputs, horizon);
    const auto reference = run_exact(c, x0, inputs, horizon);
    ConvertedRuntime rt(c, q, x0);
    std::vector<TraceRecord> trace;
    trace.reserve(horizon);
    for (size_t t = 0; t < horizon; ++t) {
        TraceRecord rec = rt.step(inputs[t]);
        rec.u_exact = reference[t];
        trace.push_back(std::move(rec));
    }
    return trace;
}

std::vector<TraceRecord> run_converted_scaled_output(const ConversionResult &c, const QuantParams &q,
                                                     const RatMatrix &x0,
                                                     const std::vector<RatVec> &inputs,
                                                     size_t horizon) {
    check_inputs(inputs, horizon);
    const auto reference = run_exact(c, x0, inputs, horizon);
    ConvertedRuntime rt(c, q, x0, /*scale_output_too=*/true);
    std::vector<TraceRecord> trace;
    trace.reserve(horizon);
    for (size_t t = 0; t < horizon; ++t) {
        TraceRecord rec = rt.step(inputs[t]);
        rec.u_exact = reference[t];
        trace.push_back(std::move(rec));
    }
    return trace;
}

std::vector<TraceRecord> run_intermittent_rt(const IntermittentResult &ir, const QuantParams &q,
                                             const RatMatrix &x0, const std::vector<RatVec> &inputs,
                                             size_t horizon) {
    check_inputs(inputs, horizon);
    const auto reference = run_exact(ir, x0, inputs, horizon);
    IntermittentRuntime rt(ir, q, x0);
    std::vector<TraceRecord> trace;
    trace.reserve(horizon);
    for (size_t t = 0; t < horizon; ++t) {
        TraceRecord rec = rt.step(inputs[t]);
        rec.u_exact = reference[t];
        trace.push_back(std::move(rec));
    }
    return trace;
}

// ---- diagnostics ---------------------------------------------------------

Rational quant_residual(const ConversionResult &c, const QuantParams &q, const RatVec &y,
                        const RatVec &u_hat) {
    const IntMatrix TGq = round_matrix(c.B_y, q.s);
    const IntMatrix TRq = round_matrix(c.B_u, q.s);
    const IntVec qy = quantize(y, q.r);
    const IntVec qu = quantize(u_hat, q.r);
    const RatVec rounded = scaled(q.r * q.s, to_rational(add(mul(TGq, qy), mul(TRq, qu))));
    const RatVec ideal = addv(c.B_y * y, c.B_u * u_hat);
    return max_norm(sub(rounded, ideal));
}

Rational quant_residual(const IntermittentResult &ir, const QuantParams &q, const RatVec &y_stacked,
                        const RatVec &u_hat) {
    const IntMatrix BYq = round_matrix(ir.B_Y, q.s);
    const IntMatrix BUq = round_matrix(ir.B_u, q.s);
    const IntVec qY = quantize(y_stacked, q.r);
    const IntVec qu = quantize(u_hat, q.r);
    const RatVec rounded = scaled(q.r * q.s, to_rational(add(mul(BYq, qY), mul(BUq, qu))));
    const RatVec ideal = addv(ir.B_Y * y_stacked, ir.B_u * u_hat);
    return max_norm(sub(rounded, ideal));
}

Rational exact_scale_factor(const std::vector<const RatMatrix *> &mats) {
    Int L = 1;
    for (const auto *m : mats) {
        for (size_t i = 0; i < m->rows(); ++i) {
            for (size_t j = 0; j < m->cols(); ++j) {
                L = lcm(L, (*m)(i, j).den());
            }
        }
    }
    return Rational(Int(1), L);
}

Rational exact_scale_factor(const ConversionResult &c) {
    return exact_scale_factor({&c.B_y, &c.B_u});
}

}  // namespace ictrl
