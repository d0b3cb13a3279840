// SPDX-License-Identifier: Apache-2.0
#include "ictrl/sim.hpp"

#include "ictrl/errors.hpp"
#include "ictrl/poly.hpp"

namespace ictrl {

PlantSpec::PlantSpec(RatMatrix A_, RatMatrix B_, RatMatrix C_, RatMatrix xp0_, std::string name_)
    : A(std::move(A_)), B(std::move(B_)), C(std::move(C_)), xp0(std::move(xp0_)), name(std::move(name_)) {
    const size_t nx_ = A.rows();
    if (A.cols() != nx_ || nx_ == 0) throw DimensionMismatch("plant state matrix must be square");
    if (B.rows() != nx_ || B.cols() == 0) throw DimensionMismatch("plant input matrix must be nx x m");
    if (C.cols() != nx_ || C.rows() == 0) throw DimensionMismatch("plant output matrix must be p x nx");
    if (xp0.rows() != nx_ || xp0.cols() != 1) throw DimensionMismatch("plant initial state must be nx x 1");
}

ArxModel arx_from_ss(const ControllerSpec &spec) {
    const size_t n = spec.n();
    const RatPoly rho = char_poly(spec.F);  // monic, degree n
    ArxModel model;
    model.order = n;
    model.a.resize(n);
    for (size_t i = 1; i <= n; ++i) model.a[i - 1] = -rho.coeff(n - i);
    // B_i = H (c_n F^{i-1} + c_{n-1} F^{i-2} + ... + c_{n-i+1} I) G, c_n = 1.
    std::vector<RatMatrix> Fpow{RatMatrix::identity(n)};
    for (size_t j = 1; j < n; ++j) Fpow.push_back(Fpow.back() * spec.F);
    for (size_t i = 1; i <= n; ++i) {
        RatMatrix acc = RatMatrix::zero(n, n);
        for (size_t j = 0; j < i; ++j) {
            acc = acc + rho.coeff(n - i + 1 + j) * Fpow[j];
        }
        model.Bys.push_back(spec.H * acc * spec.G);
    }
    return model;
}

std::vector<RatVec> run_arx(const ControllerSpec &spec, const ArxModel &model,
                            const std::vector<RatVec> &inputs, size_t horizon) {
    if (inputs.size() < horizon) throw DimensionMismatch("input sequence shorter than horizon");
    const size_t n = model.order;
    const auto seed = run_exact(spec, inputs, std::min(horizon, n));
    std::vector<RatVec> outputs;
    outputs.reserve(horizon);
    for (size_t t = 0; t < horizon; ++t) {
        if (t < n) {
            outputs.push_back(seed[t]);
            continue;
        }
        RatVec u(spec.m(), Rational(0));
        for (size_t i = 1; i <= n; ++i) {
            const RatVec &u_prev = outputs[t - i];
            for (size_t r = 0; r < u.size(); ++r) u[r] += model.a[i - 1] * u_prev[r];
            const RatVec by = model.Bys[i - 1] * inputs[t - i];
            for (size_t r = 0; r < u.size(); ++r) u[r] += by[r];
        }
        outputs.push_back(std::move(u));
    }
    return outputs;
}

OpCountReport opcount_compare(const ControllerSpec &spec, std::optional<unsigned> k) {
    OpCountReport rep;
    rep.n = spec.n();
    rep.m = spec.m();
    rep.p = spec.p();
    const long long n = static_cast<long long>(rep.n);
    const long long m = static_cast<long long>(rep.m);
    const long long p = static_cast<long long>(rep.p);
    rep.arx_y_path = n * m * p;
    rep.arx_u_path = n * m * m;
    rep.conv_input_y = n * p;
    rep.conv_input_u = n * m;
    rep.conv_state = 0;
    rep.k = k;
    if (k) {
        const long kk = static_cast<long>(*k);
        rep.lifted_update_per_step = Rational(static_cast<long>(n * kk * p + n * m), kk);
        rep.lifted_output_per_step =
            Rational(static_cast<long>(m * n)) + Rational(static_cast<long>(m * p * (kk - 1)), 2L);
    }
    return rep;
}

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::exact: return "exact";
        case Variant::converted_exact: return "converted_exact";
        case Variant::converted_quant: return "converted_quant";
        case Variant::converted_scaled: return "converted_scaled";
        case Variant::intermittent_exact: return "intermittent_exact";
        case Variant::intermittent_quant: return "intermittent_quant";
        case Variant::arx: return "arx";
    }
    return "unknown";
}

namespace {

// Controller adapters for the loop engine. The output never depends on the
// current input, so step(y) may compute u(t) first and fold y(t) into the
// state afterwards.
class LoopController {
public:
    virtual ~LoopController() = default;
    virtual TraceRecord step(const RatVec &y) = 0;
    virtual std::vector<IntMatrix> system_matrices() const { return {}; }
};

class ExactSS : public LoopController {
public:
    explicit ExactSS(const ControllerSpec &spec) : spec_(spec), x_(spec.x0.col_vec(0)) {}
    TraceRecord step(const RatVec &y) override {
        TraceRecord rec;
        rec.t = t_++;
        rec.y = y;
        rec.u_hat = spec_.H * x_;
        RatVec fx = spec_.F * x_;
        const RatVec gy = spec_.G * y;
        for (size_t i = 0; i < fx.size(); ++i) fx[i] += gy[i];
        x_ = std::move(fx);
        return rec;
    }

private:
    ControllerSpec spec_;
    RatVec x_;
    long t_ = 0;
};

class ConvertedExact : public LoopController {
public:
    ConvertedExact(const ConversionResult &c, const RatMatrix &x0)
        : c_(c), Tu_inv_(inverse(c.T_u)), z_((c.T * x0).col_vec(0)) {}
    TraceRecord step(const RatVec &y) override {
        TraceRecord rec;
        rec.t = t_++;
        rec.y = y;
        rec.u_hat = Tu_inv_ * (c_.C_bar * z_);
        RatVec next = c_.A_bar * z_;
        const RatVec by = c_.B_y * y;
        const RatVec bu = c_.B_u * rec.u_hat;
        for (size_t i = 0; i < next.size(); ++i) next[i] += by[i] + bu[i];
        z_ = std::move(next);
        return rec;
    }

private:
    ConversionResult c_;
    RatMatrix Tu_inv_;
    RatVec z_;
    long t_ = 0;
};

class IntermittentExact : public LoopController {
public:
    IntermittentExact(const IntermittentResult &ir, const RatMatrix &x0)
        : ir_(ir), z_((ir.T * x0).col_vec(0)) {}
    TraceRecord step(const RatVec &y) override {
        TraceRecord rec;
        rec.t = t_++;
        rec.y = y;
        RatVec u = ir_.out_state[phase_] * z_;
        if (phase_ > 0) {
            RatVec Y;
            for (const auto &w : window_) Y.insert(Y.end(), w.begin(), w.end());
            const RatVec uy = ir_.out_input[phase_] * Y;
            for (size_t i = 0; i < u.size(); ++i) u[i] += uy[i];
        }
        if (phase_ == 0) u_period_ = u;
        rec.u_hat = u;
        rec.state_updated = phase_ == 0;
        window_.push_back(y);
        if (window_.size() == ir_.k) {
            RatVec Y;
            for (const auto &w : window_) Y.insert(Y.end(), w.begin(), w.end());
            RatVec next = ir_.A_bar * z_;
            const RatVec by = ir_.B_Y * Y;
            const RatVec bu = ir_.B_u * u_period_;
            for (size_t i = 0; i < next.size(); ++i) next[i] += by[i] + bu[i];
            z_ = std::move(next);
            window_.clear();
            phase_ = 0;
        } else {
            ++phase_;
        }
        return rec;
    }

private:
    IntermittentResult ir_;
    RatVec z_;
    RatVec u_period_;
    std::vector<RatVec> window_;
    unsigned phase_ = 0;
    long t_ = 0;
};

class ArxController : public LoopController {
public:
    explicit ArxController(const ControllerSpec &spec)
        : spec_(spec), model_(arx_from_ss(spec)), x_(spec.x0.col_vec(0)) {}
    TraceRecord step(const RatVec &y) override {
        TraceRecord rec;
        rec.t = t_;
        rec.y = y;
        const size_t n = model_.order;
        RatVec u;
        if (static_cast<size_t>(t_) < n) {
            // Startup: outputs come from the exact recursion, which only
            // runs for these first n steps.
            u = spec_.H * x_;
            RatVec fx = spec_.F * x_;
            const RatVec gy = spec_.G * y;
            for (size_t i = 0; i < fx.size(); ++i) fx[i] += gy[i];
            x_ = std::move(fx);
        } else {
            u.assign(spec_.m(), Rational(0));
            for (size_t i = 1; i <= n; ++i) {
                const RatVec &u_prev = u_hist_[u_hist_.size() - i];
                for (size_t r = 0; r < u.size(); ++r) u[r] += model_.a[i - 1] * u_prev[r];
                const RatVec by = model_.Bys[i - 1] * y_hist_[y_hist_.size() - i];
                for (size_t r = 0; r < u.size(); ++r) u[r] += by[r];
            }
        }
        rec.u_hat = u;
        u_hist_.push_back(std::move(u));
        y_hist_.push_back(y);
        if (u_hist_.size() > n) {
            u_hist_.erase(u_hist_.begin());
            y_hist_.erase(y_hist_.begin());
        }
        ++t_;
        return rec;
    }

private:
    ControllerSpec spec_;
    ArxModel model_;
    RatVec x_;
    std::vector<RatVec> u_hist_, y_hist_;
    long t_ = 0;
};

class QuantConverted : public LoopController {
public:
    QuantConverted(const ConversionResult &c, const QuantParams &q, const RatMatrix &x0, bool scaled)
        : rt_(c, q, x0, scaled) {}
    TraceRecord step(const RatVec &y) override { return rt_.step(y); }
    std::vector<IntMatrix> system_matrices() const override { return rt_.system_matrices(); }

private:
    ConvertedRuntime rt_;
};

class QuantIntermittent : public LoopController {
public:
    QuantIntermittent(const IntermittentResult &ir, const QuantParams &q, const RatMatrix &x0)
        : rt_(ir, q, x0) {}
    TraceRecord step(const RatVec &y) override { return rt_.step(y); }
    std::vector<IntMatrix> system_matrices() const override { return rt_.system_matrices(); }

private:
    IntermittentRuntime rt_;
};

std::vector<TraceRecord> run_loop(const PlantSpec &plant, LoopController &ctl, size_t horizon) {
    std::vector<TraceRecord> trace;
    trace.reserve(horizon);
    RatVec xp = plant.xp0.col_vec(0);
    for (size_t t = 0; t < horizon; ++t) {
        const RatVec y = plant.C * xp;
        TraceRecord rec = ctl.step(y);
        RatVec next = plant.A * xp;
        const RatVec bu = plant.B * rec.u_hat;
        for (size_t i = 0; i < next.size(); ++i) next[i] += bu[i];
        xp = std::move(next);
        trace.push_back(std::move(rec));
    }
    return trace;
}

std::unique_ptr<LoopController> make_controller(const PlantSpec &plant, const ControllerSpec &spec,
                                                Variant v, const std::optional<QuantParams> &q,
                                                std::optional<unsigned> k) {
    if (plant.in_dim() != spec.m() || plant.out_dim() != spec.p()) {
        throw DimensionMismatch("plant and controller dimensions are not dual");
    }
    auto need_q = [&]() -> const QuantParams & {
        if (!q) throw Error("variant requires quantization parameters");
        return *q;
    };
    auto need_k = [&]() -> unsigned {
        if (!k) throw Error("variant requires a re-encryption period");
        return *k;
    };
    switch (v) {
        case Variant::exact:
            return std::make_unique<ExactSS>(spec);
        case Variant::converted_exact:
            return std::make_unique<ConvertedExact>(build_conversion(spec), spec.x0);
        case Variant::converted_quant:
            return std::make_unique<QuantConverted>(build_conversion(spec), need_q(), spec.x0, false);
        case Variant::converted_scaled:
            return std::make_unique<QuantConverted>(build_conversion(spec), need_q(), spec.x0, true);
        case Variant::intermittent_exact:
            return std::make_unique<IntermittentExact>(build_intermittent(spec, need_k()), spec.x0);
        case Variant::intermittent_quant:
            return std::make_unique<QuantIntermittent>(build_intermittent(spec, need_k()), need_q(),
                                                       spec.x0);
        case Variant::arx:
            return std::make_unique<ArxController>(spec);
    }
    throw Error("unknown variant");
}

}  // namespace

ClosedLoopRun simulate_closed_loop(const PlantSpec &plant, const ControllerSpec &spec, Variant v,
                                   const std::optional<QuantParams> &q, std::optional<unsigned> k,
                                   size_t horizon) {
    // Baseline loop for the error column.
    ExactSS base_ctl(spec);
    const auto baseline = run_loop(plant, base_ctl, horizon);

    auto ctl = make_controller(plant, spec, v, q, k);
    auto trace = run_loop(plant, *ctl, horizon);

    ClosedLoopRun out;
    out.report.variant = variant_name(v);
    out.report.period = (v == Variant::intermittent_exact || v == Variant::intermittent_quant) ? *k : 1;
    Rational err(0);
    for (size_t t = 0; t < horizon; ++t) {
        trace[t].u_exact = baseline[t].u_hat;
        for (size_t i = 0; i < trace[t].u_hat.size(); ++i) {
            const Rational d = abs(trace[t].u_hat[i] - baseline[t].u_hat[i]);
            if (d > err) err = d;
        }
    }
    out.report.max_abs_error = err;

    const auto counts = opcount_compare(spec, k);
    if (v == Variant::arx) {
        out.report.macs_per_step["y_history"] = counts.arx_y_path;
        out.report.macs_per_step["u_history"] = counts.arx_u_path;
    } else if (v != Variant::exact) {
        out.report.macs_per_step["input_y"] = counts.conv_input_y;
        out.report.macs_per_step["input_u"] = counts.conv_input_u;
        out.report.macs_per_step["state"] = counts.conv_state;
    }

    const bool quantized =
        v == Variant::converted_quant || v == Variant::converted_scaled || v == Variant::intermittent_quant;
    if (quantized) {
        out.report.required_bits = range_report(trace, ctl->system_matrices()).required_bits;
    }
    if (v == Variant::converted_quant || v == Variant::converted_scaled) {
        out.report.reenc_count = static_cast<long long>(horizon);
    } else if (v == Variant::intermittent_quant || v == Variant::intermittent_exact) {
        out.report.reenc_count = static_cast<long long>((horizon + *k - 1) / *k);
    }
    out.trace = std::move(trace);
    return out;
}

SuiteResult run_suite(const PlantSpec &plant, const ControllerSpec &spec, const SuiteOptions &opt) {
    SuiteResult res;
    res.report.horizon = opt.horizon;
    res.report.plant = plant.name;
    res.report.controller = spec.name;
    std::vector<Variant> variants{Variant::exact, Variant::converted_exact, Variant::arx};
    if (opt.q) {
        variants.push_back(Variant::converted_quant);
        variants.push_back(Variant::converted_scaled);
    }
    if (opt.k) {
        variants.push_back(Variant::intermittent_exact);
        if (opt.q) variants.push_back(Variant::intermittent_quant);
    }
    for (Variant v : variants) {
        auto run = simulate_closed_loop(plant, spec, v, opt.q, opt.k, opt.horizon);
        res.report.variants.push_back(run.report);
        res.traces[variant_name(v)] = std::move(run.trace);
    }
    return res;
}

}  // namespace ictrl
