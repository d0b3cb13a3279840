// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "ictrl/canon.hpp"
#include "ictrl/intermit.hpp"
#include "ictrl/intmat.hpp"

namespace ictrl {

/// Quantization step r and scale divisor s (1/s >= 1).
struct QuantParams {
    Rational r, s;
    QuantParams(Rational r_, Rational s_);
};

/// Componentwise round(v_i / step), ties away from zero.
IntVec quantize(const RatVec &v, const Rational &step);

/// One step of a quantized integer run. The integer state and output
/// vectors plus the per-signal maxima are kept in memory for range
/// reporting; the CSV export carries the schema columns only.
struct TraceRecord {
    long t = 0;
    RatVec y;
    RatVec u_exact;
    RatVec u_hat;
    Rational residual_norm;
    Int zbar_min, zbar_max;

    IntVec z_bar;
    IntVec u_z_bar;
    bool state_updated = true;  // re-encrypted output fed back at this step
    std::map<std::string, Int> signal_max;
};

struct RangeReport {
    Int max_abs;
    unsigned required_bits = 1;  // minimal b with max_abs < 2^(b-1)
    std::map<std::string, Int> per_signal;
};

unsigned bits_for(const Int &max_abs);

/// Aggregates the integer ranges of a run, including intermediate partial
/// sums and the plaintext system matrices themselves. Throws EmptyTrace.
RangeReport range_report(const std::vector<TraceRecord> &trace,
                         const std::vector<IntMatrix> &system_matrices);

// ---- exact rational reference runs -------------------------------------

/// Plain controller recursion; returns the output sequence.
std::vector<RatVec> run_exact(const ControllerSpec &spec, const std::vector<RatVec> &inputs,
                              size_t horizon);

/// Output-injection form with the true output fed back as auxiliary input;
/// identical input-output behavior for every R.
std::vector<RatVec> run_exact_reenc(const ControllerSpec &spec, const RatMatrix &R,
                                    const std::vector<RatVec> &inputs, size_t horizon);

/// Transformed controller (state z = T x, output restored through T_u).
std::vector<RatVec> run_exact(const ConversionResult &c, const RatMatrix &x0,
                              const std::vector<RatVec> &inputs, size_t horizon);

/// Lifted period-k controller with its k-periodic output schedule.
std::vector<RatVec> run_exact(const IntermittentResult &ir, const RatMatrix &x0,
                              const std::vector<RatVec> &inputs, size_t horizon);

// ---- quantized integer runtimes -----------------------------------------

/// Incremental form of the per-step integer runtime, usable inside a
/// closed loop. u_exact is left empty; batch wrappers fill it.
class ConvertedRuntime {
public:
    /// scale_output_too selects the comparison variant that scales the
    /// output matrix by 1/s as well (recovery r s^2 T_u^-1).
    ConvertedRuntime(const ConversionResult &c, const QuantParams &q, const RatMatrix &x0,
                     bool scale_output_too = false);

    TraceRecord step(const RatVec &y);

    const std::vector<IntMatrix> &system_matrices() const { return mats_; }

private:
    IntMatrix A_, C_, TG_, TR_;
    RatMatrix TG_rat_, TR_rat_, Tu_inv_;
    std::vector<IntMatrix> mats_;
    QuantParams q_;
    Rational recovery_;  // r s (or r s^2 for the double-scaled variant)
    IntVec zbar_;
    long t_ = 0;
};

class IntermittentRuntime {
public:
    IntermittentRuntime(const IntermittentResult &ir, const QuantParams &q, const RatMatrix &x0);

    TraceRecord step(const RatVec &y);

    const std::vector<IntMatrix> &system_matrices() const { return mats_; }

private:
    unsigned k_;
    IntMatrix A_, BY_, BU_;
    std::vector<IntMatrix> OS_, OI_;
    std::vector<RatMatrix> os_rat_, oi_rat_;
    std::vector<IntMatrix> mats_;
    QuantParams q_;
    Rational recovery_;  // r s^2
    IntVec zbar_;
    std::vector<RatVec> period_inputs_;
    IntVec u_feedback_;  // quantized recovered output at the period start
    unsigned phase_ = 0;
    long t_ = 0;
};

/// Integer implementation of the converted controller; records the exact
/// reference output and the per-step rounding residual alongside.
std::vector<TraceRecord> run_converted(const ConversionResult &c, const QuantParams &q,
                                       const RatMatrix &x0, const std::vector<RatVec> &inputs,
                                       size_t horizon);

/// Comparison variant with the output matrix also scaled by 1/s.
std::vector<TraceRecord> run_converted_scaled_output(const ConversionResult &c, const QuantParams &q,
                                                     const RatMatrix &x0,
                                                     const std::vector<RatVec> &inputs, size_t horizon);

/// Integer implementation of the period-k lifted controller.
std::vector<TraceRecord> run_intermittent_rt(const IntermittentResult &ir, const QuantParams &q,
                                             const RatMatrix &x0, const std::vector<RatVec> &inputs,
                                             size_t horizon);

// ---- diagnostics ---------------------------------------------------------

/// Max-norm of the state-update rounding residual
///   r s (round(TG/s) round(y/r) + round(TR/s) round(u/r)) - (TG y + TR u),
/// computed exactly.
Rational quant_residual(const ConversionResult &c, const QuantParams &q, const RatVec &y,
                        const RatVec &u_hat);

/// Same expression for the lifted system; y_stacked holds a full period of
/// inputs.
Rational quant_residual(const IntermittentResult &ir, const QuantParams &q, const RatVec &y_stacked,
                        const RatVec &u_hat);

/// Largest scale divisor s = 1/lcm(denominators) <= 1 making the given
/// matrices exactly integral after division by s (no rounding needed).
Rational exact_scale_factor(const std::vector<const RatMatrix *> &mats);
Rational exact_scale_factor(const ConversionResult &c);

}  // namespace ictrl
