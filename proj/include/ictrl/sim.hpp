// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ictrl/qrt.hpp"
#include "ictrl/sandbox.hpp"

namespace ictrl {

/// Discrete-time plant closing the loop around the controller:
///     xp(t+1) = A xp(t) + B u(t),   y(t) = C xp(t).
/// Simulated exactly in rationals so every closed-loop error is
/// attributable to controller quantization.
struct PlantSpec {
    RatMatrix A;    // nx x nx
    RatMatrix B;    // nx x m
    RatMatrix C;    // p x nx
    RatMatrix xp0;  // nx x 1
    std::string name;

    PlantSpec(RatMatrix A_, RatMatrix B_, RatMatrix C_, RatMatrix xp0_, std::string name_ = "");

    size_t nx() const { return A.rows(); }
    size_t in_dim() const { return B.cols(); }   // = controller output dimension m
    size_t out_dim() const { return C.rows(); }  // = controller input dimension p
};

/// Auto-regressive representation u(t) = sum a_i u(t-i) + sum B_i y(t-i),
/// input-output equivalent to the state-space controller for t >= n.
struct ArxModel {
    size_t order = 0;
    std::vector<Rational> a;     // a_1..a_n
    std::vector<RatMatrix> Bys;  // B_1..B_n, m x p each
};

/// Derives the ARX coefficients from the characteristic polynomial
/// (state elimination); startup needs the first n outputs seeded from the
/// exact run.
ArxModel arx_from_ss(const ControllerSpec &spec);

/// Open-loop ARX run: outputs for t < order are copied from the exact
/// recursion, the rest follow the ARX recursion on its own history.
std::vector<RatVec> run_arx(const ControllerSpec &spec, const ArxModel &model,
                            const std::vector<RatVec> &inputs, size_t horizon);

/// Per-step scalar multiply-accumulate counts by path, derived from matrix
/// dimensions. The converted controller's state path costs nothing: its
/// matrices are {0,1} shifts.
struct OpCountReport {
    size_t n = 0, m = 0, p = 0;
    long long arx_y_path = 0;    // n * m * p
    long long arx_u_path = 0;    // n * m * m
    long long conv_input_y = 0;  // n * p
    long long conv_input_u = 0;  // n * m
    long long conv_state = 0;    // 0 by construction
    std::optional<unsigned> k;
    Rational lifted_update_per_step;  // (n k p + n m) / k, amortized
    Rational lifted_output_per_step;  // m n + m p (k-1) / 2, amortized
};

OpCountReport opcount_compare(const ControllerSpec &spec, std::optional<unsigned> k = std::nullopt);

enum class Variant {
    exact,              // plain controller recursion (the baseline)
    converted_exact,    // transformed controller, exact rationals
    converted_quant,    // integer runtime, per-step re-encryption
    converted_scaled,   // comparison variant: output matrix also scaled by 1/s
    intermittent_exact,
    intermittent_quant,  // integer runtime, period-k re-encryption
    arx,
};

std::string variant_name(Variant v);

struct VariantReport {
    std::string variant;
    Rational max_abs_error;  // vs the exact closed-loop baseline
    std::map<std::string, long long> macs_per_step;
    unsigned required_bits = 0;  // 0 when not applicable (exact variants)
    long long reenc_count = 0;
    unsigned period = 1;
};

struct ComparisonReport {
    size_t horizon = 0;
    std::string plant;
    std::string controller;
    std::vector<VariantReport> variants;
};

struct ClosedLoopRun {
    std::vector<TraceRecord> trace;  // u_exact carries the baseline output
    VariantReport report;
};

/// Runs one controller variant against the plant; quantized variants need
/// q, the lifted ones need k. The baseline loop is simulated alongside to
/// measure the output error.
ClosedLoopRun simulate_closed_loop(const PlantSpec &plant, const ControllerSpec &spec, Variant v,
                                   const std::optional<QuantParams> &q, std::optional<unsigned> k,
                                   size_t horizon);

/// All variants that the supplied options allow, in a fixed order.
struct SuiteOptions {
    std::optional<QuantParams> q;
    std::optional<unsigned> k;
    size_t horizon = 50;
};

struct SuiteResult {
    ComparisonReport report;
    std::map<std::string, std::vector<TraceRecord>> traces;
};

SuiteResult run_suite(const PlantSpec &plant, const ControllerSpec &spec, const SuiteOptions &opt);

}  // namespace ictrl
