// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "ictrl/qrt.hpp"

namespace ictrl {

/// Plaintext modulus; payload residues are kept as centered
/// representatives in [-floor(q/2), ceil(q/2)).
struct ModulusConfig {
    Int q;
    explicit ModulusConfig(Int q_);
    static ModulusConfig bits(unsigned b);  // q = 2^b

    Int reduce(const Int &x) const;
};

/// Stand-in for a ciphertext: a residue vector plus provenance. No
/// cryptography; this models only the operational constraint (integer
/// addition, plaintext-matrix multiplication, key-holder round trips).
struct MockCiphertext {
    enum class Origin { fresh, derived, reencrypted };
    IntVec payload;
    Origin origin = Origin::fresh;
};

struct OpCounters {
    long long add_count = 0;
    long long pmult_count = 0;  // scalar multiplies by plaintext entries outside {0,1}
};

/// Arithmetic context over Z_q with operation counting.
class SandboxContext {
public:
    explicit SandboxContext(ModulusConfig mod) : mod_(std::move(mod)) {}

    MockCiphertext encrypt(const IntVec &plain) const;
    IntVec decrypt(const MockCiphertext &ct) const;

    MockCiphertext add(const MockCiphertext &a, const MockCiphertext &b);
    /// Multiplication by a plaintext matrix; every entry must be an exact
    /// integer, otherwise NonIntegerPlaintext, the violation a raw
    /// controller hits immediately.
    MockCiphertext plaintext_mult(const RatMatrix &plain, const MockCiphertext &ct);
    MockCiphertext plaintext_mult(const IntMatrix &plain, const MockCiphertext &ct);

    const OpCounters &counters() const { return counters_; }
    const ModulusConfig &modulus() const { return mod_; }

private:
    ModulusConfig mod_;
    OpCounters counters_;
};

struct SandboxTrace {
    std::vector<TraceRecord> records;  // decrypted per-step values
    long long add_count = 0;
    long long pmult_count = 0;
    long long pmult_state = 0;  // state/output path (shift-only when converted)
    long long pmult_input = 0;  // input paths
    long long reenc_count = 0;
    std::vector<long> key_access_times;
    bool wraparound_detected = false;

    // Per-step counter deltas, parallel to records (CSV columns).
    std::vector<long long> step_adds;
    std::vector<long long> step_pmults;
    std::vector<bool> step_wrap;  // wraparound observed up to and including this step
};

/// Converted controller run under the constraint; re-encryption of the
/// output every step. If no signal leaves the representative range the
/// decrypted trace matches run_converted bit-exactly.
SandboxTrace run_sandboxed(const ConversionResult &c, const QuantParams &q, const ModulusConfig &mod,
                           const RatMatrix &x0, const std::vector<RatVec> &inputs, size_t horizon);

/// Lifted controller; re-encryption only at period starts.
SandboxTrace run_sandboxed(const IntermittentResult &ir, const QuantParams &q,
                           const ModulusConfig &mod, const RatMatrix &x0,
                           const std::vector<RatVec> &inputs, size_t horizon);

/// Unconverted controller executed naively over the constraint; throws
/// NonIntegerPlaintext as soon as a non-integer system matrix is used.
SandboxTrace run_sandboxed_raw(const ControllerSpec &spec, const ModulusConfig &mod,
                               const std::vector<RatVec> &inputs, size_t horizon);

}  // namespace ictrl
