// SPDX-License-Identifier: Apache-2.0
//
// ictrl: converts linear dynamic controllers to integer-friendly forms,
// validates re-encryption periods, and simulates the closed loop with
// exact, quantized, and sandboxed runtimes.

#include <CLI11.hpp>
#include <future>
#include <iostream>

#include "ictrl/errors.hpp"
#include "ictrl/io.hpp"

namespace {

using namespace ictrl;

int fail_validation(const Error &e) {
    std::cerr << json{{"error", error_code(e)}, {"message", e.what()}}.dump() << "\n";
    return 2;
}

int fail_io(const std::exception &e, const std::string &code = "Error") {
    std::cerr << json{{"error", code}, {"message", e.what()}}.dump() << "\n";
    return 1;
}

bool is_validation_error(const Error &e) {
    const std::string code = error_code(e);
    return code == "NotObservable" || code == "InvalidPeriod" || code == "NotFullRowRank";
}

ControllerSpec load_controller(const std::string &path, bool reduce) {
    ControllerSpec spec = controller_from_json(load_json_file(path));
    if (reduce) return kalman_reduce(spec);
    return spec;
}

struct SweepSpec {
    unsigned decades = 0;  // 0 = no sweep
};

SweepSpec parse_sweep(const std::string &arg) {
    // Accepted form: "r,s:decades=N".
    SweepSpec sw;
    const auto colon = arg.find(':');
    const std::string params = arg.substr(0, colon);
    if (params != "r,s" && params != "s,r") {
        throw ParseError("unsupported sweep parameters '" + params + "' (expected r,s)");
    }
    if (colon == std::string::npos) {
        sw.decades = 3;
        return sw;
    }
    const std::string opt = arg.substr(colon + 1);
    const std::string key = "decades=";
    if (opt.rfind(key, 0) != 0) throw ParseError("bad sweep option '" + opt + "'");
    sw.decades = static_cast<unsigned>(std::stoul(opt.substr(key.size())));
    if (sw.decades == 0 || sw.decades > 12) throw ParseError("sweep decades out of range");
    return sw;
}

void print_report_text(const json &j, std::ostream &os) {
    if (j.contains("variants")) {
        os << "closed-loop comparison (horizon " << j.value("horizon", 0) << ")\n";
        os << "  plant: " << j.value("plant", std::string{}) << "  controller: "
           << j.value("controller", std::string{}) << "\n";
        for (const auto &v : j.at("variants")) {
            os << "  - " << v.value("variant", std::string{}) << ": max|u - u_exact| = "
               << v.value("max_abs_error", std::string{});
            if (v.contains("max_abs_error_f")) os << " (~" << v["max_abs_error_f"].get<double>() << ")";
            if (v.value("required_bits", 0u) > 0) os << ", plaintext bits " << v["required_bits"].get<unsigned>();
            if (v.value("reenc_count", 0ll) > 0) os << ", re-encryptions " << v["reenc_count"].get<long long>();
            os << "\n";
            if (v.contains("macs_per_step")) {
                os << "      macs/step:";
                for (const auto &[key, val] : v.at("macs_per_step").items())
                    os << " " << key << "=" << val.get<long long>();
                os << "\n";
            }
        }
        return;
    }
    const std::string type = j.value("type", "");
    if (type == "conversion") {
        const auto c = conversion_from_json(j);
        os << "conversion result '" << c.name << "': n=" << c.n() << " m=" << c.m() << " p=" << c.p()
           << "\n  block sizes:";
        for (size_t k : c.block_sizes) os << " " << k;
        os << "\n  A_bar " << c.A_bar.str() << "\n  C_bar " << c.C_bar.str() << "\n  R "
           << c.R.str() << "\n  T_u " << c.T_u.str() << "\n";
        return;
    }
    if (type == "intermittent") {
        const auto ir = intermittent_from_json(j);
        os << "intermittent result '" << ir.name << "': n=" << ir.n() << " m=" << ir.m()
           << " period k=" << ir.k << "\n  A_bar " << ir.A_bar.str() << "\n  schedule entries: "
           << ir.out_state.size() << " state maps, " << ir.out_input.size() << " input maps\n";
        return;
    }
    os << j.dump(2) << "\n";
}

int cmd_convert(const std::string &in, const std::string &out, bool reduce) {
    ControllerSpec spec = load_controller(in, reduce);
    const ConversionResult conv = build_conversion(spec);
    const auto rep = verify_canonical(conv, spec);
    if (!rep.ok) {
        json fails = json::array();
        for (const auto &f : rep.failures) fails.push_back(f);
        std::cerr << json{{"error", "VerificationFailed"}, {"failures", fails}}.dump() << "\n";
        return 2;
    }
    if (!out.empty()) save_json_file(out, to_json(conv));
    std::cout << "converted '" << spec.name << "' (n=" << spec.n() << ", m=" << spec.m()
              << "); blocks:";
    for (size_t k : conv.block_sizes) std::cout << " " << k;
    std::cout << (out.empty() ? "" : "; wrote " + out) << "\n";
    return 0;
}

int cmd_intermittent(const std::string &in, const std::string &out, unsigned k, bool suggest,
                     bool reduce) {
    ControllerSpec spec = load_controller(in, reduce);
    unsigned period = k;
    if (suggest) period = suggest_period(spec.F, k == 0 ? 2 : k);
    if (period == 0) throw Error("a period is required: pass -k or --suggest-k");
    const IntermittentResult ir = build_intermittent(spec, period);
    if (!out.empty()) save_json_file(out, to_json(ir));
    std::cout << "intermittent form of '" << spec.name << "' with period k=" << period
              << (out.empty() ? "" : "; wrote " + out) << "\n";
    return 0;
}

int cmd_check_period(const std::string &in, unsigned k, bool reduce) {
    ControllerSpec spec = load_controller(in, reduce);
    std::cout << to_json(check_period(spec.F, k)).dump() << "\n";
    return 0;
}

int cmd_simulate(const std::string &in, const std::string &plant_path, const std::string &out,
                 const std::string &r_str, const std::string &s_str, unsigned k, bool suggest,
                 size_t horizon, unsigned modulus_bits, const std::string &sweep_arg, bool reduce) {
    ControllerSpec spec = load_controller(in, reduce);
    PlantSpec plant = plant_from_json(load_json_file(plant_path));

    SuiteOptions opt;
    opt.horizon = horizon;
    if (!r_str.empty() || !s_str.empty()) {
        const Rational r = Rational::parse(r_str.empty() ? s_str : r_str);
        const Rational s = Rational::parse(s_str.empty() ? r_str : s_str);
        opt.q = QuantParams(r, s);
    }
    if (suggest) {
        opt.k = suggest_period(spec.F, k == 0 ? 2 : k);
    } else if (k > 0) {
        if (!check_period(spec.F, k).valid) {
            throw InvalidPeriod("period " + std::to_string(k) + " is not admissible for this controller");
        }
        opt.k = k;
    }

    SuiteResult suite = run_suite(plant, spec, opt);
    json report = to_json(suite.report);

    if (!sweep_arg.empty()) {
        if (!opt.q) throw Error("--sweep requires --r/--s");
        const SweepSpec sw = parse_sweep(sweep_arg);
        std::vector<std::future<json>> futs;
        for (unsigned d = 0; d < sw.decades; ++d) {
            futs.push_back(std::async(std::launch::async, [&, d]() {
                Rational div(1);
                for (unsigned i = 0; i < d; ++i) div = div * Rational(10);
                SuiteOptions o = opt;
                o.q = QuantParams(opt.q->r / div, opt.q->s / div);
                SuiteResult sr = run_suite(plant, spec, o);
                json entry = to_json(sr.report);
                entry["r"] = o.q->r.str();
                entry["s"] = o.q->s.str();
                return entry;
            }));
        }
        json sweep = json::array();
        for (auto &f : futs) sweep.push_back(f.get());
        report["sweep"] = std::move(sweep);
    }

    if (modulus_bits > 0) {
        if (!opt.q) throw Error("--modulus-bits requires --r/--s");
        const ModulusConfig mod = ModulusConfig::bits(modulus_bits);
        std::vector<RatVec> ys;
        // Feed the sandbox the closed-loop input sequence of the quantized run.
        for (const auto &rec : suite.traces.at("converted_quant")) ys.push_back(rec.y);
        const ConversionResult conv = build_conversion(spec);
        const SandboxTrace st = run_sandboxed(conv, *opt.q, mod, spec.x0, ys, horizon);
        report["sandbox"] = {{"converted", sandbox_summary(st)}};
        if (!out.empty()) save_text_file(out + ".sandbox.converted.csv", sandbox_csv(st, spec.p(), spec.m()));
        if (opt.k) {
            const IntermittentResult ir = build_intermittent(spec, *opt.k);
            std::vector<RatVec> ys2;
            for (const auto &rec : suite.traces.at("intermittent_quant")) ys2.push_back(rec.y);
            const SandboxTrace st2 = run_sandboxed(ir, *opt.q, mod, spec.x0, ys2, horizon);
            report["sandbox"]["intermittent"] = sandbox_summary(st2);
            if (!out.empty())
                save_text_file(out + ".sandbox.intermittent.csv", sandbox_csv(st2, spec.p(), spec.m()));
        }
    }

    if (out.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        save_json_file(out + ".report.json", report);
        for (const auto &[variant, trace] : suite.traces) {
            save_text_file(out + ".trace." + variant + ".csv", trace_csv(trace, spec.p(), spec.m()));
        }
        std::cout << "wrote " << out << ".report.json and " << suite.traces.size() << " trace files\n";
    }
    return 0;
}

int cmd_report(const std::string &in) {
    print_report_text(load_json_file(in), std::cout);
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"integer-friendly controller conversion and simulation"};
    app.require_subcommand(1);

    std::string in, out, plant, r_str, s_str, sweep_arg;
    unsigned k = 0, modulus_bits = 0;
    size_t horizon = 50;
    bool reduce = false, suggest = false;

    auto add_common = [&](CLI::App *cmd, bool needs_out) {
        cmd->add_option("--in", in, "controller JSON file")->required();
        if (needs_out) cmd->add_option("--out", out, "output path");
        cmd->add_flag("--reduce", reduce, "apply observability reduction first");
    };

    auto *conv = app.add_subcommand("convert", "build the {0,1} state/output form");
    add_common(conv, true);

    auto *inter = app.add_subcommand("intermittent", "build the period-k lifted form");
    add_common(inter, true);
    inter->add_option("-k", k, "re-encryption period");
    inter->add_flag("--suggest-k", suggest, "find the smallest admissible period >= max(2, -k)");

    auto *chk = app.add_subcommand("check-period", "test a re-encryption period");
    add_common(chk, false);
    chk->add_option("-k", k, "period to test")->required();

    auto *sim = app.add_subcommand("simulate", "closed-loop comparison of controller variants");
    add_common(sim, true);
    sim->add_option("--plant", plant, "plant JSON file")->required();
    sim->add_option("--r", r_str, "quantization step (rational, e.g. 1/1000)");
    sim->add_option("--s", s_str, "scale divisor (rational, 0 < s <= 1)");
    sim->add_option("-k", k, "re-encryption period for the lifted variants");
    sim->add_flag("--suggest-k", suggest, "find the smallest admissible period >= max(2, -k)");
    sim->add_option("--horizon", horizon, "number of steps");
    sim->add_option("--modulus-bits", modulus_bits, "run the constraint sandbox with q = 2^bits");
    sim->add_option("--sweep", sweep_arg, "parameter sweep, e.g. r,s:decades=3");

    auto *rep = app.add_subcommand("report", "render a result document as text");
    rep->add_option("--in", in, "document JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (conv->parsed()) return cmd_convert(in, out, reduce);
        if (inter->parsed()) return cmd_intermittent(in, out, k, suggest, reduce);
        if (chk->parsed()) return cmd_check_period(in, k, reduce);
        if (sim->parsed())
            return cmd_simulate(in, plant, out, r_str, s_str, k, suggest, horizon, modulus_bits,
                                sweep_arg, reduce);
        if (rep->parsed()) return cmd_report(in);
    } catch (const ParseError &e) {
        return fail_io(e, "ParseError");
    } catch (const Error &e) {
        if (is_validation_error(e)) return fail_validation(e);
        return fail_io(e, error_code(e));
    } catch (const std::exception &e) {
        return fail_io(e);
    }
    return 0;
}
