// SPDX-License-Identifier: Apache-2.0
#include "ictrl/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ictrl/errors.hpp"

namespace ictrl {

namespace {

Rational rational_from_json(const json &j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(Int(std::to_string(j.get<long long>())));
    if (j.is_number_unsigned()) return Rational(Int(std::to_string(j.get<unsigned long long>())));
    if (j.is_number_float()) {
        throw ParseError("floating-point literal " + j.dump() +
                         " is not exact; write it as a rational string like \"1/10\"");
    }
    throw ParseError("expected a rational entry, got " + j.dump());
}

std::string approx(const Rational &r) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", r.to_double());
    return buf;
}

RatMatrix column_from_json(const json &j, const char *what) {
    if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
    // Accept either a flat vector or a nested single-column matrix.
    if (!j.empty() && j[0].is_array()) {
        RatMatrix m = matrix_from_json(j);
        if (m.cols() != 1) throw ParseError(std::string(what) + " must be a column");
        return m;
    }
    RatMatrix m(j.size(), 1);
    for (size_t i = 0; i < j.size(); ++i) m(i, 0) = rational_from_json(j[i]);
    return m;
}

json column_to_json(const RatMatrix &m) {
    json a = json::array();
    for (size_t i = 0; i < m.rows(); ++i) a.push_back(m(i, 0).str());
    return a;
}

void expect(const json &j, const char *key) {
    if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
}

}  // namespace

json to_json(const RatMatrix &m) {
    json rows = json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

RatMatrix matrix_from_json(const json &j) {
    if (!j.is_array()) throw ParseError("matrix must be an array of rows");
    const size_t rows = j.size();
    size_t cols = 0;
    if (rows > 0) {
        if (!j[0].is_array()) throw ParseError("matrix rows must be arrays");
        cols = j[0].size();
    }
    RatMatrix m(rows, cols);
    for (size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) throw ParseError("ragged matrix rows");
        for (size_t c = 0; c < cols; ++c) m(i, c) = rational_from_json(j[i][c]);
    }
    return m;
}

json to_json(const ControllerSpec &spec) {
    return json{{"name", spec.name},
                {"F", to_json(spec.F)},
                {"G", to_json(spec.G)},
                {"H", to_json(spec.H)},
                {"x0", column_to_json(spec.x0)}};
}

ControllerSpec controller_from_json(const json &j) {
    expect(j, "F");
    expect(j, "G");
    expect(j, "H");
    const RatMatrix F = matrix_from_json(j.at("F"));
    const RatMatrix G = matrix_from_json(j.at("G"));
    const RatMatrix H = matrix_from_json(j.at("H"));
    RatMatrix x0 = j.contains("x0") ? column_from_json(j.at("x0"), "x0") : RatMatrix::zero(F.rows(), 1);
    return ControllerSpec(F, G, H, x0, j.value("name", ""));
}

json to_json(const PlantSpec &plant) {
    return json{{"name", plant.name},
                {"A", to_json(plant.A)},
                {"B", to_json(plant.B)},
                {"C", to_json(plant.C)},
                {"xp0", column_to_json(plant.xp0)}};
}

PlantSpec plant_from_json(const json &j) {
    expect(j, "A");
    expect(j, "B");
    expect(j, "C");
    const RatMatrix A = matrix_from_json(j.at("A"));
    const RatMatrix B = matrix_from_json(j.at("B"));
    const RatMatrix C = matrix_from_json(j.at("C"));
    RatMatrix xp0 = j.contains("xp0") ? column_from_json(j.at("xp0"), "xp0") : RatMatrix::zero(A.rows(), 1);
    return PlantSpec(A, B, C, xp0, j.value("name", ""));
}

json to_json(const ConversionResult &c) {
    return json{{"type", "conversion"},
                {"name", c.name},
                {"block_sizes", c.block_sizes},
                {"T", to_json(c.T)},
                {"T_inv", to_json(c.T_inv)},
                {"R", to_json(c.R)},
                {"T_u", to_json(c.T_u)},
                {"A_bar", to_json(c.A_bar)},
                {"B_y", to_json(c.B_y)},
                {"B_u", to_json(c.B_u)},
                {"C_bar", to_json(c.C_bar)},
                {"A_blocks", to_json(c.A_blocks)}};
}

ConversionResult conversion_from_json(const json &j) {
    if (j.value("type", "") != "conversion") throw ParseError("document is not a conversion result");
    ConversionResult c;
    c.name = j.value("name", "");
    c.block_sizes = j.at("block_sizes").get<std::vector<size_t>>();
    c.T = matrix_from_json(j.at("T"));
    c.T_inv = matrix_from_json(j.at("T_inv"));
    c.R = matrix_from_json(j.at("R"));
    c.T_u = matrix_from_json(j.at("T_u"));
    c.A_bar = matrix_from_json(j.at("A_bar"));
    c.B_y = matrix_from_json(j.at("B_y"));
    c.B_u = matrix_from_json(j.at("B_u"));
    c.C_bar = matrix_from_json(j.at("C_bar"));
    c.A_blocks = matrix_from_json(j.at("A_blocks"));
    return c;
}

json to_json(const IntermittentResult &ir) {
    json out_state = json::array();
    for (const auto &m : ir.out_state) out_state.push_back(to_json(m));
    json out_input = json::array();
    for (const auto &m : ir.out_input) out_input.push_back(to_json(m));
    return json{{"type", "intermittent"},
                {"name", ir.name},
                {"k", ir.k},
                {"T", to_json(ir.T)},
                {"T_inv", to_json(ir.T_inv)},
                {"R", to_json(ir.R)},
                {"A_bar", to_json(ir.A_bar)},
                {"B_Y", to_json(ir.B_Y)},
                {"B_u", to_json(ir.B_u)},
                {"out_state", std::move(out_state)},
                {"out_input", std::move(out_input)}};
}

IntermittentResult intermittent_from_json(const json &j) {
    if (j.value("type", "") != "intermittent") throw ParseError("document is not an intermittent result");
    IntermittentResult ir;
    ir.name = j.value("name", "");
    ir.k = j.at("k").get<unsigned>();
    ir.T = matrix_from_json(j.at("T"));
    ir.T_inv = matrix_from_json(j.at("T_inv"));
    ir.R = matrix_from_json(j.at("R"));
    ir.A_bar = matrix_from_json(j.at("A_bar"));
    ir.B_Y = matrix_from_json(j.at("B_Y"));
    ir.B_u = matrix_from_json(j.at("B_u"));
    for (const auto &m : j.at("out_state")) ir.out_state.push_back(matrix_from_json(m));
    for (const auto &m : j.at("out_input")) ir.out_input.push_back(matrix_from_json(m));
    // Null schedule blocks lose their column count in nested-array form;
    // restore m x 0 for the period-start entry.
    if (!ir.out_input.empty() && ir.out_input[0].rows() == 0 && !ir.out_state.empty()) {
        ir.out_input[0] = RatMatrix::zero(ir.out_state[0].rows(), 0);
    }
    return ir;
}

json to_json(const PeriodCheck &pc) {
    return json{{"k", pc.k},
                {"valid", pc.valid},
                {"distinct_root_count", pc.distinct_root_count},
                {"distinct_power_count", pc.distinct_power_count}};
}

json to_json(const RangeReport &rep) {
    json per = json::object();
    for (const auto &[key, val] : rep.per_signal) per[key] = val.get_str();
    return json{{"max_abs", rep.max_abs.get_str()}, {"required_bits", rep.required_bits},
                {"per_signal", std::move(per)}};
}

json to_json(const OpCountReport &rep) {
    json j{{"n", rep.n},
           {"m", rep.m},
           {"p", rep.p},
           {"arx_y_path", rep.arx_y_path},
           {"arx_u_path", rep.arx_u_path},
           {"converted_input_y", rep.conv_input_y},
           {"converted_input_u", rep.conv_input_u},
           {"converted_state", rep.conv_state}};
    if (rep.k) {
        j["k"] = *rep.k;
        j["lifted_update_per_step"] = rep.lifted_update_per_step.str();
        j["lifted_output_per_step"] = rep.lifted_output_per_step.str();
    }
    return j;
}

json to_json(const VariantReport &rep) {
    return json{{"variant", rep.variant},
                {"max_abs_error", rep.max_abs_error.str()},
                {"max_abs_error_f", rep.max_abs_error.to_double()},
                {"macs_per_step", rep.macs_per_step},
                {"required_bits", rep.required_bits},
                {"reenc_count", rep.reenc_count},
                {"period", rep.period}};
}

json to_json(const ComparisonReport &rep) {
    json variants = json::array();
    for (const auto &v : rep.variants) variants.push_back(to_json(v));
    return json{{"horizon", rep.horizon},
                {"plant", rep.plant},
                {"controller", rep.controller},
                {"variants", std::move(variants)}};
}

std::string trace_csv(const std::vector<TraceRecord> &trace, size_t p, size_t m) {
    std::ostringstream os;
    os << "t";
    for (size_t i = 0; i < p; ++i) os << ",y" << i << ",y" << i << "_f";
    for (size_t i = 0; i < m; ++i) os << ",u_exact" << i << ",u_exact" << i << "_f";
    for (size_t i = 0; i < m; ++i) os << ",u_hat" << i << ",u_hat" << i << "_f";
    os << ",residual,residual_f,zbar_min,zbar_max\n";
    for (const auto &rec : trace) {
        os << rec.t;
        auto put = [&](const Rational &r) { os << "," << r.str() << "," << approx(r); };
        for (size_t i = 0; i < p; ++i) put(i < rec.y.size() ? rec.y[i] : Rational(0));
        for (size_t i = 0; i < m; ++i) put(i < rec.u_exact.size() ? rec.u_exact[i] : Rational(0));
        for (size_t i = 0; i < m; ++i) put(i < rec.u_hat.size() ? rec.u_hat[i] : Rational(0));
        put(rec.residual_norm);
        os << "," << rec.zbar_min.get_str() << "," << rec.zbar_max.get_str() << "\n";
    }
    return os.str();
}

std::string sandbox_csv(const SandboxTrace &trace, size_t p, size_t m) {
    std::ostringstream os;
    os << "t";
    for (size_t i = 0; i < p; ++i) os << ",y" << i << ",y" << i << "_f";
    for (size_t i = 0; i < m; ++i) os << ",u_exact" << i << ",u_exact" << i << "_f";
    for (size_t i = 0; i < m; ++i) os << ",u_hat" << i << ",u_hat" << i << "_f";
    os << ",residual,residual_f,zbar_min,zbar_max,adds,pmults,reencs,wrap\n";
    for (size_t t = 0; t < trace.records.size(); ++t) {
        const auto &rec = trace.records[t];
        os << rec.t;
        auto put = [&](const Rational &r) { os << "," << r.str() << "," << approx(r); };
        for (size_t i = 0; i < p; ++i) put(i < rec.y.size() ? rec.y[i] : Rational(0));
        for (size_t i = 0; i < m; ++i) put(i < rec.u_exact.size() ? rec.u_exact[i] : Rational(0));
        for (size_t i = 0; i < m; ++i) put(i < rec.u_hat.size() ? rec.u_hat[i] : Rational(0));
        put(rec.residual_norm);
        os << "," << rec.zbar_min.get_str() << "," << rec.zbar_max.get_str();
        os << "," << trace.step_adds[t] << "," << trace.step_pmults[t] << ","
           << (rec.state_updated ? 1 : 0) << "," << (trace.step_wrap[t] ? 1 : 0) << "\n";
    }
    return os.str();
}

json sandbox_summary(const SandboxTrace &trace) {
    return json{{"steps", trace.records.size()},
                {"adds", trace.add_count},
                {"pmults", trace.pmult_count},
                {"pmults_state_path", trace.pmult_state},
                {"pmults_input_path", trace.pmult_input},
                {"reenc_count", trace.reenc_count},
                {"key_access_times", trace.key_access_times},
                {"wraparound_detected", trace.wraparound_detected}};
}

json load_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error &e) {
        throw ParseError("invalid JSON in '" + path + "': " + e.what());
    }
    return j;
}

void save_json_file(const std::string &path, const json &j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file '" + path + "'");
    out << j.dump(2) << "\n";
}

void save_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file '" + path + "'");
    out << text;
}

}  // namespace ictrl
