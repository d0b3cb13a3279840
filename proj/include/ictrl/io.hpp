// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ictrl/sim.hpp"

namespace ictrl {

using nlohmann::json;

// Rationals serialize as exact strings "p/q" (or "p" when integral);
// matrices as nested row-major arrays. Parsing accepts strings and JSON
// integers; floats are rejected to keep every document exact.

json to_json(const RatMatrix &m);
RatMatrix matrix_from_json(const json &j);

json to_json(const ControllerSpec &spec);
ControllerSpec controller_from_json(const json &j);

json to_json(const PlantSpec &plant);
PlantSpec plant_from_json(const json &j);

json to_json(const ConversionResult &c);
ConversionResult conversion_from_json(const json &j);

json to_json(const IntermittentResult &ir);
IntermittentResult intermittent_from_json(const json &j);

json to_json(const PeriodCheck &pc);
json to_json(const RangeReport &rep);
json to_json(const OpCountReport &rep);
json to_json(const VariantReport &rep);
json to_json(const ComparisonReport &rep);

/// Trace CSV: t, then per rational column an exact value and a paired
/// decimal approximation suffixed _f, then the integer state range.
std::string trace_csv(const std::vector<TraceRecord> &trace, size_t p, size_t m);

/// Sandbox CSV: the trace columns plus adds, pmults, reencs, wrap.
std::string sandbox_csv(const SandboxTrace &trace, size_t p, size_t m);

json sandbox_summary(const SandboxTrace &trace);

json load_json_file(const std::string &path);
void save_json_file(const std::string &path, const json &j);
void save_text_file(const std::string &path, const std::string &text);

}  // namespace ictrl
