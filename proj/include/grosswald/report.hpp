#pragma once

#include <string>

#include "json.hpp"

#include "grosswald/search.hpp"

namespace grosswald {

using Json = nlohmann::ordered_json;

// One machine-readable result per CLI invocation. Timing stays out of the
// serialized form by default so identical inputs give byte-identical output.
struct RunReport {
    std::string command;
    Json inputs;
    Json results;
    Assumptions assumptions = Assumptions::unconditional;
    double timing_seconds = 0;
};

std::string decimal(const Integer& v);

// Exception file line: p, n, factors, case_X, case_Y, g, g_hat, passes_g,
// passes_g_hat. Big integers are decimal strings.
Json to_json(const ExceptionRecord& rec);

// Case summary line: the constraint sets, chosen sieve parameters, interval
// and what the search did with it.
Json to_json(const CaseLine& line);

Json to_json(const RootReport& report);

Json to_json(const RunReport& report, bool include_timing = false);

} // namespace grosswald
