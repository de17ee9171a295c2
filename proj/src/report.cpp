#include "grosswald/report.hpp"

namespace grosswald {

namespace {

const char* action_name(CaseLine::Action a) {
    switch (a) {
        case CaseLine::Action::nothing: return "nothing";
        case CaseLine::Action::split: return "split";
        case CaseLine::Action::enumerate: return "enumerate";
    }
    return "?";
}

Json prime_list(const std::vector<std::uint64_t>& v) {
    Json out = Json::array();
    for (std::uint64_t q : v) out.push_back(q);
    return out;
}

} // namespace

std::string decimal(const Integer& v) {
    return v.get_str();
}

Json to_json(const ExceptionRecord& rec) {
    Json j;
    j["p"] = decimal(rec.p);
    j["n"] = rec.constraints.n;
    Json factors = Json::array();
    for (const auto& pp : rec.p_minus_1.factors)
        factors.push_back(Json::array({decimal(pp.prime), pp.exponent}));
    j["factors"] = std::move(factors);
    j["case_X"] = prime_list(rec.constraints.X);
    j["case_Y"] = prime_list(rec.constraints.Y);
    if (rec.report) {
        j["g"] = decimal(rec.report->g);
        j["g_hat"] = decimal(rec.report->g_hat);
        j["passes_g"] = rec.report->passes_g;
        j["passes_g_hat"] = rec.report->passes_g_hat;
    } else {
        j["g"] = nullptr;
        j["g_hat"] = nullptr;
        j["passes_g"] = nullptr;
        j["passes_g_hat"] = nullptr;
    }
    return j;
}

Json to_json(const CaseLine& line) {
    Json j;
    j["n"] = line.constraints.n;
    j["X"] = prime_list(line.constraints.X);
    j["Y"] = prime_list(line.constraints.Y);
    j["s"] = line.params.s;
    j["delta"] = static_cast<double>(line.params.delta);
    j["M"] = prime_list(line.params.M);
    j["lower"] = decimal(line.lower);
    j["upper"] = decimal(line.upper);
    j["action"] = action_name(line.action);
    if (line.action == CaseLine::Action::enumerate) j["candidates"] = line.candidates;
    return j;
}

Json to_json(const RootReport& report) {
    Json j;
    j["p"] = decimal(report.p);
    j["g"] = decimal(report.g);
    j["g_hat"] = decimal(report.g_hat);
    j["passes_g"] = report.passes_g;
    j["passes_g_hat"] = report.passes_g_hat;
    return j;
}

Json to_json(const RunReport& report, bool include_timing) {
    Json j;
    j["command"] = report.command;
    j["inputs"] = report.inputs;
    j["results"] = report.results;
    j["assumptions"] = to_cstring(report.assumptions);
    if (include_timing) j["timing_seconds"] = report.timing_seconds;
    return j;
}

} // namespace grosswald
