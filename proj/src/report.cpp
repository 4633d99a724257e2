#include "ncpr/report.hpp"

#include "json.hpp"

#include <sstream>

namespace ncpr {

std::string status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "PASS";
        case CheckStatus::Fail: return "FAIL";
        case CheckStatus::Finding: return "FINDING";
    }
    return "?";
}

bool Report::any_fail() const {
    for (const auto& c : checks)
        if (c.status == CheckStatus::Fail) return true;
    return false;
}

CheckResult& Report::add(const std::string& name) {
    CheckResult r;
    r.name = name;
    checks.push_back(std::move(r));
    return checks.back();
}

std::string emit_json(const Report& r) {
    nlohmann::json j;
    j["scenario"] = r.scenario_json.empty() ? nlohmann::json::object()
                                            : nlohmann::json::parse(r.scenario_json);
    j["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks) {
        nlohmann::json jc;
        jc["name"] = c.name;
        jc["status"] = status_name(c.status);
        jc["details"] = c.details;
        j["checks"].push_back(jc);
    }
    j["tables"] = nlohmann::json::object();
    for (const auto& [name, table] : r.tables) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& [key, dim] : table.dims)
            rows.push_back({{"weight", key.first}, {"degree", key.second}, {"dim", dim}});
        j["tables"][name] = rows;
    }
    j["timings_ms"] = nlohmann::json::object();
    for (const auto& [name, ms] : r.timings_ms) j["timings_ms"][name] = ms;
    return j.dump(2) + "\n";
}

std::string emit_csv(const Report& r) {
    std::ostringstream os;
    for (const auto& [name, table] : r.tables) {
        os << "# " << name << "\n";
        os << table.csv();
    }
    return os.str();
}

std::string emit_text(const Report& r) {
    std::ostringstream os;
    for (const auto& c : r.checks) {
        os << status_name(c.status) << "  " << c.name << "\n";
        for (const auto& d : c.details) os << "      " << d << "\n";
    }
    for (const auto& [name, table] : r.tables) {
        os << "table " << name << " (weight,degree,dim)\n";
        for (const auto& [key, dim] : table.dims)
            os << "      " << key.first << "," << key.second << "," << dim << "\n";
    }
    return os.str();
}

std::string emit(const Report& r, const std::string& format) {
    if (format == "json") return emit_json(r);
    if (format == "csv") return emit_csv(r);
    if (format == "text") return emit_text(r);
    throw Error("unknown report format '" + format + "'");
}

} // namespace ncpr
