#pragma once

#include "ncpr/homology.hpp"

#include <string>
#include <vector>

namespace ncpr {

enum class CheckStatus { Pass, Fail, Finding };

std::string status_name(CheckStatus s);

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    std::vector<std::string> details;  // witnesses, counts, notes
};

struct Report {
    std::string scenario_json;  // normalized echo of the scenario
    std::vector<CheckResult> checks;
    std::vector<std::pair<std::string, BettiTable>> tables;
    std::vector<std::pair<std::string, double>> timings_ms;

    bool any_fail() const;
    CheckResult& add(const std::string& name);
};

std::string emit_json(const Report& r);
std::string emit_csv(const Report& r);
std::string emit_text(const Report& r);
std::string emit(const Report& r, const std::string& format);

} // namespace ncpr
