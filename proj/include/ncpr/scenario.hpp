#pragma once

#include "ncpr/report.hpp"

namespace ncpr {

// A reproducible run request: quiver, bracket, gauge elements, dimension
// vector, weight bound, and the checks to execute.
struct Scenario {
    std::string name = "custom";
    int genus = 0;  // echoed for the genus-g preset
    Quiver quiver;

    std::string standard_table;  // "cotangent" | "gauge" | "brst_pairing" | ""
    struct BracketEntry {
        std::string lhs, rhs;
        // (left word, right word, coefficient) expressions
        std::vector<std::tuple<std::string, std::string, std::string>> terms;
    };
    std::vector<BracketEntry> entries;

    bool default_cotangent = true;
    std::map<std::string, std::string> per_vertex;  // vertex -> gauge element

    std::vector<int> dimension;
    int max_weight = 4;
    std::vector<std::string> checks;  // or {"all"}
    bool dump_slices = false;  // attach slice bases and generator listings

    std::string to_json() const;
};

// Whitespace-separated word expressions: terms joined by +/-, each an
// optional rational coefficient followed by factors `name`, `name^k`, or
// `e_<vertex>`.
NCElement parse_element(const CtxPtr& ctx, const std::string& text);

Scenario load_scenario(const std::string& path);
Scenario scenario_from_json_text(const std::string& text);

// Shipped presets: jordan, genus-g, star, gauge, laurent, group-group.
Scenario preset_scenario(const std::string& name, int genus = 2);

// Executes the requested checks in dependency order; a check that cannot run
// in the scenario reports FAIL with the rejection reason. Deterministic
// modulo the timing fields.
Report run_scenario(const Scenario& sc, int jobs = 1);

const std::vector<std::string>& all_check_names();

} // namespace ncpr
