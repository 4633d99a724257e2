#include "ncpr/scenario.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <thread>

namespace {

struct Options {
    bool dump_slices = false;
    std::string scenario_path;
    std::string preset;
    int genus = 2;
    std::string dim;
    int max_weight = -1;
    std::string format = "text";
    std::string out;
    int jobs = 0;
};

std::vector<int> parse_dim(const std::string& s) {
    std::vector<int> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(std::stoi(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

int run(const Options& opt, const std::vector<std::string>& checks) {
    ncpr::Scenario sc;
    if (!opt.scenario_path.empty())
        sc = ncpr::load_scenario(opt.scenario_path);
    else if (!opt.preset.empty())
        sc = ncpr::preset_scenario(opt.preset, opt.genus);
    else
        throw ncpr::Error("pass --scenario <path> or --preset <name>");
    if (!opt.dim.empty()) sc.dimension = parse_dim(opt.dim);
    if (opt.max_weight >= 0) sc.max_weight = opt.max_weight;
    if (!checks.empty()) sc.checks = checks;
    sc.dump_slices = sc.dump_slices || opt.dump_slices;
    int jobs = opt.jobs > 0 ? opt.jobs
                            : static_cast<int>(std::thread::hardware_concurrency());
    ncpr::Report report = ncpr::run_scenario(sc, std::max(jobs, 1));
    std::string text = ncpr::emit(report, opt.format);
    if (opt.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(opt.out);
        if (!f) throw ncpr::Error("cannot write '" + opt.out + "'");
        f << text;
    }
    return report.any_fail() ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact noncommutative Poisson reduction engine for quiver path algebras"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--scenario", opt.scenario_path, "scenario file (JSON)");
    app.add_option("--preset", opt.preset,
                   "preset: jordan, genus-g, star, gauge, laurent, group-group");
    app.add_option("--genus", opt.genus, "genus for the genus-g preset");
    app.add_option("--dim", opt.dim, "dimension vector, comma separated");
    app.add_option("--max-weight", opt.max_weight, "weight truncation bound");
    app.add_option("--format", opt.format, "output: text, json, csv");
    app.add_option("--out", opt.out, "write the report to a file");
    app.add_option("--jobs", opt.jobs, "worker threads (default: hardware)");
    bool dump_slices = false;
    app.add_flag("--dump-slices", dump_slices, "attach slice bases and generator listings");

    std::map<std::string, std::vector<std::string>> commands = {
        {"verify-bracket", {"axioms", "hamiltonian"}},
        {"build-brst", {"brst", "eta-zero", "contraction"}},
        {"rep", {"rep-laws"}},
        {"homology", {"homology"}},
        {"decomposition", {"decomposition"}},
        {"phi-psi", {"phi-psi"}},
        {"diagonal", {"diagonal"}},
        {"all", {"all"}},
    };
    std::string chosen;
    for (const auto& [name, checks] : commands) {
        CLI::App* sub = app.add_subcommand(
            name, name == "all" ? "run every applicable check" : "run the " + name + " checks");
        sub->fallthrough();
        sub->callback([&chosen, name = name]() { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);
    opt.dump_slices = dump_slices;
    try {
        return run(opt, commands.at(chosen));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
