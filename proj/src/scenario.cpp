#include "ncpr/scenario.hpp"

#include "json.hpp"

#include <chrono>
#include <functional>
#include <set>
#include <fstream>
#include <sstream>

namespace ncpr {

namespace {

bool looks_like_rational(const std::string& tok) {
    size_t i = (tok[0] == '-' || tok[0] == '+') ? 1 : 0;
    if (i == tok.size()) return false;
    bool digits = false, slash = false;
    for (; i < tok.size(); ++i) {
        if (tok[i] == '/') {
            if (slash || !digits) return false;
            slash = true;
            digits = false;
        } else if (isdigit(static_cast<unsigned char>(tok[i]))) {
            digits = true;
        } else {
            return false;
        }
    }
    return digits;
}

} // namespace

NCElement parse_element(const CtxPtr& ctx, const std::string& text) {
    std::istringstream is(text);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);

    NCElement out(ctx);
    size_t i = 0;
    bool first_term = true;
    while (i < toks.size()) {
        Rat sign(1);
        if (toks[i] == "+" || toks[i] == "-") {
            if (toks[i] == "-") sign = -1;
            ++i;
        } else if (!first_term) {
            throw Error("expected '+' or '-' between terms in '" + text + "'");
        }
        first_term = false;
        Rat coeff(1);
        if (i < toks.size() && looks_like_rational(toks[i])) {
            coeff = parse_rat(toks[i]);
            ++i;
        }
        NCElement term = ctx->unit();
        bool any_factor = false;
        while (i < toks.size() && toks[i] != "+" && toks[i] != "-") {
            std::string name = toks[i];
            int power = 1;
            if (auto caret = name.find('^'); caret != std::string::npos) {
                try {
                    power = std::stoi(name.substr(caret + 1));
                } catch (const std::exception&) {
                    throw Error("bad exponent in '" + name + "'");
                }
                name = name.substr(0, caret);
            }
            NCElement factor(ctx);
            if (name.rfind("e_", 0) == 0 && ctx->quiver().has_vertex(name.substr(2))) {
                factor = ctx->idempotent(name.substr(2));
                if (power != 1) throw Error("idempotents take no powers");
            } else if (ctx->quiver().has_arrow(name)) {
                int arrow = ctx->quiver().arrow_index(name);
                factor = power >= 0 ? ctx->generator(arrow) : ctx->inverse(arrow);
            } else {
                throw Error("unknown generator '" + name + "' in '" + text + "'");
            }
            int reps = std::abs(power);
            if (reps == 0) {
                factor = ctx->unit();
                reps = 1;
            }
            for (int k = 0; k < reps; ++k) term = term * factor;
            any_factor = true;
            ++i;
        }
        if (!any_factor && coeff == 1)
            throw Error("empty term in '" + text + "'");
        out += term * (sign * coeff);
    }
    return out;
}

std::string Scenario::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    if (genus > 0) j["genus"] = genus;
    j["quiver"]["vertices"] = quiver.vertices;
    j["quiver"]["arrows"] = nlohmann::json::array();
    for (const auto& a : quiver.arrows)
        j["quiver"]["arrows"].push_back({{"name", a.name},
                                         {"source", a.source},
                                         {"target", a.target},
                                         {"degree", a.degree},
                                         {"weight", a.weight},
                                         {"invertible", a.invertible}});
    if (!standard_table.empty()) {
        j["bracket"]["standard"] = standard_table;
    } else {
        j["bracket"]["entries"] = nlohmann::json::array();
        for (const auto& e : entries) {
            nlohmann::json je;
            je["lhs"] = e.lhs;
            je["rhs"] = e.rhs;
            je["terms"] = nlohmann::json::array();
            for (const auto& [lw, rw, c] : e.terms)
                je["terms"].push_back({{"left_word", lw}, {"right_word", rw}, {"coeff", c}});
            j["bracket"]["entries"].push_back(je);
        }
    }
    if (default_cotangent) {
        j["hamiltonian"]["default_cotangent"] = true;
    } else if (!per_vertex.empty()) {
        j["hamiltonian"]["per_vertex"] = per_vertex;
    }
    j["dimension"] = dimension;
    j["max_weight"] = max_weight;
    j["checks"] = checks;
    if (dump_slices) j["dump_slices"] = true;
    return j.dump();
}

namespace {

Quiver quiver_from_json(const nlohmann::json& j) {
    Quiver q;
    for (const auto& v : j.at("vertices")) q.vertices.push_back(v.get<std::string>());
    if (j.count("arrows"))
        for (const auto& a : j.at("arrows")) {
            Arrow arr;
            arr.name = a.at("name").get<std::string>();
            arr.source = a.at("source").get<std::string>();
            arr.target = a.at("target").get<std::string>();
            arr.degree = a.value("degree", 0);
            arr.weight = a.value("weight", 1);
            arr.invertible = a.value("invertible", false);
            q.arrows.push_back(arr);
        }
    q.validate();
    return q;
}

} // namespace

Scenario scenario_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("scenario parse error: ") + e.what());
    }
    Scenario sc;
    if (j.count("preset")) sc = preset_scenario(j.at("preset").get<std::string>(),
                                                j.value("genus", 2));
    try {
        if (j.count("name")) sc.name = j.at("name").get<std::string>();
        if (j.count("quiver")) sc.quiver = quiver_from_json(j.at("quiver"));
        if (j.count("bracket")) {
            const auto& b = j.at("bracket");
            if (b.count("standard")) {
                sc.standard_table = b.at("standard").get<std::string>();
                sc.entries.clear();
            } else if (b.count("entries")) {
                sc.standard_table.clear();
                sc.entries.clear();
                for (const auto& e : b.at("entries")) {
                    Scenario::BracketEntry be;
                    be.lhs = e.at("lhs").get<std::string>();
                    be.rhs = e.at("rhs").get<std::string>();
                    for (const auto& t : e.value("terms", nlohmann::json::array()))
                        be.terms.push_back({t.at("left_word").get<std::string>(),
                                            t.at("right_word").get<std::string>(),
                                            t.value("coeff", std::string("1"))});
                    sc.entries.push_back(std::move(be));
                }
            }
        }
        if (j.count("hamiltonian")) {
            const auto& h = j.at("hamiltonian");
            sc.default_cotangent = h.value("default_cotangent", false);
            sc.per_vertex.clear();
            if (h.count("per_vertex"))
                for (const auto& [k, v] : h.at("per_vertex").items())
                    sc.per_vertex[k] = v.get<std::string>();
        }
        if (j.count("dimension")) sc.dimension = j.at("dimension").get<std::vector<int>>();
        if (j.count("max_weight")) sc.max_weight = j.at("max_weight").get<int>();
        if (j.count("checks")) sc.checks = j.at("checks").get<std::vector<std::string>>();
        if (j.count("dump_slices")) sc.dump_slices = j.at("dump_slices").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("scenario field error: ") + e.what());
    }
    if (sc.dimension.empty()) sc.dimension.assign(sc.quiver.vertices.size(), 1);
    if (sc.checks.empty()) sc.checks = {"all"};
    if (sc.max_weight < 0) throw Error("max_weight must be nonnegative");
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return scenario_from_json_text(ss.str());
}

Scenario preset_scenario(const std::string& name, int genus) {
    Scenario sc;
    sc.name = name;
    sc.standard_table = "cotangent";
    sc.default_cotangent = true;
    sc.max_weight = 4;
    sc.checks = {"all"};
    auto one_vertex_loops = [](const std::vector<std::string>& loops) {
        Quiver q;
        q.vertices = {"1"};
        for (const auto& l : loops) q.arrows.push_back({l, "1", "1", 0, 1, false});
        return q;
    };
    if (name == "jordan") {
        sc.quiver = double_quiver(one_vertex_loops({"x"}));
        sc.dimension = {1};
    } else if (name == "genus-g" || name.rfind("genus-", 0) == 0) {
        int g = genus;
        if (name != "genus-g") g = std::stoi(name.substr(6));
        if (g < 1) throw Error("genus must be positive");
        sc.genus = g;
        std::vector<std::string> loops;
        for (int a = 1; a <= g; ++a) loops.push_back("x" + std::to_string(a));
        sc.quiver = double_quiver(one_vertex_loops(loops));
        sc.dimension = {1};
    } else if (name == "star") {
        Quiver q;
        q.vertices = {"1", "2"};
        q.arrows = {{"a", "1", "2", 0, 1, false}};
        sc.quiver = double_quiver(q);
        sc.dimension = {1, 1};
    } else if (name == "gauge") {
        Quiver q;
        q.vertices = {"1", "2"};
        sc.quiver = adjoin_loops(q, "t", 0, 1);
        sc.standard_table = "gauge";
        sc.default_cotangent = false;
        sc.per_vertex = {{"1", "t1"}, {"2", "t2"}};
        sc.dimension = {1, 1};
    } else if (name == "laurent") {
        sc.quiver = localize(double_quiver(one_vertex_loops({"x"})), {"x"});
        sc.dimension = {1};
    } else if (name == "group-group") {
        sc.quiver = localize(double_quiver(one_vertex_loops({"x"})), {"x", "x*"});
        sc.dimension = {1};
    } else {
        throw Error("unknown preset '" + name + "'");
    }
    return sc;
}

const std::vector<std::string>& all_check_names() {
    static const std::vector<std::string> names = {
        "axioms",       "hamiltonian", "contraction", "brst",    "eta-zero",
        "rep-laws",     "homology",    "decomposition", "phi-psi", "diagonal"};
    return names;
}

namespace {

struct BuiltScenario {
    CtxPtr ctx;
    BracketTable table;
    std::optional<HamiltonianData> ham;
    DGAPresentation base;
    std::optional<DGAPresentation> brst_p;  // built on demand

    bool localized = false;
    bool jordan_shape = false;  // one vertex, one dual pair, no extra arrows
};

BuiltScenario build_scenario(const Scenario& sc) {
    BuiltScenario b;
    b.ctx = AlgebraContext::make(sc.quiver);
    if (!sc.standard_table.empty()) {
        if (sc.standard_table == "cotangent")
            b.table = cotangent_table(b.ctx);
        else if (sc.standard_table == "gauge")
            b.table = gauge_table(b.ctx);
        else if (sc.standard_table == "brst_pairing")
            b.table = brst_pairing_table(b.ctx);
        else
            throw Error("unknown standard table '" + sc.standard_table + "'");
    } else {
        b.table = BracketTable(b.ctx);
        for (const auto& e : sc.entries) {
            Tensor2 val(b.ctx);
            for (const auto& [lw, rw, c] : e.terms)
                val += tensor_of(parse_element(b.ctx, lw), parse_element(b.ctx, rw)) *
                       parse_rat(c);
            b.table.set(e.lhs, e.rhs, std::move(val));
        }
    }
    if (sc.default_cotangent) {
        b.ham = cotangent_moment(b.ctx);
    } else if (!sc.per_vertex.empty()) {
        NCElement total(b.ctx);
        for (const auto& [vertex, expr] : sc.per_vertex)
            total += parse_element(b.ctx, expr);
        b.ham = moment_from_total(b.ctx, total);
    }
    b.base = presentation(b.ctx, b.table);
    for (const auto& a : sc.quiver.arrows) b.localized |= a.invertible;
    b.jordan_shape = sc.quiver.vertices.size() == 1 && sc.quiver.arrows.size() == 2 &&
                     !b.localized && sc.quiver.has_arrow("x") && sc.quiver.has_arrow("x*");
    return b;
}

std::vector<std::string> expand_checks(const Scenario& sc, const BuiltScenario& b) {
    std::vector<std::string> requested = sc.checks;
    bool all = false;
    for (const auto& c : requested)
        if (c == "all") all = true;
    auto applicable = [&](const std::string& c) {
        if (c == "axioms" || c == "contraction" || c == "rep-laws") return true;
        if (c == "hamiltonian") return b.ham.has_value();
        if (c == "brst" || c == "eta-zero") return b.ham.has_value();
        if (c == "homology" || c == "decomposition")
            return b.ham.has_value() && !b.localized;
        if (c == "phi-psi" || c == "diagonal")
            return b.jordan_shape && b.ham.has_value() && sc.dimension.size() == 1;
        return false;
    };
    std::vector<std::string> want;
    if (all) {
        for (const auto& c : all_check_names())
            if (applicable(c)) want.push_back(c);
    } else {
        for (const auto& c : requested) {
            bool known = false;
            for (const auto& k : all_check_names()) known |= (k == c);
            if (!known) throw Error("unknown check '" + c + "'");
            want.push_back(c);
        }
    }
    // Dependency closure, in registry order.
    auto deps = [](const std::string& c) -> std::vector<std::string> {
        if (c == "hamiltonian") return {"axioms"};
        if (c == "brst") return {"axioms", "hamiltonian"};
        if (c == "eta-zero") return {"axioms", "hamiltonian", "brst"};
        if (c == "homology") return {"axioms", "hamiltonian", "brst"};
        if (c == "decomposition") return {"axioms", "hamiltonian"};
        if (c == "phi-psi") return {"axioms", "hamiltonian"};
        if (c == "diagonal") return {"axioms", "hamiltonian"};
        return {};
    };
    std::set<std::string> closed;
    std::function<void(const std::string&)> close = [&](const std::string& c) {
        if (closed.count(c)) return;
        closed.insert(c);
        for (const auto& d : deps(c)) close(d);
    };
    for (const auto& c : want) close(c);
    std::vector<std::string> ordered;
    for (const auto& c : all_check_names())
        if (closed.count(c)) ordered.push_back(c);
    return ordered;
}

void push_issues(CheckResult& res, const std::vector<CheckIssue>& issues) {
    for (const auto& i : issues) res.details.push_back(i.check + ": " + i.witness);
}

void put_table(Report& report, const std::string& name, const BettiTable& table) {
    for (auto& [n, t] : report.tables)
        if (n == name) {
            t = table;
            return;
        }
    report.tables.push_back({name, table});
}

} // namespace

Report run_scenario(const Scenario& sc, int jobs) {
    Report report;
    report.scenario_json = sc.to_json();
    BuiltScenario built = build_scenario(sc);
    std::vector<std::string> ordered = expand_checks(sc, built);
    DimensionVector nv = DimensionVector::make(sc.dimension);

    using Clock = std::chrono::steady_clock;
    for (const auto& name : ordered) {
        CheckResult& res = report.add(name);
        auto t0 = Clock::now();
        try {
            if (name == "axioms") {
                AxiomReport rep = verify_axioms(built.table, 3, nullptr, jobs);
                res.status = rep.passed ? CheckStatus::Pass : CheckStatus::Fail;
                res.details.push_back("generator triples checked: " +
                                      std::to_string(rep.triples_checked));
                push_issues(res, rep.issues);
            } else if (name == "hamiltonian") {
                if (!built.ham) throw Error("no gauge elements in this scenario");
                HamiltonianReport rep = check_hamiltonian(built.table, *built.ham);
                res.status = rep.passed ? CheckStatus::Pass : CheckStatus::Fail;
                push_issues(res, rep.issues);
            } else if (name == "contraction") {
                ContractionReport rep =
                    contraction_check(static_cast<int>(sc.quiver.vertices.size()), 4);
                res.status = rep.passed ? CheckStatus::Pass : CheckStatus::Fail;
                res.details.push_back("words checked: " + std::to_string(rep.words_checked));
                push_issues(res, rep.issues);
            } else if (name == "brst") {
                built.brst_p = brst(built.base, *built.ham);
                bool ok = true;
                for (const Word& w : words_up_to_length(built.brst_p->ctx, 4))
                    ok &= built.brst_p->diff
                              .apply(built.brst_p->diff.apply(NCElement(built.brst_p->ctx, w)))
                              .is_zero();
                res.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
                res.details.push_back("charge reproduces the differential on all generators");
                if (ok) res.details.push_back("d^2 = 0 on all words of length <= 4");
                if (sc.dump_slices)
                    for (const auto& line : describe(*built.brst_p)) res.details.push_back(line);
            } else if (name == "eta-zero") {
                if (!built.brst_p) built.brst_p = brst(built.base, *built.ham);
                MorphismReport rep = eta_zero_map(*built.brst_p);
                MorphismReport rep2 = split_differential_check(*built.brst_p);
                res.status = (rep.passed && rep2.passed) ? CheckStatus::Pass : CheckStatus::Fail;
                push_issues(res, rep.issues);
                push_issues(res, rep2.issues);
            } else if (name == "rep-laws") {
                const DGAPresentation* pres = &built.base;
                if (built.ham) {
                    if (!built.brst_p) built.brst_p = brst(built.base, *built.ham);
                    pres = &*built.brst_p;
                }
                CommutativeDGA dga = rep_algebra(*pres, nv);
                RepLawReport rep = verify_rep_laws(*pres, dga, 50);
                res.status = rep.passed ? CheckStatus::Pass : CheckStatus::Fail;
                res.details.push_back("functoriality samples: " +
                                      std::to_string(rep.functoriality_samples));
                res.details.push_back("trace pairs: " + std::to_string(rep.trace_pairs));
                res.details.push_back("jacobi triples: " + std::to_string(rep.jacobi_triples));
                push_issues(res, rep.issues);
            } else if (name == "homology") {
                if (!built.brst_p) built.brst_p = brst(built.base, *built.ham);
                DGAPresentation sh = shafarevich(built.base, *built.ham);
                CommutativeDGA K = rep_algebra(sh, nv);
                CommutativeDGA B = rep_algebra(*built.brst_p, nv);
                BettiTable tk, tb;
                for (int w = 0; w <= sc.max_weight; ++w) {
                    for (const auto& [k, d] : betti(weight_slice(K, w), jobs)) tk.set(w, k, d);
                    for (const auto& [k, d] : betti(weight_slice(B, w), jobs)) tb.set(w, k, d);
                }
                put_table(report, "koszul", tk);
                put_table(report, "brst", tb);
                res.status = CheckStatus::Pass;
                res.details.push_back("betti tables computed up to weight " +
                                      std::to_string(sc.max_weight));
                if (sc.dump_slices) {
                    for (const auto& line : describe(B)) res.details.push_back(line);
                    for (int w = 0; w <= sc.max_weight; ++w)
                        for (const auto& line : describe(weight_slice(B, w), B))
                            res.details.push_back(line);
                }
            } else if (name == "decomposition") {
                DecompositionReport rep =
                    verify_decomposition(built.base, *built.ham, nv, sc.max_weight, jobs);
                res.status = rep.passed ? CheckStatus::Pass : CheckStatus::Fail;
                push_issues(res, rep.issues);
                for (const auto& n2 : rep.notes) res.details.push_back(n2);
                put_table(report, "brst", rep.brst);
                put_table(report, "koszul_invariant", rep.koszul_invariant);
                put_table(report, "koszul", rep.koszul_full);
            } else if (name == "phi-psi") {
                PhiPsiReport rep = phi_psi(built.base, *built.ham, nv, sc.max_weight, jobs);
                res.status = rep.passed ? CheckStatus::Pass : CheckStatus::Fail;
                push_issues(res, rep.issues);
                for (const auto& sp : rep.splits)
                    res.details.push_back("split w=" + std::to_string(sp.w) + " k=" +
                                          std::to_string(sp.k) + ": dim " +
                                          std::to_string(sp.dim_h) + " = ker " +
                                          std::to_string(sp.ker_phi) + " + im " +
                                          std::to_string(sp.im_psi));
            } else if (name == "diagonal") {
                DiagonalReport rep =
                    diagonal_check(built.base, *built.ham, nv.total, sc.max_weight, jobs);
                res.status = CheckStatus::Finding;
                res.details.push_back(rep.agrees
                                          ? "betti tables agree: conjecture confirmed at this scale"
                                          : "betti tables disagree");
                push_issues(res, rep.mismatches);
                put_table(report, "diagonal_lhs", rep.lhs);
                put_table(report, "diagonal_rhs", rep.rhs);
            }
        } catch (const Error& e) {
            res.status = CheckStatus::Fail;
            res.details.push_back(std::string("rejected: ") + e.what());
        }
        auto t1 = Clock::now();
        report.timings_ms.push_back(
            {name, std::chrono::duration<double, std::milli>(t1 - t0).count()});
    }
    return report;
}

} // namespace ncpr
