#include "ncpr/complexes.hpp"

namespace ncpr {

void DGAPresentation::check_differential() const {
    for (int a = 0; a < ctx->arrow_count(); ++a) {
        const NCElement& img = diff.of_arrow(a);
        if (img.is_zero()) continue;
        int gdeg = ctx->quiver().arrows[a].degree;
        auto d = img.degree();
        if (!d || *d != gdeg - 1)
            throw Error("differential does not lower degree by 1 on '" +
                        ctx->quiver().arrows[a].name + "'");
        if (weight_homogeneous) {
            auto w = img.weight();
            if (!w || *w != ctx->quiver().arrows[a].weight)
                throw Error("differential is not weight-homogeneous on '" +
                            ctx->quiver().arrows[a].name + "'");
        }
        if (!diff.apply(img).is_zero())
            throw Error("d^2 != 0 on generator '" + ctx->quiver().arrows[a].name + "'");
    }
}

DGAPresentation presentation(const CtxPtr& ctx, std::optional<BracketTable> table) {
    DGAPresentation p;
    p.ctx = ctx;
    p.diff = GenDifferential(ctx);
    p.table = std::move(table);
    p.check_differential();
    return p;
}

namespace {

// Fresh loop-name prefix, bumping until no collision.
std::string fresh_prefix(const Quiver& q, std::string base) {
    std::string prefix = base + "_";
    auto collides = [&](const std::string& p) {
        for (const auto& v : q.vertices)
            if (q.has_arrow(p + v)) return true;
        return false;
    };
    while (collides(prefix)) prefix = "_" + prefix;
    return prefix;
}

BracketTable transport_table(const BracketTable& tbl, const CtxPtr& big) {
    BracketTable r(big);
    const auto& small = *tbl.ctx();
    auto arrow_in_big = [&](int a) {
        return big->quiver().arrow_index(small.quiver().arrows[a].name);
    };
    for (const auto& [key, val] : tbl.entries()) {
        Tensor2 moved(big);
        for (const auto& [k, c] : val.terms())
            moved.add_term({transport_word(k[0], small, *big), transport_word(k[1], small, *big)},
                           c);
        r.set(arrow_in_big(key.first), arrow_in_big(key.second), std::move(moved));
    }
    for (int a = 0; a < small.arrow_count(); ++a)
        if (tbl.factor_of(a) >= 0) r.assign_factor(arrow_in_big(a), tbl.factor_of(a));
    return r;
}

HamiltonianData transport_ham(const HamiltonianData& ham, const CtxPtr& big) {
    HamiltonianData r;
    r.ctx = big;
    for (const auto& d : ham.delta_i) r.delta_i.push_back(transport(d, big));
    return r;
}

} // namespace

DGAPresentation shafarevich(const DGAPresentation& a, const HamiltonianData& ham) {
    if (!a.table) throw Error("shafarevich needs a bracket table to check the action");
    for (int g = 0; g < a.ctx->arrow_count(); ++g) {
        if (a.ctx->quiver().arrows[g].degree != 0)
            throw Error("shafarevich input must be ungraded (degree-0 generators)");
        if (a.diff.is_set(g) && !a.diff.of_arrow(g).is_zero())
            throw Error("shafarevich input must have zero differential");
    }
    HamiltonianReport hrep = check_hamiltonian(*a.table, ham);
    if (!hrep.passed)
        throw Error("gauge elements fail the Hamiltonian identity: " +
                    (hrep.issues.empty() ? std::string("?") : hrep.issues[0].witness));

    int theta_weight = 2;
    if (auto w = ham.total().weight()) theta_weight = *w;

    std::string prefix = fresh_prefix(a.ctx->quiver(), "th");
    Quiver q2 = adjoin_loops(a.ctx->quiver(), prefix, 1, theta_weight);
    auto ctx2 = AlgebraContext::make(q2);

    DGAPresentation p;
    p.ctx = ctx2;
    p.diff = GenDifferential(ctx2);
    p.table = a.table ? std::optional<BracketTable>(transport_table(*a.table, ctx2))
                      : std::nullopt;
    p.ham = transport_ham(ham, ctx2);
    for (int v = 0; v < ctx2->vertex_count(); ++v) {
        int th = q2.arrow_index(prefix + q2.vertices[v]);
        p.theta.push_back(th);
        p.diff.set(th, p.ham->delta_i[v]);
    }
    p.check_differential();
    return p;
}

DGAPresentation chevalley_eilenberg(const DGAPresentation& a) {
    std::string prefix = fresh_prefix(a.ctx->quiver(), "eta");
    Quiver q2 = adjoin_loops(a.ctx->quiver(), prefix, -1, 0);
    auto ctx2 = AlgebraContext::make(q2);

    DGAPresentation p;
    p.ctx = ctx2;
    p.diff = GenDifferential(ctx2);
    p.table = a.table ? std::optional<BracketTable>(transport_table(*a.table, ctx2))
                      : std::nullopt;
    if (a.ham) p.ham = transport_ham(*a.ham, ctx2);
    for (int t : a.theta) p.theta.push_back(q2.arrow_index(a.ctx->quiver().arrows[t].name));

    NCElement eta_sum(ctx2);
    for (int v = 0; v < ctx2->vertex_count(); ++v) {
        int et = q2.arrow_index(prefix + q2.vertices[v]);
        p.eta.push_back(et);
        NCElement e = ctx2->generator(et);
        p.diff.set(et, -(e * e));
    }
    for (int et : p.eta) eta_sum += ctx2->generator(et);
    for (int g = 0; g < a.ctx->arrow_count(); ++g) {
        int g2 = q2.arrow_index(a.ctx->quiver().arrows[g].name);
        NCElement dold = transport(a.diff.of_arrow(g), ctx2);
        NCElement img = dold - graded_commutator(eta_sum, ctx2->generator(g2));
        p.diff.set(g2, img);
    }
    p.check_differential();
    return p;
}

DGAPresentation brst(const DGAPresentation& a, const HamiltonianData& ham) {
    DGAPresentation sh = shafarevich(a, ham);
    DGAPresentation ce = chevalley_eilenberg(sh);

    BracketTable pairing =
        brst_pairing_on(ce.ctx, ce.theta, ce.eta, /*factor=*/0);
    BracketTable base = transport_table(*a.table, ce.ctx);
    // Every generator of the input algebra sits in the base factor of the
    // free product, whether or not its table row was spelled out.
    for (int g = 0; g < a.ctx->arrow_count(); ++g) {
        int g2 = ce.ctx->quiver().arrow_index(a.ctx->quiver().arrows[g].name);
        if (base.factor_of(g2) < 0) base.assign_factor(g2, 0);
    }
    ce.table = free_product(base, pairing);

    NCElement gamma(ce.ctx);
    for (int v = 0; v < ce.ctx->vertex_count(); ++v) {
        NCElement et = ce.ctx->generator(ce.eta[v]);
        NCElement th = ce.ctx->generator(ce.theta[v]);
        gamma += et * ce.ham->delta_i[v] - et * et * th;
    }
    ce.charge = Charge{gamma};

    GenDifferential from_charge = charge_differential(*ce.table, *ce.charge);
    for (int g = 0; g < ce.ctx->arrow_count(); ++g)
        if (from_charge.of_arrow(g) != ce.diff.of_arrow(g))
            throw Error("charge differential disagrees with the BRST differential on '" +
                        ce.ctx->quiver().arrows[g].name + "'");
    return ce;
}

ContractionReport contraction_check(int num_vertices, int max_len) {
    Quiver q;
    for (int i = 1; i <= num_vertices; ++i) q.vertices.push_back(std::to_string(i));
    q = adjoin_loops(q, "t", 0, 1);
    q = adjoin_loops(q, "th", 1, 1);
    auto ctx = AlgebraContext::make(q);

    GenDifferential d(ctx);
    GenDifferential h(ctx);
    for (int v = 0; v < num_vertices; ++v) {
        int t = q.arrow_index("t" + q.vertices[v]);
        int th = q.arrow_index("th" + q.vertices[v]);
        d.set(th, ctx->generator(t));
        h.set(t, ctx->generator(th));
    }

    ContractionReport rep;
    for (const Word& w : words_up_to_length(ctx, max_len)) {
        ++rep.words_checked;
        NCElement e(ctx, w);
        NCElement lhs = d.apply(h.apply(e)) + h.apply(d.apply(e));
        NCElement rhs = Rat(static_cast<long>(w.length())) * e;
        if (lhs != rhs) {
            rep.passed = false;
            if (rep.issues.size() < 8) rep.issues.push_back({"contraction", ctx->to_string(w)});
        }
    }
    return rep;
}

MorphismReport eta_zero_map(const DGAPresentation& b) {
    MorphismReport rep;
    if (b.eta.empty()) throw Error("eta_zero_map expects a BRST presentation");
    const CtxPtr& ctx = b.ctx;
    auto kill_eta = [&](const NCElement& e) {
        NCElement r(ctx);
        for (const auto& [w, c] : e.terms()) {
            bool has_eta = false;
            for (Token t : w.toks)
                for (int et : b.eta)
                    if (arrow_of_token(t) == et) has_eta = true;
            if (!has_eta) r.add_term(w, c);
        }
        return r;
    };
    // Shafarevich differential on ev(g): dϑ_i = δ_i, zero on the rest.
    for (int g = 0; g < ctx->arrow_count(); ++g) {
        bool is_eta = false;
        for (int et : b.eta) is_eta |= (g == et);
        NCElement expected(ctx);
        if (!is_eta) {
            for (size_t v = 0; v < b.theta.size(); ++v)
                if (b.theta[v] == g) expected = b.ham->delta_i[v];
        }
        NCElement got = kill_eta(b.diff.of_arrow(g));
        if (got != expected) {
            rep.passed = false;
            rep.issues.push_back({"eta-zero", ctx->quiver().arrows[g].name});
        }
    }
    return rep;
}

MorphismReport split_differential_check(const DGAPresentation& a) {
    MorphismReport rep;
    if (a.eta.empty()) throw Error("split_differential_check expects a CE presentation");
    const CtxPtr& ctx = a.ctx;
    // d_old: the differential with the eta twist removed; d_ce: the twist.
    GenDifferential dold(ctx), dce(ctx);
    NCElement eta_sum(ctx);
    for (int et : a.eta) eta_sum += ctx->generator(et);
    for (int g = 0; g < ctx->arrow_count(); ++g) {
        bool is_eta = false;
        for (int et : a.eta) is_eta |= (g == et);
        NCElement gen = ctx->generator(g);
        if (is_eta) {
            dce.set(g, a.diff.of_arrow(g));
        } else {
            dce.set(g, -graded_commutator(eta_sum, gen));
            dold.set(g, a.diff.of_arrow(g) + graded_commutator(eta_sum, gen));
        }
    }
    for (int g = 0; g < ctx->arrow_count(); ++g) {
        NCElement gen = ctx->generator(g);
        if (!dold.apply(dold.apply(gen)).is_zero() || !dce.apply(dce.apply(gen)).is_zero() ||
            !(dold.apply(dce.apply(gen)) + dce.apply(dold.apply(gen))).is_zero()) {
            rep.passed = false;
            rep.issues.push_back({"split-differential", ctx->quiver().arrows[g].name});
        }
    }
    return rep;
}

std::vector<std::string> describe(const DGAPresentation& p) {
    std::vector<std::string> out;
    for (int g = 0; g < p.ctx->arrow_count(); ++g) {
        const Arrow& a = p.ctx->quiver().arrows[g];
        std::string line = a.name + ": " + a.source + " -> " + a.target +
                           ", degree " + std::to_string(a.degree) + ", weight " +
                           std::to_string(a.weight);
        if (a.invertible) line += ", invertible";
        line += "; d = " + p.diff.of_arrow(g).str();
        out.push_back(line);
    }
    return out;
}

} // namespace ncpr
