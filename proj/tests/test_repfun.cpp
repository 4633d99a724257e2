#include "doctest.h"

#include "ncpr/repfun.hpp"

#include <random>

using namespace ncpr;

namespace {

Quiver jordan() {
    Quiver q;
    q.vertices = {"1"};
    q.arrows = {{"x", "1", "1", 0, 1, false}};
    return q;
}

DGAPresentation jordan_brst() {
    auto ctx = AlgebraContext::make(double_quiver(jordan()));
    DGAPresentation a = presentation(ctx, cotangent_table(ctx));
    return brst(a, cotangent_moment(ctx));
}

DGAPresentation gauge_presentation(int verts) {
    Quiver q;
    for (int i = 1; i <= verts; ++i) q.vertices.push_back(std::to_string(i));
    q = adjoin_loops(q, "t", 0, 1);
    auto ctx = AlgebraContext::make(q);
    return presentation(ctx, gauge_table(ctx));
}

} // namespace

TEST_CASE("variable layout and block admissibility") {
    Quiver star;
    star.vertices = {"1", "2"};
    star.arrows = {{"a", "1", "2", 0, 1, false}};
    auto ctx = AlgebraContext::make(double_quiver(star));
    DGAPresentation p = presentation(ctx, cotangent_table(ctx));
    DimensionVector nv = DimensionVector::make({2, 3});
    CommutativeDGA dga = rep_algebra(p, nv);
    // a: 1->2 contributes n_2*n_1 entries; a*: 2->1 contributes n_1*n_2.
    CHECK(dga.vars->size() == 2 * 3 + 3 * 2);
    for (int id = 0; id < dga.vars->size(); ++id) {
        const CVar& v = dga.vars->var(id);
        int tv = ctx->token_target(token_of_arrow(v.arrow));
        int sv = ctx->token_source(token_of_arrow(v.arrow));
        CHECK(nv.block_of(v.r) == tv);
        CHECK(nv.block_of(v.s) == sv);
    }
}

TEST_CASE("rep of words is the matrix product") {
    DGAPresentation b = jordan_brst();
    DimensionVector nv = DimensionVector::make({2});
    CommutativeDGA dga = rep_algebra(b, nv);
    NCElement x = b.ctx->generator("x"), y = b.ctx->generator("x*");
    PolyMatrix mx = dga.rep_element(x), my = dga.rep_element(y);
    CHECK(dga.rep_element(x * y) == mx.mul(my));
    // e ↦ identity.
    PolyMatrix e = dga.rep_element(b.ctx->idempotent(0));
    for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s)
            CHECK(e.at(r, s) == (r == s ? CPoly::constant(dga.vars, Rat(1)) : CPoly(dga.vars)));
    // tr([x,y]) = 0 identically.
    CHECK(dga.trace(graded_commutator(x, y)).is_zero());
    CHECK(dga.trace(x * y) == dga.trace(y * x));
    // tr(e) = n.
    CHECK(dga.trace(b.ctx->idempotent(0)) == CPoly::constant(dga.vars, Rat(2)));
}

TEST_CASE("induced poisson structure constants") {
    DGAPresentation b = jordan_brst();
    DimensionVector nv = DimensionVector::make({2});
    CommutativeDGA dga = rep_algebra(b, nv);
    int xa = b.ctx->quiver().arrow_index("x");
    int ya = b.ctx->quiver().arrow_index("x*");
    for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s)
            for (int u = 0; u < 2; ++u)
                for (int v = 0; v < 2; ++v) {
                    CPoly got = dga.bracket(
                        CPoly::variable(dga.vars, dga.vars->find(xa, r, s)),
                        CPoly::variable(dga.vars, dga.vars->find(ya, u, v)));
                    Rat expect = (u == s && r == v) ? Rat(1) : Rat(0);
                    CHECK(got == CPoly::constant(dga.vars, expect));
                }
    // Constants are central.
    CPoly one = CPoly::constant(dga.vars, Rat(5));
    CPoly xv = CPoly::variable(dga.vars, dga.vars->find(xa, 0, 1));
    CHECK(dga.bracket(xv, one).is_zero());
}

TEST_CASE("gauge bracket matches the gl structure constants") {
    DGAPresentation g = gauge_presentation(1);
    DimensionVector nv = DimensionVector::make({2});
    CommutativeDGA dga = rep_algebra(g, nv);
    int ta = 0;
    auto tvar = [&](int r, int s) {
        return CPoly::variable(dga.vars, dga.vars->find(ta, r, s));
    };
    for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s)
            for (int u = 0; u < 2; ++u)
                for (int v = 0; v < 2; ++v) {
                    CPoly expect(dga.vars);
                    if (r == v) expect += tvar(u, s);
                    if (u == s) expect -= tvar(r, v);
                    CHECK(dga.bracket(tvar(r, s), tvar(u, v)) == expect);
                }
    // Casimir commutation {tr t^2, tr t^3} = 0.
    NCElement t = g.ctx->generator(0);
    CPoly tr2 = dga.trace(t * t), tr3 = dga.trace(t * t * t);
    CHECK(dga.bracket(tr2, tr3).is_zero());
}

TEST_CASE("gl derivations: formula, invariance of traces, commutation") {
    DGAPresentation b = jordan_brst();
    DimensionVector nv = DimensionVector::make({2});
    CommutativeDGA dga = rep_algebra(b, nv);
    int xa = b.ctx->quiver().arrow_index("x");
    NCElement x = b.ctx->generator("x");
    for (const auto& D : dga.gl) {
        // D^{(pq)}(x_rs) = δ_rp x_qs − δ_sq x_rp.
        for (int r = 0; r < 2; ++r)
            for (int s = 0; s < 2; ++s) {
                CPoly expect(dga.vars);
                if (r == D.p) expect += CPoly::variable(dga.vars, dga.vars->find(xa, D.q, s));
                if (s == D.q) expect -= CPoly::variable(dga.vars, dga.vars->find(xa, r, D.p));
                CPoly got = dga.gl_apply(
                    D, CPoly::variable(dga.vars, dga.vars->find(xa, r, s)));
                CHECK(got == expect);
            }
        // Trace words are invariant.
        NCElement pw = x;
        for (int k = 1; k <= 3; ++k) {
            CHECK(dga.gl_apply(D, dga.trace(pw)).is_zero());
            pw = pw * x;
        }
    }
}

TEST_CASE("off-block elementary matrices act as zero on unrelated vertices") {
    DGAPresentation g = gauge_presentation(2);
    DimensionVector nv = DimensionVector::make({1, 2});
    CommutativeDGA dga = rep_algebra(g, nv);
    // The vertex-1 derivation must kill variables of the vertex-2 loop.
    int t2 = g.ctx->quiver().arrow_index("t2");
    for (const auto& D : dga.gl) {
        if (D.vertex != 0) continue;
        for (int id = 0; id < dga.vars->size(); ++id)
            if (dga.vars->var(id).arrow == t2)
                CHECK(dga.gl_apply(D, CPoly::variable(dga.vars, id)).is_zero());
    }
}

TEST_CASE("rep laws battery at n=1 and n=2") {
    DGAPresentation b = jordan_brst();
    for (int n : {1, 2}) {
        CommutativeDGA dga = rep_algebra(b, DimensionVector::make({n}));
        RepLawReport rep = verify_rep_laws(b, dga, 50);
        if (!rep.passed)
            for (const auto& issue : rep.issues)
                MESSAGE(issue.check, ": ", issue.witness);
        CHECK(rep.passed);
        CHECK(rep.trace_pairs == 50);
    }
}

TEST_CASE("n=1 traces of commutators have vanishing brackets") {
    DGAPresentation b = jordan_brst();
    CommutativeDGA dga = rep_algebra(b, DimensionVector::make({1}));
    NCElement x = b.ctx->generator("x"), y = b.ctx->generator("x*");
    CPoly c = dga.trace(graded_commutator(x, y));
    CHECK(c.is_zero());
    CPoly t = dga.trace(x * y);
    CHECK(dga.bracket(dga.trace(graded_commutator(x, y)), t).is_zero());
}

TEST_CASE("biderivation extension is order-independent on random cubics") {
    DGAPresentation b = jordan_brst();
    DimensionVector nv = DimensionVector::make({2});
    CommutativeDGA dga = rep_algebra(b, nv);
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> pick(0, dga.vars->size() - 1);
    for (int trial = 0; trial < 60; ++trial) {
        CPoly f = CPoly::variable(dga.vars, pick(rng)) * CPoly::variable(dga.vars, pick(rng));
        CPoly g = CPoly::variable(dga.vars, pick(rng));
        CPoly h = CPoly::variable(dga.vars, pick(rng)) * CPoly::variable(dga.vars, pick(rng));
        if (f.is_zero() || h.is_zero()) continue;
        // {fg, h} via Leibniz in either order must agree with the engine.
        CPoly fg = f * g;
        if (fg.is_zero()) continue;
        auto dF = f.degree();
        auto dG = g.degree();
        auto dH = h.degree();
        REQUIRE(dF.has_value());
        REQUIRE(dG.has_value());
        REQUIRE(dH.has_value());
        CPoly left = f * dga.bracket(g, h);
        CPoly right = dga.bracket(f, h) * g;
        if ((static_cast<long>(*dG) * *dH) % 2 != 0) right *= Rat(-1);
        CHECK(dga.bracket(fg, h) == left + right);
        CPoly left2 = dga.bracket(h, f) * g;
        CPoly right2 = f * dga.bracket(h, g);
        if ((static_cast<long>(*dH) * *dF) % 2 != 0) right2 *= Rat(-1);
        CHECK(dga.bracket(h, fg) == left2 + right2);
    }
}

TEST_CASE("laurent variables at n=1 and the dimension guard") {
    Quiver q = localize(double_quiver(jordan()), {"x"});
    auto ctx = AlgebraContext::make(q);
    DGAPresentation p = presentation(ctx, cotangent_table(ctx));
    CommutativeDGA dga = rep_algebra(p, DimensionVector::make({1}));
    NCElement xi = ctx->inverse("x");
    NCElement x = ctx->generator("x");
    CPoly prod = dga.trace(x * xi);
    CHECK(prod == CPoly::constant(dga.vars, Rat(1)));
    PolyMatrix mi = dga.rep_element(xi);
    CHECK(mi.at(0, 0) * dga.rep_element(x).at(0, 0) == CPoly::constant(dga.vars, Rat(1)));
    CHECK_THROWS_AS(rep_algebra(p, DimensionVector::make({2})), Error);
}
