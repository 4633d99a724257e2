#include "doctest.h"

#include "ncpr/homology.hpp"

using namespace ncpr;

namespace {

Quiver jordan() {
    Quiver q;
    q.vertices = {"1"};
    q.arrows = {{"x", "1", "1", 0, 1, false}};
    return q;
}

struct Pipeline {
    DGAPresentation base;
    HamiltonianData ham;
};

Pipeline jordan_pipeline() {
    auto ctx = AlgebraContext::make(double_quiver(jordan()));
    Pipeline p{presentation(ctx, cotangent_table(ctx)), cotangent_moment(ctx)};
    return p;
}

} // namespace

TEST_CASE("weight slice of the n=1 Koszul complex at w=2") {
    Pipeline p = jordan_pipeline();
    DGAPresentation sh = shafarevich(p.base, p.ham);
    CommutativeDGA K = rep_algebra(sh, DimensionVector::make({1}));
    ChainComplexSlice slice = weight_slice(K, 2);
    CHECK(slice.dim(0) == 3);  // x², xy, y²
    CHECK(slice.dim(1) == 1);  // ϑ
    // n=1 moment map vanishes identically: d = 0.
    for (const auto& blk : slice.blocks) CHECK(blk.d.nnz() == 0);
    std::map<int, long> h = betti(slice);
    CHECK(h[0] == 3);
    CHECK(h[1] == 1);
    // Empty slice at odd weight never hits ϑ parity issues.
    ChainComplexSlice w0 = weight_slice(K, 0);
    CHECK(w0.dim(0) == 1);
}

TEST_CASE("n=1 Jordan closed form across weights") {
    Pipeline p = jordan_pipeline();
    DGAPresentation sh = shafarevich(p.base, p.ham);
    CommutativeDGA K = rep_algebra(sh, DimensionVector::make({1}));
    for (int w = 0; w <= 6; ++w) {
        std::map<int, long> h = betti(weight_slice(K, w));
        long d0 = h.count(0) ? h[0] : 0;
        long d1 = h.count(1) ? h[1] : 0;
        CHECK(d0 == w + 1);
        CHECK(d1 == std::max(w - 1, 0));
    }
}

TEST_CASE("betti agrees with the dense oracle on K_2 slices") {
    Pipeline p = jordan_pipeline();
    DGAPresentation sh = shafarevich(p.base, p.ham);
    CommutativeDGA K = rep_algebra(sh, DimensionVector::make({2}));
    for (int w = 0; w <= 3; ++w) {
        ChainComplexSlice slice = weight_slice(K, w);
        CHECK(betti(slice, 2) == betti_dense_oracle(slice));
    }
}

TEST_CASE("betti agrees with the dense oracle on BRST slices") {
    // Jordan at n=2 fits the oracle bound only at w <= 1; the star quiver at
    // nv=(1,1) keeps slices small with genuinely odd differentials.
    Pipeline p = jordan_pipeline();
    DGAPresentation b = brst(p.base, p.ham);
    CommutativeDGA B = rep_algebra(b, DimensionVector::make({2}));
    for (int w = 0; w <= 1; ++w) {
        ChainComplexSlice slice = weight_slice(B, w);
        CHECK(betti(slice, 2) == betti_dense_oracle(slice));
    }
    Quiver sq;
    sq.vertices = {"1", "2"};
    sq.arrows = {{"a", "1", "2", 0, 1, false}};
    auto ctx = AlgebraContext::make(double_quiver(sq));
    DGAPresentation sb = brst(presentation(ctx, cotangent_table(ctx)), cotangent_moment(ctx));
    CommutativeDGA SB = rep_algebra(sb, DimensionVector::make({1, 1}));
    for (int w = 0; w <= 3; ++w) {
        ChainComplexSlice slice = weight_slice(SB, w);
        CHECK(betti(slice, 2) == betti_dense_oracle(slice));
    }
}

TEST_CASE("d squares to zero as matrices in every slice") {
    Pipeline p = jordan_pipeline();
    DGAPresentation b = brst(p.base, p.ham);
    CommutativeDGA B = rep_algebra(b, DimensionVector::make({2}));
    for (int w = 0; w <= 3; ++w) {
        ChainComplexSlice slice = weight_slice(B, w);
        for (const auto& blk : slice.blocks) {
            if (blk.target < 0) continue;
            const auto& tgt = slice.blocks[blk.target];
            if (tgt.target < 0) {
                CHECK(tgt.d.nnz() == 0);
                continue;
            }
            CHECK(tgt.d.dense().mul(blk.d.dense()).is_zero());
        }
    }
}

TEST_CASE("euler characteristic consistency per slice") {
    Pipeline p = jordan_pipeline();
    DGAPresentation b = brst(p.base, p.ham);
    CommutativeDGA B = rep_algebra(b, DimensionVector::make({2}));
    for (int w = 0; w <= 3; ++w) {
        ChainComplexSlice slice = weight_slice(B, w);
        std::map<int, long> h = betti(slice, 2);
        long chi_c = 0, chi_h = 0;
        for (const auto& [k, monos] : slice.basis)
            chi_c += (k % 2 == 0 ? 1 : -1) * static_cast<long>(monos.size());
        for (const auto& [k, d] : h) chi_h += (k % 2 == 0 ? 1 : -1) * d;
        CHECK(chi_c == chi_h);
    }
}

TEST_CASE("invariants of the K_2 slice") {
    Pipeline p = jordan_pipeline();
    DGAPresentation sh = shafarevich(p.base, p.ham);
    CommutativeDGA K = rep_algebra(sh, DimensionVector::make({2}));
    // w=1, degree 0: linear invariants of conjugation are tr x and tr y.
    InvariantSlice inv1 = invariant_subcomplex(K, weight_slice(K, 1));
    CHECK(inv1.dim(0) == 2);
    // w=2, degree 1: contains tr ϑ.
    InvariantSlice inv2 = invariant_subcomplex(K, weight_slice(K, 2));
    CHECK(inv2.dim(1) >= 1);
    // n=1: the invariant subcomplex is the whole slice.
    CommutativeDGA K1 = rep_algebra(sh, DimensionVector::make({1}));
    ChainComplexSlice s3 = weight_slice(K1, 3);
    InvariantSlice inv3 = invariant_subcomplex(K1, s3);
    for (const auto& [k, monos] : s3.basis)
        CHECK(inv3.dim(k) == static_cast<long>(monos.size()));
}

TEST_CASE("weights with no monomials give empty slices") {
    Quiver q;
    q.vertices = {"1"};
    q = adjoin_loops(adjoin_loops(q, "th_", 1, 2), "eta_", -1, 0);
    auto ctx = AlgebraContext::make(q);
    DGAPresentation p = presentation(ctx, brst_pairing_table(ctx));
    CommutativeDGA dga = rep_algebra(p, DimensionVector::make({1}));
    ChainComplexSlice odd = weight_slice(dga, 1);  // ϑ weighs 2, η weighs 0
    long total = 0;
    for (const auto& [k, monos] : odd.basis) total += static_cast<long>(monos.size());
    CHECK(total == 0);
    CHECK(betti(odd).empty());
}

TEST_CASE("lie cohomology profiles") {
    LieCohomologyProfile p1 = lie_cohomology(DimensionVector::make({1}));
    CHECK(p1.dim.at(0) == 1);
    CHECK(p1.dim.at(-1) == 1);
    CHECK(p1.total() == 2);

    LieCohomologyProfile p2 = lie_cohomology(DimensionVector::make({2}));
    CHECK(p2.dim.at(0) == 1);
    CHECK(p2.dim.at(-1) == 1);
    CHECK(p2.dim.at(-3) == 1);
    CHECK(p2.dim.at(-4) == 1);
    CHECK(p2.total() == 4);

    LieCohomologyProfile p11 = lie_cohomology(DimensionVector::make({1, 1}));
    CHECK(p11.dim.at(0) == 1);
    CHECK(p11.dim.at(-1) == 2);
    CHECK(p11.dim.at(-2) == 1);
    CHECK(p11.total() == 4);
}

TEST_CASE("weight-0 slice of B_2 computes the gl_2 cohomology") {
    Pipeline p = jordan_pipeline();
    DGAPresentation b = brst(p.base, p.ham);
    CommutativeDGA B = rep_algebra(b, DimensionVector::make({2}));
    ChainComplexSlice slice = weight_slice(B, 0);
    std::map<int, long> h = betti(slice);
    LieCohomologyProfile lie = lie_cohomology(DimensionVector::make({2}));
    for (const auto& [k, d] : lie.dim) CHECK(h[k] == d);
    long total = 0;
    for (const auto& [k, d] : h) total += d;
    CHECK(total == lie.total());
}

TEST_CASE("decomposition of the BRST homology at n=1") {
    Pipeline p = jordan_pipeline();
    DecompositionReport rep =
        verify_decomposition(p.base, p.ham, DimensionVector::make({1}), 4, 2);
    for (const auto& issue : rep.issues) MESSAGE(issue.check, ": ", issue.witness);
    CHECK(rep.passed);
    // H(B_1) = H(K_1) ⊗ (1,1) profile.
    CHECK(rep.brst.at(2, 0) == rep.koszul_invariant.at(2, 0) + rep.koszul_invariant.at(2, 1));
}

TEST_CASE("decomposition on a two-vertex quiver with uneven dimensions") {
    Quiver q;
    q.vertices = {"1", "2"};
    q.arrows = {{"a", "1", "2", 0, 1, false}};
    auto ctx = AlgebraContext::make(double_quiver(q));
    DGAPresentation base = presentation(ctx, cotangent_table(ctx));
    HamiltonianData ham = cotangent_moment(ctx);
    for (auto nv : {std::vector<int>{1, 1}, std::vector<int>{2, 1}}) {
        DecompositionReport rep =
            verify_decomposition(base, ham, DimensionVector::make(nv), 3, 2);
        for (const auto& issue : rep.issues) MESSAGE(issue.check, ": ", issue.witness);
        CHECK(rep.passed);
    }
}

TEST_CASE("betti is independent of the worker count") {
    Pipeline p = jordan_pipeline();
    DGAPresentation b = brst(p.base, p.ham);
    CommutativeDGA B = rep_algebra(b, DimensionVector::make({2}));
    for (int w = 0; w <= 3; ++w) {
        ChainComplexSlice slice = weight_slice(B, w);
        CHECK(betti(slice, 1) == betti(slice, 4));
    }
}

TEST_CASE("multisymmetric invariants") {
    auto w0 = multisym_invariants(2, 0);
    CHECK(w0.at(0).size() == 1);  // constants
    auto w1 = multisym_invariants(2, 1);
    CHECK(w1.at(0).size() == 2);  // x1+x2, y1+y2
    auto w2 = multisym_invariants(2, 2);
    CHECK(w2.count(1));
    CHECK(w2.at(1).size() == 1);  // ϑ1+ϑ2
}

TEST_CASE("diagonal restriction is an isomorphism at n=1") {
    Pipeline p = jordan_pipeline();
    DiagonalReport rep = diagonal_check(p.base, p.ham, 1, 4);
    for (const auto& issue : rep.mismatches) MESSAGE(issue.check, ": ", issue.witness);
    CHECK(rep.agrees);
}

TEST_CASE("diagonal restriction betti agreement extends to n=3") {
    Pipeline p = jordan_pipeline();
    DiagonalReport rep = diagonal_check(p.base, p.ham, 3, 3, 2);
    for (const auto& issue : rep.mismatches) MESSAGE(issue.check, ": ", issue.witness);
    CHECK(rep.agrees);
    CHECK(rep.lhs.at(3, 0) == 14);
    CHECK(rep.lhs.at(3, 1) == 4);
}

TEST_CASE("phi/psi identities and splitting at n=1") {
    Pipeline p = jordan_pipeline();
    PhiPsiReport rep = phi_psi(p.base, p.ham, DimensionVector::make({1}), 3, 2);
    for (const auto& issue : rep.issues) MESSAGE(issue.check, ": ", issue.witness);
    CHECK(rep.passed);
    bool seen = false;
    for (const auto& sp : rep.splits) {
        CHECK(sp.dim_h == sp.ker_phi + sp.im_psi);
        seen = true;
    }
    CHECK(seen);
}
