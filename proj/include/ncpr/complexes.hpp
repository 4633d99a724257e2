#pragma once

#include "ncpr/dbracket.hpp"

#include <optional>

namespace ncpr {

// A graded algebra presentation: quiver generators, a differential given on
// generators (d² = 0 checked at construction), optional bracket table and
// charge, and the per-vertex gauge/loop bookkeeping used by the tower of
// constructions built on top of it.
struct DGAPresentation {
    CtxPtr ctx;
    GenDifferential diff;
    bool weight_homogeneous = true;
    std::optional<BracketTable> table;
    std::optional<Charge> charge;
    // vertex -> arrow index of the adjoined loops (when present)
    std::vector<int> theta;
    std::vector<int> eta;
    std::optional<HamiltonianData> ham;

    void check_differential() const;  // d lowers degree by 1, d²=0, weight kept
};

DGAPresentation presentation(const CtxPtr& ctx, std::optional<BracketTable> table = {});

// Derived zero locus model: adjoins ϑ_i (degree 1) with dϑ_i = δ_i. The ϑ
// weight is the weight of δ (default 2) so the differential stays
// weight-homogeneous.
DGAPresentation shafarevich(const DGAPresentation& a, const HamiltonianData& ham);

// Quotient-stack model: adjoins η_i (degree −1, weight 0) with
// d(a) = d_old(a) − [Ση_i, a] and d(η_i) = −η_i².
DGAPresentation chevalley_eilenberg(const DGAPresentation& a);

// CE ∘ Sh with the free-product bracket and the charge γ = Ση_iδ_i − Ση_i²ϑ_i
// attached; asserts that {γ,−} reproduces the differential on all generators.
DGAPresentation brst(const DGAPresentation& a, const HamiltonianData& ham);

struct ContractionReport {
    bool passed = true;
    std::vector<CheckIssue> issues;
    int words_checked = 0;
};

// dh + hd = length·id on the gauge Shafarevich complex T_S(L⊕L[1]), checked
// on all words of length ≤ max_len over num_vertices vertices.
ContractionReport contraction_check(int num_vertices, int max_len);

struct MorphismReport {
    bool passed = true;
    std::vector<CheckIssue> issues;
};

// Setting η_i ↦ 0 must intertwine the BRST differential with the Shafarevich
// one on every generator.
MorphismReport eta_zero_map(const DGAPresentation& b);

// Lemma d1d2: the old differential and the CE twist super-commute.
MorphismReport split_differential_check(const DGAPresentation& a);

// Report-format serialization: one line per generator with its grading and
// differential image as a term list.
std::vector<std::string> describe(const DGAPresentation& p);

} // namespace ncpr
