#pragma once

#include "ncpr/algebra.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ncpr {

// Generator-pair table defining an S-linear double bracket. Values are keyed
// by ordered arrow pairs; a missing (g,h) is resolved through cyclic
// antisymmetry from (h,g), or is zero when g and h lie in distinct
// free-product factors, and is an error otherwise.
class BracketTable {
public:
    BracketTable() = default;
    explicit BracketTable(CtxPtr ctx) : ctx_(std::move(ctx)) {}

    const CtxPtr& ctx() const { return ctx_; }

    void set(int g, int h, Tensor2 value);
    void set(const std::string& g, const std::string& h, Tensor2 value);
    void assign_factor(int arrow, int factor);
    int factor_of(int arrow) const;  // -1 when unassigned
    // Whether the table carries any information about the generator; arrows
    // outside the table's domain (e.g. loops adjoined later) stay unbracketed.
    bool knows(int arrow) const;

    // Resolved generator-pair value ⟨⟨g,h⟩⟩ (tokens, not just plain arrows).
    Tensor2 pair_value(Token g, Token h) const;

    const std::map<std::pair<int, int>, Tensor2>& entries() const { return entries_; }

    // Degree-homogeneity of every stored entry: |value| = |g| + |h|.
    void validate() const;

private:
    CtxPtr ctx_;
    std::map<std::pair<int, int>, Tensor2> entries_;
    std::map<int, int> factor_;
};

// ⟨⟨a,b⟩⟩: bilinear extension of the table by the outer-derivation rule in
// the last argument and the inner-derivation rule in the first.
Tensor2 double_bracket(const BracketTable& tbl, const NCElement& a, const NCElement& b);

// ⟨⟨a,b,c⟩⟩ = Σ_i τ^i ∘ ⟨⟨−,⟨⟨−,−⟩⟩⟩⟩_L ∘ τ^{-i}; zero iff the bracket is
// double Poisson (when evaluated on enough arguments).
Tensor3 triple_bracket(const BracketTable& tbl, const NCElement& a, const NCElement& b,
                       const NCElement& c);

// {a,b} = m ∘ ⟨⟨a,b⟩⟩.
NCElement single_bracket(const BracketTable& tbl, const NCElement& a, const NCElement& b);

// {a, u⊗v} = {a,u}⊗v + (−1)^{|a||u|} u⊗{a,v}.
Tensor2 single_bracket_on_tensor(const BracketTable& tbl, const NCElement& a, const Tensor2& t);

struct CheckIssue {
    std::string check;
    std::string witness;
};

struct AxiomReport {
    bool passed = true;
    std::vector<CheckIssue> issues;
    int triples_checked = 0;
    int words_checked = 0;
};

// Differential given on generators, extended to words as a super-derivation;
// d(x^{-1}) = -x^{-1} d(x) x^{-1} on formal inverses.
class GenDifferential {
public:
    GenDifferential() = default;
    explicit GenDifferential(CtxPtr ctx) : ctx_(std::move(ctx)) {}

    const CtxPtr& ctx() const { return ctx_; }
    void set(int arrow, NCElement image);
    const NCElement& of_arrow(int arrow) const;
    bool is_set(int arrow) const;

    NCElement apply(const NCElement& a) const;
    NCElement apply_word(const Word& w) const;
    Tensor2 apply(const Tensor2& t) const;  // d(p⊗q) = dp⊗q + (−1)^{|p|} p⊗dq

    friend bool operator==(const GenDifferential& a, const GenDifferential& b) {
        return a.images_ == b.images_;
    }

private:
    CtxPtr ctx_;
    std::map<int, NCElement> images_;
    NCElement zero_;
};

// Checks cyclic antisymmetry, the double Jacobi identity, the two printed
// sides of the almost-Jacobi identity, and (when d is given) compatibility
// d∘⟨⟨−,−⟩⟩ = ⟨⟨−,−⟩⟩∘d, on all generator pairs/triples and on a seeded
// sample of homogeneous words up to max_word_len.
AxiomReport verify_axioms(const BracketTable& tbl, int max_word_len,
                          const GenDifferential* diff = nullptr, int jobs = 1);

// Standard tables. The strict builders validate the quiver shape; the *_on
// variants build the same entries inside a larger context.
BracketTable cotangent_table(const CtxPtr& ctx);
BracketTable cotangent_table_on(const CtxPtr& ctx, const std::vector<std::pair<int, int>>& pairs,
                                int factor = 0);
BracketTable gauge_table(const CtxPtr& ctx);
BracketTable gauge_table_on(const CtxPtr& ctx, const std::vector<int>& loops, int factor = 0);
BracketTable brst_pairing_table(const CtxPtr& ctx);
BracketTable brst_pairing_on(const CtxPtr& ctx, const std::vector<int>& theta,
                             const std::vector<int>& eta, int factor = 0);
BracketTable free_product(const BracketTable& a, const BracketTable& b);

// Arrow pairs (x, x*) matched by name; errors when pairing is not perfect on
// the candidate set.
std::vector<std::pair<int, int>> dual_pairs(const Quiver& q);

// Per-vertex gauge elements δ_i = e_i δ e_i.
struct HamiltonianData {
    CtxPtr ctx;
    std::vector<NCElement> delta_i;  // one per vertex
    NCElement total() const;
};

HamiltonianData cotangent_moment(const CtxPtr& ctx);  // δ_i = e_i(Σ [x,x*])e_i
HamiltonianData moment_from_total(const CtxPtr& ctx, const NCElement& delta);

struct HamiltonianReport {
    bool passed = true;
    std::vector<CheckIssue> issues;
};

// Eq.-hamilton check ⟨⟨δ_i, g⟩⟩ = g e_i⊗e_i − e_i⊗e_i g on every generator
// (and formal inverse), with spot checks on length-2 words.
HamiltonianReport check_hamiltonian(const BracketTable& tbl, const HamiltonianData& ham);

// Exact membership of a (degree,weight)-homogeneous element in the span of
// graded commutators [u,v] of matching bidegree. weight_bound must equal the
// element's weight; contexts with invertible arrows are rejected (their
// weight slices are infinite).
bool commutator_membership(const NCElement& a, int weight_bound);

// All normalized words of the given degree and weight (finite when every
// weight-0 token has nonzero degree and nothing is invertible).
std::vector<Word> words_of_bidegree(const CtxPtr& ctx, int degree, int weight);
std::vector<Word> words_up_to_length(const CtxPtr& ctx, int max_len);  // incl. idempotents

struct Charge {
    NCElement gamma;  // degree −1; {γ,γ} ∈ [A,A]
};

// d(g) = {γ,g} on every generator; verifies d² = 0 on generators and the
// charge condition itself.
GenDifferential charge_differential(const BracketTable& tbl, const Charge& charge);

} // namespace ncpr
