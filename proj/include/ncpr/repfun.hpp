#pragma once

#include "ncpr/complexes.hpp"
#include "ncpr/linalg.hpp"

#include <memory>

namespace ncpr {

struct DimensionVector {
    std::vector<int> n;       // per vertex, positive
    std::vector<int> offset;  // block start per vertex
    int total = 0;

    static DimensionVector make(std::vector<int> n);
    int block_of(int global) const;  // vertex index owning a global index
};

// Matrix-entry variable of the commutative algebra.
struct CVar {
    std::string name;
    int arrow = -1;  // source nc generator
    int r = 0, s = 0;
    int degree = 0;
    int weight = 0;
    bool odd = false;
    bool laurent = false;
};

// Immutable variable table shared by all polynomials of one representation
// algebra.
class VarTable {
public:
    int add(CVar v);
    int size() const { return static_cast<int>(vars_.size()); }
    const CVar& var(int id) const { return vars_[id]; }
    int find(int arrow, int r, int s) const;  // -1 when absent

private:
    std::vector<CVar> vars_;
    std::map<std::tuple<int, int, int>, int> by_entry_;
};

using VarsPtr = std::shared_ptr<const VarTable>;

// Graded-commutative monomial: sorted (var, exponent), odd exponents == 1.
struct CMono {
    std::vector<std::pair<int, int>> factors;

    bool operator==(const CMono& o) const { return factors == o.factors; }
    bool operator<(const CMono& o) const { return factors < o.factors; }
    bool trivial() const { return factors.empty(); }
};

// Graded-commutative polynomial with exact rational coefficients.
class CPoly {
public:
    CPoly() = default;
    explicit CPoly(VarsPtr vars) : vars_(std::move(vars)) {}
    CPoly(VarsPtr vars, const CMono& m, const Rat& c);
    static CPoly constant(VarsPtr vars, const Rat& c);
    static CPoly variable(VarsPtr vars, int id, int exp = 1);

    const VarsPtr& vars() const { return vars_; }
    const std::map<CMono, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const CMono& m, const Rat& c);

    CPoly& operator+=(const CPoly& o);
    CPoly& operator-=(const CPoly& o);
    CPoly& operator*=(const Rat& c);
    friend CPoly operator+(CPoly a, const CPoly& b) { return a += b; }
    friend CPoly operator-(CPoly a, const CPoly& b) { return a -= b; }
    friend CPoly operator*(CPoly a, const Rat& c) { return a *= c; }
    friend CPoly operator*(const Rat& c, CPoly a) { return a *= c; }
    CPoly operator-() const;
    friend CPoly operator*(const CPoly& a, const CPoly& b);
    friend bool operator==(const CPoly& a, const CPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const CPoly& a, const CPoly& b) { return !(a == b); }

    std::optional<int> degree() const;
    std::string str() const;

private:
    VarsPtr vars_;
    std::map<CMono, Rat> terms_;
};

int mono_degree(const VarTable& vars, const CMono& m);
int mono_weight(const VarTable& vars, const CMono& m);

// d(m) for a derivation given on variables; parity 1 for super-derivations
// (signs by the degree of the prefix), 0 for even ones.
CPoly apply_derivation(const std::map<int, CPoly>& images, int parity, const CPoly& f);

// n×n matrix of polynomials; the image of an nc element.
struct PolyMatrix {
    int n = 0;
    std::vector<CPoly> entry;  // row-major

    PolyMatrix() = default;
    PolyMatrix(VarsPtr vars, int n);
    CPoly& at(int r, int s) { return entry[r * n + s]; }
    const CPoly& at(int r, int s) const { return entry[r * n + s]; }
    PolyMatrix mul(const PolyMatrix& o) const;
    PolyMatrix operator+(const PolyMatrix& o) const;
    PolyMatrix operator-(const PolyMatrix& o) const;
    friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
        return a.entry == b.entry;
    }
};

struct GlDerivation {
    int vertex = 0;
    int p = 0, q = 0;  // global indices inside the vertex block
    std::map<int, CPoly> images;
};

// The commutative image of a presentation: variables, induced differential,
// generator-pair Poisson brackets, gl action, and the traced charge.
class CommutativeDGA {
public:
    CtxPtr ctx;
    DimensionVector nv;
    VarsPtr vars;
    std::map<int, CPoly> diff;                      // var id -> image
    std::map<std::pair<int, int>, CPoly> poisson;   // ordered var pairs, complete
    std::vector<GlDerivation> gl;
    std::optional<CPoly> charge_trace;

    PolyMatrix rep_word(const Word& w) const;
    PolyMatrix rep_element(const NCElement& a) const;
    CPoly trace(const NCElement& a) const;
    CPoly d(const CPoly& f) const;                  // super-derivation extension
    CPoly bracket(const CPoly& f, const CPoly& g) const;  // graded biderivation
    CPoly gl_apply(const GlDerivation& D, const CPoly& f) const;
    Rat constant_term(const CPoly& f) const;
};

// One variable per admissible matrix entry of each generator; differential
// induced entrywise; Poisson table from the attached bracket table; gl
// derivations per block elementary matrix; charge traced when present.
CommutativeDGA rep_algebra(const DGAPresentation& a, const DimensionVector& nv);

struct RepLawReport {
    bool passed = true;
    std::vector<CheckIssue> issues;
    int functoriality_samples = 0;
    int trace_pairs = 0;
    int jacobi_triples = 0;
};

// (i) rep of products = matrix products; (ii) tr{a,b} = {tr a, tr b};
// (iii) d = {tr γ, −} on every generator entry; (iv) induced Jacobi and
// antisymmetry on generator triples; (v) gl derivations commute with d.
RepLawReport verify_rep_laws(const DGAPresentation& a, const CommutativeDGA& dga,
                             int trace_sample_pairs = 50);

// Report-format serialization: variables with gradings and differential
// images as term lists.
std::vector<std::string> describe(const CommutativeDGA& dga);

} // namespace ncpr
