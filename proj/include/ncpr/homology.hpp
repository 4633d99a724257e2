#pragma once

#include "ncpr/repfun.hpp"

namespace ncpr {

struct BettiTable {
    std::map<std::pair<int, int>, long> dims;  // (weight, degree) -> dim

    long at(int w, int k) const {
        auto it = dims.find({w, k});
        return it == dims.end() ? 0 : it->second;
    }
    void set(int w, int k, long d) {
        if (d != 0) dims[{w, k}] = d;
    }
    std::string csv() const;
};

// Finite (weight)-slice of a commutative dg algebra, split internally into
// torus-charge blocks (the differential preserves the charge).
struct ChainComplexSlice {
    int weight = 0;
    std::map<int, std::vector<CMono>> basis;  // per degree, graded-lex order

    struct Block {
        int degree = 0;
        std::vector<int> charge;
        std::vector<int> members;  // indices into basis[degree]
        SparseQ d;                 // columns: members; rows: target block members
        int target = -1;           // block index in the same slice (degree-1)
    };
    std::vector<Block> blocks;
    std::map<int, std::map<std::vector<int>, int>> block_of;  // degree -> charge -> id

    long dim(int k) const {
        auto it = basis.find(k);
        return it == basis.end() ? 0 : static_cast<long>(it->second.size());
    }
};

// Enumerates all monomials of the given weight and assembles the exact
// differential matrices. Errors on Laurent variables or a weight-inhomogeneous
// differential.
ChainComplexSlice weight_slice(const CommutativeDGA& dga, int w);

// dim H_k = dim ker d_k − rank d_{k+1}, per charge block, exact.
std::map<int, long> betti(const ChainComplexSlice& slice, int jobs = 1);

// Dense rational elimination over whole degrees, no charge splitting; the
// slow cross-check oracle for slices of dimension ≤ 200.
std::map<int, long> betti_dense_oracle(const ChainComplexSlice& slice);

// Invariant subcomplex: joint kernel of the gl derivations inside the
// charge-0 part, with the restricted differential in kernel coordinates.
struct InvariantSlice {
    int weight = 0;
    std::map<int, std::vector<CMono>> ambient;  // charge-0 monomials per degree
    std::map<int, DenseQ> kernel;               // |ambient_k| × inv_dim_k
    std::map<int, DenseQ> d;                    // inv_dim_{k-1} × inv_dim_k

    long dim(int k) const {
        auto it = kernel.find(k);
        return it == kernel.end() ? 0 : it->second.cols;
    }
};

InvariantSlice invariant_subcomplex(const CommutativeDGA& dga, const ChainComplexSlice& slice);

std::map<int, long> betti(const InvariantSlice& inv);

// Homology of a small abstract complex given by dense matrices, with chosen
// cycle representatives (columns) per degree.
struct HomologyBasis {
    std::map<int, DenseQ> reps;        // ambient-coordinate representatives
    std::map<int, DenseQ> boundaries;  // image basis
    std::map<int, long> dims;

    // Class coordinates of a cycle; throws when v is not a cycle class member.
    std::vector<Rat> coords(int k, const std::vector<Rat>& v) const;
};

HomologyBasis homology_basis(const std::map<int, DenseQ>& d, const std::map<int, long>& dims);

struct LieCohomologyProfile {
    std::map<int, long> dim;  // degree ≤ 0 -> dim
    long total() const;
};

// H^{-•}(gl_n, k): exterior algebra on classes of degrees −1,−3,…,−(2n_i−1)
// per vertex, tensored over vertices.
LieCohomologyProfile lie_cohomology(const DimensionVector& nv);

struct DecompositionReport {
    bool passed = true;
    std::vector<CheckIssue> issues;
    BettiTable brst;
    BettiTable koszul_invariant;
    BettiTable koszul_full;
    LieCohomologyProfile lie;
    std::vector<std::string> notes;
};

// dim_w H_k(B) = Σ_{i+j=k} dim_w H_i(K)^GL · dim H^j(gl) for 0 ≤ w ≤ max_w;
// `base` is the ungraded Hamiltonian presentation (e.g. a doubled quiver with
// its cotangent table).
DecompositionReport verify_decomposition(const DGAPresentation& base, const HamiltonianData& ham,
                                         const DimensionVector& nv, int max_w, int jobs = 1);

struct PhiPsiReport {
    bool passed = true;
    std::vector<CheckIssue> issues;
    struct Split {
        int w = 0, k = 0;
        long dim_h = 0, ker_phi = 0, im_psi = 0;
    };
    std::vector<Split> splits;
};

// φ = {tr η, −}, ψ = tr(ϑ)·(−) on the BRST complex of the doubled Jordan
// quiver: verifies φψ+ψφ = n, φ² = ψ² = 0, anticommutation with d, and the
// splitting dim H = dim ker φ + dim im ψ on the invariant Koszul homology.
PhiPsiReport phi_psi(const DGAPresentation& base, const HamiltonianData& ham,
                     const DimensionVector& nv, int max_w, int jobs = 1);

struct DiagonalReport {
    bool agrees = true;  // FINDING-level status, not a failure
    std::vector<CheckIssue> mismatches;
    BettiTable lhs;  // H(K_n)^GL
    BettiTable rhs;  // multisymmetric dimensions
};

// Betti comparison across the diagonal restriction
// k[x_ij,y_ij,ϑ_ij]^GL → k[x_i,y_i,ϑ_i]^{S_n} for the Jordan quiver.
DiagonalReport diagonal_check(const DGAPresentation& base, const HamiltonianData& ham, int n,
                              int max_w, int jobs = 1);

// Basis of S_n-invariants of k[x_i,y_i,ϑ_i] at the given weight, per degree,
// via signed symmetrization.
std::map<int, std::vector<CPoly>> multisym_invariants(int n, int w);

// Slice bases dumped for external verification: one line per degree.
std::vector<std::string> describe(const ChainComplexSlice& slice, const CommutativeDGA& dga);

} // namespace ncpr
