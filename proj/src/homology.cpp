#include "ncpr/homology.hpp"

#include "ncpr/parallel.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace ncpr {

std::string BettiTable::csv() const {
    std::ostringstream os;
    os << "weight,degree,dim\n";
    for (const auto& [key, d] : dims)
        os << key.first << "," << key.second << "," << d << "\n";
    return os.str();
}

namespace {

std::vector<int> mono_charge(const CommutativeDGA& dga, const CMono& m) {
    std::vector<int> c(dga.nv.total, 0);
    for (const auto& [id, e] : m.factors) {
        const CVar& v = dga.vars->var(id);
        c[v.r] += e;
        c[v.s] -= e;
    }
    return c;
}

// All monomials of the exact weight, bucketed by homological degree.
std::map<int, std::vector<CMono>> enumerate_weight(const CommutativeDGA& dga, int w) {
    const VarTable& vars = *dga.vars;
    for (int id = 0; id < vars.size(); ++id) {
        const CVar& v = vars.var(id);
        if (v.laurent) throw Error("weight slices are infinite over Laurent variables");
        if (!v.odd && v.weight <= 0)
            throw Error("weight slices are infinite: even variable of nonpositive weight");
        if (v.odd && v.weight < 0) throw Error("negative-weight variable");
    }
    std::map<int, std::vector<CMono>> out;
    CMono cur;
    std::function<void(int, int)> dfs = [&](int id, int rem) {
        if (id == vars.size()) {
            if (rem == 0) {
                CMono m = cur;
                out[mono_degree(vars, m)].push_back(std::move(m));
            }
            return;
        }
        const CVar& v = vars.var(id);
        int max_e = v.odd ? 1 : (v.weight > 0 ? rem / v.weight : 0);
        if (v.odd && v.weight > 0) max_e = std::min(max_e, rem / v.weight);
        for (int e = 0; e <= max_e; ++e) {
            if (e > 0) cur.factors.push_back({id, e});
            dfs(id + 1, rem - e * v.weight);
            if (e > 0) cur.factors.pop_back();
        }
    };
    dfs(0, w);
    for (auto& [k, monos] : out) std::sort(monos.begin(), monos.end());
    return out;
}

} // namespace

ChainComplexSlice weight_slice(const CommutativeDGA& dga, int w) {
    ChainComplexSlice slice;
    slice.weight = w;
    slice.basis = enumerate_weight(dga, w);

    // Charge blocks per degree.
    for (const auto& [k, monos] : slice.basis) {
        for (size_t i = 0; i < monos.size(); ++i) {
            std::vector<int> c = mono_charge(dga, monos[i]);
            auto& idx = slice.block_of[k];
            auto it = idx.find(c);
            if (it == idx.end()) {
                ChainComplexSlice::Block b;
                b.degree = k;
                b.charge = c;
                it = idx.emplace(c, static_cast<int>(slice.blocks.size())).first;
                slice.blocks.push_back(std::move(b));
            }
            slice.blocks[it->second].members.push_back(static_cast<int>(i));
        }
    }

    // Local row index per block.
    std::vector<std::map<CMono, int>> row_of(slice.blocks.size());
    for (size_t b = 0; b < slice.blocks.size(); ++b) {
        const auto& blk = slice.blocks[b];
        const auto& monos = slice.basis.at(blk.degree);
        for (size_t j = 0; j < blk.members.size(); ++j)
            row_of[b].emplace(monos[blk.members[j]], static_cast<int>(j));
    }

    for (size_t b = 0; b < slice.blocks.size(); ++b) {
        auto& blk = slice.blocks[b];
        auto below = slice.block_of.find(blk.degree - 1);
        int target = -1;
        if (below != slice.block_of.end()) {
            auto it = below->second.find(blk.charge);
            if (it != below->second.end()) target = it->second;
        }
        blk.target = target;
        int rows = target >= 0
                       ? static_cast<int>(slice.blocks[target].members.size())
                       : 0;
        blk.d = SparseQ(rows, static_cast<int>(blk.members.size()));
        const auto& monos = slice.basis.at(blk.degree);
        for (size_t j = 0; j < blk.members.size(); ++j) {
            CPoly dm = dga.d(CPoly(dga.vars, monos[blk.members[j]], Rat(1)));
            if (dm.is_zero()) continue;
            if (target < 0)
                throw Error("differential leaves the weight slice (weight inhomogeneous?)");
            for (const auto& [m, c] : dm.terms()) {
                if (mono_weight(*dga.vars, m) != w)
                    throw Error("differential is not weight-homogeneous");
                auto it = row_of[target].find(m);
                if (it == row_of[target].end())
                    throw Error("differential leaves the charge block");
                blk.d.add(it->second, static_cast<int>(j), c);
            }
        }
    }
    return slice;
}

std::map<int, long> betti(const ChainComplexSlice& slice, int jobs) {
    std::vector<int> ranks(slice.blocks.size(), 0);
    parallel_for(jobs, static_cast<int>(slice.blocks.size()), [&](int b) {
        const auto& blk = slice.blocks[b];
        if (blk.d.rows == 0 || blk.d.nnz() == 0) {
            ranks[b] = 0;
        } else if (blk.d.rows <= 200 && blk.d.cols <= 200) {
            // fraction-free elimination on desk-scale blocks
            ranks[b] = rank_bareiss(blk.d.dense());
        } else {
            ranks[b] = rank_sparse(blk.d);
        }
    });
    std::map<int, long> h;
    for (const auto& [k, monos] : slice.basis) h[k] = static_cast<long>(monos.size());
    for (size_t b = 0; b < slice.blocks.size(); ++b) {
        const auto& blk = slice.blocks[b];
        h[blk.degree] -= ranks[b];
        if (blk.target >= 0) h[slice.blocks[blk.target].degree] -= ranks[b];
    }
    for (auto it = h.begin(); it != h.end();)
        it = it->second == 0 ? h.erase(it) : std::next(it);
    return h;
}

std::map<int, long> betti_dense_oracle(const ChainComplexSlice& slice) {
    // Assemble whole-degree matrices in basis order (no charge splitting).
    std::map<int, DenseQ> mats;
    for (const auto& [k, monos] : slice.basis) {
        long below = slice.basis.count(k - 1) ? slice.basis.at(k - 1).size() : 0;
        if (static_cast<long>(monos.size()) > 200 || below > 200)
            throw Error("dense oracle is limited to slices of dimension <= 200");
        mats[k] = DenseQ(static_cast<int>(below), static_cast<int>(monos.size()));
    }
    for (const auto& blk : slice.blocks) {
        if (blk.target < 0) continue;
        const auto& tgt = slice.blocks[blk.target];
        DenseQ& m = mats[blk.degree];
        for (int c = 0; c < blk.d.cols; ++c)
            for (const auto& [r, v] : blk.d.col[c])
                m.at(tgt.members[r], blk.members[c]) = v;
    }
    std::map<int, long> h;
    for (const auto& [k, monos] : slice.basis) {
        long dim = static_cast<long>(monos.size());
        long r1 = rank(mats.at(k));
        long r2 = mats.count(k + 1) ? rank(mats.at(k + 1)) : 0;
        if (dim - r1 - r2 != 0) h[k] = dim - r1 - r2;
    }
    return h;
}

InvariantSlice invariant_subcomplex(const CommutativeDGA& dga, const ChainComplexSlice& slice) {
    InvariantSlice inv;
    inv.weight = slice.weight;
    std::vector<int> zero_charge(dga.nv.total, 0);

    std::map<int, std::map<CMono, int>> ambient_index;
    for (const auto& [k, idx] : slice.block_of) {
        auto it = idx.find(zero_charge);
        if (it == idx.end()) continue;
        const auto& blk = slice.blocks[it->second];
        const auto& monos = slice.basis.at(k);
        auto& amb = inv.ambient[k];
        for (size_t j = 0; j < blk.members.size(); ++j) {
            amb.push_back(monos[blk.members[j]]);
            ambient_index[k].emplace(amb.back(), static_cast<int>(j));
        }
    }

    for (const auto& [k, amb] : inv.ambient) {
        // Constraint rows: every monomial hit by an off-diagonal derivation.
        std::map<CMono, int> rows;
        std::vector<std::map<int, Rat>> cols(amb.size());
        for (const auto& D : dga.gl) {
            if (D.p == D.q) continue;
            for (size_t j = 0; j < amb.size(); ++j) {
                CPoly img = dga.gl_apply(D, CPoly(dga.vars, amb[j], Rat(1)));
                for (const auto& [m, c] : img.terms()) {
                    auto it = rows.find(m);
                    if (it == rows.end())
                        it = rows.emplace(m, static_cast<int>(rows.size())).first;
                    cols[j][it->second] += c;
                }
            }
        }
        DenseQ constraints(static_cast<int>(rows.size()), static_cast<int>(amb.size()));
        for (size_t j = 0; j < cols.size(); ++j)
            for (const auto& [r, v] : cols[j])
                if (v != 0) constraints.at(r, static_cast<int>(j)) = v;
        inv.kernel[k] = kernel_basis(constraints);
    }

    for (const auto& [k, amb] : inv.ambient) {
        const DenseQ& K = inv.kernel.at(k);
        if (K.cols == 0) continue;
        auto below = inv.ambient.find(k - 1);
        // d of an invariant is invariant; build the charge-0 differential.
        DenseQ D(below == inv.ambient.end() ? 0 : static_cast<int>(below->second.size()),
                 static_cast<int>(amb.size()));
        for (size_t j = 0; j < amb.size(); ++j) {
            CPoly dm = dga.d(CPoly(dga.vars, amb[j], Rat(1)));
            for (const auto& [m, c] : dm.terms()) {
                auto it = ambient_index[k - 1].find(m);
                if (it == ambient_index[k - 1].end())
                    throw Error("differential leaves the charge-0 block");
                D.at(it->second, static_cast<int>(j)) = c;
            }
        }
        DenseQ DK = D.mul(K);
        if (below == inv.ambient.end() || !inv.kernel.count(k - 1)) {
            if (!DK.is_zero()) throw Error("invariant differential has no target");
            inv.d[k] = DenseQ(0, K.cols);
            continue;
        }
        DenseQ M;
        if (!solve(inv.kernel.at(k - 1), DK, M))
            throw Error("differential does not preserve the invariant subcomplex");
        inv.d[k] = M;
    }
    return inv;
}

std::map<int, long> betti(const InvariantSlice& inv) {
    std::map<int, long> h;
    for (const auto& [k, K] : inv.kernel) h[k] = K.cols;
    for (const auto& [k, M] : inv.d) {
        long r = rank(M);
        h[k] -= r;
        h[k - 1] -= r;
    }
    for (auto it = h.begin(); it != h.end();)
        it = it->second == 0 ? h.erase(it) : std::next(it);
    return h;
}

std::vector<Rat> HomologyBasis::coords(int k, const std::vector<Rat>& v) const {
    auto rit = reps.find(k);
    long hdim = rit == reps.end() ? 0 : rit->second.cols;
    const DenseQ* B = boundaries.count(k) ? &boundaries.at(k) : nullptr;
    int rows = static_cast<int>(v.size());
    int bcols = B ? B->cols : 0;
    DenseQ A(rows, static_cast<int>(bcols + hdim));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < bcols; ++c) A.at(r, c) = B->at(r, c);
        for (int c = 0; c < hdim; ++c) A.at(r, bcols + c) = rit->second.at(r, c);
    }
    DenseQ rhs(rows, 1);
    for (int r = 0; r < rows; ++r) rhs.at(r, 0) = v[r];
    DenseQ X;
    if (!solve(A, rhs, X)) throw Error("vector is not a cycle class");
    std::vector<Rat> out(hdim);
    for (long c = 0; c < hdim; ++c) out[c] = X.at(bcols + static_cast<int>(c), 0);
    return out;
}

HomologyBasis homology_basis(const std::map<int, DenseQ>& d, const std::map<int, long>& dims) {
    HomologyBasis hb;
    for (const auto& [k, dim] : dims) {
        if (dim == 0) continue;
        DenseQ M = d.count(k) ? d.at(k) : DenseQ(0, static_cast<int>(dim));
        DenseQ Z = kernel_basis(M);
        DenseQ B(static_cast<int>(dim), 0);
        if (d.count(k + 1)) B = d.at(k + 1);
        // Representatives: kernel columns independent from the boundary span.
        DenseQ BZ(static_cast<int>(dim), B.cols + Z.cols);
        for (int r = 0; r < BZ.rows; ++r) {
            for (int c = 0; c < B.cols; ++c) BZ.at(r, c) = B.at(r, c);
            for (int c = 0; c < Z.cols; ++c) BZ.at(r, B.cols + c) = Z.at(r, c);
        }
        DenseQ copy = BZ;
        std::vector<int> pivots = rref(copy);
        std::vector<int> rep_cols;
        for (int c : pivots)
            if (c >= B.cols) rep_cols.push_back(c - B.cols);
        DenseQ reps(static_cast<int>(dim), static_cast<int>(rep_cols.size()));
        for (int r = 0; r < reps.rows; ++r)
            for (size_t c = 0; c < rep_cols.size(); ++c)
                reps.at(r, static_cast<int>(c)) = Z.at(r, rep_cols[c]);
        hb.reps[k] = reps;
        hb.boundaries[k] = B;
        hb.dims[k] = static_cast<long>(rep_cols.size());
    }
    return hb;
}

LieCohomologyProfile lie_cohomology(const DimensionVector& nv) {
    LieCohomologyProfile p;
    p.dim[0] = 1;
    for (int ni : nv.n) {
        for (int gen = 1; gen <= ni; ++gen) {
            int deg = -(2 * gen - 1);
            std::map<int, long> next = p.dim;
            for (const auto& [d, c] : p.dim) next[d + deg] += c;
            p.dim = std::move(next);
        }
    }
    return p;
}

long LieCohomologyProfile::total() const {
    long t = 0;
    for (const auto& [d, c] : dim) t += c;
    return t;
}

DecompositionReport verify_decomposition(const DGAPresentation& base, const HamiltonianData& ham,
                                         const DimensionVector& nv, int max_w, int jobs) {
    DecompositionReport rep;
    rep.lie = lie_cohomology(nv);

    DGAPresentation sh = shafarevich(base, ham);
    DGAPresentation b = brst(base, ham);
    CommutativeDGA K = rep_algebra(sh, nv);
    CommutativeDGA B = rep_algebra(b, nv);

    for (int w = 0; w <= max_w; ++w) {
        ChainComplexSlice sliceB = weight_slice(B, w);
        std::map<int, long> hb = betti(sliceB, jobs);
        for (const auto& [k, d] : hb) rep.brst.set(w, k, d);

        ChainComplexSlice sliceK = weight_slice(K, w);
        std::map<int, long> hk = betti(sliceK, jobs);
        for (const auto& [k, d] : hk) rep.koszul_full.set(w, k, d);

        InvariantSlice inv = invariant_subcomplex(K, sliceK);
        std::map<int, long> hi = betti(inv);
        for (const auto& [k, d] : hi) rep.koszul_invariant.set(w, k, d);

        // Compare over every degree either side touches.
        std::set<int> degrees;
        for (const auto& [k, d] : hb) degrees.insert(k);
        for (const auto& [k, d] : hi)
            for (const auto& [j, c] : rep.lie.dim) degrees.insert(k + j);
        for (int k : degrees) {
            long lhs = rep.brst.at(w, k);
            long rhs = 0;
            for (const auto& [j, c] : rep.lie.dim) rhs += rep.koszul_invariant.at(w, k - j) * c;
            if (lhs != rhs) {
                rep.passed = false;
                rep.issues.push_back(
                    {"decomposition", "w=" + std::to_string(w) + " k=" + std::to_string(k) +
                                          " lhs=" + std::to_string(lhs) +
                                          " rhs=" + std::to_string(rhs)});
            }
        }
        for (const auto& [k, d] : hi)
            if (k >= 1)
                rep.notes.push_back("H_" + std::to_string(k) + "(K)^GL at w=" +
                                    std::to_string(w) + " has dim " + std::to_string(d));
    }
    return rep;
}

namespace {

// Variable translation between two rep algebras over name-compatible quivers.
std::vector<int> var_translation(const CommutativeDGA& from, const CommutativeDGA& to) {
    std::vector<int> map(from.vars->size(), -1);
    for (int id = 0; id < from.vars->size(); ++id) {
        const CVar& v = from.vars->var(id);
        const std::string& name = from.ctx->quiver().arrows[v.arrow].name;
        int arrow_to = to.ctx->quiver().arrow_index(name);
        map[id] = to.vars->find(arrow_to, v.r, v.s);
        if (map[id] < 0) throw Error("variable translation failed for " + v.name);
    }
    return map;
}

CPoly translate(const CPoly& f, const std::vector<int>& map, const VarsPtr& to) {
    CPoly r(to);
    for (const auto& [m, c] : f.terms()) {
        CMono nm;
        for (const auto& [id, e] : m.factors) nm.factors.push_back({map[id], e});
        std::sort(nm.factors.begin(), nm.factors.end());
        // Recompute the Koszul sign of the resort via factor-by-factor product.
        CPoly term = CPoly::constant(to, c);
        for (const auto& [id, e] : m.factors) term = term * CPoly::variable(to, map[id], e);
        r += term;
    }
    return r;
}

} // namespace

PhiPsiReport phi_psi(const DGAPresentation& base, const HamiltonianData& ham,
                     const DimensionVector& nv, int max_w, int jobs) {
    PhiPsiReport rep;
    auto fail = [&](const std::string& check, const std::string& witness) {
        rep.passed = false;
        if (rep.issues.size() < 16) rep.issues.push_back({check, witness});
    };

    DGAPresentation b = brst(base, ham);
    DGAPresentation sh = shafarevich(base, ham);
    CommutativeDGA B = rep_algebra(b, nv);
    CommutativeDGA K = rep_algebra(sh, nv);
    long n = nv.total;

    CPoly tr_eta(B.vars), tr_theta(B.vars);
    for (size_t v = 0; v < b.eta.size(); ++v) {
        NCElement eta = b.ctx->generator(b.eta[v]);
        NCElement th = b.ctx->generator(b.theta[v]);
        tr_eta += B.trace(eta);
        tr_theta += B.trace(th);
    }
    auto phi = [&](const CPoly& f) { return B.bracket(tr_eta, f); };
    auto psi = [&](const CPoly& f) { return tr_theta * f; };

    // ψ(1) = tr ϑ and φ(tr ϑ) = n.
    if (phi(psi(CPoly::constant(B.vars, Rat(1)))) != CPoly::constant(B.vars, Rat(n)))
        fail("phi-psi-unit", "phi(psi(1)) != n");

    // Per-slice matrix identities, verified column by column on monomials.
    for (int w = 0; w <= max_w; ++w) {
        ChainComplexSlice slice = weight_slice(B, w);
        std::vector<std::pair<int, CMono>> work;
        for (const auto& [k, monos] : slice.basis)
            for (const auto& m : monos) work.push_back({k, m});
        std::vector<std::string> bad(work.size());
        parallel_for(jobs, static_cast<int>(work.size()), [&](int i) {
            const CMono& m = work[i].second;
            CPoly f(B.vars, m, Rat(1));
            CPoly anti = phi(psi(f)) + psi(phi(f));
            if (anti != f * Rat(n)) {
                bad[i] = "phi psi + psi phi != n at w=" + std::to_string(w);
                return;
            }
            if (!phi(phi(f)).is_zero()) {
                bad[i] = "phi^2 != 0";
                return;
            }
            if (!psi(psi(f)).is_zero()) {
                bad[i] = "psi^2 != 0";
                return;
            }
            if (!(phi(B.d(f)) + B.d(phi(f))).is_zero()) {
                bad[i] = "phi does not anticommute with d";
                return;
            }
            if (!(psi(B.d(f)) + B.d(psi(f))).is_zero()) {
                bad[i] = "psi does not anticommute with d";
                return;
            }
        });
        for (size_t i = 0; i < work.size(); ++i)
            if (!bad[i].empty()) fail("phi-psi-slice", bad[i]);
    }

    // Induced maps on the invariant Koszul homology and the splitting.
    std::vector<int> k2b = var_translation(K, B);
    std::vector<int> b2k(B.vars->size(), -1);
    for (size_t i = 0; i < k2b.size(); ++i) b2k[k2b[i]] = static_cast<int>(i);

    std::map<int, InvariantSlice> inv;
    std::map<int, HomologyBasis> hom;
    for (int w = 0; w <= max_w; ++w) {
        ChainComplexSlice sliceK = weight_slice(K, w);
        inv[w] = invariant_subcomplex(K, sliceK);
        std::map<int, long> dims;
        for (const auto& [k, Kk] : inv[w].kernel) dims[k] = Kk.cols;
        hom[w] = homology_basis(inv[w].d, dims);
    }

    auto ambient_coords = [&](int w, int k, const CPoly& f) {
        const auto& amb = inv[w].ambient.at(k);
        std::map<CMono, int> index;
        for (size_t i = 0; i < amb.size(); ++i) index.emplace(amb[i], static_cast<int>(i));
        std::vector<Rat> v(amb.size(), Rat(0));
        for (const auto& [m, c] : f.terms()) {
            auto it = index.find(m);
            if (it == index.end()) throw Error("element is outside the invariant ambient basis");
            v[it->second] = c;
        }
        return v;
    };
    // Map an invariant-coordinate vector to its ambient polynomial over K.
    auto inv_to_poly = [&](int w, int k, const std::vector<Rat>& coords) {
        const DenseQ& Kk = inv[w].kernel.at(k);
        const auto& amb = inv[w].ambient.at(k);
        CPoly f(K.vars);
        for (int r = 0; r < Kk.rows; ++r) {
            Rat acc(0);
            for (int c = 0; c < Kk.cols; ++c) acc += Kk.at(r, c) * coords[c];
            if (acc != 0) f.add_term(amb[r], acc);
        }
        return f;
    };
    auto to_inv_coords = [&](int w, int k, const CPoly& f) {
        std::vector<Rat> av = ambient_coords(w, k, f);
        DenseQ rhs(static_cast<int>(av.size()), 1);
        for (size_t r = 0; r < av.size(); ++r) rhs.at(static_cast<int>(r), 0) = av[r];
        DenseQ X;
        if (!solve(inv[w].kernel.at(k), rhs, X))
            throw Error("element is not invariant");
        std::vector<Rat> out(X.rows);
        for (int r = 0; r < X.rows; ++r) out[r] = X.at(r, 0);
        return out;
    };

    for (int w = 0; w <= max_w; ++w) {
        for (const auto& [k, hdim] : hom[w].dims) {
            if (hdim == 0) continue;
            // φ*: H_{w,k} -> H_{w-2,k-1}
            long ker_phi = hdim;
            if (w >= 2 && inv.count(w - 2)) {
                long tdim = hom[w - 2].dims.count(k - 1) ? hom[w - 2].dims.at(k - 1) : 0;
                DenseQ mat(static_cast<int>(tdim), static_cast<int>(hdim));
                for (long c = 0; c < hdim; ++c) {
                    std::vector<Rat> repc(hom[w].reps.at(k).rows);
                    for (int r = 0; r < hom[w].reps.at(k).rows; ++r)
                        repc[r] = hom[w].reps.at(k).at(r, static_cast<int>(c));
                    CPoly cyc = inv_to_poly(w, k, repc);
                    CPoly img = phi(translate(cyc, k2b, B.vars));
                    CPoly back = translate(img, b2k, K.vars);
                    if (back.is_zero()) continue;
                    std::vector<Rat> cls =
                        hom[w - 2].coords(k - 1, to_inv_coords(w - 2, k - 1, back));
                    for (size_t r = 0; r < cls.size(); ++r)
                        mat.at(static_cast<int>(r), static_cast<int>(c)) = cls[r];
                }
                ker_phi = kernel_basis(mat).cols;
            }
            // ψ*: H_{w-2,k-1} -> H_{w,k}
            long im_psi = 0;
            if (w >= 2 && hom.count(w - 2) && hom[w - 2].dims.count(k - 1)) {
                long sdim = hom[w - 2].dims.at(k - 1);
                DenseQ mat(static_cast<int>(hdim), static_cast<int>(sdim));
                for (long c = 0; c < sdim; ++c) {
                    std::vector<Rat> repc(hom[w - 2].reps.at(k - 1).rows);
                    for (int r = 0; r < hom[w - 2].reps.at(k - 1).rows; ++r)
                        repc[r] = hom[w - 2].reps.at(k - 1).at(r, static_cast<int>(c));
                    CPoly cyc = inv_to_poly(w - 2, k - 1, repc);
                    CPoly img = psi(translate(cyc, k2b, B.vars));
                    CPoly back = translate(img, b2k, K.vars);
                    if (back.is_zero()) continue;
                    std::vector<Rat> cls = hom[w].coords(k, to_inv_coords(w, k, back));
                    for (size_t r = 0; r < cls.size(); ++r)
                        mat.at(static_cast<int>(r), static_cast<int>(c)) = cls[r];
                }
                im_psi = rank(mat);
            }
            PhiPsiReport::Split sp;
            sp.w = w;
            sp.k = k;
            sp.dim_h = hdim;
            sp.ker_phi = ker_phi;
            sp.im_psi = im_psi;
            rep.splits.push_back(sp);
            if (hdim != ker_phi + im_psi)
                fail("splitting", "w=" + std::to_string(w) + " k=" + std::to_string(k) +
                                      " dim=" + std::to_string(hdim) +
                                      " ker=" + std::to_string(ker_phi) +
                                      " im=" + std::to_string(im_psi));
        }
    }
    return rep;
}

namespace {

struct MultisymSpace {
    VarsPtr vars;
    int n = 0;
};

MultisymSpace multisym_space(int n) {
    if (n > 5) throw Error("multisymmetric invariants limited to n <= 5");
    auto table = std::make_shared<VarTable>();
    // arrow slots 0,1,2 stand for x, y, theta families.
    for (int i = 0; i < n; ++i) {
        CVar x{"x_" + std::to_string(i + 1), 0, i, i, 0, 1, false, false};
        table->add(x);
    }
    for (int i = 0; i < n; ++i) {
        CVar y{"y_" + std::to_string(i + 1), 1, i, i, 0, 1, false, false};
        table->add(y);
    }
    for (int i = 0; i < n; ++i) {
        CVar th{"th_" + std::to_string(i + 1), 2, i, i, 1, 2, true, false};
        table->add(th);
    }
    return {table, n};
}

// Signed permutation action x_i -> x_{σ(i)} etc.
CPoly permute_mono(const MultisymSpace& sp, const std::vector<int>& sigma, const CMono& m) {
    CPoly r = CPoly::constant(sp.vars, Rat(1));
    for (const auto& [id, e] : m.factors) {
        const CVar& v = sp.vars->var(id);
        int family = v.arrow;
        int image = family * sp.n + sigma[v.r];
        r = r * CPoly::variable(sp.vars, image, e);
    }
    return r;
}

std::map<int, std::vector<CMono>> multisym_monomials(const MultisymSpace& sp, int w) {
    std::map<int, std::vector<CMono>> out;
    const VarTable& vars = *sp.vars;
    CMono cur;
    std::function<void(int, int)> dfs = [&](int id, int rem) {
        if (id == vars.size()) {
            if (rem == 0) out[mono_degree(vars, cur)].push_back(cur);
            return;
        }
        const CVar& v = vars.var(id);
        int max_e = v.odd ? std::min(1, rem / v.weight) : rem / v.weight;
        for (int e = 0; e <= max_e; ++e) {
            if (e > 0) cur.factors.push_back({id, e});
            dfs(id + 1, rem - e * v.weight);
            if (e > 0) cur.factors.pop_back();
        }
    };
    dfs(0, w);
    for (auto& [k, monos] : out) std::sort(monos.begin(), monos.end());
    return out;
}

std::vector<std::vector<int>> all_permutations(int n) {
    std::vector<int> base(n);
    for (int i = 0; i < n; ++i) base[i] = i;
    std::vector<std::vector<int>> out;
    do {
        out.push_back(base);
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
}

} // namespace

std::map<int, std::vector<CPoly>> multisym_invariants(int n, int w) {
    MultisymSpace sp = multisym_space(n);
    auto monos = multisym_monomials(sp, w);
    auto perms = all_permutations(n);
    Rat norm(1, static_cast<long>(perms.size()));

    std::map<int, std::vector<CPoly>> out;
    for (const auto& [k, basis] : monos) {
        std::map<CMono, int> index;
        for (size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], static_cast<int>(i));
        DenseQ span(0, static_cast<int>(basis.size()));
        std::vector<std::vector<Rat>> rows;
        for (const auto& m : basis) {
            CPoly sym(sp.vars);
            for (const auto& sigma : perms) sym += permute_mono(sp, sigma, m);
            sym *= norm;
            if (sym.is_zero()) continue;
            std::vector<Rat> row(basis.size(), Rat(0));
            for (const auto& [mm, c] : sym.terms()) row[index.at(mm)] = c;
            rows.push_back(std::move(row));
        }
        DenseQ mat(static_cast<int>(rows.size()), static_cast<int>(basis.size()));
        for (size_t r = 0; r < rows.size(); ++r) mat.a[r] = rows[r];
        std::vector<int> pivots = rref(mat);
        std::vector<CPoly> polys;
        for (size_t p = 0; p < pivots.size(); ++p) {
            CPoly f(sp.vars);
            for (size_t c = 0; c < basis.size(); ++c)
                if (mat.at(static_cast<int>(p), static_cast<int>(c)) != 0)
                    f.add_term(basis[c], mat.at(static_cast<int>(p), static_cast<int>(c)));
            polys.push_back(std::move(f));
        }
        if (!polys.empty()) out[k] = std::move(polys);
    }
    return out;
}

DiagonalReport diagonal_check(const DGAPresentation& base, const HamiltonianData& ham, int n,
                              int max_w, int jobs) {
    DiagonalReport rep;
    DGAPresentation sh = shafarevich(base, ham);
    DimensionVector nv = DimensionVector::make({n});
    CommutativeDGA K = rep_algebra(sh, nv);

    for (int w = 0; w <= max_w; ++w) {
        ChainComplexSlice slice = weight_slice(K, w);
        InvariantSlice inv = invariant_subcomplex(K, slice);
        for (const auto& [k, d] : betti(inv)) rep.lhs.set(w, k, d);
        // The diagonal image of the moment map vanishes, so the target
        // differential is zero and its Betti numbers are plain dimensions.
        for (const auto& [k, polys] : multisym_invariants(n, w))
            rep.rhs.set(w, k, static_cast<long>(polys.size()));
    }
    std::set<std::pair<int, int>> keys;
    for (const auto& [key, d] : rep.lhs.dims) keys.insert(key);
    for (const auto& [key, d] : rep.rhs.dims) keys.insert(key);
    for (const auto& key : keys) {
        long l = rep.lhs.at(key.first, key.second);
        long r = rep.rhs.at(key.first, key.second);
        if (l != r) {
            rep.agrees = false;
            rep.mismatches.push_back({"diagonal",
                                      "w=" + std::to_string(key.first) +
                                          " k=" + std::to_string(key.second) + " lhs=" +
                                          std::to_string(l) + " rhs=" + std::to_string(r)});
        }
    }
    (void)jobs;
    return rep;
}

std::vector<std::string> describe(const ChainComplexSlice& slice, const CommutativeDGA& dga) {
    std::vector<std::string> out;
    for (const auto& [k, monos] : slice.basis) {
        std::string line = "w=" + std::to_string(slice.weight) + " k=" + std::to_string(k) + ":";
        for (const auto& m : monos) line += " " + CPoly(dga.vars, m, Rat(1)).str();
        out.push_back(line);
    }
    return out;
}

} // namespace ncpr
