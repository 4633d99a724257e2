#include "ncpr/repfun.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace ncpr {

DimensionVector DimensionVector::make(std::vector<int> n) {
    DimensionVector nv;
    nv.n = std::move(n);
    for (int ni : nv.n) {
        if (ni <= 0) throw Error("dimension vector entries must be positive");
        nv.offset.push_back(nv.total);
        nv.total += ni;
    }
    return nv;
}

int DimensionVector::block_of(int global) const {
    for (size_t v = 0; v + 1 < offset.size(); ++v)
        if (global < offset[v + 1]) return static_cast<int>(v);
    return static_cast<int>(offset.size()) - 1;
}

int VarTable::add(CVar v) {
    int id = static_cast<int>(vars_.size());
    by_entry_[{v.arrow, v.r, v.s}] = id;
    vars_.push_back(std::move(v));
    return id;
}

int VarTable::find(int arrow, int r, int s) const {
    auto it = by_entry_.find({arrow, r, s});
    return it == by_entry_.end() ? -1 : it->second;
}

CPoly::CPoly(VarsPtr vars, const CMono& m, const Rat& c) : vars_(std::move(vars)) {
    add_term(m, c);
}

CPoly CPoly::constant(VarsPtr vars, const Rat& c) { return CPoly(std::move(vars), CMono{}, c); }

CPoly CPoly::variable(VarsPtr vars, int id, int exp) {
    if (exp == 0) return constant(std::move(vars), Rat(1));
    const CVar& v = vars->var(id);
    if (v.odd && exp != 1) {
        if (exp < 0) throw Error("odd variables are not invertible");
        return CPoly(std::move(vars));  // odd squares vanish
    }
    if (exp < 0 && !v.laurent) throw Error("negative exponent on a non-Laurent variable");
    CMono m;
    m.factors.push_back({id, exp});
    return CPoly(std::move(vars), m, Rat(1));
}

void CPoly::add_term(const CMono& m, const Rat& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

CPoly& CPoly::operator+=(const CPoly& o) {
    if (!vars_) vars_ = o.vars_;
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

CPoly& CPoly::operator-=(const CPoly& o) {
    if (!vars_) vars_ = o.vars_;
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

CPoly& CPoly::operator*=(const Rat& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

CPoly CPoly::operator-() const {
    CPoly r(vars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

namespace {

// Graded-commutative product of canonical monomials; zero on odd collisions.
bool mono_mul(const VarTable& vars, const CMono& a, const CMono& b, CMono& out, int& sign) {
    sign = 1;
    out.factors.clear();
    out.factors.reserve(a.factors.size() + b.factors.size());
    size_t ai = 0, bi = 0;
    // Count of odd factors of a at position >= i.
    std::vector<int> odd_suffix(a.factors.size() + 1, 0);
    for (size_t i = a.factors.size(); i-- > 0;)
        odd_suffix[i] = odd_suffix[i + 1] + (vars.var(a.factors[i].first).odd ? 1 : 0);
    while (ai < a.factors.size() || bi < b.factors.size()) {
        bool take_b;
        if (ai == a.factors.size())
            take_b = true;
        else if (bi == b.factors.size())
            take_b = false;
        else if (a.factors[ai].first == b.factors[bi].first) {
            int id = a.factors[ai].first;
            if (vars.var(id).odd) return false;  // odd square
            int e = a.factors[ai].second + b.factors[bi].second;
            if (e != 0) out.factors.push_back({id, e});
            ++ai;
            ++bi;
            continue;
        } else
            take_b = b.factors[bi].first < a.factors[ai].first;
        if (take_b) {
            int id = b.factors[bi].first;
            if (vars.var(id).odd && (odd_suffix[ai] % 2) != 0) sign = -sign;
            out.factors.push_back(b.factors[bi]);
            ++bi;
        } else {
            out.factors.push_back(a.factors[ai]);
            ++ai;
        }
    }
    return true;
}

} // namespace

CPoly operator*(const CPoly& a, const CPoly& b) {
    VarsPtr vars = a.vars() ? a.vars() : b.vars();
    CPoly r(vars);
    if (!vars) {
        if (a.is_zero() || b.is_zero()) return r;
        throw Error("polynomial without a variable table");
    }
    CMono prod;
    int sign;
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            if (!mono_mul(*vars, ma, mb, prod, sign)) continue;
            Rat c = ca * cb;
            if (sign < 0) c = -c;
            r.add_term(prod, c);
        }
    return r;
}

int mono_degree(const VarTable& vars, const CMono& m) {
    int d = 0;
    for (const auto& [id, e] : m.factors) d += vars.var(id).degree * e;
    return d;
}

int mono_weight(const VarTable& vars, const CMono& m) {
    int w = 0;
    for (const auto& [id, e] : m.factors) w += vars.var(id).weight * e;
    return w;
}

std::optional<int> CPoly::degree() const {
    if (terms_.empty()) return std::nullopt;
    int d = mono_degree(*vars_, terms_.begin()->first);
    for (const auto& [m, c] : terms_)
        if (mono_degree(*vars_, m) != d) return std::nullopt;
    return d;
}

std::string CPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        if (m.trivial()) {
            os << rat_str(c);
            continue;
        }
        if (c != 1) os << rat_str(c) << "*";
        bool fst = true;
        for (const auto& [id, e] : m.factors) {
            if (!fst) os << "*";
            fst = false;
            os << vars_->var(id).name;
            if (e != 1) os << "^" << e;
        }
    }
    return os.str();
}

CPoly apply_derivation(const std::map<int, CPoly>& images, int parity, const CPoly& f) {
    CPoly r(f.vars());
    if (!f.vars()) return r;
    const VarTable& vars = *f.vars();
    for (const auto& [m, c] : f.terms()) {
        int prefix_deg = 0;
        for (size_t i = 0; i < m.factors.size(); ++i) {
            auto [id, e] = m.factors[i];
            auto it = images.find(id);
            if (it != images.end() && !it->second.is_zero()) {
                CMono prefix{std::vector<std::pair<int, int>>(m.factors.begin(),
                                                              m.factors.begin() + i)};
                CMono suffix{std::vector<std::pair<int, int>>(m.factors.begin() + i + 1,
                                                              m.factors.end())};
                CPoly term = CPoly(f.vars(), prefix, c * Rat(e));
                if (e != 1) term = term * CPoly::variable(f.vars(), id, e - 1);
                term = term * it->second;
                term = term * CPoly(f.vars(), suffix, Rat(1));
                if (parity == 1 && prefix_deg % 2 != 0) term *= Rat(-1);
                r += term;
            }
            prefix_deg += vars.var(id).degree * e;
        }
    }
    return r;
}

PolyMatrix::PolyMatrix(VarsPtr vars, int nn) : n(nn) {
    entry.assign(static_cast<size_t>(n) * n, CPoly(vars));
}

PolyMatrix PolyMatrix::mul(const PolyMatrix& o) const {
    if (n != o.n) throw Error("matrix dimension mismatch");
    PolyMatrix r(entry.empty() ? VarsPtr() : entry[0].vars(), n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (at(i, k).is_zero()) continue;
            for (int j = 0; j < n; ++j) {
                if (o.at(k, j).is_zero()) continue;
                r.at(i, j) += at(i, k) * o.at(k, j);
            }
        }
    return r;
}

PolyMatrix PolyMatrix::operator+(const PolyMatrix& o) const {
    PolyMatrix r = *this;
    for (size_t i = 0; i < entry.size(); ++i) r.entry[i] += o.entry[i];
    return r;
}

PolyMatrix PolyMatrix::operator-(const PolyMatrix& o) const {
    PolyMatrix r = *this;
    for (size_t i = 0; i < entry.size(); ++i) r.entry[i] -= o.entry[i];
    return r;
}

PolyMatrix CommutativeDGA::rep_word(const Word& w) const {
    int n = nv.total;
    if (w.is_idempotent()) {
        PolyMatrix m(vars, n);
        int v = w.vertex;
        for (int r = nv.offset[v]; r < nv.offset[v] + nv.n[v]; ++r)
            m.at(r, r) = CPoly::constant(vars, Rat(1));
        return m;
    }
    PolyMatrix acc;
    bool first = true;
    for (Token t : w.toks) {
        PolyMatrix m(vars, n);
        int arrow = arrow_of_token(t);
        if (!token_is_inverse(t)) {
            int tv = ctx->token_target(t), sv = ctx->token_source(t);
            for (int r = nv.offset[tv]; r < nv.offset[tv] + nv.n[tv]; ++r)
                for (int s = nv.offset[sv]; s < nv.offset[sv] + nv.n[sv]; ++s)
                    m.at(r, s) = CPoly::variable(vars, vars->find(arrow, r, s));
        } else {
            if (n != 1)
                throw Error("invertible generators are only representable at total dimension 1");
            m.at(0, 0) = CPoly::variable(vars, vars->find(arrow, 0, 0), -1);
        }
        acc = first ? m : acc.mul(m);
        first = false;
    }
    return acc;
}

PolyMatrix CommutativeDGA::rep_element(const NCElement& a) const {
    PolyMatrix r(vars, nv.total);
    for (const auto& [w, c] : a.terms()) {
        PolyMatrix m = rep_word(w);
        for (size_t i = 0; i < m.entry.size(); ++i) r.entry[i] += m.entry[i] * c;
    }
    return r;
}

CPoly CommutativeDGA::trace(const NCElement& a) const {
    PolyMatrix m = rep_element(a);
    CPoly t(vars);
    for (int r = 0; r < nv.total; ++r) t += m.at(r, r);
    return t;
}

CPoly CommutativeDGA::d(const CPoly& f) const { return apply_derivation(diff, 1, f); }

namespace {

// {v,w} base lookup; the table stores every nonzero ordered pair.
CPoly bracket_vars(const CommutativeDGA& dga, int v, int w) {
    auto it = dga.poisson.find({v, w});
    if (it != dga.poisson.end()) return it->second;
    return CPoly(dga.vars);
}

CPoly bracket_var_pow(const CommutativeDGA& dga, int v, int w, int f) {
    const VarTable& vars = *dga.vars;
    if (vars.var(w).odd) return bracket_vars(dga, v, w);
    CPoly base = bracket_vars(dga, v, w);
    if (base.is_zero()) return base;
    return CPoly::variable(dga.vars, w, f - 1) * base * Rat(f);
}

CPoly bracket_var_mono(const CommutativeDGA& dga, int v, const CMono& mg) {
    // {v, w^f · rest} = {v,w^f}·rest + (−1)^{|v||w^f|} w^f · {v, rest}.
    const VarTable& vars = *dga.vars;
    CPoly r(dga.vars);
    if (mg.trivial()) return r;
    auto [w, f] = mg.factors.front();
    CMono rest{std::vector<std::pair<int, int>>(mg.factors.begin() + 1, mg.factors.end())};
    CPoly head = bracket_var_pow(dga, v, w, f);
    if (!head.is_zero()) r += head * CPoly(dga.vars, rest, Rat(1));
    CPoly tail = bracket_var_mono(dga, v, rest);
    if (!tail.is_zero()) {
        long s = static_cast<long>(vars.var(v).degree) * vars.var(w).degree * f;
        CPoly wf = CPoly::variable(dga.vars, w, f);
        CPoly term = wf * tail;
        if (s % 2 != 0) term *= Rat(-1);
        r += term;
    }
    return r;
}

CPoly bracket_mono(const CommutativeDGA& dga, const CMono& mf, const CMono& mg) {
    // {v^e · rest, mg} = v^e·{rest, mg} + (−1)^{|rest||mg|} {v^e, mg}·rest.
    const VarTable& vars = *dga.vars;
    CPoly r(dga.vars);
    if (mf.trivial() || mg.trivial()) return r;
    auto [v, e] = mf.factors.front();
    CMono rest{std::vector<std::pair<int, int>>(mf.factors.begin() + 1, mf.factors.end())};
    CPoly tail = bracket_mono(dga, rest, mg);
    if (!tail.is_zero()) r += CPoly::variable(dga.vars, v, e) * tail;
    CPoly head = vars.var(v).odd ? bracket_var_mono(dga, v, mg)
                                 : (e == 1 ? bracket_var_mono(dga, v, mg)
                                           : CPoly::variable(dga.vars, v, e - 1) *
                                                 bracket_var_mono(dga, v, mg) * Rat(e));
    if (!head.is_zero()) {
        long s = static_cast<long>(mono_degree(vars, rest)) * mono_degree(vars, mg);
        CPoly term = head * CPoly(dga.vars, rest, Rat(1));
        if (s % 2 != 0) term *= Rat(-1);
        r += term;
    }
    return r;
}

} // namespace

CPoly CommutativeDGA::bracket(const CPoly& f, const CPoly& g) const {
    CPoly r(vars);
    for (const auto& [mf, cf] : f.terms())
        for (const auto& [mg, cg] : g.terms()) r += bracket_mono(*this, mf, mg) * (cf * cg);
    return r;
}

CPoly CommutativeDGA::gl_apply(const GlDerivation& D, const CPoly& f) const {
    return apply_derivation(D.images, 0, f);
}

Rat CommutativeDGA::constant_term(const CPoly& f) const {
    auto it = f.terms().find(CMono{});
    return it == f.terms().end() ? Rat(0) : it->second;
}

CommutativeDGA rep_algebra(const DGAPresentation& a, const DimensionVector& nv) {
    const CtxPtr& ctx = a.ctx;
    if (static_cast<int>(nv.n.size()) != ctx->vertex_count())
        throw Error("dimension vector length must match the vertex count");
    for (const auto& arr : ctx->quiver().arrows)
        if (arr.invertible && nv.total != 1)
            throw Error("invertible generators are out of scope for total dimension >= 2");

    CommutativeDGA dga;
    dga.ctx = ctx;
    dga.nv = nv;

    auto table = std::make_shared<VarTable>();
    for (int g = 0; g < ctx->arrow_count(); ++g) {
        const Arrow& arr = ctx->quiver().arrows[g];
        int tv = ctx->token_target(token_of_arrow(g));
        int sv = ctx->token_source(token_of_arrow(g));
        for (int r = nv.offset[tv]; r < nv.offset[tv] + nv.n[tv]; ++r)
            for (int s = nv.offset[sv]; s < nv.offset[sv] + nv.n[sv]; ++s) {
                CVar v;
                v.name = arr.name + "_" + std::to_string(r + 1) + std::to_string(s + 1);
                v.arrow = g;
                v.r = r;
                v.s = s;
                v.degree = arr.degree;
                v.weight = arr.weight;
                v.odd = (arr.degree % 2 != 0) || (arr.degree < 0 && (-arr.degree) % 2 != 0);
                v.laurent = arr.invertible;
                table->add(v);
            }
    }
    dga.vars = table;

    for (int g = 0; g < ctx->arrow_count(); ++g) {
        const NCElement& img = a.diff.of_arrow(g);
        if (img.is_zero()) continue;
        PolyMatrix m = dga.rep_element(img);
        for (int id = 0; id < table->size(); ++id) {
            const CVar& v = table->var(id);
            if (v.arrow != g) continue;
            const CPoly& entry = m.at(v.r, v.s);
            if (!entry.is_zero()) dga.diff[id] = entry;
        }
    }

    if (a.table) {
        for (int g = 0; g < ctx->arrow_count(); ++g)
            for (int h = 0; h < ctx->arrow_count(); ++h) {
                if (!a.table->knows(g) || !a.table->knows(h)) continue;
                Tensor2 val = a.table->pair_value(token_of_arrow(g), token_of_arrow(h));
                if (val.is_zero()) continue;
                // Cache the rep matrices of the tensor legs.
                std::vector<std::pair<std::pair<PolyMatrix, PolyMatrix>, Rat>> legs;
                for (const auto& [k, c] : val.terms())
                    legs.push_back({{dga.rep_word(k[0]), dga.rep_word(k[1])}, c});
                for (int id1 = 0; id1 < table->size(); ++id1) {
                    const CVar& v1 = table->var(id1);
                    if (v1.arrow != g) continue;
                    for (int id2 = 0; id2 < table->size(); ++id2) {
                        const CVar& v2 = table->var(id2);
                        if (v2.arrow != h) continue;
                        CPoly acc(dga.vars);
                        for (const auto& [pq, c] : legs)
                            acc += pq.first.at(v2.r, v1.s) * pq.second.at(v1.r, v2.s) * c;
                        if (!acc.is_zero()) dga.poisson[{id1, id2}] = acc;
                    }
                }
            }
    }

    for (int v = 0; v < ctx->vertex_count(); ++v) {
        for (int p = nv.offset[v]; p < nv.offset[v] + nv.n[v]; ++p)
            for (int q = nv.offset[v]; q < nv.offset[v] + nv.n[v]; ++q) {
                GlDerivation D;
                D.vertex = v;
                D.p = p;
                D.q = q;
                for (int id = 0; id < table->size(); ++id) {
                    const CVar& cv = table->var(id);
                    CPoly img(dga.vars);
                    int tv = ctx->token_target(token_of_arrow(cv.arrow));
                    int sv = ctx->token_source(token_of_arrow(cv.arrow));
                    if (tv == v && cv.r == p)
                        img += CPoly::variable(dga.vars, table->find(cv.arrow, q, cv.s));
                    if (sv == v && cv.s == q)
                        img -= CPoly::variable(dga.vars, table->find(cv.arrow, cv.r, p));
                    if (!img.is_zero()) D.images[id] = img;
                }
                dga.gl.push_back(std::move(D));
            }
    }

    if (a.charge) dga.charge_trace = dga.trace(a.charge->gamma);
    return dga;
}

RepLawReport verify_rep_laws(const DGAPresentation& a, const CommutativeDGA& dga,
                             int trace_sample_pairs) {
    RepLawReport rep;
    auto fail = [&](const std::string& check, const std::string& witness) {
        rep.passed = false;
        if (rep.issues.size() < 16) rep.issues.push_back({check, witness});
    };
    const CtxPtr& ctx = a.ctx;

    // (i) functoriality on sampled word pairs.
    std::vector<Word> words = words_up_to_length(ctx, 2);
    std::mt19937_64 rng(0xab5ac7);
    std::vector<size_t> idx(words.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    size_t cap = std::min<size_t>(idx.size(), 12);
    for (size_t i = 0; i < cap; ++i)
        for (size_t j = 0; j < cap; ++j) {
            NCElement u(ctx, words[idx[i]]), v(ctx, words[idx[j]]);
            ++rep.functoriality_samples;
            if (!(dga.rep_element(u * v) == dga.rep_element(u).mul(dga.rep_element(v))))
                fail("rep-functoriality", u.str() + " ; " + v.str());
        }

    // (ii) tr{a,b} = {tr a, tr b} on sampled pairs.
    if (a.table) {
        std::vector<Word> pool;
        for (const Word& w : words_up_to_length(ctx, 3))
            if (!w.is_idempotent()) pool.push_back(w);
        std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
        for (int i = 0; i < trace_sample_pairs; ++i) {
            NCElement u(ctx, pool[pick(rng)]), v(ctx, pool[pick(rng)]);
            ++rep.trace_pairs;
            CPoly lhs = dga.trace(single_bracket(*a.table, u, v));
            CPoly rhs = dga.bracket(dga.trace(u), dga.trace(v));
            if (lhs != rhs) fail("trace-lie", u.str() + " ; " + v.str());
        }
    }

    // (iii) induced differential is {tr γ, −} on every generator entry.
    if (dga.charge_trace) {
        for (int id = 0; id < dga.vars->size(); ++id) {
            CPoly lhs = dga.bracket(*dga.charge_trace, CPoly::variable(dga.vars, id));
            auto it = dga.diff.find(id);
            CPoly rhs = it == dga.diff.end() ? CPoly(dga.vars) : it->second;
            if (lhs != rhs) fail("charge-trace-differential", dga.vars->var(id).name);
        }
    }

    // (iv) antisymmetry and graded Jacobi on generator entries.
    if (a.table) {
        int nvars = dga.vars->size();
        for (int i = 0; i < nvars; ++i)
            for (int j = 0; j < nvars; ++j) {
                CPoly fi = CPoly::variable(dga.vars, i), fj = CPoly::variable(dga.vars, j);
                long s = static_cast<long>(dga.vars->var(i).degree) * dga.vars->var(j).degree;
                CPoly rhs = dga.bracket(fj, fi);
                if (s % 2 == 0) rhs *= Rat(-1);
                if (dga.bracket(fi, fj) != rhs)
                    fail("poisson-antisymmetry",
                         dga.vars->var(i).name + " ; " + dga.vars->var(j).name);
            }
        for (int i = 0; i < nvars; ++i)
            for (int j = 0; j < nvars; ++j)
                for (int k = 0; k < nvars; ++k) {
                    ++rep.jacobi_triples;
                    CPoly fi = CPoly::variable(dga.vars, i);
                    CPoly fj = CPoly::variable(dga.vars, j);
                    CPoly fk = CPoly::variable(dga.vars, k);
                    CPoly lhs = dga.bracket(fi, dga.bracket(fj, fk));
                    CPoly rhs = dga.bracket(dga.bracket(fi, fj), fk);
                    long s = static_cast<long>(dga.vars->var(i).degree) * dga.vars->var(j).degree;
                    CPoly tail = dga.bracket(fj, dga.bracket(fi, fk));
                    if (s % 2 != 0) tail *= Rat(-1);
                    rhs += tail;
                    if (lhs != rhs)
                        fail("poisson-jacobi", dga.vars->var(i).name + " ; " +
                                                   dga.vars->var(j).name + " ; " +
                                                   dga.vars->var(k).name);
                }
    }

    // (v) gl derivations commute with the differential.
    for (const auto& D : dga.gl) {
        for (int id = 0; id < dga.vars->size(); ++id) {
            CPoly dv = CPoly::variable(dga.vars, id);
            CPoly lhs = dga.gl_apply(D, dga.d(dv));
            CPoly rhs = dga.d(dga.gl_apply(D, dv));
            if (lhs != rhs)
                fail("gl-differential-commutation",
                     "E(" + std::to_string(D.p + 1) + "," + std::to_string(D.q + 1) + ") on " +
                         dga.vars->var(id).name);
        }
    }
    return rep;
}

std::vector<std::string> describe(const CommutativeDGA& dga) {
    std::vector<std::string> out;
    for (int id = 0; id < dga.vars->size(); ++id) {
        const CVar& v = dga.vars->var(id);
        std::string line = v.name + ": degree " + std::to_string(v.degree) + ", weight " +
                           std::to_string(v.weight);
        if (v.odd) line += ", odd";
        if (v.laurent) line += ", laurent";
        auto it = dga.diff.find(id);
        line += "; d = " + (it == dga.diff.end() ? std::string("0") : it->second.str());
        out.push_back(line);
    }
    return out;
}

} // namespace ncpr
