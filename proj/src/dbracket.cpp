#include "ncpr/dbracket.hpp"

#include "ncpr/parallel.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace ncpr {

namespace {

NCElement token_elem(const CtxPtr& ctx, Token t) {
    return NCElement(ctx, Word{ctx->token_source(t), {t}});
}

Rat parity_sign(long s) { return (s % 2 != 0) ? Rat(-1) : Rat(1); }

} // namespace

void BracketTable::set(int g, int h, Tensor2 value) {
    if (!value.is_zero()) {
        int expect = ctx_->token_degree(token_of_arrow(g)) + ctx_->token_degree(token_of_arrow(h));
        for (const auto& [k, c] : value.terms())
            if (ctx_->degree(k[0]) + ctx_->degree(k[1]) != expect)
                throw Error("bracket entry for (" + ctx_->quiver().arrows[g].name + "," +
                            ctx_->quiver().arrows[h].name + ") is not of degree |g|+|h|");
    }
    entries_[{g, h}] = std::move(value);
}

void BracketTable::set(const std::string& g, const std::string& h, Tensor2 value) {
    set(ctx_->quiver().arrow_index(g), ctx_->quiver().arrow_index(h), std::move(value));
}

void BracketTable::assign_factor(int arrow, int factor) { factor_[arrow] = factor; }

int BracketTable::factor_of(int arrow) const {
    auto it = factor_.find(arrow);
    return it == factor_.end() ? -1 : it->second;
}

bool BracketTable::knows(int arrow) const {
    if (factor_.count(arrow)) return true;
    for (const auto& [key, val] : entries_)
        if (key.first == arrow || key.second == arrow) return true;
    return false;
}

void BracketTable::validate() const {
    for (const auto& [key, val] : entries_) {
        if (val.is_zero()) continue;
        int expect = ctx_->token_degree(token_of_arrow(key.first)) +
                     ctx_->token_degree(token_of_arrow(key.second));
        for (const auto& [k, c] : val.terms())
            if (ctx_->degree(k[0]) + ctx_->degree(k[1]) != expect)
                throw Error("inhomogeneous bracket entry");
    }
}

Tensor2 BracketTable::pair_value(Token g, Token h) const {
    const auto& ctx = *ctx_;
    if (token_is_inverse(g)) {
        // ⟨⟨x^{-1},h⟩⟩ = −x^{-1} ∗ ⟨⟨x,h⟩⟩ ∗ x^{-1}, forced by ⟨⟨x x^{-1},h⟩⟩ = 0.
        NCElement xinv = token_elem(ctx_, g);
        Tensor2 base = pair_value(token_of_arrow(arrow_of_token(g)), h);
        return -inner_right(inner_left(xinv, base), xinv);
    }
    if (token_is_inverse(h)) {
        NCElement yinv = token_elem(ctx_, h);
        Tensor2 base = pair_value(g, token_of_arrow(arrow_of_token(h)));
        return -outer_right(outer_left(yinv, base), yinv);
    }
    int ga = arrow_of_token(g), ha = arrow_of_token(h);
    if (auto it = entries_.find({ga, ha}); it != entries_.end()) return it->second;
    if (auto it = entries_.find({ha, ga}); it != entries_.end()) {
        long s = static_cast<long>(ctx.token_degree(g)) * ctx.token_degree(h);
        return tensor_permute<2>({1, 0}, it->second) * (-parity_sign(s));
    }
    int fg = factor_of(ga), fh = factor_of(ha);
    if (fg >= 0 && fh >= 0 && fg != fh) return Tensor2(ctx_);
    throw Error("no bracket entry for generator pair (" + ctx.quiver().arrows[ga].name + "," +
                ctx.quiver().arrows[ha].name + ")");
}

namespace {

Tensor2 db_words(const BracketTable& tbl, const Word& u, const Word& v) {
    const CtxPtr& ctx = tbl.ctx();
    if (u.is_idempotent() || v.is_idempotent()) return Tensor2(ctx);
    if (v.length() > 1) {
        // ⟨⟨u, bc⟩⟩ = ⟨⟨u,b⟩⟩·c + (−1)^{|u||b|} b·⟨⟨u,c⟩⟩ with b the leftmost token.
        Token b = v.toks.front();
        Word c{0, std::vector<Token>(v.toks.begin() + 1, v.toks.end())};
        c.vertex = ctx->token_source(c.toks.back());
        Word bw{ctx->token_source(b), {b}};
        NCElement be = NCElement(ctx, bw);
        NCElement ce = NCElement(ctx, c);
        Tensor2 t = outer_right(db_words(tbl, u, bw), ce);
        long s = static_cast<long>(ctx->degree(u)) * ctx->token_degree(b);
        t += outer_left(be, db_words(tbl, u, c)) * parity_sign(s);
        return t;
    }
    if (u.length() > 1) {
        // ⟨⟨ab, v⟩⟩ = a ∗ ⟨⟨b,v⟩⟩ + (−1)^{|b||v|} ⟨⟨a,v⟩⟩ ∗ b with b the rightmost token.
        Token b = u.toks.back();
        Word a{0, std::vector<Token>(u.toks.begin(), u.toks.end() - 1)};
        a.vertex = ctx->token_source(a.toks.back());
        Word bw{ctx->token_source(b), {b}};
        NCElement ae = NCElement(ctx, a);
        NCElement be = NCElement(ctx, bw);
        Tensor2 t = inner_left(ae, db_words(tbl, bw, v));
        long s = static_cast<long>(ctx->token_degree(b)) * ctx->degree(v);
        t += inner_right(db_words(tbl, a, v), be) * parity_sign(s);
        return t;
    }
    return tbl.pair_value(u.toks[0], v.toks[0]);
}

} // namespace

Tensor2 double_bracket(const BracketTable& tbl, const NCElement& a, const NCElement& b) {
    if (a.ctx() && a.ctx() != tbl.ctx()) throw Error("mixed algebra contexts");
    if (b.ctx() && b.ctx() != tbl.ctx()) throw Error("mixed algebra contexts");
    Tensor2 r(tbl.ctx());
    for (const auto& [u, cu] : a.terms())
        for (const auto& [v, cv] : b.terms()) r += db_words(tbl, u, v) * (cu * cv);
    return r;
}

namespace {

// ⟨⟨a, p⊗q⟩⟩_L = ⟨⟨a,p⟩⟩ ⊗ q.
Tensor3 bracket_left(const BracketTable& tbl, const NCElement& a, const Tensor2& t) {
    Tensor3 r(tbl.ctx());
    for (const auto& [k, c] : t.terms()) {
        Tensor2 inner = double_bracket(tbl, a, NCElement(tbl.ctx(), k[0]));
        for (const auto& [ik, ic] : inner.terms()) r.add_term({ik[0], ik[1], k[1]}, ic * c);
    }
    return r;
}

int required_degree(const NCElement& e, const char* who) {
    auto d = e.degree();
    if (!d) throw Error(std::string(who) + ": homogeneous element required");
    return *d;
}

} // namespace

Tensor3 triple_bracket(const BracketTable& tbl, const NCElement& a, const NCElement& b,
                       const NCElement& c) {
    if (a.is_zero() || b.is_zero() || c.is_zero()) return Tensor3(tbl.ctx());
    long da = required_degree(a, "triple_bracket");
    long db = required_degree(b, "triple_bracket");
    long dc = required_degree(c, "triple_bracket");
    Tensor3 r = bracket_left(tbl, a, double_bracket(tbl, b, c));
    r += tensor_permute<3>({1, 2, 0}, bracket_left(tbl, b, double_bracket(tbl, c, a))) *
         parity_sign(da * (db + dc));
    r += tensor_permute<3>({2, 0, 1}, bracket_left(tbl, c, double_bracket(tbl, a, b))) *
         parity_sign(dc * (da + db));
    return r;
}

NCElement single_bracket(const BracketTable& tbl, const NCElement& a, const NCElement& b) {
    return tensor_multiply(double_bracket(tbl, a, b));
}

Tensor2 single_bracket_on_tensor(const BracketTable& tbl, const NCElement& a, const Tensor2& t) {
    Tensor2 r(tbl.ctx());
    const auto& ctx = *tbl.ctx();
    for (const auto& [wa, ca] : a.terms()) {
        NCElement aw(tbl.ctx(), wa, ca);
        long da = ctx.degree(wa);
        for (const auto& [k, c] : t.terms()) {
            NCElement u(tbl.ctx(), k[0]);
            NCElement v(tbl.ctx(), k[1]);
            r += tensor_of(single_bracket(tbl, aw, u), v) * c;
            long s = da * ctx.degree(k[0]);
            r += tensor_of(u, single_bracket(tbl, aw, v)) * (c * parity_sign(s));
        }
    }
    return r;
}

void GenDifferential::set(int arrow, NCElement image) {
    if (image.is_zero())
        images_.erase(arrow);
    else
        images_[arrow] = std::move(image);
}

const NCElement& GenDifferential::of_arrow(int arrow) const {
    auto it = images_.find(arrow);
    if (it != images_.end()) return it->second;
    return zero_;
}

bool GenDifferential::is_set(int arrow) const { return images_.count(arrow) != 0; }

NCElement GenDifferential::apply_word(const Word& w) const {
    const auto& ctx = *ctx_;
    NCElement r(ctx_);
    long prefix_deg = 0;
    for (size_t i = 0; i < w.toks.size(); ++i) {
        Token t = w.toks[i];
        NCElement dmid(ctx_);
        if (!token_is_inverse(t)) {
            dmid = of_arrow(arrow_of_token(t));
            if (dmid.ctx() && dmid.ctx() != ctx_) dmid = transport(dmid, ctx_);
        } else {
            const NCElement& dx = of_arrow(arrow_of_token(t));
            if (!dx.is_zero()) {
                NCElement xinv = token_elem(ctx_, t);
                dmid = -(xinv * (dx.ctx() == ctx_ ? dx : transport(dx, ctx_)) * xinv);
            }
        }
        if (!dmid.is_zero()) {
            NCElement left(ctx_), right(ctx_);
            if (i == 0)
                left.add_term(Word{ctx.token_target(t), {}}, Rat(1));
            else
                left.add_term(ctx.word_of_tokens(
                                  std::vector<Token>(w.toks.begin(), w.toks.begin() + i)),
                              Rat(1));
            if (i + 1 == w.toks.size())
                right.add_term(Word{ctx.token_source(t), {}}, Rat(1));
            else
                right.add_term(ctx.word_of_tokens(
                                   std::vector<Token>(w.toks.begin() + i + 1, w.toks.end())),
                               Rat(1));
            r += (left * dmid * right) * parity_sign(prefix_deg);
        }
        prefix_deg += ctx.token_degree(t);
    }
    return r;
}

NCElement GenDifferential::apply(const NCElement& a) const {
    NCElement r(ctx_);
    for (const auto& [w, c] : a.terms()) r += apply_word(w) * c;
    return r;
}

Tensor2 GenDifferential::apply(const Tensor2& t) const {
    Tensor2 r(ctx_);
    const auto& ctx = *ctx_;
    for (const auto& [k, c] : t.terms()) {
        NCElement p(ctx_, k[0]);
        NCElement q(ctx_, k[1]);
        r += tensor_of(apply_word(k[0]), q) * c;
        r += tensor_of(p, apply_word(k[1])) * (c * parity_sign(ctx.degree(k[0])));
    }
    return r;
}

std::vector<Word> words_up_to_length(const CtxPtr& ctx, int max_len) {
    std::vector<Word> out;
    for (int v = 0; v < ctx->vertex_count(); ++v) out.push_back(Word{v, {}});
    std::vector<Token> toks;
    for (int a = 0; a < ctx->arrow_count(); ++a) {
        toks.push_back(token_of_arrow(a));
        if (ctx->quiver().arrows[a].invertible) toks.push_back(token_of_inverse(a));
    }
    // Grow words by appending a composable token on the right.
    std::vector<Word> frontier;
    for (Token t : toks) frontier.push_back(Word{ctx->token_source(t), {t}});
    for (int len = 1; len <= max_len; ++len) {
        out.insert(out.end(), frontier.begin(), frontier.end());
        if (len == max_len) break;
        std::vector<Word> next;
        for (const Word& w : frontier) {
            for (Token t : toks) {
                if (ctx->token_target(t) != ctx->source(w)) continue;
                Token last = w.toks.back();
                if (arrow_of_token(last) == arrow_of_token(t) &&
                    token_is_inverse(last) != token_is_inverse(t))
                    continue;  // reducible pair
                Word nw = w;
                nw.toks.push_back(t);
                nw.vertex = ctx->token_source(t);
                next.push_back(std::move(nw));
            }
        }
        frontier = std::move(next);
    }
    return out;
}

std::vector<Word> words_of_bidegree(const CtxPtr& ctx, int degree, int weight) {
    if (weight < 0) return {};
    for (const auto& a : ctx->quiver().arrows)
        if (a.invertible)
            throw Error("bidegree word slices are infinite over localized arrows");
    int sign0 = 0;  // common degree sign of weight-0 tokens
    int max_abs_deg = 0;
    for (const auto& a : ctx->quiver().arrows) {
        max_abs_deg = std::max(max_abs_deg, std::abs(a.degree));
        if (a.weight == 0) {
            if (a.degree == 0) throw Error("weight-0 degree-0 arrow makes slices infinite");
            int s = a.degree > 0 ? 1 : -1;
            if (sign0 == 0)
                sign0 = s;
            else if (sign0 != s)
                throw Error("mixed-sign weight-0 arrows make slices infinite");
        }
    }
    int max_len = weight + std::abs(degree) + weight * max_abs_deg + 1;
    std::vector<Word> out;
    if (degree == 0 && weight == 0)
        for (int v = 0; v < ctx->vertex_count(); ++v) out.push_back(Word{v, {}});
    std::vector<Token> toks;
    for (int a = 0; a < ctx->arrow_count(); ++a) toks.push_back(token_of_arrow(a));
    struct Frame {
        Word w;
        int deg, wt;
    };
    std::vector<Frame> stack;
    for (Token t : toks)
        stack.push_back({Word{ctx->token_source(t), {t}}, ctx->token_degree(t),
                         ctx->token_weight(t)});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (f.wt > weight) continue;
        if (static_cast<int>(f.w.length()) > max_len) continue;
        if (f.deg == degree && f.wt == weight) out.push_back(f.w);
        if (static_cast<int>(f.w.length()) == max_len) continue;
        for (Token t : toks) {
            if (ctx->token_target(t) != ctx->source(f.w)) continue;
            Word nw = f.w;
            nw.toks.push_back(t);
            nw.vertex = ctx->token_source(t);
            stack.push_back({std::move(nw), f.deg + ctx->token_degree(t),
                             f.wt + ctx->token_weight(t)});
        }
    }
    std::sort(out.begin(), out.end(), [](const Word& a, const Word& b) {
        return WordLess()(a, b);
    });
    return out;
}

namespace {

std::string pair_name(const CtxPtr& ctx, Token g, Token h) {
    return "(" + ctx->token_name(g) + "," + ctx->token_name(h) + ")";
}

std::string triple_name(const NCElement& a, const NCElement& b, const NCElement& c) {
    return "(" + a.str() + "; " + b.str() + "; " + c.str() + ")";
}

} // namespace

AxiomReport verify_axioms(const BracketTable& tbl, int max_word_len,
                          const GenDifferential* diff, int jobs) {
    const CtxPtr& ctx = tbl.ctx();
    AxiomReport rep;
    auto fail = [&](const std::string& check, const std::string& witness) {
        rep.passed = false;
        if (rep.issues.size() < 16) rep.issues.push_back({check, witness});
    };

    std::vector<Token> gens;
    for (int a = 0; a < ctx->arrow_count(); ++a) {
        gens.push_back(token_of_arrow(a));
        if (ctx->quiver().arrows[a].invertible) gens.push_back(token_of_inverse(a));
    }
    std::vector<NCElement> gen_elems;
    for (Token t : gens) gen_elems.push_back(token_elem(ctx, t));

    // Cyclic antisymmetry on generator pairs.
    for (size_t i = 0; i < gens.size(); ++i)
        for (size_t j = 0; j < gens.size(); ++j) {
            Tensor2 lhs = tbl.pair_value(gens[i], gens[j]);
            long s = static_cast<long>(ctx->token_degree(gens[i])) * ctx->token_degree(gens[j]);
            Tensor2 rhs = tensor_permute<2>({1, 0}, tbl.pair_value(gens[j], gens[i])) *
                          (-parity_sign(s));
            if (lhs != rhs) fail("cyclic-antisymmetry", pair_name(ctx, gens[i], gens[j]));
        }

    // S-linearity: bracket with idempotents vanishes.
    for (int v = 0; v < ctx->vertex_count(); ++v) {
        NCElement e = ctx->idempotent(v);
        for (const auto& g : gen_elems) {
            if (!double_bracket(tbl, g, e).is_zero() || !double_bracket(tbl, e, g).is_zero())
                fail("s-linearity", "e_" + ctx->quiver().vertices[v]);
        }
    }

    // Triple sweeps run in parallel over tuples; issues merge back in
    // tuple-lexicographic order.
    auto check_triples = [&](const std::vector<NCElement>& elems) {
        size_t n = elems.size();
        std::vector<std::string> bad(n * n * n);
        parallel_for(jobs, static_cast<int>(n * n * n), [&](int idx) {
            const NCElement& a = elems[idx / (n * n)];
            const NCElement& b = elems[(idx / n) % n];
            const NCElement& c = elems[idx % n];
            if (!triple_bracket(tbl, a, b, c).is_zero()) {
                bad[idx] = "double-jacobi\t" + triple_name(a, b, c);
                return;
            }
            // Almost-Jacobi: holds for any double bracket.
            long da = *a.degree(), db = *b.degree();
            Tensor2 lhs = single_bracket_on_tensor(tbl, a, double_bracket(tbl, b, c));
            lhs -= double_bracket(tbl, single_bracket(tbl, a, b), c);
            lhs -= double_bracket(tbl, b, single_bracket(tbl, a, c)) * parity_sign(da * db);
            Tensor3 t1 = triple_bracket(tbl, a, b, c);
            Tensor3 t2 = triple_bracket(tbl, b, a, c);
            Tensor2 rhs(ctx);
            for (const auto& [k, cf] : t1.terms())
                if (auto w = ctx->compose(k[0], k[1])) rhs.add_term({*w, k[2]}, cf);
            for (const auto& [k, cf] : t2.terms())
                if (auto w = ctx->compose(k[1], k[2]))
                    rhs.add_term({k[0], *w}, -parity_sign(da * db) * cf);
            if (lhs != rhs) bad[idx] = "almost-jacobi\t" + triple_name(a, b, c);
        });
        rep.triples_checked += static_cast<int>(n * n * n);
        for (const auto& msg : bad) {
            if (msg.empty()) continue;
            auto tab = msg.find('\t');
            fail(msg.substr(0, tab), msg.substr(tab + 1));
        }
    };
    check_triples(gen_elems);

    // Deterministic sample of longer words.
    std::vector<Word> words = words_up_to_length(ctx, max_word_len);
    std::vector<NCElement> sample;
    std::mt19937_64 rng(0x5eed);
    std::vector<size_t> idx(words.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    for (size_t i = 0; i < idx.size() && sample.size() < 8; ++i) {
        const Word& w = words[idx[i]];
        if (w.is_idempotent()) continue;
        sample.push_back(NCElement(ctx, w));
    }
    for (const auto& u : sample)
        for (const auto& v : sample) {
            ++rep.words_checked;
            Tensor2 lhs = double_bracket(tbl, u, v);
            long s = static_cast<long>(*u.degree()) * (*v.degree());
            Tensor2 rhs = tensor_permute<2>({1, 0}, double_bracket(tbl, v, u)) *
                          (-parity_sign(s));
            if (lhs != rhs) fail("cyclic-antisymmetry-words", u.str() + " ; " + v.str());
        }
    if (!sample.empty()) {
        std::vector<NCElement> little(sample.begin(),
                                      sample.begin() + std::min<size_t>(4, sample.size()));
        check_triples(little);
    }

    if (diff) {
        for (const auto& u : gen_elems)
            for (const auto& v : gen_elems) {
                Tensor2 lhs = diff->apply(double_bracket(tbl, u, v));
                Tensor2 rhs = double_bracket(tbl, diff->apply(u), v);
                rhs += double_bracket(tbl, u, diff->apply(v)) * parity_sign(*u.degree());
                if (lhs != rhs)
                    fail("differential-compatibility", u.str() + " ; " + v.str());
            }
    }
    return rep;
}

std::vector<std::pair<int, int>> dual_pairs(const Quiver& q) {
    std::vector<std::pair<int, int>> pairs;
    std::vector<bool> used(q.arrows.size(), false);
    for (size_t i = 0; i < q.arrows.size(); ++i) {
        const std::string& n = q.arrows[i].name;
        if (!n.empty() && n.back() == '*') continue;
        if (!q.has_arrow(n + "*")) throw Error("arrow '" + n + "' has no dual '" + n + "*'");
        int j = q.arrow_index(n + "*");
        pairs.push_back({static_cast<int>(i), j});
        used[i] = used[j] = true;
    }
    for (size_t i = 0; i < q.arrows.size(); ++i)
        if (!used[i]) throw Error("starred arrow '" + q.arrows[i].name + "' has no base arrow");
    return pairs;
}

BracketTable cotangent_table_on(const CtxPtr& ctx, const std::vector<std::pair<int, int>>& pairs,
                                int factor) {
    BracketTable tbl(ctx);
    std::vector<int> gens;
    for (auto [x, xs] : pairs) {
        gens.push_back(x);
        gens.push_back(xs);
    }
    for (int g : gens)
        for (int h : gens) tbl.set(g, h, Tensor2(ctx));
    for (auto [x, xs] : pairs) {
        Token t = token_of_arrow(x);
        Tensor2 val(ctx);
        val.add_term({Word{ctx->token_source(t), {}}, Word{ctx->token_target(t), {}}}, Rat(1));
        tbl.set(x, xs, std::move(val));
        // ⟨⟨x*,x⟩⟩ = −e_{t(x)} ⊗ e_{s(x)} by cyclic antisymmetry.
        Tensor2 rev(ctx);
        rev.add_term({Word{ctx->token_target(t), {}}, Word{ctx->token_source(t), {}}}, Rat(-1));
        tbl.set(xs, x, std::move(rev));
    }
    for (int g : gens) tbl.assign_factor(g, factor);
    return tbl;
}

BracketTable cotangent_table(const CtxPtr& ctx) {
    for (const auto& a : ctx->quiver().arrows)
        if (a.degree != 0)
            throw Error("cotangent table requires a doubled quiver (arrow '" + a.name +
                        "' has nonzero degree)");
    return cotangent_table_on(ctx, dual_pairs(ctx->quiver()), 0);
}

BracketTable gauge_table_on(const CtxPtr& ctx, const std::vector<int>& loops, int factor) {
    BracketTable tbl(ctx);
    for (int g : loops)
        for (int h : loops) tbl.set(g, h, Tensor2(ctx));
    for (int g : loops) {
        Token t = token_of_arrow(g);
        int v = ctx->token_source(t);
        if (ctx->token_target(t) != v) throw Error("gauge generator must be a loop");
        Tensor2 val(ctx);
        val.add_term({Word{v, {t}}, Word{v, {}}}, Rat(1));
        val.add_term({Word{v, {}}, Word{v, {t}}}, Rat(-1));
        tbl.set(g, g, std::move(val));
    }
    for (int g : loops) tbl.assign_factor(g, factor);
    return tbl;
}

BracketTable gauge_table(const CtxPtr& ctx) {
    const Quiver& q = ctx->quiver();
    std::vector<int> loops(q.vertices.size(), -1);
    if (q.arrows.size() != q.vertices.size())
        throw Error("gauge table requires exactly one loop per vertex");
    for (size_t i = 0; i < q.arrows.size(); ++i) {
        const Arrow& a = q.arrows[i];
        if (a.source != a.target || a.degree != 0)
            throw Error("gauge table requires degree-0 loops");
        int v = q.vertex_index(a.source);
        if (loops[v] != -1) throw Error("gauge table requires one loop per vertex");
        loops[v] = static_cast<int>(i);
    }
    return gauge_table_on(ctx, loops, 0);
}

BracketTable brst_pairing_on(const CtxPtr& ctx, const std::vector<int>& theta,
                             const std::vector<int>& eta, int factor) {
    if (theta.size() != eta.size() ||
        theta.size() != static_cast<size_t>(ctx->vertex_count()))
        throw Error("brst pairing needs one theta and one eta loop per vertex");
    BracketTable tbl(ctx);
    std::vector<int> gens;
    gens.insert(gens.end(), theta.begin(), theta.end());
    gens.insert(gens.end(), eta.begin(), eta.end());
    for (int g : gens)
        for (int h : gens) tbl.set(g, h, Tensor2(ctx));
    for (size_t i = 0; i < theta.size(); ++i) {
        Token t = token_of_arrow(theta[i]);
        int v = ctx->token_source(t);
        Tensor2 val(ctx);
        val.add_term({Word{v, {}}, Word{v, {}}}, Rat(1));
        tbl.set(theta[i], eta[i], std::move(val));
        // |ϑ||η| = −1, so the reversed entry keeps the plus sign.
        Tensor2 rev(ctx);
        rev.add_term({Word{v, {}}, Word{v, {}}}, Rat(1));
        tbl.set(eta[i], theta[i], std::move(rev));
    }
    for (int g : gens) tbl.assign_factor(g, factor);
    return tbl;
}

BracketTable brst_pairing_table(const CtxPtr& ctx) {
    const Quiver& q = ctx->quiver();
    std::vector<int> theta(q.vertices.size(), -1), eta(q.vertices.size(), -1);
    for (size_t i = 0; i < q.arrows.size(); ++i) {
        const Arrow& a = q.arrows[i];
        if (a.source != a.target)
            throw Error("brst pairing table requires loops only");
        int v = q.vertex_index(a.source);
        if (a.degree == 1 && theta[v] == -1)
            theta[v] = static_cast<int>(i);
        else if (a.degree == -1 && eta[v] == -1)
            eta[v] = static_cast<int>(i);
        else
            throw Error("brst pairing table requires one degree-1 and one degree--1 loop per vertex");
    }
    for (size_t v = 0; v < q.vertices.size(); ++v)
        if (theta[v] == -1 || eta[v] == -1)
            throw Error("brst pairing table: missing loop at vertex " + q.vertices[v]);
    return brst_pairing_on(ctx, theta, eta, 0);
}

BracketTable free_product(const BracketTable& a, const BracketTable& b) {
    if (a.ctx() != b.ctx()) throw Error("free_product requires a shared context");
    int shift = 0;
    for (int g = 0; g < a.ctx()->arrow_count(); ++g)
        shift = std::max(shift, a.factor_of(g) + 1);
    BracketTable r(a.ctx());
    std::vector<bool> in_a(a.ctx()->arrow_count(), false);
    for (const auto& [key, val] : a.entries()) {
        r.set(key.first, key.second, val);
        in_a[key.first] = in_a[key.second] = true;
    }
    for (const auto& [key, val] : b.entries()) {
        if (in_a[key.first] || in_a[key.second])
            throw Error("free_product factors must have disjoint generators");
        r.set(key.first, key.second, val);
    }
    for (int g = 0; g < a.ctx()->arrow_count(); ++g) {
        if (a.factor_of(g) >= 0) r.assign_factor(g, a.factor_of(g));
        if (b.factor_of(g) >= 0) r.assign_factor(g, b.factor_of(g) + shift);
    }
    return r;
}

NCElement HamiltonianData::total() const {
    NCElement t(ctx);
    for (const auto& d : delta_i) t += d;
    return t;
}

HamiltonianData cotangent_moment(const CtxPtr& ctx) {
    const Quiver& q = ctx->quiver();
    NCElement delta(ctx);
    bool any = false;
    for (size_t i = 0; i < q.arrows.size(); ++i) {
        const std::string& n = q.arrows[i].name;
        if (n.empty() || n.back() == '*') continue;
        if (!q.has_arrow(n + "*")) continue;
        any = true;
        NCElement x = ctx->generator(static_cast<int>(i));
        NCElement xs = ctx->generator(n + "*");
        delta += x * xs - xs * x;
    }
    if (!any) throw Error("no dual pairs found for the cotangent moment");
    return moment_from_total(ctx, delta);
}

HamiltonianData moment_from_total(const CtxPtr& ctx, const NCElement& delta) {
    HamiltonianData ham;
    ham.ctx = ctx;
    for (int v = 0; v < ctx->vertex_count(); ++v)
        ham.delta_i.push_back(ctx->idempotent(v) * delta * ctx->idempotent(v));
    NCElement sum(ctx);
    for (const auto& d : ham.delta_i) sum += d;
    if (sum != delta)
        throw Error("gauge element is not supported on diagonal blocks e_i A e_i");
    return ham;
}

HamiltonianReport check_hamiltonian(const BracketTable& tbl, const HamiltonianData& ham) {
    const CtxPtr& ctx = tbl.ctx();
    HamiltonianReport rep;
    auto fail = [&](const std::string& check, const std::string& witness) {
        rep.passed = false;
        if (rep.issues.size() < 16) rep.issues.push_back({check, witness});
    };
    for (int v = 0; v < ctx->vertex_count(); ++v) {
        const NCElement& di = ham.delta_i[v];
        if (auto d = di.degree(); d && *d != 0) fail("gauge-degree", "delta_" + std::to_string(v));
        for (const auto& [w, c] : di.terms())
            if (ctx->source(w) != v || ctx->target(w) != v)
                fail("gauge-support", ctx->to_string(w));
    }
    std::vector<Word> test_words;
    for (const Word& w : words_up_to_length(ctx, 2))
        if (!w.is_idempotent()) test_words.push_back(w);
    NCElement dsum = ham.total();
    for (int v = 0; v < ctx->vertex_count(); ++v) {
        NCElement e = ctx->idempotent(v);
        for (const Word& w : test_words) {
            NCElement g(ctx, w);
            Tensor2 lhs = double_bracket(tbl, ham.delta_i[v], g);
            Tensor2 rhs = tensor_of(g * e, e) - tensor_of(e, e * g);
            if (lhs != rhs)
                fail("hamilton-identity",
                     "delta_" + ctx->quiver().vertices[v] + " vs " + ctx->to_string(w));
        }
    }
    // Total form: ⟨⟨δ,a⟩⟩ = Σ_i a e_i⊗e_i − e_i⊗e_i a.
    for (const Word& w : test_words) {
        if (w.length() > 1) continue;
        NCElement g(ctx, w);
        Tensor2 rhs(ctx);
        for (int v = 0; v < ctx->vertex_count(); ++v) {
            NCElement e = ctx->idempotent(v);
            rhs += tensor_of(g * e, e) - tensor_of(e, e * g);
        }
        if (double_bracket(tbl, dsum, g) != rhs) fail("hamilton-total", ctx->to_string(w));
    }
    return rep;
}

bool commutator_membership(const NCElement& a, int weight_bound) {
    if (a.is_zero()) return true;
    const CtxPtr& ctx = a.ctx();
    auto deg = a.degree();
    auto wt = a.weight();
    if (!deg || !wt) throw Error("commutator_membership: bihomogeneous element required");
    if (weight_bound < 0 || *wt > weight_bound)
        throw Error("commutator_membership: weight bound below the element weight");
    int d = *deg, w = *wt;

    std::vector<Word> basis = words_of_bidegree(ctx, d, w);
    std::map<Word, int, WordLess> index;
    for (size_t i = 0; i < basis.size(); ++i) index[basis[i]] = static_cast<int>(i);

    // Columns: commutators [u,v] over split bidegrees; rows: target words.
    std::vector<std::vector<Rat>> cols;
    int max_abs_deg = 1;
    for (const auto& ar : ctx->quiver().arrows)
        max_abs_deg = std::max(max_abs_deg, std::abs(ar.degree));
    int dlo = d - (std::abs(d) + w * max_abs_deg + 1);
    int dhi = -dlo + d;
    for (int wu = 0; wu <= w; ++wu) {
        for (int du = dlo; du <= dhi; ++du) {
            std::vector<Word> us = words_of_bidegree(ctx, du, wu);
            if (us.empty()) continue;
            std::vector<Word> vs = words_of_bidegree(ctx, d - du, w - wu);
            for (const Word& u : us)
                for (const Word& v : vs) {
                    NCElement c =
                        graded_commutator(NCElement(ctx, u), NCElement(ctx, v));
                    if (c.is_zero()) continue;
                    std::vector<Rat> col(basis.size(), Rat(0));
                    for (const auto& [word, cf] : c.terms()) col[index.at(word)] = cf;
                    cols.push_back(std::move(col));
                }
        }
    }
    std::vector<Rat> target(basis.size(), Rat(0));
    for (const auto& [word, cf] : a.terms()) target[index.at(word)] = cf;

    // Membership: eliminate columns against the target.
    size_t rows = basis.size();
    std::vector<std::vector<Rat>> mat(rows);
    for (size_t r = 0; r < rows; ++r) {
        mat[r].reserve(cols.size() + 1);
        for (const auto& c : cols) mat[r].push_back(c[r]);
        mat[r].push_back(target[r]);
    }
    size_t ncols = cols.size();
    size_t lead = 0;
    for (size_t col = 0; col < ncols && lead < rows; ++col) {
        size_t piv = lead;
        while (piv < rows && mat[piv][col] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(mat[piv], mat[lead]);
        Rat inv = 1 / mat[lead][col];
        for (size_t j = col; j <= ncols; ++j) mat[lead][j] *= inv;
        for (size_t r = 0; r < rows; ++r) {
            if (r == lead || mat[r][col] == 0) continue;
            Rat f = mat[r][col];
            for (size_t j = col; j <= ncols; ++j) mat[r][j] -= f * mat[lead][j];
        }
        ++lead;
    }
    for (size_t r = lead; r < rows; ++r)
        if (mat[r][ncols] != 0) return false;
    // Rows above lead may still have a nonzero tail with all-zero column part.
    for (size_t r = 0; r < rows; ++r) {
        bool allzero = true;
        for (size_t j = 0; j < ncols; ++j)
            if (mat[r][j] != 0) {
                allzero = false;
                break;
            }
        if (allzero && mat[r][ncols] != 0) return false;
    }
    return true;
}

GenDifferential charge_differential(const BracketTable& tbl, const Charge& charge) {
    const CtxPtr& ctx = tbl.ctx();
    const NCElement& gamma = charge.gamma;
    bool localized = false;
    for (const auto& a : ctx->quiver().arrows) localized |= a.invertible;
    if (!gamma.is_zero()) {
        auto d = gamma.degree();
        if (!d || *d != -1) throw Error("charge must be homogeneous of degree -1");
        // Over localized contexts the commutator span has no finite slices;
        // the d² = 0 sweep below is the full certificate there, since d² is
        // itself a derivation.
        if (!localized) {
            NCElement sq = single_bracket(tbl, gamma, gamma);
            // Split into bihomogeneous components for the membership test.
            std::map<std::pair<int, int>, NCElement> comps;
            for (const auto& [w, c] : sq.terms()) {
                auto key = std::make_pair(ctx->degree(w), ctx->weight(w));
                auto it = comps.find(key);
                if (it == comps.end()) it = comps.emplace(key, NCElement(ctx)).first;
                it->second.add_term(w, c);
            }
            for (const auto& [key, comp] : comps)
                if (!commutator_membership(comp, key.second))
                    throw Error("{gamma,gamma} is not in the graded commutator span");
        }
    }
    GenDifferential diff(ctx);
    for (int a = 0; a < ctx->arrow_count(); ++a)
        diff.set(a, single_bracket(tbl, gamma, ctx->generator(a)));
    for (int a = 0; a < ctx->arrow_count(); ++a)
        if (!diff.apply(diff.apply(ctx->generator(a))).is_zero())
            throw Error("charge differential does not square to zero on '" +
                        ctx->quiver().arrows[a].name + "'");
    return diff;
}

} // namespace ncpr
