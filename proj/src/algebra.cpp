#include "ncpr/algebra.hpp"

#include <sstream>

namespace ncpr {

std::shared_ptr<const AlgebraContext> AlgebraContext::make(Quiver q) {
    q.validate();
    auto ctx = std::shared_ptr<AlgebraContext>(new AlgebraContext(std::move(q)));
    for (const auto& a : ctx->q_.arrows) {
        ctx->src_.push_back(ctx->q_.vertex_index(a.source));
        ctx->tgt_.push_back(ctx->q_.vertex_index(a.target));
    }
    return ctx;
}

int AlgebraContext::token_source(Token t) const {
    int a = arrow_of_token(t);
    return token_is_inverse(t) ? tgt_[a] : src_[a];
}

int AlgebraContext::token_target(Token t) const {
    int a = arrow_of_token(t);
    return token_is_inverse(t) ? src_[a] : tgt_[a];
}

int AlgebraContext::token_degree(Token t) const {
    // Only degree-0 arrows are invertible, so inverses are degree 0 too.
    return q_.arrows[arrow_of_token(t)].degree;
}

int AlgebraContext::token_weight(Token t) const {
    int w = q_.arrows[arrow_of_token(t)].weight;
    return token_is_inverse(t) ? -w : w;
}

std::string AlgebraContext::token_name(Token t) const {
    const std::string& n = q_.arrows[arrow_of_token(t)].name;
    return token_is_inverse(t) ? n + "^-1" : n;
}

int AlgebraContext::source(const Word& w) const {
    return w.toks.empty() ? w.vertex : token_source(w.toks.back());
}

int AlgebraContext::target(const Word& w) const {
    return w.toks.empty() ? w.vertex : token_target(w.toks.front());
}

int AlgebraContext::degree(const Word& w) const {
    int d = 0;
    for (Token t : w.toks) d += token_degree(t);
    return d;
}

int AlgebraContext::weight(const Word& w) const {
    int d = 0;
    for (Token t : w.toks) d += token_weight(t);
    return d;
}

Word AlgebraContext::word_of_tokens(std::vector<Token> toks, int vertex_if_empty) const {
    // Validate composability and reduce inverse pairs with a stack; the
    // reduction is confluent since every rule erases an adjacent pair.
    std::vector<Token> out;
    for (Token t : toks) {
        int a = arrow_of_token(t);
        if (token_is_inverse(t) && !q_.arrows[a].invertible)
            throw Error("arrow '" + q_.arrows[a].name + "' is not invertible");
        if (!out.empty() && token_source(out.back()) != token_target(t))
            throw Error("incomposable tokens '" + token_name(out.back()) + "'.'" +
                        token_name(t) + "'");
        if (!out.empty() && arrow_of_token(out.back()) == a &&
            token_is_inverse(out.back()) != token_is_inverse(t)) {
            out.pop_back();
        } else {
            out.push_back(t);
        }
    }
    if (out.empty()) {
        int v = toks.empty() ? vertex_if_empty : token_target(toks.front());
        return Word{v, {}};
    }
    return Word{token_source(out.back()), std::move(out)};
}

std::optional<Word> AlgebraContext::compose(const Word& a, const Word& b) const {
    if (source(a) != target(b)) return std::nullopt;
    if (a.toks.empty()) return b;
    if (b.toks.empty()) return a;
    // Junction reduction: peel matching inverse pairs around the seam.
    size_t i = a.toks.size();
    size_t j = 0;
    while (i > 0 && j < b.toks.size()) {
        Token left = a.toks[i - 1];
        Token right = b.toks[j];
        if (arrow_of_token(left) == arrow_of_token(right) &&
            token_is_inverse(left) != token_is_inverse(right)) {
            --i;
            ++j;
        } else {
            break;
        }
    }
    std::vector<Token> toks(a.toks.begin(), a.toks.begin() + i);
    toks.insert(toks.end(), b.toks.begin() + j, b.toks.end());
    if (toks.empty()) return Word{source(b), {}};
    return Word{token_source(toks.back()), std::move(toks)};
}

std::string AlgebraContext::to_string(const Word& w) const {
    if (w.toks.empty()) return "e_" + q_.vertices[w.vertex];
    std::string s;
    for (size_t i = 0; i < w.toks.size(); ++i) {
        if (i) s += ".";
        s += token_name(w.toks[i]);
    }
    return s;
}

NCElement AlgebraContext::zero() const { return NCElement(shared_from_this()); }

NCElement AlgebraContext::unit() const {
    NCElement e(shared_from_this());
    for (int v = 0; v < vertex_count(); ++v) e.add_term(Word{v, {}}, Rat(1));
    return e;
}

NCElement AlgebraContext::idempotent(int vertex) const {
    if (vertex < 0 || vertex >= vertex_count()) throw Error("vertex index out of range");
    return NCElement(shared_from_this(), Word{vertex, {}});
}

NCElement AlgebraContext::idempotent(const std::string& vertex) const {
    return idempotent(q_.vertex_index(vertex));
}

NCElement AlgebraContext::generator(int arrow) const {
    if (arrow < 0 || arrow >= arrow_count()) throw Error("arrow index out of range");
    Token t = token_of_arrow(arrow);
    return NCElement(shared_from_this(), Word{token_source(t), {t}});
}

NCElement AlgebraContext::generator(const std::string& arrow) const {
    return generator(q_.arrow_index(arrow));
}

NCElement AlgebraContext::inverse(int arrow) const {
    if (!q_.arrows[arrow].invertible)
        throw Error("arrow '" + q_.arrows[arrow].name + "' is not invertible");
    Token t = token_of_inverse(arrow);
    return NCElement(shared_from_this(), Word{token_source(t), {t}});
}

NCElement AlgebraContext::inverse(const std::string& arrow) const {
    return inverse(q_.arrow_index(arrow));
}

NCElement::NCElement(CtxPtr ctx, const Word& w, const Rat& c) : ctx_(std::move(ctx)) {
    add_term(w, c);
}

void NCElement::add_term(const Word& w, const Rat& c) {
    if (c == 0) return;
    auto it = terms_.find(w);
    if (it == terms_.end()) {
        terms_.emplace(w, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

NCElement& NCElement::operator+=(const NCElement& o) {
    if (!ctx_) ctx_ = o.ctx_;
    else if (o.ctx_ && o.ctx_ != ctx_) throw Error("mixed algebra contexts");
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
}

NCElement& NCElement::operator-=(const NCElement& o) {
    if (!ctx_) ctx_ = o.ctx_;
    else if (o.ctx_ && o.ctx_ != ctx_) throw Error("mixed algebra contexts");
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
}

NCElement& NCElement::operator*=(const Rat& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [w, v] : terms_) v *= c;
    return *this;
}

NCElement NCElement::operator-() const {
    NCElement r(ctx_);
    for (const auto& [w, c] : terms_) r.terms_.emplace(w, -c);
    return r;
}

NCElement operator*(const NCElement& a, const NCElement& b) {
    if (a.ctx_ && b.ctx_ && a.ctx_ != b.ctx_) throw Error("mixed algebra contexts");
    CtxPtr ctx = a.ctx_ ? a.ctx_ : b.ctx_;
    NCElement r(ctx);
    for (const auto& [wa, ca] : a.terms_)
        for (const auto& [wb, cb] : b.terms_)
            if (auto w = ctx->compose(wa, wb)) r.add_term(*w, ca * cb);
    return r;
}

std::optional<int> NCElement::degree() const {
    if (terms_.empty()) return std::nullopt;
    int d = ctx_->degree(terms_.begin()->first);
    for (const auto& [w, c] : terms_)
        if (ctx_->degree(w) != d) return std::nullopt;
    return d;
}

std::optional<int> NCElement::weight() const {
    if (terms_.empty()) return std::nullopt;
    int d = ctx_->weight(terms_.begin()->first);
    for (const auto& [w, c] : terms_)
        if (ctx_->weight(w) != d) return std::nullopt;
    return d;
}

std::string NCElement::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        if (c != 1) os << rat_str(c) << "*";
        os << ctx_->to_string(w);
    }
    return os.str();
}

NCElement graded_commutator(const NCElement& a, const NCElement& b) {
    auto da = a.degree(), db = b.degree();
    if (a.is_zero() || b.is_zero()) return a.ctx() ? NCElement(a.ctx()) : NCElement(b.ctx());
    if (!da || !db) throw Error("graded_commutator needs homogeneous arguments");
    Rat sign = ((*da) * (*db)) % 2 != 0 ? Rat(-1) : Rat(1);
    return a * b - sign * (b * a);
}

Word transport_word(const Word& w, const AlgebraContext& small, const AlgebraContext& big) {
    if (w.toks.empty()) {
        int v = big.quiver().vertex_index(small.quiver().vertices[w.vertex]);
        return Word{v, {}};
    }
    std::vector<Token> toks;
    toks.reserve(w.toks.size());
    for (Token t : w.toks) {
        int a = big.quiver().arrow_index(small.quiver().arrows[arrow_of_token(t)].name);
        toks.push_back(token_is_inverse(t) ? token_of_inverse(a) : token_of_arrow(a));
    }
    return Word{big.token_source(toks.back()), std::move(toks)};
}

NCElement transport(const NCElement& e, const CtxPtr& big) {
    if (!e.ctx()) return NCElement(big);
    NCElement r(big);
    for (const auto& [w, c] : e.terms())
        r.add_term(transport_word(w, *e.ctx(), *big), c);
    return r;
}

template <size_t N>
std::string TensorElem<N>::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        if (c != 1) os << rat_str(c) << "*";
        for (size_t i = 0; i < N; ++i) {
            if (i) os << " (x) ";
            os << ctx_->to_string(k[i]);
        }
    }
    return os.str();
}

template std::string TensorElem<2>::str() const;
template std::string TensorElem<3>::str() const;

template <size_t N>
TensorElem<N> tensor_permute(const std::array<int, N>& perm, const TensorElem<N>& t) {
    std::array<int, N> inv{};
    std::array<bool, N> seen{};
    for (size_t i = 0; i < N; ++i) {
        if (perm[i] < 0 || perm[i] >= static_cast<int>(N) || seen[perm[i]])
            throw Error("not a permutation");
        seen[perm[i]] = true;
        inv[perm[i]] = static_cast<int>(i);
    }
    const auto& ctx = *t.ctx();
    TensorElem<N> r(t.ctx());
    for (const auto& [k, c] : t.terms()) {
        typename TensorElem<N>::Key nk;
        std::array<int, N> deg;
        for (size_t i = 0; i < N; ++i) {
            nk[i] = k[inv[i]];
            deg[i] = ctx.degree(k[inv[i]]);
        }
        // s counts all swappings: pairs i<j whose preimages are inverted.
        long s = 0;
        for (size_t i = 0; i < N; ++i)
            for (size_t j = i + 1; j < N; ++j)
                if (inv[i] > inv[j]) s += static_cast<long>(deg[i]) * deg[j];
        r.add_term(nk, (s % 2 != 0) ? -c : c);
    }
    return r;
}

template TensorElem<2> tensor_permute<2>(const std::array<int, 2>&, const TensorElem<2>&);
template TensorElem<3> tensor_permute<3>(const std::array<int, 3>&, const TensorElem<3>&);

Tensor2 outer_left(const NCElement& a, const Tensor2& t) {
    Tensor2 r(t.ctx() ? t.ctx() : a.ctx());
    const auto& ctx = *r.ctx();
    for (const auto& [wa, ca] : a.terms())
        for (const auto& [k, c] : t.terms())
            if (auto w = ctx.compose(wa, k[0])) r.add_term({*w, k[1]}, ca * c);
    return r;
}

Tensor2 outer_right(const Tensor2& t, const NCElement& b) {
    Tensor2 r(t.ctx() ? t.ctx() : b.ctx());
    const auto& ctx = *r.ctx();
    for (const auto& [k, c] : t.terms())
        for (const auto& [wb, cb] : b.terms())
            if (auto w = ctx.compose(k[1], wb)) r.add_term({k[0], *w}, c * cb);
    return r;
}

Tensor2 inner_left(const NCElement& a, const Tensor2& t) {
    Tensor2 r(t.ctx() ? t.ctx() : a.ctx());
    const auto& ctx = *r.ctx();
    for (const auto& [wa, ca] : a.terms()) {
        long da = ctx.degree(wa);
        for (const auto& [k, c] : t.terms()) {
            if (auto w = ctx.compose(wa, k[1])) {
                long s = da * ctx.degree(k[0]);
                Rat coeff = ca * c;
                if (s % 2 != 0) coeff = -coeff;
                r.add_term({k[0], *w}, coeff);
            }
        }
    }
    return r;
}

Tensor2 inner_right(const Tensor2& t, const NCElement& b) {
    Tensor2 r(t.ctx() ? t.ctx() : b.ctx());
    const auto& ctx = *r.ctx();
    for (const auto& [wb, cb] : b.terms()) {
        long db = ctx.degree(wb);
        for (const auto& [k, c] : t.terms()) {
            if (auto w = ctx.compose(k[0], wb)) {
                long s = db * ctx.degree(k[1]);
                Rat coeff = c * cb;
                if (s % 2 != 0) coeff = -coeff;
                r.add_term({*w, k[1]}, coeff);
            }
        }
    }
    return r;
}

Tensor2 tensor_of(const NCElement& p, const NCElement& q) {
    Tensor2 r(p.ctx() ? p.ctx() : q.ctx());
    for (const auto& [wp, cp] : p.terms())
        for (const auto& [wq, cq] : q.terms()) r.add_term({wp, wq}, cp * cq);
    return r;
}

NCElement tensor_multiply(const Tensor2& t) {
    NCElement r(t.ctx());
    const auto& ctx = *t.ctx();
    for (const auto& [k, c] : t.terms())
        if (auto w = ctx.compose(k[0], k[1])) r.add_term(*w, c);
    return r;
}

} // namespace ncpr
