#pragma once

#include "ncpr/numeric.hpp"
#include "ncpr/quiver.hpp"

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace ncpr {

// Token encoding: arrow a -> 2a, formal inverse of a -> 2a+1.
using Token = int32_t;

inline Token token_of_arrow(int arrow) { return 2 * arrow; }
inline Token token_of_inverse(int arrow) { return 2 * arrow + 1; }
inline int arrow_of_token(Token t) { return t / 2; }
inline bool token_is_inverse(Token t) { return (t & 1) != 0; }

// A normalized path word. Tokens are listed left to right; paths compose
// right to left, so the rightmost token acts first. An empty token list is
// the idempotent e_vertex.
struct Word {
    int vertex = 0;
    std::vector<Token> toks;

    bool is_idempotent() const { return toks.empty(); }
    size_t length() const { return toks.size(); }

    friend bool operator==(const Word& a, const Word& b) {
        if (a.toks.empty() != b.toks.empty()) return false;
        if (a.toks.empty()) return a.vertex == b.vertex;
        return a.toks == b.toks;
    }
};

// Length-lexicographic word order; idempotents first, by vertex.
struct WordLess {
    bool operator()(const Word& a, const Word& b) const {
        if (a.toks.size() != b.toks.size()) return a.toks.size() < b.toks.size();
        if (a.toks.empty()) return a.vertex < b.vertex;
        return a.toks < b.toks;
    }
};

class NCElement;

// Immutable evaluation context for one graded path algebra, shared read-only
// across workers.
class AlgebraContext : public std::enable_shared_from_this<AlgebraContext> {
public:
    static std::shared_ptr<const AlgebraContext> make(Quiver q);

    const Quiver& quiver() const { return q_; }
    int vertex_count() const { return static_cast<int>(q_.vertices.size()); }
    int arrow_count() const { return static_cast<int>(q_.arrows.size()); }

    int token_source(Token t) const;
    int token_target(Token t) const;
    int token_degree(Token t) const;
    int token_weight(Token t) const;
    std::string token_name(Token t) const;

    int source(const Word& w) const;  // vertex index
    int target(const Word& w) const;
    int degree(const Word& w) const;
    int weight(const Word& w) const;

    // Concatenation w1 * w2 (w2 acts first) with inverse-pair reduction;
    // nullopt when the junction is incomposable.
    std::optional<Word> compose(const Word& a, const Word& b) const;

    Word word_of_tokens(std::vector<Token> toks, int vertex_if_empty = 0) const;

    std::string to_string(const Word& w) const;

    NCElement zero() const;
    NCElement unit() const;  // sum of all idempotents
    NCElement idempotent(int vertex) const;
    NCElement idempotent(const std::string& vertex) const;
    NCElement generator(int arrow) const;
    NCElement generator(const std::string& arrow) const;
    NCElement inverse(int arrow) const;
    NCElement inverse(const std::string& arrow) const;

private:
    explicit AlgebraContext(Quiver q) : q_(std::move(q)) {}
    Quiver q_;
    std::vector<int> src_, tgt_;  // per arrow, vertex indices
};

using CtxPtr = std::shared_ptr<const AlgebraContext>;

// Exact rational linear combination of words; zero coefficients never stored.
class NCElement {
public:
    NCElement() = default;
    explicit NCElement(CtxPtr ctx) : ctx_(std::move(ctx)) {}
    NCElement(CtxPtr ctx, const Word& w, const Rat& c = Rat(1));

    const CtxPtr& ctx() const { return ctx_; }
    const std::map<Word, Rat, WordLess>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Word& w, const Rat& c);

    NCElement& operator+=(const NCElement& o);
    NCElement& operator-=(const NCElement& o);
    NCElement& operator*=(const Rat& c);
    friend NCElement operator+(NCElement a, const NCElement& b) { return a += b; }
    friend NCElement operator-(NCElement a, const NCElement& b) { return a -= b; }
    friend NCElement operator*(NCElement a, const Rat& c) { return a *= c; }
    friend NCElement operator*(const Rat& c, NCElement a) { return a *= c; }
    NCElement operator-() const;

    // Algebra multiplication (bilinear, incomposable words vanish).
    friend NCElement operator*(const NCElement& a, const NCElement& b);

    friend bool operator==(const NCElement& a, const NCElement& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const NCElement& a, const NCElement& b) { return !(a == b); }

    // Homological degree / weight if homogeneous, nullopt otherwise
    // (zero is homogeneous of any degree; reported as nullopt).
    std::optional<int> degree() const;
    std::optional<int> weight() const;

    std::string str() const;

private:
    CtxPtr ctx_;
    std::map<Word, Rat, WordLess> terms_;
};

NCElement graded_commutator(const NCElement& a, const NCElement& b);

// Re-keys an element of a sub-context into a larger context matching vertex
// and arrow names.
NCElement transport(const NCElement& e, const CtxPtr& big);
Word transport_word(const Word& w, const AlgebraContext& small, const AlgebraContext& big);

// Element of A^{⊗N}, N = 2 or 3, with per-slot normalized words.
template <size_t N>
class TensorElem {
public:
    using Key = std::array<Word, N>;
    struct KeyLess {
        bool operator()(const Key& a, const Key& b) const {
            WordLess wl;
            for (size_t i = 0; i < N; ++i) {
                if (wl(a[i], b[i])) return true;
                if (wl(b[i], a[i])) return false;
            }
            return false;
        }
    };

    TensorElem() = default;
    explicit TensorElem(CtxPtr ctx) : ctx_(std::move(ctx)) {}

    const CtxPtr& ctx() const { return ctx_; }
    const std::map<Key, Rat, KeyLess>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Key& k, const Rat& c) {
        if (c == 0) return;
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    TensorElem& operator+=(const TensorElem& o) {
        if (!ctx_) ctx_ = o.ctx_;
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    TensorElem& operator-=(const TensorElem& o) {
        if (!ctx_) ctx_ = o.ctx_;
        for (const auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }
    TensorElem& operator*=(const Rat& c) {
        if (c == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, v] : terms_) v *= c;
        return *this;
    }
    friend TensorElem operator+(TensorElem a, const TensorElem& b) { return a += b; }
    friend TensorElem operator-(TensorElem a, const TensorElem& b) { return a -= b; }
    friend TensorElem operator*(TensorElem a, const Rat& c) { return a *= c; }
    friend TensorElem operator*(const Rat& c, TensorElem a) { return a *= c; }
    TensorElem operator-() const {
        TensorElem r(ctx_);
        for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
        return r;
    }
    friend bool operator==(const TensorElem& a, const TensorElem& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const TensorElem& a, const TensorElem& b) { return !(a == b); }

    std::string str() const;

private:
    CtxPtr ctx_;
    std::map<Key, Rat, KeyLess> terms_;
};

using Tensor2 = TensorElem<2>;
using Tensor3 = TensorElem<3>;

// τ_σ with the Koszul sign counting all swappings. perm[i] = σ(i+1)-1.
template <size_t N>
TensorElem<N> tensor_permute(const std::array<int, N>& perm, const TensorElem<N>& t);

// Outer bimodule action a·(u⊗v)·b = au ⊗ vb (no signs).
Tensor2 outer_left(const NCElement& a, const Tensor2& t);
Tensor2 outer_right(const Tensor2& t, const NCElement& b);
// Inner action a∗(u⊗v) = (−1)^{|a||u|} u ⊗ av, (u⊗v)∗b = (−1)^{|b||v|} ub ⊗ v.
Tensor2 inner_left(const NCElement& a, const Tensor2& t);
Tensor2 inner_right(const Tensor2& t, const NCElement& b);

Tensor2 tensor_of(const NCElement& p, const NCElement& q);
Tensor3 tensor_left_extend(const Tensor2& pq, const NCElement& r);  // (p⊗q)⊗r view helpers
NCElement tensor_multiply(const Tensor2& t);  // m(p⊗q) = pq

} // namespace ncpr
