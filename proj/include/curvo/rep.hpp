#pragma once

// Finite instances of the category of curved representations of a simplicial
// monoid S with curvature element H.
//
// An object is a vector space E with a map mu from the 0-level monoid to
// End(E), mu(e) = 1, not required to be multiplicative. A degree-n morphism
// assigns a matrix to every normalized bar word of degree n. The connection is
//   (nabla f)(a_1...a_k) = (-1)^{|f|+1} f(b(a_1...a_k))
//                          - f(a_1...a_{k-1}) mu_E(a_k)   [a_k of level 0]
//                          + (-1)^{|f|} mu_F(a_1) f(a_2...a_k)   [a_1 of level 0]
// and composition is the convolution against the deconcatenation coproduct,
//   (f o g)(w) = sum_{w = w1 w2} (-1)^{|g| deg(w1)} f(w1) g(w2).
// The curvature acts by the H-twisted product defect,
//   R_E(x (x) y) = H(x,y) mu(x*y) - mu(x) mu(y),
//   R_E(gamma)   = -mu(d0 gamma) + H(gamma) mu(d1 gamma).

#include "curvo/bar.hpp"
#include "curvo/cdg.hpp"
#include "curvo/simplicial.hpp"

#include <map>
#include <vector>

namespace curvo {

struct RepObject {
    std::size_t dim = 0;
    std::map<int, ExactMatrix> mu;  // per non-unit 0-simplex; mu(e) = id implicit
};

class RepInstance : public CdgInstance {
public:
    RepInstance(const FiniteSimplicialMonoid& s, BarCocycle h, int max_bar_degree = 4)
        : s_(&s), h_(std::move(h)), max_deg_(max_bar_degree) {
        if (!h_.is_closed()) throw NotClosedCocycleError("Rep instance needs a closed curvature element");
        for (int d = 0; d <= max_deg_ + 1; ++d) {
            words_.push_back(bar_word_basis(*s_, d, s_->truncation));
            std::map<BarWord, std::size_t> idx;
            for (std::size_t i = 0; i < words_[d].size(); ++i) idx[words_[d][i]] = i;
            word_index_.push_back(std::move(idx));
        }
        objects_.push_back(RepObject{0, {}});  // zero object
    }

    int add_object(RepObject obj) {
        for (auto& [x, m] : obj.mu)
            if (m.rows() != obj.dim || m.cols() != obj.dim)
                throw DimensionError("mu block shape mismatch");
        // missing assignments default to the identity
        for (std::size_t x = 0; x < s_->size(0); ++x)
            if (static_cast<int>(x) != s_->unit_of(0) && !obj.mu.count(static_cast<int>(x)))
                obj.mu[static_cast<int>(x)] = ExactMatrix::identity(obj.dim);
        objects_.push_back(std::move(obj));
        return static_cast<int>(objects_.size()) - 1;
    }

    const RepObject& object(int i) const { return objects_.at(i); }
    const FiniteSimplicialMonoid& monoid() const { return *s_; }
    const BarCocycle& cocycle() const { return h_; }
    const std::vector<BarWord>& word_basis(int degree) const { return words_.at(degree); }

    ExactMatrix action(int obj, int zero_simplex) const {
        if (zero_simplex == s_->unit_of(0)) return ExactMatrix::identity(objects_[obj].dim);
        return objects_[obj].mu.at(zero_simplex);
    }

    std::size_t object_count() const override { return objects_.size(); }
    int zero_object() const override { return 0; }
    int max_degree() const override { return max_deg_; }

    std::size_t hom_dim(int src, int dst, int degree) const override {
        if (degree < 0 || degree > max_deg_) return 0;
        return words_[degree].size() * objects_[src].dim * objects_[dst].dim;
    }

    ExactMatrix value(const Morphism& f, const BarWord& w) const {
        std::size_t r = objects_[f.dst].dim, c = objects_[f.src].dim;
        ExactMatrix m(r, c);
        auto it = word_index_[f.degree].find(w);
        if (it == word_index_[f.degree].end()) return m;  // word vanished under normalization
        std::size_t off = it->second * r * c;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m(i, j) = f.coeffs[off + i * c + j];
        return m;
    }

    // value on a bar tensor (linear extension)
    ExactMatrix value(const Morphism& f, const BarTensor& t) const {
        ExactMatrix acc(objects_[f.dst].dim, objects_[f.src].dim);
        for (auto& [w, c] : t.terms())
            if (bar_degree(w) == f.degree) acc += c * value(f, w);
        return acc;
    }

    Morphism from_values(int src, int dst, int degree,
                         const std::map<BarWord, ExactMatrix>& values) const {
        Morphism m = zero_morphism(src, dst, degree);
        std::size_t r = objects_[dst].dim, c = objects_[src].dim;
        for (auto& [w, mat] : values) {
            std::size_t off = word_index_[degree].at(w) * r * c;
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < c; ++j) m.coeffs[off + i * c + j] = mat(i, j);
        }
        return m;
    }

    Morphism nabla(const Morphism& f) const override {
        const int n = f.degree;
        Morphism out = zero_morphism(f.src, f.dst, n + 1);
        if (n < 0 || n + 1 > max_deg_ || f.is_zero()) return out;
        std::size_t r = objects_[f.dst].dim, c = objects_[f.src].dim;
        std::map<BarWord, ExactMatrix> vals;
        for (const BarWord& w : words_[n + 1]) {
            ExactMatrix acc(r, c);
            acc += sign_pow(n + 1) * value(f, bar_differential(*s_, h_, w));
            if (!w.empty() && w.back().level == 0) {
                BarWord head(w.begin(), w.end() - 1);
                acc -= value(f, head) * action(f.src, w.back().elem);
            }
            if (!w.empty() && w.front().level == 0) {
                BarWord tail(w.begin() + 1, w.end());
                acc += sign_pow(n) * (action(f.dst, w.front().elem) * value(f, tail));
            }
            if (!acc.is_zero()) vals[w] = std::move(acc);
        }
        return from_values(f.src, f.dst, n + 1, vals);
    }

    Morphism compose(const Morphism& g, const Morphism& f) const override {
        check_composable(g, f);
        const int n = f.degree + g.degree;
        Morphism out = zero_morphism(f.src, g.dst, n);
        if (f.degree < 0 || g.degree < 0 || n > max_deg_) return out;
        std::map<BarWord, ExactMatrix> vals;
        Scalar koszul = sign_pow(static_cast<long>(f.degree) * g.degree);
        for (const BarWord& w : words_[n]) {
            // the unique split with prefix degree g.degree, if it exists
            int d = 0;
            std::size_t cut = 0;
            while (cut < w.size() && d < g.degree) d += w[cut++].level + 1;
            if (d != g.degree) continue;
            BarWord w1(w.begin(), w.begin() + cut), w2(w.begin() + cut, w.end());
            ExactMatrix m = koszul * (value(g, w1) * value(f, w2));
            if (!m.is_zero()) vals[w] = std::move(m);
        }
        return from_values(f.src, g.dst, n, vals);
    }

    Morphism identity(int obj) const override {
        std::map<BarWord, ExactMatrix> vals;
        vals[BarWord{}] = ExactMatrix::identity(objects_[obj].dim);
        return from_values(obj, obj, 0, vals);
    }

    Morphism curvature(int obj) const override {
        std::map<BarWord, ExactMatrix> vals;
        if (max_deg_ < 2) return zero_morphism(obj, obj, 2);
        for (const BarWord& w : words_[2]) {
            ExactMatrix m(objects_[obj].dim, objects_[obj].dim);
            if (w.size() == 2) {
                int x = w[0].elem, y = w[1].elem;
                m = h_.pair(x, y) * action(obj, s_->mul(0, x, y)) - action(obj, x) * action(obj, y);
            } else {  // single 1-simplex
                int g = w[0].elem;
                m = -action(obj, s_->face_of(1, 0, g)) +
                    h_.edge(g) * action(obj, s_->face_of(1, 1, g));
            }
            if (!m.is_zero()) vals[w] = std::move(m);
        }
        return from_values(obj, obj, 2, vals);
    }

    std::size_t fiber_count() const override { return 1; }
    std::size_t fiber_dim(int obj, std::size_t) const override { return objects_[obj].dim; }
    ExactMatrix deg0_block(const Morphism& f, std::size_t) const override {
        return value(f, BarWord{});
    }
    Morphism deg0_from_blocks(int src, int dst, const std::vector<ExactMatrix>& blocks) const override {
        std::map<BarWord, ExactMatrix> vals;
        vals[BarWord{}] = blocks.at(0);
        return from_values(src, dst, 0, vals);
    }

    SurgeryResult subobject(int obj, const std::vector<ExactMatrix>& inclusion_cols) override {
        const ExactMatrix& u = inclusion_cols.at(0);
        RepObject sub;
        sub.dim = u.cols();
        for (auto& [x, m] : objects_[obj].mu) {
            auto sol = solve_linear_exact(u, m * u);
            if (!sol) throw SplitError("subspace is not mu-stable");
            sub.mu[x] = std::move(*sol);
        }
        objects_.push_back(std::move(sub));
        return {static_cast<int>(objects_.size()) - 1, {u}};
    }

    SurgeryResult quotient_object(int obj, const std::vector<ExactMatrix>& killed_cols) override {
        const ExactMatrix& w = killed_cols.at(0);
        ExactMatrix comp = extend_to_basis(w);
        std::size_t n = objects_[obj].dim, k = w.cols();
        ExactMatrix b(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < k; ++j) b(i, j) = w(i, j);
            for (std::size_t j = 0; j < comp.cols(); ++j) b(i, k + j) = comp(i, j);
        }
        auto binv = inverse(b);
        if (!binv) throw SplitError("killed subspace columns are not independent");
        RepObject q;
        q.dim = comp.cols();
        for (auto& [x, m] : objects_[obj].mu) {
            ExactMatrix conj = *binv * m * b;
            ExactMatrix block(q.dim, q.dim);
            for (std::size_t i = 0; i < q.dim; ++i)
                for (std::size_t j = 0; j < q.dim; ++j) block(i, j) = conj(k + i, k + j);
            q.mu[x] = std::move(block);
        }
        ExactMatrix proj(q.dim, n);
        for (std::size_t i = 0; i < q.dim; ++i)
            for (std::size_t j = 0; j < n; ++j) proj(i, j) = (*binv)(k + i, j);
        objects_.push_back(std::move(q));
        return {static_cast<int>(objects_.size()) - 1, {proj}};
    }

    int twist_object(int obj, const Morphism& a) override {
        if (a.src != obj || a.dst != obj || a.degree != 1)
            throw DimensionError("twist datum must be a degree-1 endomorphism");
        RepObject t = objects_[obj];
        for (auto& [x, m] : t.mu) m += value(a, BarWord{ChainEntry{0, x}});
        objects_.push_back(std::move(t));
        return static_cast<int>(objects_.size()) - 1;
    }

private:
    const FiniteSimplicialMonoid* s_;
    BarCocycle h_;
    int max_deg_;
    std::vector<std::vector<BarWord>> words_;
    std::vector<std::map<BarWord, std::size_t>> word_index_;
    std::vector<RepObject> objects_;
};

inline int add_random_rep_object(RepInstance& inst, std::size_t dim, SplitMix& rng) {
    RepObject obj;
    obj.dim = dim;
    const auto& s = inst.monoid();
    for (std::size_t x = 0; x < s.size(0); ++x) {
        if (static_cast<int>(x) == s.unit_of(0)) continue;
        ExactMatrix m(dim, dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) m(i, j) = rng.gaussian_rational(2, 2);
        obj.mu[static_cast<int>(x)] = std::move(m);
    }
    return inst.add_object(std::move(obj));
}

}  // namespace curvo
