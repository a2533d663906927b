#pragma once

// Bar words over the H-twisted chain algebra of a finite simplicial monoid.
//
// Entries of a word are normalized chains: nondegenerate simplices, with the
// 0-level unit quotiented away. Any word that acquires a degenerate entry or a
// 0-level unit entry is zero. Degrees are the shifted ones: an entry of level
// k has degree k+1, the degree of a word is the sum over its entries.
//
// The differential is
//   b(a_1 (x) ... (x) a_n) =
//       sum_i (-1)^{|a_1|+...+|a_{i-1}|+1} a_1 (x) ... d(a_i) ... (x) a_n
//     + sum_i (-1)^{|a_1|+...+|a_i|+1}     a_1 (x) ... a_i a_{i+1} ... (x) a_n
// where d is the simplicial differential with the value of H on the last edge
// twisting the last face, and the product is the Eilenberg-Zilber shuffle
// followed by the levelwise monoid product, weighted by the value of H on the
// pair of last vertices.

#include "curvo/rational.hpp"
#include "curvo/simplicial.hpp"

#include <map>
#include <vector>

namespace curvo {

struct ChainEntry {
    int level;
    int elem;
    friend bool operator<(const ChainEntry& a, const ChainEntry& b) {
        return a.level != b.level ? a.level < b.level : a.elem < b.elem;
    }
    friend bool operator==(const ChainEntry& a, const ChainEntry& b) {
        return a.level == b.level && a.elem == b.elem;
    }
};

using BarWord = std::vector<ChainEntry>;

inline int bar_degree(const BarWord& w) {
    int d = 0;
    for (const auto& e : w) d += e.level + 1;
    return d;
}

// Entries of pre-bar words are normalized chains: degenerate simplices are
// zero, but the 0-level unit is an honest basis element. The quotient bar
// construction additionally kills words with a unit entry; the differential
// only descends through that quotient in the combination defining the
// connection of the representation category, never on its own.
inline bool entry_is_degenerate(const FiniteSimplicialMonoid& s, const ChainEntry& e) {
    return s.is_degenerate(e.level, e.elem);
}

inline bool entry_is_unit(const FiniteSimplicialMonoid& s, const ChainEntry& e) {
    return e.level == 0 && e.elem == s.unit_of(0);
}

inline bool entry_vanishes(const FiniteSimplicialMonoid& s, const ChainEntry& e) {
    return entry_is_degenerate(s, e) || entry_is_unit(s, e);
}

// linear combination of pre-bar words (degenerate entries dropped)
class BarTensor {
public:
    BarTensor() = default;
    BarTensor(const FiniteSimplicialMonoid& s, BarWord w, Scalar c = Scalar(1)) {
        for (const auto& e : w)
            if (entry_is_degenerate(s, e)) return;
        if (!c.is_zero()) terms_[std::move(w)] = std::move(c);
    }

    void add(const FiniteSimplicialMonoid& s, const BarWord& w, const Scalar& c) {
        if (c.is_zero()) return;
        for (const auto& e : w)
            if (entry_is_degenerate(s, e)) return;
        auto it = terms_.find(w);
        if (it == terms_.end()) {
            terms_[w] = c;
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    BarTensor& operator+=(const BarTensor& o) {
        for (auto& [w, c] : o.terms_) {
            auto it = terms_.find(w);
            if (it == terms_.end()) {
                terms_[w] = c;
            } else {
                it->second += c;
                if (it->second.is_zero()) terms_.erase(it);
            }
        }
        return *this;
    }

    bool is_zero() const { return terms_.empty(); }
    const std::map<BarWord, Scalar>& terms() const { return terms_; }

private:
    std::map<BarWord, Scalar> terms_;
};

// d of a single normalized chain entry, as (coefficient, entry) pairs
inline std::vector<std::pair<Scalar, ChainEntry>> chain_differential(const FiniteSimplicialMonoid& s,
                                                                     const BarCocycle& h,
                                                                     const ChainEntry& e) {
    std::vector<std::pair<Scalar, ChainEntry>> out;
    const int k = e.level;
    if (k == 0) return out;
    for (int i = 0; i <= k; ++i) {
        Scalar c = sign_pow(i);
        if (i == k) c *= h.edge(s.subsimplex(k, e.elem, {k - 1, k}));
        out.push_back({std::move(c), ChainEntry{k - 1, s.face_of(k, i, e.elem)}});
    }
    return out;
}

// H-twisted product of two normalized chain entries
inline std::vector<std::pair<Scalar, ChainEntry>> chain_product(const FiniteSimplicialMonoid& s,
                                                                const BarCocycle& h,
                                                                const ChainEntry& a,
                                                                const ChainEntry& b) {
    std::vector<std::pair<Scalar, ChainEntry>> out;
    const int p = a.level, q = b.level;
    if (p + q > s.truncation) throw std::out_of_range("chain product exceeds truncation");
    Scalar w = h.pair(s.subsimplex(p, a.elem, {p}), s.subsimplex(q, b.elem, {q}));
    for (const ShuffleTerm& t : ez_shuffle(s, p, a.elem, q, b.elem))
        out.push_back({w * Scalar(t.sign), ChainEntry{p + q, s.mul(p + q, t.left, t.right)}});
    return out;
}

inline BarTensor bar_differential(const FiniteSimplicialMonoid& s, const BarCocycle& h,
                                  const BarWord& word, const Scalar& coeff = Scalar(1)) {
    BarTensor out;
    const int n = static_cast<int>(word.size());
    int degree_before = 0;
    for (int i = 0; i < n; ++i) {
        Scalar sign = sign_pow(degree_before + 1);
        for (auto& [c, entry] : chain_differential(s, h, word[i])) {
            BarWord w = word;
            w[i] = entry;
            out.add(s, w, coeff * sign * c);
        }
        degree_before += word[i].level + 1;
        if (i + 1 < n) {
            Scalar psign = sign_pow(degree_before + 1);
            for (auto& [c, entry] : chain_product(s, h, word[i], word[i + 1])) {
                BarWord w;
                w.reserve(word.size() - 1);
                w.insert(w.end(), word.begin(), word.begin() + i);
                w.push_back(entry);
                w.insert(w.end(), word.begin() + i + 2, word.end());
                out.add(s, w, coeff * psign * c);
            }
        }
    }
    return out;
}

inline BarTensor bar_differential(const FiniteSimplicialMonoid& s, const BarCocycle& h,
                                  const BarTensor& t) {
    BarTensor out;
    for (auto& [w, c] : t.terms()) out += bar_differential(s, h, w, c);
    return out;
}

// all normalized words of the given total bar degree whose entries fit the
// truncation (level sum <= max_level_sum)
inline void enumerate_bar_words(const FiniteSimplicialMonoid& s, int degree, int max_level_sum,
                                std::vector<BarWord>& out, BarWord& cur, int level_sum) {
    if (degree == 0) {
        out.push_back(cur);
        return;
    }
    for (int lvl = 0; lvl + 1 <= degree && lvl <= s.truncation; ++lvl) {
        if (level_sum + lvl > max_level_sum) break;
        for (std::size_t e = 0; e < s.size(lvl); ++e) {
            ChainEntry entry{lvl, static_cast<int>(e)};
            if (entry_vanishes(s, entry)) continue;
            cur.push_back(entry);
            enumerate_bar_words(s, degree - lvl - 1, max_level_sum, out, cur, level_sum + lvl);
            cur.pop_back();
        }
    }
}

inline std::vector<BarWord> bar_word_basis(const FiniteSimplicialMonoid& s, int degree,
                                           int max_level_sum) {
    std::vector<BarWord> out;
    BarWord cur;
    enumerate_bar_words(s, degree, max_level_sum, out, cur, 0);
    return out;
}

}  // namespace curvo
