#pragma once

// Finite truncated simplicial sets and simplicial monoids, together with the
// structures living on them: simplicial 2-cocycles, multiplicative bar
// 2-cocycles (curvature elements), twists, the twisted monoid S^H, and the
// Eilenberg-Zilber shuffle.
//
// Everything is truncated at a level N; identities are only stated (and
// checked) where all participating elements stay within the truncation.

#include "curvo/rational.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvo {

struct NotClosedCocycleError : std::runtime_error {
    explicit NotClosedCocycleError(const std::string& m) : std::runtime_error(m) {}
};
struct NotATwistError : std::runtime_error {
    explicit NotATwistError(const std::string& m) : std::runtime_error(m) {}
};

class FiniteSimplicialSet {
public:
    int truncation = 0;                       // levels 0..truncation
    std::vector<std::size_t> level_size;      // truncation+1 entries
    // face[k][i][e] = ∂_i e for e at level k >= 1, i = 0..k
    std::vector<std::vector<std::vector<int>>> face;
    // degen[k][i][e] = s_i e at level k+1, for e at level k < truncation, i = 0..k
    std::vector<std::vector<std::vector<int>>> degen;
    std::vector<std::vector<bool>> degenerate;      // degenerate[k][e]
    std::vector<std::vector<std::string>> labels;   // for reports

    std::size_t size(int k) const { return k <= truncation ? level_size[k] : 0; }
    bool is_degenerate(int k, int e) const { return degenerate[k][e]; }
    int face_of(int k, int i, int e) const { return face[k][i][e]; }
    int degen_of(int k, int i, int e) const { return degen[k][i][e]; }

    std::vector<int> nondegenerate_elems(int k) const {
        std::vector<int> v;
        for (std::size_t e = 0; e < size(k); ++e)
            if (!degenerate[k][e]) v.push_back(static_cast<int>(e));
        return v;
    }

    std::string label(int k, int e) const {
        if (k < static_cast<int>(labels.size()) && e < static_cast<int>(labels[k].size()))
            return labels[k][e];
        return "L" + std::to_string(k) + "#" + std::to_string(e);
    }

    // sub-simplex spanned by the given strictly increasing vertex indices:
    // delete the complementary vertices, highest first
    int subsimplex(int k, int e, const std::vector<int>& keep) const {
        int cur_level = k, cur = e;
        for (int v = k; v >= 0; --v) {
            if (std::find(keep.begin(), keep.end(), v) != keep.end()) continue;
            cur = face[cur_level][v][cur];
            --cur_level;
        }
        return cur;
    }
    int vertex(int k, int e, int j) const { return subsimplex(k, e, {j}); }
};

class FiniteSimplicialMonoid : public FiniteSimplicialSet {
public:
    // product[k][a][b], unit[k] per level
    std::vector<std::vector<std::vector<int>>> product;
    std::vector<int> unit;

    int mul(int k, int a, int b) const { return product[k][a][b]; }
    int unit_of(int k) const { return unit[k]; }
};

struct SimplicialViolation {
    std::string identity;
    int level = 0;
    int index = 0;
    std::string element;
};

// Validates the simplicial identities and the compatibility of the monoid
// structure with them, over any model of a (possibly scaled) simplicial
// monoid. A model supplies:
//   Elem, truncation(), representatives(k), face(k,i,e), degeneracy(k,i,e),
//   product(k,a,b), unit(k), equal(a,b), describe(e)
template <class Model>
std::vector<SimplicialViolation> validate_simplicial_monoid_model(const Model& m) {
    std::vector<SimplicialViolation> bad;
    using Elem = typename Model::Elem;
    const int n = m.truncation();
    auto report = [&](const std::string& id, int level, int index, const Elem& e) {
        bad.push_back({id, level, index, m.describe(level, e)});
    };

    for (int k = 0; k <= n; ++k) {
        for (const Elem& e : m.representatives(k)) {
            // face-face: ∂_i ∂_j = ∂_{j-1} ∂_i for i < j
            if (k >= 2)
                for (int j = 1; j <= k; ++j)
                    for (int i = 0; i < j; ++i)
                        if (!m.equal(m.face(k - 1, i, m.face(k, j, e)),
                                     m.face(k - 1, j - 1, m.face(k, i, e))))
                            report("face-face", k, i * 100 + j, e);
            // degeneracy-degeneracy: s_i s_j = s_{j+1} s_i for i <= j
            if (k + 2 <= n)
                for (int j = 0; j <= k; ++j)
                    for (int i = 0; i <= j; ++i)
                        if (!m.equal(m.degeneracy(k + 1, i, m.degeneracy(k, j, e)),
                                     m.degeneracy(k + 1, j + 1, m.degeneracy(k, i, e))))
                            report("degen-degen", k, i * 100 + j, e);
            // mixed
            if (k + 1 <= n)
                for (int j = 0; j <= k; ++j)
                    for (int i = 0; i <= k + 1; ++i) {
                        Elem lhs = m.face(k + 1, i, m.degeneracy(k, j, e));
                        Elem rhs;
                        if (i < j)
                            rhs = m.degeneracy(k - 1, j - 1, m.face(k, i, e));
                        else if (i == j || i == j + 1)
                            rhs = e;
                        else
                            rhs = m.degeneracy(k - 1, j, m.face(k, i - 1, e));
                        if (!m.equal(lhs, rhs)) report("face-degen", k, i * 100 + j, e);
                    }
        }

        // monoid structure
        for (const Elem& a : m.representatives(k)) {
            if (!m.equal(m.product(k, m.unit(k), a), a)) report("left-unit", k, 0, a);
            if (!m.equal(m.product(k, a, m.unit(k)), a)) report("right-unit", k, 0, a);
            for (const Elem& b : m.representatives(k)) {
                if (k >= 1)
                    for (int i = 0; i <= k; ++i)
                        if (!m.equal(m.face(k, i, m.product(k, a, b)),
                                     m.product(k - 1, m.face(k, i, a), m.face(k, i, b))))
                            report("face-product", k, i, a);
                if (k + 1 <= n)
                    for (int i = 0; i <= k; ++i)
                        if (!m.equal(m.degeneracy(k, i, m.product(k, a, b)),
                                     m.product(k + 1, m.degeneracy(k, i, a), m.degeneracy(k, i, b))))
                            report("degen-product", k, i, a);
                for (const Elem& c : m.representatives(k))
                    if (!m.equal(m.product(k, m.product(k, a, b), c),
                                 m.product(k, a, m.product(k, b, c))))
                        report("associativity", k, 0, a);
            }
        }
        if (k >= 1)
            for (int i = 0; i <= k; ++i)
                if (!m.equal(m.face(k, i, m.unit(k)), m.unit(k - 1))) report("unit-face", k, i, m.unit(k));
        if (k + 1 <= n)
            for (int i = 0; i <= k; ++i)
                if (!m.equal(m.degeneracy(k, i, m.unit(k)), m.unit(k + 1)))
                    report("unit-degen", k, i, m.unit(k));
    }
    return bad;
}

// model wrapping a plain FiniteSimplicialMonoid
struct PlainMonoidModel {
    using Elem = int;
    const FiniteSimplicialMonoid* s;
    int truncation() const { return s->truncation; }
    std::vector<int> representatives(int k) const {
        std::vector<int> v(s->size(k));
        std::iota(v.begin(), v.end(), 0);
        return v;
    }
    int face(int k, int i, int e) const { return s->face_of(k, i, e); }
    int degeneracy(int k, int i, int e) const { return s->degen_of(k, i, e); }
    int product(int k, int a, int b) const { return s->mul(k, a, b); }
    int unit(int k) const { return s->unit_of(k); }
    bool equal(int a, int b) const { return a == b; }
    std::string describe(int k, int e) const { return s->label(k, e); }
};

inline std::vector<SimplicialViolation> validate_simplicial_monoid(const FiniteSimplicialMonoid& s) {
    return validate_simplicial_monoid_model(PlainMonoidModel{&s});
}

// ---------------------------------------------------------------------------
// builders

// Constant simplicial monoid of a finite monoid: every level is the monoid,
// all faces and degeneracies are the identity. Everything above level 0 is
// degenerate.
inline FiniteSimplicialMonoid constant_monoid(const std::vector<std::vector<int>>& mul_table,
                                              int unit_elem, int truncation,
                                              const std::vector<std::string>& names = {}) {
    FiniteSimplicialMonoid s;
    s.truncation = truncation;
    const std::size_t n = mul_table.size();
    s.level_size.assign(truncation + 1, n);
    s.face.resize(truncation + 1);
    s.degen.resize(truncation + 1);
    s.degenerate.resize(truncation + 1);
    s.labels.resize(truncation + 1);
    s.product.resize(truncation + 1);
    s.unit.assign(truncation + 1, unit_elem);
    std::vector<int> id_map(n);
    std::iota(id_map.begin(), id_map.end(), 0);
    for (int k = 0; k <= truncation; ++k) {
        if (k >= 1) s.face[k].assign(k + 1, id_map);
        if (k < truncation) s.degen[k].assign(k + 1, id_map);
        s.degenerate[k].assign(n, k >= 1);
        s.product[k] = mul_table;
        for (std::size_t e = 0; e < n; ++e)
            s.labels[k].push_back(names.empty() ? std::to_string(e) : names[e]);
    }
    return s;
}

// multiplication table of a product of cyclic groups Z/m_1 x ... x Z/m_r
struct CyclicProductGroup {
    std::vector<int> moduli;
    std::vector<std::vector<int>> table;
    int unit = 0;
    std::size_t order = 1;

    explicit CyclicProductGroup(std::vector<int> mods) : moduli(std::move(mods)) {
        for (int m : moduli) order *= static_cast<std::size_t>(m);
        table.assign(order, std::vector<int>(order));
        for (std::size_t a = 0; a < order; ++a)
            for (std::size_t b = 0; b < order; ++b) {
                auto ea = exps(a), eb = exps(b);
                std::vector<int> ec(moduli.size());
                for (std::size_t i = 0; i < moduli.size(); ++i) ec[i] = (ea[i] + eb[i]) % moduli[i];
                table[a][b] = index(ec);
            }
    }
    std::vector<int> exps(std::size_t e) const {
        std::vector<int> v(moduli.size());
        for (std::size_t i = 0; i < moduli.size(); ++i) {
            v[i] = static_cast<int>(e % moduli[i]);
            e /= moduli[i];
        }
        return v;
    }
    int index(const std::vector<int>& v) const {
        std::size_t e = 0;
        for (std::size_t i = moduli.size(); i-- > 0;) e = e * moduli[i] + v[i];
        return static_cast<int>(e);
    }
};

// Nerve of an abelian group: level k = G^k, the usual bar faces, componentwise
// product (compatibility with faces needs commutativity).
inline FiniteSimplicialMonoid nerve_monoid(const CyclicProductGroup& g, int truncation) {
    FiniteSimplicialMonoid s;
    s.truncation = truncation;
    const int n = static_cast<int>(g.order);
    auto tuple_count = [&](int k) {
        std::size_t c = 1;
        for (int i = 0; i < k; ++i) c *= n;
        return c;
    };
    auto unpack = [&](int k, std::size_t e) {
        std::vector<int> t(k);
        for (int i = 0; i < k; ++i) {
            t[i] = static_cast<int>(e % n);
            e /= n;
        }
        return t;
    };
    auto pack = [&](const std::vector<int>& t) {
        std::size_t e = 0;
        for (std::size_t i = t.size(); i-- > 0;) e = e * n + t[i];
        return static_cast<int>(e);
    };

    s.level_size.resize(truncation + 1);
    s.face.resize(truncation + 1);
    s.degen.resize(truncation + 1);
    s.degenerate.resize(truncation + 1);
    s.labels.resize(truncation + 1);
    s.product.resize(truncation + 1);
    s.unit.resize(truncation + 1);
    for (int k = 0; k <= truncation; ++k) {
        std::size_t cnt = tuple_count(k);
        s.level_size[k] = cnt;
        s.unit[k] = pack(std::vector<int>(k, g.unit));
        s.degenerate[k].resize(cnt);
        s.labels[k].resize(cnt);
        s.product[k].assign(cnt, std::vector<int>(cnt));
        if (k >= 1) s.face[k].assign(k + 1, std::vector<int>(cnt));
        if (k < truncation) s.degen[k].assign(k + 1, std::vector<int>(cnt));
        for (std::size_t e = 0; e < cnt; ++e) {
            auto t = unpack(k, e);
            bool degen = false;
            for (int x : t)
                if (x == g.unit) degen = true;
            s.degenerate[k][e] = degen;
            std::ostringstream lab;
            lab << "(";
            for (int i = 0; i < k; ++i) lab << t[i] << (i + 1 < k ? "," : "");
            lab << ")";
            s.labels[k][e] = lab.str();
            if (k >= 1)
                for (int i = 0; i <= k; ++i) {
                    std::vector<int> f;
                    if (i == 0)
                        f.assign(t.begin() + 1, t.end());
                    else if (i == k)
                        f.assign(t.begin(), t.end() - 1);
                    else {
                        f = t;
                        f[i - 1] = g.table[t[i - 1]][t[i]];
                        f.erase(f.begin() + i);
                    }
                    s.face[k][i][e] = pack(f);
                }
            if (k < truncation)
                for (int i = 0; i <= k; ++i) {
                    std::vector<int> d = t;
                    d.insert(d.begin() + i, g.unit);
                    s.degen[k][i][e] = pack(d);
                }
            for (std::size_t e2 = 0; e2 < cnt; ++e2) {
                auto t2 = unpack(k, static_cast<int>(e2));
                std::vector<int> pr(k);
                for (int i = 0; i < k; ++i) pr[i] = g.table[t[i]][t2[i]];
                s.product[k][e][e2] = pack(pr);
            }
        }
    }
    return s;
}

// The standard d-simplex as a finite simplicial set: level k elements are the
// nondecreasing (k+1)-tuples in {0..d}. Monoid structure: none (the product
// tables stay empty); only the simplicial-set part is meaningful.
inline FiniteSimplicialSet standard_simplex_set(int d, int truncation) {
    FiniteSimplicialSet s;
    s.truncation = truncation;
    s.level_size.resize(truncation + 1);
    s.face.resize(truncation + 1);
    s.degen.resize(truncation + 1);
    s.degenerate.resize(truncation + 1);
    s.labels.resize(truncation + 1);

    std::vector<std::vector<std::vector<int>>> tuples(truncation + 1);
    std::function<void(int, std::vector<int>&)> gen = [&](int k, std::vector<int>& cur) {
        if (static_cast<int>(cur.size()) == k + 1) {
            tuples[k].push_back(cur);
            return;
        }
        int lo = cur.empty() ? 0 : cur.back();
        for (int v = lo; v <= d; ++v) {
            cur.push_back(v);
            gen(k, cur);
            cur.pop_back();
        }
    };
    std::vector<std::map<std::vector<int>, int>> index(truncation + 1);
    for (int k = 0; k <= truncation; ++k) {
        std::vector<int> cur;
        gen(k, cur);
        s.level_size[k] = tuples[k].size();
        for (std::size_t e = 0; e < tuples[k].size(); ++e) index[k][tuples[k][e]] = static_cast<int>(e);
    }
    for (int k = 0; k <= truncation; ++k) {
        std::size_t cnt = s.level_size[k];
        s.degenerate[k].resize(cnt);
        s.labels[k].resize(cnt);
        if (k >= 1) s.face[k].assign(k + 1, std::vector<int>(cnt));
        if (k < truncation) s.degen[k].assign(k + 1, std::vector<int>(cnt));
        for (std::size_t e = 0; e < cnt; ++e) {
            const auto& t = tuples[k][e];
            bool degen = false;
            for (int i = 0; i + 1 <= k; ++i)
                if (t[i] == t[i + 1]) degen = true;
            s.degenerate[k][e] = degen;
            std::ostringstream lab;
            lab << "<";
            for (int i = 0; i <= k; ++i) lab << t[i] << (i < k ? "" : "");
            lab << ">";
            s.labels[k][e] = lab.str();
            if (k >= 1)
                for (int i = 0; i <= k; ++i) {
                    std::vector<int> f = t;
                    f.erase(f.begin() + i);
                    s.face[k][i][e] = index[k - 1][f];
                }
            if (k < truncation)
                for (int i = 0; i <= k; ++i) {
                    std::vector<int> g = t;
                    g.insert(g.begin() + i, t[i]);
                    s.degen[k][i][e] = index[k + 1][g];
                }
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// presented simplicial sets: nondegenerate cells with prescribed faces, all
// degeneracies added formally. Elements at level n are pairs (cell, monotone
// surjection [n] ->> [dim cell]); faces factor through the epi-mono
// factorization of monotone maps.

struct CellFaceRef {
    int cell;                    // index of the target cell
    std::vector<int> surjection;  // monotone surjection values, [dim-1] ->> [dim target]
};

struct CellPresentation {
    int dim;
    std::vector<CellFaceRef> faces;  // dim+1 entries for dim >= 1
    std::string name;
};

inline FiniteSimplicialSet presented_simplicial_set(const std::vector<CellPresentation>& cells,
                                                    int truncation) {
    struct Elem {
        int cell;
        std::vector<int> surj;  // values of [n] ->> [dim]
        bool operator<(const Elem& o) const { return std::tie(cell, surj) < std::tie(o.cell, o.surj); }
    };
    // enumerate monotone surjections [n] ->> [k]
    std::function<std::vector<std::vector<int>>(int, int)> surjections = [&](int n, int k) {
        std::vector<std::vector<int>> out;
        std::vector<int> cur;
        std::function<void(int, int)> rec = [&](int pos, int val) {
            if (pos == n + 1) {
                if (val == k) out.push_back(cur);
                return;
            }
            // next value: same or +1, must be reachable
            for (int v = val; v <= std::min(val + 1, k); ++v) {
                if (k - v > n - pos) continue;
                cur.push_back(v);
                rec(pos + 1, v);
                cur.pop_back();
            }
        };
        cur.push_back(0);
        rec(1, 0);
        return out;
    };

    std::vector<std::vector<Elem>> levels(truncation + 1);
    std::vector<std::map<Elem, int>> index(truncation + 1);
    for (int n = 0; n <= truncation; ++n)
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (cells[c].dim > n) continue;
            for (auto& s : surjections(n, cells[c].dim)) {
                Elem e{static_cast<int>(c), s};
                index[n][e] = static_cast<int>(levels[n].size());
                levels[n].push_back(e);
            }
        }

    // evaluate a cell against a monotone injection [m] -> [dim] given by the
    // ordered image set: iterated faces, dropping the missing indices from
    // the top
    std::function<Elem(int, std::vector<int>)> cell_restrict = [&](int cell,
                                                                   std::vector<int> image) -> Elem {
        int d = cells[cell].dim;
        if (static_cast<int>(image.size()) == d + 1) {
            std::vector<int> id(d + 1);
            std::iota(id.begin(), id.end(), 0);
            return Elem{cell, id};
        }
        // find the largest missing index and take that face of the cell
        std::vector<bool> present(d + 1, false);
        for (int v : image) present[v] = true;
        int miss = d;
        while (present[miss]) --miss;
        const CellFaceRef& f = cells[cell].faces[miss];
        // the face is (target cell) . (surjection); restrict recursively:
        // remaining image indices re-map through deletion then the surjection
        std::vector<int> reindexed;
        for (int v : image) reindexed.push_back(v < miss ? v : v - 1);
        std::vector<int> mapped;
        for (int v : reindexed) mapped.push_back(f.surjection[v]);
        // mapped is monotone but maybe not injective: factor again
        std::vector<int> img_sorted;
        for (int v : mapped)
            if (img_sorted.empty() || img_sorted.back() != v) img_sorted.push_back(v);
        Elem base = cell_restrict(f.cell, img_sorted);
        // compose the surjection part: mapped = img_sorted o tail_surj
        std::vector<int> tail;
        for (int v : mapped) {
            int pos = static_cast<int>(std::lower_bound(img_sorted.begin(), img_sorted.end(), v) -
                                       img_sorted.begin());
            tail.push_back(pos);
        }
        // base.surj : [|img_sorted|-1] ->> [dim base.cell]; compose with tail
        std::vector<int> comp;
        for (int v : tail) comp.push_back(base.surj[v]);
        return Elem{base.cell, comp};
    };

    auto face_of_elem = [&](int n, const Elem& e, int i) -> Elem {
        // e = cell . surj; face i precomposes with the coface delta_i
        std::vector<int> tau;
        for (int j = 0; j <= n; ++j)
            if (j != i) tau.push_back(e.surj[j]);
        // epi-mono factorization of tau
        std::vector<int> image;
        for (int v : tau)
            if (image.empty() || image.back() != v) image.push_back(v);
        Elem base = cell_restrict(e.cell, image);
        std::vector<int> comp;
        for (int v : tau) {
            int pos = static_cast<int>(std::lower_bound(image.begin(), image.end(), v) - image.begin());
            comp.push_back(base.surj[pos]);
        }
        return Elem{base.cell, comp};
    };

    FiniteSimplicialSet out;
    out.truncation = truncation;
    out.level_size.resize(truncation + 1);
    out.face.resize(truncation + 1);
    out.degen.resize(truncation + 1);
    out.degenerate.resize(truncation + 1);
    out.labels.resize(truncation + 1);
    for (int n = 0; n <= truncation; ++n) {
        out.level_size[n] = levels[n].size();
        out.degenerate[n].resize(levels[n].size());
        out.labels[n].resize(levels[n].size());
        if (n >= 1) out.face[n].assign(n + 1, std::vector<int>(levels[n].size()));
        if (n < truncation) out.degen[n].assign(n + 1, std::vector<int>(levels[n].size()));
        for (std::size_t idx = 0; idx < levels[n].size(); ++idx) {
            const Elem& e = levels[n][idx];
            out.degenerate[n][idx] = (cells[e.cell].dim != n);
            std::ostringstream lab;
            lab << cells[e.cell].name;
            if (cells[e.cell].dim != n) {
                lab << ".s";
                for (int v : e.surj) lab << v;
            }
            out.labels[n][idx] = lab.str();
            if (n >= 1)
                for (int i = 0; i <= n; ++i)
                    out.face[n][i][idx] = index[n - 1].at(face_of_elem(n, e, i));
            if (n < truncation)
                for (int i = 0; i <= n; ++i) {
                    Elem d = e;
                    d.surj.insert(d.surj.begin() + i + 1, d.surj[i]);
                    out.degen[n][i][idx] = index[n + 1].at(d);
                }
        }
    }
    return out;
}

// a circle wedged onto a 2-cell glued twice along its own loop:
// cells v; e (the free circle); g (the attaching loop); G with faces
// (g, degenerate, g). The 1-cocycles supported on e survive every
// differential, while the 2-cell makes objects curved under a nontrivial
// cocycle value on G.
inline FiniteSimplicialSet circle_wedge_cell(int truncation) {
    std::vector<CellPresentation> cells;
    cells.push_back({0, {}, "v"});
    cells.push_back({1, {{0, {0}}, {0, {0}}}, "e"});
    cells.push_back({1, {{0, {0}}, {0, {0}}}, "g"});
    cells.push_back({2, {{2, {0, 1}}, {0, {0, 0}}, {2, {0, 1}}}, "G"});
    return presented_simplicial_set(cells, truncation);
}

// ---------------------------------------------------------------------------
// Eilenberg-Zilber shuffle

// (p,q)-shuffles: partitions of {1..p+q} into increasing mu (size p) and
// nu (size q), with the sign of the permutation (mu, nu).
struct Shuffle {
    std::vector<int> mu, nu;
    int sign = 1;
};

inline std::vector<Shuffle> shuffles(int p, int q) {
    std::vector<Shuffle> out;
    std::vector<int> idx(p + q);
    std::iota(idx.begin(), idx.end(), 1);
    std::vector<int> choose(p);
    std::function<void(int, int)> rec = [&](int start, int k) {
        if (k == p) {
            Shuffle sh;
            sh.mu = choose;
            for (int v : idx)
                if (std::find(choose.begin(), choose.end(), v) == choose.end()) sh.nu.push_back(v);
            // sign of (mu_1..mu_p, nu_1..nu_q) as a permutation of 1..p+q
            std::vector<int> perm = sh.mu;
            perm.insert(perm.end(), sh.nu.begin(), sh.nu.end());
            int inv = 0;
            for (std::size_t i = 0; i < perm.size(); ++i)
                for (std::size_t j = i + 1; j < perm.size(); ++j)
                    if (perm[i] > perm[j]) ++inv;
            sh.sign = (inv % 2 == 0) ? 1 : -1;
            out.push_back(std::move(sh));
            return;
        }
        for (int v = start; v <= p + q; ++v) {
            choose[k] = v;
            rec(v + 1, k + 1);
        }
    };
    if (p == 0) {
        Shuffle sh;
        for (int v : idx) sh.nu.push_back(v);
        out.push_back(std::move(sh));
    } else {
        rec(1, 0);
    }
    return out;
}

// iterated degeneracy s_{j_q-1} o ... o s_{j_1-1}, applied ascending
inline int iterated_degeneracy(const FiniteSimplicialSet& s, int level, int e,
                               const std::vector<int>& js) {
    int cur = e, k = level;
    for (int j : js) {
        cur = s.degen_of(k, j - 1, cur);
        ++k;
    }
    return cur;
}

// One summand of EZ(x (x) y): sign together with the two degenerated
// simplices at level p+q (a simplex of the product simplicial set).
struct ShuffleTerm {
    int sign;
    int left;   // s_nu(x)
    int right;  // s_mu(y)
};

inline std::vector<ShuffleTerm> ez_shuffle(const FiniteSimplicialSet& s, int p, int x, int q, int y) {
    if (p + q > s.truncation) throw std::out_of_range("shuffle exceeds truncation");
    std::vector<ShuffleTerm> out;
    for (const Shuffle& sh : shuffles(p, q))
        out.push_back({sh.sign, iterated_degeneracy(s, p, x, sh.nu), iterated_degeneracy(s, q, y, sh.mu)});
    return out;
}

// ---------------------------------------------------------------------------
// cocycles

// Multiplicative simplicial 2-cocycle: values on nondegenerate 2-simplices
// (1 on degenerate ones), with the alternating product over the faces of any
// 3-simplex equal to 1.
class SimplicialCocycle {
public:
    SimplicialCocycle() = default;
    SimplicialCocycle(const FiniteSimplicialSet* s, std::map<int, Scalar> vals)
        : set_(s), vals_(std::move(vals)) {}

    static SimplicialCocycle trivial(const FiniteSimplicialSet& s) { return {&s, {}}; }

    // coboundary of a multiplicative 1-cochain c (1 on degenerate edges):
    // (delta c)(sigma) = c(d0 sigma) c(d1 sigma)^{-1} c(d2 sigma)
    static SimplicialCocycle coboundary(const FiniteSimplicialSet& s, const std::map<int, Scalar>& c) {
        auto cv = [&](int e) -> Scalar {
            if (s.is_degenerate(1, e)) return Scalar(1);
            auto it = c.find(e);
            return it == c.end() ? Scalar(1) : it->second;
        };
        std::map<int, Scalar> vals;
        for (int e : s.nondegenerate_elems(2)) {
            Scalar v = cv(s.face_of(2, 0, e)) * cv(s.face_of(2, 1, e)).inv() * cv(s.face_of(2, 2, e));
            if (v != Scalar(1)) vals[e] = v;
        }
        return {&s, std::move(vals)};
    }

    Scalar operator()(int two_simplex) const {
        if (!set_ || set_->is_degenerate(2, two_simplex)) return Scalar(1);
        auto it = vals_.find(two_simplex);
        return it == vals_.end() ? Scalar(1) : it->second;
    }

    bool is_closed() const {
        if (!set_ || set_->truncation < 3) return true;
        for (int e : set_->nondegenerate_elems(3)) {
            Scalar v = (*this)(set_->face_of(3, 0, e)) * (*this)(set_->face_of(3, 1, e)).inv() *
                       (*this)(set_->face_of(3, 2, e)) * (*this)(set_->face_of(3, 3, e)).inv();
            if (v != Scalar(1)) return false;
        }
        return true;
    }

    const FiniteSimplicialSet* domain() const { return set_; }

private:
    const FiniteSimplicialSet* set_ = nullptr;
    std::map<int, Scalar> vals_;
};

// Multiplicative bar 2-cocycle of a simplicial monoid (a curvature element):
// values on pairs of 0-simplices and on 1-simplices, normalized so that the
// unit and degenerate slots give 1.
class BarCocycle {
public:
    BarCocycle() = default;
    explicit BarCocycle(const FiniteSimplicialMonoid* s) : s_(s) { init(); }

    static BarCocycle trivial(const FiniteSimplicialMonoid& s) { return BarCocycle(&s); }

    // group-style 2-cocycle on the 0-level monoid, edge part trivial
    static BarCocycle from_pair_table(const FiniteSimplicialMonoid& s,
                                      std::function<Scalar(int, int)> w) {
        BarCocycle h(&s);
        for (std::size_t a = 0; a < s.size(0); ++a)
            for (std::size_t b = 0; b < s.size(0); ++b)
                if (static_cast<int>(a) != s.unit_of(0) && static_cast<int>(b) != s.unit_of(0))
                    h.pair_[a][b] = w(static_cast<int>(a), static_cast<int>(b));
        return h;
    }

    // Coboundary of a normalized 1-cochain c : S_0 \ {e} -> K^*, in the
    // group-cohomology orientation: (bc)(x,y) = c(x) c(y) c(xy)^{-1} on pairs
    // and (bc)(gamma) = c(end) c(start)^{-1} on edges. This is the
    // orientation under which a twist a with b(a) = H^{-1} H' makes the map
    // S[a] : S^{H'} -> S^H a morphism of simplicial monoids.
    static BarCocycle coboundary(const FiniteSimplicialMonoid& s, const std::map<int, Scalar>& c) {
        auto cv = [&](int x) -> Scalar {
            if (x == s.unit_of(0)) return Scalar(1);
            auto it = c.find(x);
            return it == c.end() ? Scalar(1) : it->second;
        };
        BarCocycle h(&s);
        for (std::size_t a = 0; a < s.size(0); ++a)
            for (std::size_t b = 0; b < s.size(0); ++b) {
                int ia = static_cast<int>(a), ib = static_cast<int>(b);
                if (ia == s.unit_of(0) || ib == s.unit_of(0)) continue;
                h.pair_[a][b] = cv(ia) * cv(ib) * cv(s.mul(0, ia, ib)).inv();
            }
        for (std::size_t g = 0; g < s.size(1); ++g) {
            if (s.is_degenerate(1, static_cast<int>(g))) continue;
            int e = static_cast<int>(g);
            h.edge_[g] = cv(s.face_of(1, 0, e)) * cv(s.face_of(1, 1, e)).inv();
        }
        return h;
    }

    Scalar pair(int a, int b) const {
        if (!s_) return Scalar(1);
        if (a == s_->unit_of(0) || b == s_->unit_of(0)) return Scalar(1);
        return pair_[a][b];
    }
    Scalar edge(int e) const {
        if (!s_ || s_->is_degenerate(1, e)) return Scalar(1);
        return edge_[e];
    }
    void set_pair(int a, int b, Scalar v) { pair_[a][b] = std::move(v); }
    void set_edge(int e, Scalar v) { edge_[e] = std::move(v); }

    const FiniteSimplicialMonoid* domain() const { return s_; }

    // The four closedness families: evaluated multiplicatively on the bar
    // differential of every bar-degree-3 basis tensor. Products of 0-level
    // basis classes [x][y] = [xy] - [x] - [y] with [e] = 0.
    bool is_closed() const {
        if (!s_) return true;
        const int e0 = s_->unit_of(0);
        auto P = [&](int a, int b) { return pair(a, b); };
        // (x,y,z)
        for (std::size_t x = 0; x < s_->size(0); ++x)
            for (std::size_t y = 0; y < s_->size(0); ++y)
                for (std::size_t z = 0; z < s_->size(0); ++z) {
                    int ix = static_cast<int>(x), iy = static_cast<int>(y), iz = static_cast<int>(z);
                    if (ix == e0 || iy == e0 || iz == e0) continue;
                    Scalar v = P(s_->mul(0, ix, iy), iz) * P(iy, iz).inv() *
                               P(ix, s_->mul(0, iy, iz)).inv() * P(ix, iy);
                    if (v != Scalar(1)) return false;
                }
        if (s_->truncation >= 1) {
            for (int g : s_->nondegenerate_elems(1)) {
                int g0 = s_->face_of(1, 1, g);  // start vertex
                int g1 = s_->face_of(1, 0, g);  // end vertex
                for (std::size_t x = 0; x < s_->size(0); ++x) {
                    int ix = static_cast<int>(x);
                    if (ix == e0) continue;
                    // (gamma, x):  H(d0 g, x)^{-1} H(d1 g, x) H(g * c_x)^{-1} H(g) = 1
                    int cx = s_->degen_of(0, 0, ix);
                    Scalar v1 = P(g1, ix).inv() * P(g0, ix) * edge(s_->mul(1, g, cx)).inv() * edge(g);
                    if (v1 != Scalar(1)) return false;
                    // (x, gamma):  H(x, d0 g) H(x, d1 g)^{-1} H(c_x * g) H(g)^{-1} = 1
                    Scalar v2 = P(ix, g1) * P(ix, g0).inv() * edge(s_->mul(1, cx, g)) * edge(g).inv();
                    if (v2 != Scalar(1)) return false;
                }
            }
        }
        if (s_->truncation >= 2) {
            for (int t : s_->nondegenerate_elems(2)) {
                Scalar v = edge(s_->face_of(2, 0, t)).inv() * edge(s_->face_of(2, 1, t)) *
                           edge(s_->face_of(2, 2, t)).inv();
                if (v != Scalar(1)) return false;
            }
        }
        return true;
    }

private:
    void init() {
        pair_.assign(s_->size(0), std::vector<Scalar>(s_->size(0), Scalar(1)));
        edge_.assign(s_->size(1), Scalar(1));
    }
    const FiniteSimplicialMonoid* s_ = nullptr;
    std::vector<std::vector<Scalar>> pair_;
    std::vector<Scalar> edge_;
};

// Multiplicative 1-cochain used as a twist between curvature elements.
class BarTwist {
public:
    BarTwist() = default;
    BarTwist(const FiniteSimplicialMonoid* s, std::map<int, Scalar> c) : s_(s), c_(std::move(c)) {}

    Scalar operator()(int x) const {
        if (!s_ || x == s_->unit_of(0)) return Scalar(1);
        auto it = c_.find(x);
        return it == c_.end() ? Scalar(1) : it->second;
    }
    BarTwist inverse() const {
        std::map<int, Scalar> inv;
        for (auto& [k, v] : c_) inv[k] = v.inv();
        return {s_, std::move(inv)};
    }
    BarTwist composed_with(const BarTwist& other) const {  // pointwise product
        std::map<int, Scalar> c = c_;
        for (auto& [k, v] : other.c_) {
            auto it = c.find(k);
            if (it == c.end())
                c[k] = v;
            else
                it->second *= v;
        }
        return {s_, std::move(c)};
    }

    // b(a) on the bar-degree-2 slots, group-cohomology orientation
    Scalar boundary_pair(int x, int y) const {
        return (*this)(x) * (*this)(y) * (*this)(s_->mul(0, x, y)).inv();
    }
    Scalar boundary_edge(int g) const {
        return (*this)(s_->face_of(1, 0, g)) * (*this)(s_->face_of(1, 1, g)).inv();
    }

private:
    const FiniteSimplicialMonoid* s_ = nullptr;
    std::map<int, Scalar> c_;
};

// ---------------------------------------------------------------------------
// the twisted simplicial monoid S^H over K^* x S

struct ScaledElem {
    Scalar coeff;
    int id;
};

// Model of S^H: elements are (nonzero scalar, base element); every structure
// map is K^*-equivariant, so validating on the representatives {1} x S decides
// all identities.
class TwistedSimplicialMonoid {
public:
    using Elem = ScaledElem;

    TwistedSimplicialMonoid(const FiniteSimplicialMonoid* s, const BarCocycle* h) : s_(s), h_(h) {}

    int truncation() const { return s_->truncation; }
    std::vector<Elem> representatives(int k) const {
        std::vector<Elem> v;
        for (std::size_t e = 0; e < s_->size(k); ++e) v.push_back({Scalar(1), static_cast<int>(e)});
        return v;
    }
    Elem face(int k, int i, const Elem& e) const {
        if (i < k) return {e.coeff, s_->face_of(k, i, e.id)};
        // last face picks up the value of H on the last edge
        int last_edge = s_->subsimplex(k, e.id, {k - 1, k});
        return {e.coeff * h_->edge(last_edge), s_->face_of(k, k, e.id)};
    }
    Elem degeneracy(int k, int i, const Elem& e) const { return {e.coeff, s_->degen_of(k, i, e.id)}; }
    Elem product(int k, const Elem& a, const Elem& b) const {
        int va = s_->subsimplex(k, a.id, {k});
        int vb = s_->subsimplex(k, b.id, {k});
        return {a.coeff * b.coeff * h_->pair(va, vb), s_->mul(k, a.id, b.id)};
    }
    Elem unit(int k) const { return {Scalar(1), s_->unit_of(k)}; }
    bool equal(const Elem& a, const Elem& b) const { return a.id == b.id && a.coeff == b.coeff; }
    std::string describe(int k, const Elem& e) const {
        return e.coeff.str() + "." + s_->label(k, e.id);
    }

    const FiniteSimplicialMonoid& base() const { return *s_; }
    const BarCocycle& cocycle() const { return *h_; }

private:
    const FiniteSimplicialMonoid* s_;
    const BarCocycle* h_;
};

inline TwistedSimplicialMonoid twist_monoid(const FiniteSimplicialMonoid& s, const BarCocycle& h) {
    if (!h.is_closed()) throw NotClosedCocycleError("curvature element is not closed");
    return {&s, &h};
}

inline std::vector<SimplicialViolation> validate_twisted_monoid(const TwistedSimplicialMonoid& t) {
    return validate_simplicial_monoid_model(t);
}

// The map of simplicial monoids S[a] : S^{H'} -> S^{H} induced by a twist a
// with b(a) = H^{-1} H'. Returns the defect report of all compatibility
// identities on representatives; empty iff the map is a morphism.
struct TwistMapCheck {
    std::vector<SimplicialViolation> violations;
    bool ok() const { return violations.empty(); }
};

inline ScaledElem apply_twist_map(const FiniteSimplicialMonoid& s, const BarTwist& a, int level,
                                  const ScaledElem& e) {
    int last_vertex = s.subsimplex(level, e.id, {level});
    return {e.coeff * a(last_vertex), e.id};
}

inline TwistMapCheck apply_twist(const FiniteSimplicialMonoid& s, const BarTwist& a,
                                 const BarCocycle& h_from, const BarCocycle& h_to) {
    // twist equation b(a) = H^{-1} H' on every bar-degree-2 slot
    const int e0 = s.unit_of(0);
    for (std::size_t x = 0; x < s.size(0); ++x)
        for (std::size_t y = 0; y < s.size(0); ++y) {
            int ix = static_cast<int>(x), iy = static_cast<int>(y);
            if (ix == e0 || iy == e0) continue;
            if (a.boundary_pair(ix, iy) != h_from.pair(ix, iy).inv() * h_to.pair(ix, iy))
                throw NotATwistError("twist equation fails on a pair of 0-simplices");
        }
    for (int g : s.nondegenerate_elems(1))
        if (a.boundary_edge(g) != h_from.edge(g).inv() * h_to.edge(g))
            throw NotATwistError("twist equation fails on a 1-simplex");

    TwistedSimplicialMonoid from(&s, &h_to), to(&s, &h_from);
    TwistMapCheck check;
    auto mapped = [&](int level, const ScaledElem& e) { return apply_twist_map(s, a, level, e); };
    for (int k = 0; k <= s.truncation; ++k)
        for (const auto& e : from.representatives(k)) {
            for (int i = 0; k >= 1 && i <= k; ++i) {
                auto lhs = mapped(k - 1, from.face(k, i, e));
                auto rhs = to.face(k, i, mapped(k, e));
                if (!to.equal(lhs, rhs)) check.violations.push_back({"twist-face", k, i, s.label(k, e.id)});
            }
            for (int i = 0; k < s.truncation && i <= k; ++i) {
                auto lhs = mapped(k + 1, from.degeneracy(k, i, e));
                auto rhs = to.degeneracy(k, i, mapped(k, e));
                if (!to.equal(lhs, rhs))
                    check.violations.push_back({"twist-degen", k, i, s.label(k, e.id)});
            }
            for (const auto& f : from.representatives(k)) {
                auto lhs = mapped(k, from.product(k, e, f));
                auto rhs = to.product(k, mapped(k, e), mapped(k, f));
                if (!to.equal(lhs, rhs))
                    check.violations.push_back({"twist-product", k, 0, s.label(k, e.id)});
            }
        }
    return check;
}

}  // namespace curvo
