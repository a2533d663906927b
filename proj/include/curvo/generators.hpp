#pragma once

// Randomized but exactly valid A-infinity data.
//
// With the arity-1 part pinned to the identity, the defining relations are
// affine in the higher components, and products of two higher components
// vanish identically once every higher value is constrained to a square-zero
// corner of the Hom spaces (matrix values supported on the strictly upper
// entry of 2-dimensional fibers). Valid functors then form "identity plus an
// exact kernel", and random members are random kernel combinations.
//
// Natural transformations are linear in the transformation throughout, so the
// same kernel construction applies without the corner constraint.
//
// The kernel systems are assembled in one pass over the relation tuples: on a
// basis tuple every term of the relation touches at most one stored key, so
// each term contributes a small sparse column block.

#include "curvo/ainfty.hpp"
#include "curvo/cdg.hpp"
#include "curvo/loc.hpp"

#include <functional>
#include <map>
#include <vector>

namespace curvo {

// A square-zero corner: a basis, per degree, of a subspace J of the
// endomorphism spaces with J o J = 0 that is stable under nabla and under
// composition with degree-0 endomorphisms. Over the circle-wedge-cell
// instance with one-dimensional fibers this is spanned by the cochains
// supported on the free circle in degree 1 together with everything in
// degree 2 (all products land in the vanishing degree 3 or pair two
// circle-supported values, which never meet a 2-cell face).
using CornerBasis = std::vector<std::vector<Morphism>>;  // per degree

inline CornerBasis circle_wedge_corner(const LocInstance& inst, int obj) {
    const FiniteSimplicialSet& s = inst.simplicial_set();
    CornerBasis corner(inst.max_degree() + 1);
    for (int g : s.nondegenerate_elems(1))
        if (s.label(1, g) == "e")
            corner[1].push_back(inst.from_values(obj, obj, 1, {{g, ExactMatrix::identity(1)}}));
    for (int g : s.nondegenerate_elems(2))
        corner[2].push_back(inst.from_values(obj, obj, 2, {{g, ExactMatrix::identity(1)}}));
    return corner;
}

// the instance the corner belongs to: one-dimensional fibers over the wedge
// of a circle and a doubly-glued curved 2-cell
struct CircleWedgeInstance {
    FiniteSimplicialSet set;
    SimplicialCocycle h;
    LocInstance inst;
    int object;

    explicit CircleWedgeInstance(const Scalar& attach_scalar = Scalar(2, 3),
                                 const Scalar& circle_scalar = Scalar(2),
                                 const Scalar& cell_value = Scalar(-1))
        : set(circle_wedge_cell(3)), h(), inst(build(cell_value)), object(0) {
        LocObject obj;
        obj.fiber_dims.assign(set.size(0), 1);
        for (int g : set.nondegenerate_elems(1)) {
            Scalar v = set.label(1, g) == "e" ? circle_scalar : attach_scalar;
            obj.transports[g] = v * ExactMatrix::identity(1);
        }
        object = inst.add_object(std::move(obj));
    }

private:
    LocInstance build(const Scalar& cell_value) {
        std::map<int, Scalar> vals;
        for (int g : set.nondegenerate_elems(2)) vals[g] = cell_value;
        h = SimplicialCocycle(&set, vals);
        return LocInstance(set, h);
    }
};

namespace gendetail {

// incremental exact row reduction; keeps one pivot row per pivot column
class SparseEliminator {
public:
    explicit SparseEliminator(std::size_t cols) : cols_(cols) {}

    void add_row(std::map<std::size_t, Scalar> row) {
        for (;;) {
            while (!row.empty() && row.begin()->second.is_zero()) row.erase(row.begin());
            if (row.empty()) return;
            std::size_t lead = row.begin()->first;
            auto piv = pivots_.find(lead);
            if (piv == pivots_.end()) {
                Scalar inv = row.begin()->second.inv();
                for (auto& [c, v] : row) v *= inv;
                pivots_[lead] = std::move(row);
                return;
            }
            Scalar f = row.begin()->second;
            for (auto& [c, v] : piv->second) {
                auto it = row.find(c);
                if (it == row.end()) {
                    row[c] = -f * v;
                } else {
                    it->second -= f * v;
                    if (it->second.is_zero()) row.erase(it);
                }
            }
        }
    }

    // nullspace basis of the accumulated row space
    std::vector<std::vector<Scalar>> kernel() const {
        ExactMatrix m(pivots_.size(), cols_);
        std::size_t r = 0;
        for (auto& [lead, row] : pivots_) {
            for (auto& [c, v] : row) m(r, c) = v;
            ++r;
        }
        ExactMatrix ker = nullspace(m);
        std::vector<std::vector<Scalar>> out;
        for (std::size_t j = 0; j < ker.cols(); ++j) out.push_back(ker.col(j));
        return out;
    }

private:
    std::size_t cols_;
    std::map<std::size_t, std::map<std::size_t, Scalar>> pivots_;
};

// unknown layout: contiguous coefficient blocks per tuple key
struct KeyLayout {
    std::map<TupleKey, std::size_t> offset;        // first unknown index of the key
    std::vector<const std::vector<Morphism>*> basis;  // per key, the value basis
    std::vector<TupleKey> keys;
    std::size_t total = 0;
};

}  // namespace gendetail

struct GeneratedFunctors {
    std::vector<AInftyFunctor> functors;
    std::size_t kernel_dim = 0;
};

// Random proper A-infinity endofunctors of a single object of a Loc instance
// with 2-dimensional fibers: identity arity-1 part, higher parts exact random
// solutions of the relations valued in the strictly-upper corner.
inline GeneratedFunctors random_proper_functors(const LocInstance& inst, int obj, int count,
                                                SplitMix& rng, const CornerBasis& corner,
                                                int max_arity = 3) {
    const int maxdeg = inst.max_degree();

    std::vector<std::vector<Morphism>> jbasis(maxdeg + 1);
    std::vector<std::vector<Morphism>> jbasis_nabla(maxdeg + 1);
    for (int d = 0; d <= maxdeg && d < static_cast<int>(corner.size()); ++d) {
        jbasis[d] = corner[d];
        for (auto& m : jbasis[d]) jbasis_nabla[d].push_back(inst.nabla(m));
    }
    const Morphism curv = inst.curvature(obj);

    // unknowns
    gendetail::KeyLayout layout;
    {
        std::function<void(int, std::vector<std::pair<int, std::size_t>>&)> rec =
            [&](int arity, std::vector<std::pair<int, std::size_t>>& slots) {
                if (!slots.empty() && static_cast<int>(slots.size()) >= 2) {
                    int total = 0;
                    for (auto& [d, i] : slots) total += d;
                    int out_deg = total - static_cast<int>(slots.size()) + 1;
                    if (out_deg >= 0 && out_deg <= maxdeg && !jbasis[out_deg].empty()) {
                        TupleKey key;
                        key.objs.assign(slots.size() + 1, obj);
                        key.slots = slots;
                        layout.offset[key] = layout.total;
                        layout.keys.push_back(key);
                        layout.basis.push_back(&jbasis[out_deg]);
                        layout.total += jbasis[out_deg].size();
                    }
                }
                if (static_cast<int>(slots.size()) == arity) return;
                for (int d = 1; d <= maxdeg; ++d)
                    for (std::size_t i = 0; i < inst.hom_dim(obj, obj, d); ++i) {
                        slots.push_back({d, i});
                        rec(arity, slots);
                        slots.pop_back();
                    }
            };
        for (int arity = 2; arity <= max_arity; ++arity) {
            std::vector<std::pair<int, std::size_t>> slots;
            // enumerate exactly the tuples of this arity
            std::function<void(std::vector<std::pair<int, std::size_t>>&)> full =
                [&](std::vector<std::pair<int, std::size_t>>& cur) {
                    if (static_cast<int>(cur.size()) == arity) {
                        int total = 0;
                        for (auto& [d, i] : cur) total += d;
                        int out_deg = total - arity + 1;
                        if (out_deg < 0 || out_deg > maxdeg || jbasis[out_deg].empty()) return;
                        TupleKey key;
                        key.objs.assign(arity + 1, obj);
                        key.slots = cur;
                        if (layout.offset.count(key)) return;
                        layout.offset[key] = layout.total;
                        layout.keys.push_back(key);
                        layout.basis.push_back(&jbasis[out_deg]);
                        layout.total += jbasis[out_deg].size();
                        return;
                    }
                    for (int d = 1; d <= maxdeg; ++d)
                        for (std::size_t i = 0; i < inst.hom_dim(obj, obj, d); ++i) {
                            cur.push_back({d, i});
                            full(cur);
                            cur.pop_back();
                        }
                };
            std::vector<std::pair<int, std::size_t>> cur;
            full(cur);
        }
        (void)rec;
    }

    gendetail::SparseEliminator elim(layout.total);

    // one equation block per tuple: accumulate sparse column contributions,
    // then emit one eliminator row per output coefficient
    auto key_lookup = [&](const std::vector<std::pair<int, std::size_t>>& slots)
        -> std::pair<bool, std::size_t> {
        TupleKey key;
        key.objs.assign(slots.size() + 1, obj);
        key.slots = slots;
        auto it = layout.offset.find(key);
        if (it == layout.offset.end()) return {false, 0};
        return {true, it->second};
    };

    auto process_tuple = [&](const std::vector<std::pair<int, std::size_t>>& t) {
        const int n = static_cast<int>(t.size());
        long total = 0;
        for (auto& [d, i] : t) total += d;
        const int out_deg = static_cast<int>(total) - n + 2;
        if (out_deg < 0) return;
        std::size_t out_dim = inst.hom_dim(obj, obj, out_deg);
        if (out_dim == 0) return;
        // contributions[u] = coefficient vector of the residual
        std::map<std::size_t, std::vector<Scalar>> contrib;
        auto add = [&](std::size_t u, const Scalar& c, const Morphism& m) {
            if (m.is_zero() || c.is_zero()) return;
            auto& vec = contrib[u];
            if (vec.empty()) vec.assign(out_dim, Scalar(0));
            for (std::size_t i = 0; i < m.coeffs.size(); ++i) vec[i] += c * m.coeffs[i];
        };
        auto tail_deg = [&](int k) {
            long s = 0;
            for (int i = k; i <= n; ++i) s += t[i - 1].first;
            return s;
        };
        auto basis_mor = [&](int k) { return inst.basis_morphism(obj, obj, t[k - 1].first, t[k - 1].second); };

        // nabla F(tuple)
        if (n >= 2) {
            auto [ok, off] = key_lookup(t);
            if (ok) {
                Scalar sgn = sign_pow(total + 1 - n);
                int key_out = static_cast<int>(total) - n + 1;
                for (std::size_t u = 0; u < jbasis[key_out].size(); ++u)
                    add(off + u, sgn, jbasis_nabla[key_out][u]);
            }
        }
        // products with the identity arity-1 part on one side
        for (int k = 1; k <= n - 1; ++k) {
            Scalar sgn = sign_pow(tail_deg(k + 1) - n + k + 1);
            if (k == 1 && n >= 3) {
                std::vector<std::pair<int, std::size_t>> right(t.begin() + 1, t.end());
                auto [ok, off] = key_lookup(right);
                if (ok) {
                    Morphism left = basis_mor(1);
                    int key_out = static_cast<int>(tail_deg(2)) - (n - 1) + 1;
                    for (std::size_t u = 0; u < jbasis[key_out].size(); ++u)
                        add(off + u, sgn, inst.compose(left, jbasis[key_out][u]));
                }
            }
            if (k == n - 1 && n >= 3) {
                std::vector<std::pair<int, std::size_t>> left(t.begin(), t.end() - 1);
                auto [ok, off] = key_lookup(left);
                if (ok) {
                    Morphism right = basis_mor(n);
                    int key_out = static_cast<int>(total) - t[n - 1].first - (n - 1) + 1;
                    for (std::size_t u = 0; u < jbasis[key_out].size(); ++u)
                        add(off + u, sgn, inst.compose(jbasis[key_out][u], right));
                }
            }
        }
        // RHS: nabla insertions
        if (n >= 2)
            for (int k = 1; k <= n; ++k) {
                Morphism db = inst.nabla(basis_mor(k));
                if (db.is_zero()) continue;
                Scalar sgn = Scalar(-1) * sign_pow(tail_deg(k) - n + k);
                for (std::size_t i = 0; i < db.coeffs.size(); ++i) {
                    if (db.coeffs[i].is_zero()) continue;
                    auto mod = t;
                    mod[k - 1] = {t[k - 1].first + 1, i};
                    auto [ok, off] = key_lookup(mod);
                    if (!ok) continue;
                    int key_out = static_cast<int>(total) + 1 - n + 1;
                    for (std::size_t u = 0; u < jbasis[key_out].size(); ++u)
                        add(off + u, sgn * db.coeffs[i], jbasis[key_out][u]);
                }
            }
        // RHS: merged compositions
        if (n >= 3)
            for (int k = 1; k <= n - 1; ++k) {
                Morphism merged = inst.compose(basis_mor(k), basis_mor(k + 1));
                if (merged.is_zero()) continue;
                Scalar sgn = Scalar(-1) * sign_pow(tail_deg(k + 1) - n + k - 1);
                int md = t[k - 1].first + t[k].first;
                for (std::size_t i = 0; i < merged.coeffs.size(); ++i) {
                    if (merged.coeffs[i].is_zero()) continue;
                    std::vector<std::pair<int, std::size_t>> mod;
                    mod.insert(mod.end(), t.begin(), t.begin() + (k - 1));
                    mod.push_back({md, i});
                    mod.insert(mod.end(), t.begin() + k + 1, t.end());
                    auto [ok, off] = key_lookup(mod);
                    if (!ok) continue;
                    int key_out = static_cast<int>(total) - (n - 1) + 1;
                    for (std::size_t u = 0; u < jbasis[key_out].size(); ++u)
                        add(off + u, sgn * merged.coeffs[i], jbasis[key_out][u]);
                }
            }
        // RHS: curvature insertions (tuples of arity n+1)
        if (n + 1 >= 2 && n + 1 <= max_arity)
            for (int k = 1; k <= n + 1; ++k) {
                Scalar sgn = Scalar(-1) * sign_pow(tail_deg(k) - n + k);
                for (std::size_t i = 0; i < curv.coeffs.size(); ++i) {
                    if (curv.coeffs[i].is_zero()) continue;
                    std::vector<std::pair<int, std::size_t>> mod;
                    mod.insert(mod.end(), t.begin(), t.begin() + (k - 1));
                    mod.push_back({2, i});
                    mod.insert(mod.end(), t.begin() + (k - 1), t.end());
                    auto [ok, off] = key_lookup(mod);
                    if (!ok) continue;
                    int key_out = static_cast<int>(total) + 2 - (n + 1) + 1;
                    for (std::size_t u = 0; u < jbasis[key_out].size(); ++u)
                        add(off + u, sgn * curv.coeffs[i], jbasis[key_out][u]);
                }
            }

        if (contrib.empty()) return;
        for (std::size_t i = 0; i < out_dim; ++i) {
            std::map<std::size_t, Scalar> row;
            for (auto& [u, vec] : contrib)
                if (!vec[i].is_zero()) row[u] = vec[i];
            if (!row.empty()) elim.add_row(std::move(row));
        }
    };

    // all basis tuples of arity 1..max_arity+1
    for (int n = 1; n <= max_arity + 1; ++n) {
        std::vector<std::pair<int, std::size_t>> cur;
        std::function<void()> walk = [&]() {
            if (static_cast<int>(cur.size()) == n) {
                process_tuple(cur);
                return;
            }
            for (int d = 0; d <= maxdeg; ++d)
                for (std::size_t i = 0; i < inst.hom_dim(obj, obj, d); ++i) {
                    cur.push_back({d, i});
                    walk();
                    cur.pop_back();
                }
        };
        walk();
    }

    auto kernel = elim.kernel();
    GeneratedFunctors out;
    out.kernel_dim = kernel.size();
    for (int c = 0; c < count; ++c) {
        AInftyFunctor f = identity_functor(inst, max_arity);
        if (!kernel.empty()) {
            std::vector<Scalar> combo(layout.total, Scalar(0));
            bool nonzero = false;
            for (auto& kv : kernel) {
                Scalar w = rng.rational(2, 1);
                if (!w.is_zero()) nonzero = true;
                for (std::size_t i = 0; i < combo.size(); ++i) combo[i] += w * kv[i];
            }
            if (!nonzero)
                for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = kernel.front()[i];
            for (std::size_t k = 0; k < layout.keys.size(); ++k) {
                std::size_t off = layout.offset.at(layout.keys[k]);
                Morphism acc;
                bool any = false;
                for (std::size_t u = 0; u < layout.basis[k]->size(); ++u) {
                    if (combo[off + u].is_zero()) continue;
                    Morphism term = combo[off + u] * (*layout.basis[k])[u];
                    acc = any ? acc + term : term;
                    any = true;
                }
                if (any && !acc.is_zero()) f.higher[layout.keys[k]] = std::move(acc);
            }
        }
        out.functors.push_back(std::move(f));
    }
    return out;
}

struct GeneratedNats {
    std::vector<AInftyNat> nats;
    std::size_t kernel_dim = 0;
};

// Random valid natural transformations between two functors sharing a single
// tracked object; linear in the transformation, so validity is membership in
// an exact kernel. Assembled by brute evaluation per unknown (the systems are
// small for strict functors).
inline GeneratedNats random_nats(const AInftyFunctor& F, const AInftyFunctor& G, int obj, int count,
                                 SplitMix& rng, int max_arity = 2) {
    const CdgInstance& c = *F.source;
    const CdgInstance& d = *F.target;
    const int maxdeg = c.max_degree();
    const int fo = F.map_object(obj), go = G.map_object(obj);

    struct NatUnknown {
        bool is_component;
        TupleKey key;
        std::size_t coeff_index;
    };
    std::vector<NatUnknown> unknowns;
    for (std::size_t i = 0; i < d.hom_dim(fo, go, 0); ++i) unknowns.push_back({true, {}, i});
    {
        std::function<void(int, std::vector<std::pair<int, std::size_t>>&)> walk =
            [&](int arity, std::vector<std::pair<int, std::size_t>>& cur) {
                if (static_cast<int>(cur.size()) == arity) {
                    int total = 0;
                    for (auto& [dd, i] : cur) total += dd;
                    int out_deg = total - arity;
                    if (out_deg < 0 || out_deg > maxdeg) return;
                    TupleKey key;
                    key.objs.assign(arity + 1, obj);
                    key.slots = cur;
                    for (std::size_t i = 0; i < d.hom_dim(fo, go, out_deg); ++i)
                        unknowns.push_back({false, key, i});
                    return;
                }
                for (int dd = 1; dd <= maxdeg; ++dd)
                    for (std::size_t i = 0; i < c.hom_dim(obj, obj, dd); ++i) {
                        cur.push_back({dd, i});
                        walk(arity, cur);
                        cur.pop_back();
                    }
            };
        for (int m = 1; m <= max_arity; ++m) {
            std::vector<std::pair<int, std::size_t>> cur;
            walk(m, cur);
        }
    }

    bool strict = F.higher.empty() && G.higher.empty();
    const int max_f_arity = strict ? 1 : std::max(F.max_arity, G.max_arity);

    gendetail::SparseEliminator elim(unknowns.size());
    // rows come from evaluating the residual of each indicator unknown on the
    // relevant tuple battery; contributions are merged per (tuple, coord)
    std::map<std::vector<long>, std::map<std::size_t, Scalar>> rows;
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
        AInftyNat eta;
        eta.from = &F;
        eta.to = &G;
        eta.max_arity = max_arity;
        std::vector<int> key_degs;
        int m = 0;
        if (unknowns[u].is_component) {
            eta.component[obj] = d.basis_morphism(fo, go, 0, unknowns[u].coeff_index);
        } else {
            m = static_cast<int>(unknowns[u].key.slots.size());
            int out_deg = -m;
            for (auto& [dd, i] : unknowns[u].key.slots) {
                out_deg += dd;
                key_degs.push_back(dd);
            }
            eta.data[unknowns[u].key] = d.basis_morphism(fo, go, out_deg, unknowns[u].coeff_index);
        }
        for (int n = std::max(0, m - 1); n <= m + max_f_arity; ++n) {
            if (n == 0) {
                Morphism r = nat_residual(eta, {}, obj);
                for (std::size_t i = 0; i < r.coeffs.size(); ++i)
                    if (!r.coeffs[i].is_zero()) rows[{0, static_cast<long>(i)}][u] = r.coeffs[i];
                continue;
            }
            // candidate degree vectors: those touching the key
            std::vector<std::vector<int>> degsets;
            {
                std::vector<int> cur(n, 0);
                std::function<void(int)> gen = [&](int j) {
                    if (j == n) {
                        degsets.push_back(cur);
                        return;
                    }
                    for (int dd = 0; dd <= maxdeg; ++dd) {
                        cur[j] = dd;
                        gen(j + 1);
                    }
                };
                gen(0);
            }
            for (auto& degs : degsets) {
                // prefilter: the indicator must be reachable
                bool touch = false;
                if (m == 0) {
                    touch = (n <= max_f_arity);
                } else {
                    if (n == m && degs == key_degs) touch = true;
                    for (int j = 0; j < n && !touch && n == m; ++j) {
                        auto mod = degs;
                        mod[j] += 1;
                        if (mod == key_degs) touch = true;
                    }
                    if (!touch && n == m + 1) {
                        for (int j = 0; j + 1 < n && !touch; ++j) {
                            std::vector<int> mod;
                            for (int i2 = 0; i2 < n; ++i2)
                                if (i2 != j + 1) mod.push_back(i2 == j ? degs[j] + degs[j + 1] : degs[i2]);
                            if (mod == key_degs) touch = true;
                        }
                    }
                    if (!touch && n == m - 1) {
                        for (int j = 0; j <= n && !touch; ++j) {
                            auto mod = degs;
                            mod.insert(mod.begin() + j, 2);
                            if (mod == key_degs) touch = true;
                        }
                    }
                    for (int j = 1; j <= max_f_arity && !touch; ++j) {
                        if (n != m + j) continue;
                        if (std::vector<int>(degs.begin(), degs.begin() + m) == key_degs) touch = true;
                        if (std::vector<int>(degs.begin() + j, degs.end()) == key_degs) touch = true;
                    }
                }
                if (!touch) continue;
                std::vector<std::size_t> dims;
                for (int dd : degs) dims.push_back(c.hom_dim(obj, obj, dd));
                bool empty = false;
                for (auto dd : dims) empty |= (dd == 0);
                if (empty) continue;
                std::vector<std::size_t> idx(n, 0);
                for (;;) {
                    std::vector<Morphism> tuple;
                    for (int j = 0; j < n; ++j) tuple.push_back(c.basis_morphism(obj, obj, degs[j], idx[j]));
                    Morphism r = nat_residual(eta, tuple);
                    if (!r.is_zero()) {
                        std::vector<long> rowkey{static_cast<long>(n)};
                        for (int j = 0; j < n; ++j) {
                            rowkey.push_back(degs[j]);
                            rowkey.push_back(static_cast<long>(idx[j]));
                        }
                        for (std::size_t i = 0; i < r.coeffs.size(); ++i)
                            if (!r.coeffs[i].is_zero()) {
                                auto rk = rowkey;
                                rk.push_back(static_cast<long>(i));
                                rows[rk][u] = r.coeffs[i];
                            }
                    }
                    int j = n - 1;
                    while (j >= 0 && ++idx[j] == dims[j]) idx[j--] = 0;
                    if (j < 0) break;
                }
            }
        }
    }
    for (auto& [rk, row] : rows) elim.add_row(row);

    auto kernel = elim.kernel();
    GeneratedNats out;
    out.kernel_dim = kernel.size();
    for (int cnum = 0; cnum < count; ++cnum) {
        AInftyNat eta;
        eta.from = &F;
        eta.to = &G;
        eta.max_arity = max_arity;
        std::vector<Scalar> combo(unknowns.size(), Scalar(0));
        for (auto& kv : kernel) {
            Scalar w = rng.rational(2, 1);
            for (std::size_t i = 0; i < combo.size(); ++i) combo[i] += w * kv[i];
        }
        for (std::size_t u = 0; u < unknowns.size(); ++u) {
            if (combo[u].is_zero()) continue;
            if (unknowns[u].is_component) {
                Morphism b = d.basis_morphism(fo, go, 0, unknowns[u].coeff_index);
                auto it = eta.component.find(obj);
                if (it == eta.component.end())
                    eta.component[obj] = combo[u] * b;
                else
                    it->second = it->second + combo[u] * b;
            } else {
                int m = static_cast<int>(unknowns[u].key.slots.size());
                int out_deg = -m;
                for (auto& [dd, i] : unknowns[u].key.slots) out_deg += dd;
                Morphism b = d.basis_morphism(fo, go, out_deg, unknowns[u].coeff_index);
                auto it = eta.data.find(unknowns[u].key);
                if (it == eta.data.end())
                    eta.data[unknowns[u].key] = combo[u] * b;
                else
                    it->second = it->second + combo[u] * b;
            }
        }
        out.nats.push_back(std::move(eta));
    }
    return out;
}

}  // namespace curvo
