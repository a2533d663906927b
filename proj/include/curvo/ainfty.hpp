#pragma once

// A-infinity functor data between cdg instances, the defining relations as
// exact residuals, induced functors on twisted complexes, natural
// transformations, strictification and homotopy transfer.
//
// Sign conventions implemented here (see docs/signs.md for the full table):
//   functor relation, LHS:
//     (-1)^{|f_1|+...+|f_n|+1-n} nabla F(f_1..f_n)
//     + sum_{k=1}^{n-1} (-1)^{|f_{k+1}|+...+|f_n|-n+k+1} F(f_1..f_k) F(f_{k+1}..f_n)
//   RHS:
//     sum_{k=1}^{n}   (-1)^{|f_k|+...+|f_n|-n+k}   F(f_1,..,nabla f_k,..,f_n)
//   + sum_{k=1}^{n-1} (-1)^{|f_{k+1}|+...+|f_n|-n+k-1} F(f_1,..,f_k f_{k+1},..,f_n)
//   + sum_{k=1}^{n+1} (-1)^{|f_k|+...+|f_n|-n+k}   F(f_1,..,f_{k-1},R_{E_k},f_k,..,f_n)
//   natural transformation: same right side (R-sum up to n+1, so that the
//   n = 0 case reads nabla(eta_E) = eta(R_E)), left side
//     (-1)^{|f_1|+...+|f_n|-n+1} nabla eta(f_1..f_n)
//     + sum_{k=0}^{n-1} eta(f_1..f_k) F(f_{k+1}..f_n)
//     + sum_{k=1}^{n}  (-1)^{|f_{k+1}|+...+|f_n|-n+k+1} G(f_1..f_k) eta(f_{k+1}..f_n)
//   induced functor sign:
//     F'(f_1..f_n) = (-1)^{sum_j p_j (q_{j+1}+...+q_n + n-j)} F(f_1..f_n)
//   (the arity-1 exponent is zero, so strict functors induce themselves
//   termwise on connection data)

#include "curvo/cdg.hpp"
#include "curvo/graded.hpp"
#include "curvo/tw.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

namespace curvo {

struct PropernessError : std::runtime_error {
    explicit PropernessError(const std::string& m) : std::runtime_error(m) {}
};
struct NotClosedError : std::runtime_error {
    explicit NotClosedError(const std::string& m) : std::runtime_error(m) {}
};
struct TransferInternalError : std::runtime_error {
    explicit TransferInternalError(const std::string& m) : std::runtime_error(m) {}
};

// basis tuple of composable morphisms: object chain e_1..e_{n+1} plus one
// (degree, basis index) per slot; slot j is a morphism e_{j+2} -> e_{j+1}
struct TupleKey {
    std::vector<int> objs;
    std::vector<std::pair<int, std::size_t>> slots;

    friend bool operator<(const TupleKey& a, const TupleKey& b) {
        return std::tie(a.objs, a.slots) < std::tie(b.objs, b.slots);
    }
};

class AInftyFunctor {
public:
    const CdgInstance* source = nullptr;
    const CdgInstance* target = nullptr;
    std::vector<int> object_map;
    int max_arity = 3;
    // arity-1 action per (src, dst, degree); absent entries act as the
    // coefficient-identity (source and target hom spaces must then agree)
    std::map<std::tuple<int, int, int>, ExactMatrix> linear;
    // arity >= 2 data on basis tuples; proper: no key contains a degree-0 slot
    std::map<TupleKey, Morphism> higher;

    int map_object(int e) const { return object_map.at(e); }

    Morphism apply1(const Morphism& f) const {
        int s = map_object(f.src), d = map_object(f.dst);
        auto it = linear.find({f.src, f.dst, f.degree});
        Morphism out = target->zero_morphism(s, d, f.degree);
        if (it == linear.end()) {
            if (out.coeffs.size() != f.coeffs.size())
                throw DimensionError("arity-1 identity action needs matching hom spaces");
            out.coeffs = f.coeffs;
            return out;
        }
        const ExactMatrix& m = it->second;
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (!m(i, j).is_zero() && !f.coeffs[j].is_zero()) out.coeffs[i] += m(i, j) * f.coeffs[j];
        return out;
    }

    // multilinear evaluation; fs = (f_1, ..., f_n) with f_j : E_{j+1} -> E_j
    Morphism apply(const std::vector<Morphism>& fs) const {
        if (fs.empty()) throw DimensionError("empty tuple");
        if (fs.size() == 1) return apply1(fs[0]);
        int total = 0;
        for (const auto& f : fs) total += f.degree;
        const int n = static_cast<int>(fs.size());
        Morphism out = target->zero_morphism(map_object(fs.back().src), map_object(fs.front().dst),
                                             total - n + 1);
        if (static_cast<int>(fs.size()) > max_arity || higher.empty()) return out;
        TupleKey key;
        key.objs.push_back(fs.front().dst);
        for (const auto& f : fs) key.objs.push_back(f.src);
        key.slots.resize(fs.size());
        expand(fs, 0, Scalar(1), key, out);
        return out;
    }

private:
    void expand(const std::vector<Morphism>& fs, std::size_t j, const Scalar& coeff, TupleKey& key,
                Morphism& out) const {
        if (j == fs.size()) {
            auto it = higher.find(key);
            if (it == higher.end()) return;
            for (std::size_t i = 0; i < out.coeffs.size(); ++i)
                if (!it->second.coeffs[i].is_zero()) out.coeffs[i] += coeff * it->second.coeffs[i];
            return;
        }
        for (std::size_t b = 0; b < fs[j].coeffs.size(); ++b) {
            if (fs[j].coeffs[b].is_zero()) continue;
            key.slots[j] = {fs[j].degree, b};
            expand(fs, j + 1, coeff * fs[j].coeffs[b], key, out);
        }
    }
};

inline AInftyFunctor identity_functor(const CdgInstance& inst, int max_arity = 3) {
    AInftyFunctor f;
    f.source = f.target = &inst;
    f.object_map.resize(inst.object_count());
    for (std::size_t i = 0; i < inst.object_count(); ++i) f.object_map[i] = static_cast<int>(i);
    f.max_arity = max_arity;
    return f;
}

// LHS - RHS of the defining relation of an A-infinity functor, evaluated on a
// composable tuple. Zero on every tuple iff the data is a functor.
inline Morphism ainfty_residual(const AInftyFunctor& F, const std::vector<Morphism>& fs) {
    const CdgInstance& c = *F.source;
    const CdgInstance& d = *F.target;
    const int n = static_cast<int>(fs.size());
    for (int k = 0; k + 1 < n; ++k)
        if (fs[k].src != fs[k + 1].dst) throw CompositionError("tuple is not composable");
    long total = 0;
    for (const auto& f : fs) total += f.degree;
    auto tail_deg = [&](int k) {  // |f_k| + ... + |f_n| with 1-based k
        long t = 0;
        for (int i = k; i <= n; ++i) t += fs[i - 1].degree;
        return t;
    };

    Morphism res = sign_pow(total + 1 - n) * d.nabla(F.apply(fs));
    for (int k = 1; k <= n - 1; ++k) {
        std::vector<Morphism> left(fs.begin(), fs.begin() + k), right(fs.begin() + k, fs.end());
        res = res + sign_pow(tail_deg(k + 1) - n + k + 1) * d.compose(F.apply(left), F.apply(right));
    }
    for (int k = 1; k <= n; ++k) {
        std::vector<Morphism> mod = fs;
        mod[k - 1] = c.nabla(fs[k - 1]);
        res = res - sign_pow(tail_deg(k) - n + k) * F.apply(mod);
    }
    for (int k = 1; k <= n - 1; ++k) {
        std::vector<Morphism> mod;
        mod.insert(mod.end(), fs.begin(), fs.begin() + (k - 1));
        mod.push_back(c.compose(fs[k - 1], fs[k]));
        mod.insert(mod.end(), fs.begin() + k + 1, fs.end());
        res = res - sign_pow(tail_deg(k + 1) - n + k - 1) * F.apply(mod);
    }
    for (int k = 1; k <= n + 1; ++k) {
        int obj = (k <= n) ? fs[k - 1].dst : fs[n - 1].src;
        std::vector<Morphism> mod;
        mod.insert(mod.end(), fs.begin(), fs.begin() + (k - 1));
        mod.push_back(c.curvature(obj));
        mod.insert(mod.end(), fs.begin() + (k - 1), fs.end());
        res = res - sign_pow(tail_deg(k) - n + k) * F.apply(mod);
    }
    return res;
}

// ---------------------------------------------------------------------------
// natural transformations

class AInftyNat {
public:
    const AInftyFunctor* from = nullptr;  // F
    const AInftyFunctor* to = nullptr;    // G
    int max_arity = 3;
    std::map<int, Morphism> component;    // per source object: Hom^0(F(E), G(E))
    std::map<TupleKey, Morphism> data;    // arity >= 1

    Morphism component_at(int obj) const {
        auto it = component.find(obj);
        if (it != component.end()) return it->second;
        return from->target->zero_morphism(from->map_object(obj), to->map_object(obj), 0);
    }

    Morphism apply(const std::vector<Morphism>& fs) const {
        if (fs.empty()) throw DimensionError("use component_at for the empty tuple");
        int total = 0;
        for (const auto& f : fs) total += f.degree;
        const int n = static_cast<int>(fs.size());
        Morphism out = from->target->zero_morphism(from->map_object(fs.back().src),
                                                   to->map_object(fs.front().dst), total - n);
        if (n > max_arity || total - n < 0 || data.empty()) return out;
        TupleKey key;
        key.objs.push_back(fs.front().dst);
        for (const auto& f : fs) key.objs.push_back(f.src);
        key.slots.resize(fs.size());
        expand(fs, 0, Scalar(1), key, out);
        return out;
    }

private:
    void expand(const std::vector<Morphism>& fs, std::size_t j, const Scalar& coeff, TupleKey& key,
                Morphism& out) const {
        if (j == fs.size()) {
            auto it = data.find(key);
            if (it == data.end()) return;
            for (std::size_t i = 0; i < out.coeffs.size(); ++i)
                if (!it->second.coeffs[i].is_zero()) out.coeffs[i] += coeff * it->second.coeffs[i];
            return;
        }
        for (std::size_t b = 0; b < fs[j].coeffs.size(); ++b) {
            if (fs[j].coeffs[b].is_zero()) continue;
            key.slots[j] = {fs[j].degree, b};
            expand(fs, j + 1, coeff * fs[j].coeffs[b], key, out);
        }
    }
};

// LHS - RHS of the natural-transformation relation on a tuple (n = 0 allowed:
// pass the object through `obj0`).
inline Morphism nat_residual(const AInftyNat& eta, const std::vector<Morphism>& fs, int obj0 = -1) {
    const AInftyFunctor& F = *eta.from;
    const AInftyFunctor& G = *eta.to;
    const CdgInstance& c = *F.source;
    const CdgInstance& d = *F.target;
    const int n = static_cast<int>(fs.size());
    if (n == 0) {
        Morphism comp = eta.component_at(obj0);
        return -d.nabla(comp) + eta.apply({c.curvature(obj0)});
    }
    long total = 0;
    for (const auto& f : fs) total += f.degree;
    auto tail_deg = [&](int k) {
        long t = 0;
        for (int i = k; i <= n; ++i) t += fs[i - 1].degree;
        return t;
    };

    Morphism res = sign_pow(total - n + 1) * d.nabla(eta.apply(fs));
    for (int k = 0; k <= n - 1; ++k) {
        std::vector<Morphism> right(fs.begin() + k, fs.end());
        Morphism left = (k == 0) ? eta.component_at(fs.front().dst)
                                 : eta.apply(std::vector<Morphism>(fs.begin(), fs.begin() + k));
        res = res + d.compose(left, F.apply(right));
    }
    for (int k = 1; k <= n; ++k) {
        std::vector<Morphism> left(fs.begin(), fs.begin() + k);
        Morphism right = (k == n) ? eta.component_at(fs.back().src)
                                  : eta.apply(std::vector<Morphism>(fs.begin() + k, fs.end()));
        res = res + sign_pow(tail_deg(k + 1) - n + k + 1) * d.compose(G.apply(left), right);
    }
    for (int k = 1; k <= n; ++k) {
        std::vector<Morphism> mod = fs;
        mod[k - 1] = c.nabla(fs[k - 1]);
        res = res - sign_pow(tail_deg(k) - n + k) * eta.apply(mod);
    }
    for (int k = 1; k <= n - 1; ++k) {
        std::vector<Morphism> mod;
        mod.insert(mod.end(), fs.begin(), fs.begin() + (k - 1));
        mod.push_back(c.compose(fs[k - 1], fs[k]));
        mod.insert(mod.end(), fs.begin() + k + 1, fs.end());
        res = res - sign_pow(tail_deg(k + 1) - n + k - 1) * eta.apply(mod);
    }
    for (int k = 1; k <= n + 1; ++k) {
        int obj = (k <= n) ? fs[k - 1].dst : fs[n - 1].src;
        std::vector<Morphism> mod;
        mod.insert(mod.end(), fs.begin(), fs.begin() + (k - 1));
        mod.push_back(c.curvature(obj));
        mod.insert(mod.end(), fs.begin() + (k - 1), fs.end());
        res = res - sign_pow(tail_deg(k) - n + k) * eta.apply(mod);
    }
    return res;
}

// composite (zeta o eta)(f_1..f_n) = sum_k zeta(f_1..f_k) eta(f_{k+1}..f_n),
// materialized on all basis tuples over the given objects
inline AInftyNat compose_nat(const AInftyNat& zeta, const AInftyNat& eta,
                             const std::vector<int>& objects, int max_arity) {
    const CdgInstance& c = *eta.from->source;
    const CdgInstance& d = *eta.from->target;
    AInftyNat out;
    out.from = eta.from;
    out.to = zeta.to;
    out.max_arity = max_arity;
    for (int e : objects)
        out.component[e] = d.compose(zeta.component_at(e), eta.component_at(e));

    // enumerate basis tuples over the object list
    std::function<void(std::vector<Morphism>&, int)> rec = [&](std::vector<Morphism>& fs, int arity) {
        if (!fs.empty()) {
            const int n = static_cast<int>(fs.size());
            int total = 0;
            for (auto& f : fs) total += f.degree;
            if (total - n >= 0) {
                Morphism acc = d.zero_morphism(eta.from->map_object(fs.back().src),
                                               zeta.to->map_object(fs.front().dst), total - n);
                for (int k = 0; k <= n; ++k) {
                    Morphism left = (k == 0) ? zeta.component_at(fs.front().dst)
                                             : zeta.apply(std::vector<Morphism>(fs.begin(), fs.begin() + k));
                    Morphism right = (k == n) ? eta.component_at(fs.back().src)
                                              : eta.apply(std::vector<Morphism>(fs.begin() + k, fs.end()));
                    acc = acc + d.compose(left, right);
                }
                if (!acc.is_zero()) {
                    TupleKey key;
                    key.objs.push_back(fs.front().dst);
                    for (auto& f : fs) key.objs.push_back(f.src);
                    for (auto& f : fs) {
                        std::size_t b = 0;
                        while (f.coeffs[b].is_zero()) ++b;
                        key.slots.push_back({f.degree, b});
                    }
                    out.data[key] = acc;
                }
            }
        }
        if (arity == max_arity) return;
        int src_obj = fs.empty() ? -1 : fs.back().src;
        for (int e2 : objects) {
            if (!fs.empty() && e2 != src_obj) continue;
            for (int e3 : objects)
                for (int deg = 0; deg <= c.max_degree(); ++deg) {
                    std::size_t dim = c.hom_dim(e3, e2, deg);
                    for (std::size_t b = 0; b < dim; ++b) {
                        fs.push_back(c.basis_morphism(e3, e2, deg, b));
                        rec(fs, arity + 1);
                        fs.pop_back();
                    }
                }
        }
    };
    std::vector<Morphism> fs;
    rec(fs, 0);
    return out;
}

// ---------------------------------------------------------------------------
// the induced functor on twisted complexes

class TwFunctor {
public:
    explicit TwFunctor(const AInftyFunctor& base) : base_(&base) {
        bool proper = true;
        for (auto& [key, m] : base.higher)
            for (auto& [deg, idx] : key.slots)
                if (deg == 0) proper = false;
        if (!proper) throw PropernessError("induced functor needs a proper base functor");
    }

    const AInftyFunctor& base() const { return *base_; }

    TwObject map_object(const TwObject& x) const {
        TwObject y;
        y.inst = base_->target;
        for (auto& [p, obj] : x.spaces) y.spaces[p] = base_->map_object(obj);
        y.datum = expand({}, {&x}, 1);
        return y;
    }

    // Tw(F)(f_1,...,f_n); chain = (X_1, ..., X_{n+1}) with f_j : X_{j+1} -> X_j
    BigradedMorphism apply(const std::vector<const TwObject*>& chain,
                           const std::vector<const BigradedMorphism*>& fs) const {
        int total = 0;
        for (auto* f : fs) total += f->degree();
        return expand(fs, chain, total - static_cast<int>(fs.size()) + 1);
    }

private:
    struct Slot {
        const Morphism* m;
        int internal;
        int aux;
    };

    // enumerates [E_1^{k_1}, f_1, E_2^{k_2}, ..., f_n, E_{n+1}^{k_{n+1}}]
    // right to left, tracking the position chain
    BigradedMorphism expand(const std::vector<const BigradedMorphism*>& fs,
                            const std::vector<const TwObject*>& chain, int out_degree) const {
        BigradedMorphism out(out_degree);
        const int n = static_cast<int>(fs.size());
        const auto& src_spaces = chain.back()->spaces;
        const int maxdeg = base_->target->max_degree();
        std::vector<Slot> slots;  // collected right to left

        std::function<void(int, int, int)> rec = [&](int gap, int pos, int aux_used) {
            // aux_used = sum (q_j - 1) so far; output aux = aux_used + 1 <= maxdeg
            if (gap >= 2) {
                // consume f_{gap-1} and move to the previous gap
                const BigradedMorphism& f = *fs[gap - 2];
                for (auto& [bd, fam] : f.blocks()) {
                    auto it = fam.find(pos);
                    if (it == fam.end()) continue;
                    if (aux_used + bd.aux - 1 > maxdeg - 1) continue;
                    slots.push_back({&it->second, bd.internal, bd.aux});
                    rec(gap - 1, pos + bd.internal, aux_used + bd.aux - 1);
                    slots.pop_back();
                }
            } else if (!slots.empty()) {
                emit(slots, pos, out);
            }
            // insert one more datum block of X_gap
            const TwObject& x = *chain[gap - 1];
            bool allow_aux0 = (n == 0 && slots.empty());
            for (auto& [bd, fam] : x.datum.blocks()) {
                if (bd.aux == 0 && !allow_aux0) continue;
                auto it = fam.find(pos);
                if (it == fam.end()) continue;
                if (aux_used + bd.aux - 1 > maxdeg - 1) continue;
                slots.push_back({&it->second, bd.internal, bd.aux});
                if (bd.aux == 0) {
                    // a lone degree-0 entry: arity 1, nothing else may join
                    emit(slots, pos + bd.internal, out);
                } else {
                    rec(gap, pos + bd.internal, aux_used + bd.aux - 1);
                }
                slots.pop_back();
            }
        };

        for (auto& [p0, obj] : src_spaces) rec(n + 1, p0, 0);
        return out;
    }

    void emit(const std::vector<Slot>& slots_rtl, int end_pos, BigradedMorphism& out) const {
        // slots were collected right to left; F expects left to right
        std::vector<Slot> s(slots_rtl.rbegin(), slots_rtl.rend());
        const int m = static_cast<int>(s.size());
        if (m > base_->max_arity) return;
        long expo = 0;
        for (int j = 0; j < m; ++j) {
            long tail_q = 0;
            for (int l = j + 1; l < m; ++l) tail_q += s[l].aux;
            expo += static_cast<long>(s[j].internal) * (tail_q + (m - 1 - j));
        }
        std::vector<Morphism> tuple;
        tuple.reserve(m);
        for (auto& sl : s) tuple.push_back(*sl.m);
        Morphism val = base_->apply(tuple);
        if (val.is_zero()) return;
        int internal = 0;
        for (auto& sl : s) internal += sl.internal;
        // end_pos is the target position after all shifts; blocks are indexed
        // by the source position
        out.add_block(internal, end_pos - internal, sign_pow(expo) * val);
    }

    const AInftyFunctor* base_;
};

// residual of the dg-level relation for the induced functor (no curvature
// terms; differentials and compositions are the twisted-complex ones)
inline BigradedMorphism induced_relation_residual(const TwFunctor& tf,
                                                  const std::vector<const TwObject*>& chain,
                                                  const std::vector<const TwObject*>& image_chain,
                                                  const std::vector<const BigradedMorphism*>& fs) {
    const CdgInstance& d = *tf.base().target;
    const CdgInstance& c = *tf.base().source;
    const int n = static_cast<int>(fs.size());
    long total = 0;
    for (auto* f : fs) total += f->degree();
    auto tail_deg = [&](int k) {
        long t = 0;
        for (int i = k; i <= n; ++i) t += fs[i - 1]->degree();
        return t;
    };
    auto sub = [&](int a, int b) {  // chain slice a..b inclusive (1-based object indices)
        return std::vector<const TwObject*>(chain.begin() + (a - 1), chain.begin() + b);
    };

    BigradedMorphism img = tf.apply(chain, fs);
    BigradedMorphism res =
        sign_pow(total + 1 - n) * tw_differential(img, *image_chain.back(), *image_chain.front());
    for (int k = 1; k <= n - 1; ++k) {
        std::vector<const BigradedMorphism*> left(fs.begin(), fs.begin() + k),
            right(fs.begin() + k, fs.end());
        BigradedMorphism lv = tf.apply(sub(1, k + 1), left);
        BigradedMorphism rv = tf.apply(sub(k + 1, n + 1), right);
        res = res + sign_pow(tail_deg(k + 1) - n + k + 1) * tw_compose(d, lv, rv);
    }
    for (int k = 1; k <= n; ++k) {
        BigradedMorphism df = tw_differential(*fs[k - 1], *chain[k], *chain[k - 1]);
        std::vector<const BigradedMorphism*> mod = fs;
        mod[k - 1] = &df;
        res = res - sign_pow(tail_deg(k) - n + k) * tf.apply(chain, mod);
    }
    for (int k = 1; k <= n - 1; ++k) {
        BigradedMorphism merged = tw_compose(c, *fs[k - 1], *fs[k]);
        std::vector<const BigradedMorphism*> mod;
        mod.insert(mod.end(), fs.begin(), fs.begin() + (k - 1));
        mod.push_back(&merged);
        mod.insert(mod.end(), fs.begin() + k + 1, fs.end());
        std::vector<const TwObject*> mod_chain;
        mod_chain.insert(mod_chain.end(), chain.begin(), chain.begin() + k);
        mod_chain.insert(mod_chain.end(), chain.begin() + k + 1, chain.end());
        res = res - sign_pow(tail_deg(k + 1) - n + k - 1) * tf.apply(mod_chain, mod);
    }
    return res;
}

// ---------------------------------------------------------------------------
// homotopy transfer

struct TransferInput {
    std::map<int, int> f_spaces;            // position -> instance object
    BigradedMorphism f0_differential{1};    // (1,0) blocks on the new objects
    BigradedMorphism f0_map{0};             // (0,0) blocks F^p -> E^p
    BigradedMorphism g0_map{0};             // (0,0) blocks E^p -> F^p
};

struct TransferOutput {
    TwObject object;          // (F^a, F) with F extending F^0
    BigradedMorphism map{0};  // closed degree-0 morphism object -> E
};

namespace detail {
inline Morphism retype(const CdgInstance& inst, const Morphism& m, int src, int dst) {
    if (inst.hom_dim(src, dst, m.degree) != m.coeffs.size())
        throw DimensionError("retype: hom dimensions disagree");
    Morphism out = m;
    out.src = src;
    out.dst = dst;
    return out;
}
}  // namespace detail

inline TransferOutput homotopy_transfer(CdgInstance& inst, const TwObject& e, const TransferInput& in) {
    // step 1: the twist a = g0 o nabla(f0), one degree-1 endomorphism per position
    std::map<int, Morphism> twist;
    for (auto& [p, fobj] : in.f_spaces) {
        auto itf = in.f0_map.blocks().find({0, 0});
        Morphism f0p = inst.zero_morphism(fobj, e.object_at(p), 0);
        if (itf != in.f0_map.blocks().end()) {
            auto pm = itf->second.find(p);
            if (pm != itf->second.end()) f0p = pm->second;
        }
        Morphism g0p = inst.zero_morphism(e.object_at(p), fobj, 0);
        auto itg = in.g0_map.blocks().find({0, 0});
        if (itg != in.g0_map.blocks().end()) {
            auto pm = itg->second.find(p);
            if (pm != itg->second.end()) g0p = pm->second;
        }
        twist[p] = inst.compose(g0p, inst.nabla(f0p));
    }

    // step 2: twisted objects
    TwObject y;
    y.inst = &inst;
    std::map<int, int> twisted;
    for (auto& [p, fobj] : in.f_spaces)
        twisted[p] = twist[p].is_zero() ? fobj : inst.twist_object(fobj, twist[p]);
    y.spaces = twisted;

    // retype the seed data onto the twisted objects
    auto add_retyped = [&](BigradedMorphism& dst_bm, const BigradedMorphism& src_bm, bool src_twisted,
                           bool dst_twisted, const TwObject& dst_tw) {
        for (auto& [bd, fam] : src_bm.blocks())
            for (auto& [p, m] : fam) {
                int s = src_twisted ? y.object_at(p) : m.src;
                int d = dst_twisted ? dst_tw.object_at(p + bd.internal) : m.dst;
                dst_bm.add_block(bd.internal, p, detail::retype(inst, m, s, d));
            }
    };
    y.datum = BigradedMorphism(1);
    add_retyped(y.datum, in.f0_differential, true, true, y);
    BigradedMorphism f(0);
    add_retyped(f, in.f0_map, true, false, e);

    const BigradedMorphism e0 = e.datum.aux_component(0);
    const BigradedMorphism fd0 = y.datum.aux_component(0);
    const BigradedMorphism f00 = f.component(0, 0);

    for (int aux = 1; aux <= inst.max_degree() + 1; ++aux) {
        BigradedMorphism p_res = mc_residual(y);
        BigradedMorphism q_res = tw_differential(f, y, e);
        for (int low = 0; low < aux; ++low)
            if (!p_res.aux_component(low).is_zero() || !q_res.aux_component(low).is_zero())
                throw TransferInternalError("residual appeared below the current auxiliary degree " +
                                            std::to_string(aux));
        BigradedMorphism p_i = p_res.aux_component(aux);
        BigradedMorphism q_i = q_res.aux_component(aux);
        if (aux == 1 && !p_i.is_zero())
            throw TransferInternalError("Maurer-Cartan residual in auxiliary degree 1");
        if (p_i.is_zero() && q_i.is_zero()) continue;

        // unknowns: X (datum correction, bidegree (1-aux, aux), absent for
        // aux 1) and Y (map correction, bidegree (-aux, aux))
        BlockSpace xs = (aux >= 2) ? block_space(y, y, 1 - aux, aux) : BlockSpace{};
        BlockSpace ys = block_space(y, e, -aux, aux);
        BlockSpace pspace = block_space(y, y, 2 - aux, aux);
        BlockSpace qspace = block_space(y, e, 1 - aux, aux);

        auto apply_linear = [&](const std::vector<Scalar>& v) {
            std::vector<Scalar> xv(v.begin(), v.begin() + xs.total);
            std::vector<Scalar> yv(v.begin() + xs.total, v.end());
            BigradedMorphism x = unflatten_component(inst, y, y, xs, 1 - aux, aux, xv);
            BigradedMorphism yy = unflatten_component(inst, y, e, ys, -aux, aux, yv);
            BigradedMorphism dp = tw_compose(inst, fd0, x) + tw_compose(inst, x, fd0);
            BigradedMorphism dq = tw_compose(inst, e0, yy) - tw_compose(inst, yy, fd0) -
                                  tw_compose(inst, f00, x);
            std::vector<Scalar> out = flatten_component(dp, pspace, 2 - aux, aux);
            auto qv = flatten_component(dq, qspace, 1 - aux, aux);
            out.insert(out.end(), qv.begin(), qv.end());
            return out;
        };

        std::size_t unknowns = xs.total + ys.total;
        ExactMatrix sys(pspace.total + qspace.total, unknowns);
        for (std::size_t j = 0; j < unknowns; ++j) {
            std::vector<Scalar> v(unknowns, Scalar(0));
            v[j] = Scalar(1);
            auto col = apply_linear(v);
            for (std::size_t i = 0; i < col.size(); ++i) sys(i, j) = col[i];
        }
        std::vector<Scalar> rhs = flatten_component(Scalar(-1) * p_i, pspace, 2 - aux, aux);
        {
            auto qv = flatten_component(Scalar(-1) * q_i, qspace, 1 - aux, aux);
            rhs.insert(rhs.end(), qv.begin(), qv.end());
        }
        auto sol = solve_linear_exact(sys, ExactMatrix::from_columns(rhs.size(), {rhs}));
        if (!sol)
            throw TransferInternalError("cone system inconsistent at auxiliary degree " +
                                        std::to_string(aux));
        std::vector<Scalar> v(unknowns);
        for (std::size_t j = 0; j < unknowns; ++j) v[j] = (*sol)(j, 0);
        std::vector<Scalar> xv(v.begin(), v.begin() + xs.total);
        std::vector<Scalar> yv(v.begin() + xs.total, v.end());
        y.datum = y.datum + unflatten_component(inst, y, y, xs, 1 - aux, aux, xv);
        f = f + unflatten_component(inst, y, e, ys, -aux, aux, yv);
    }

    if (!mc_residual(y).is_zero() || !tw_differential(f, y, e).is_zero())
        throw TransferInternalError("transfer did not converge inside the degree window");
    return {std::move(y), std::move(f)};
}

// ---------------------------------------------------------------------------
// strictification

struct StrictifyResult {
    TwObject object;          // datum has no auxiliary-degree-0 component
    BigradedMorphism map{0};  // closed degree-0 homotopy equivalence object -> input
};

inline StrictifyResult strictify(CdgInstance& inst, const TwObject& x) {
    if (x.datum.aux_component(0).is_zero()) return {x, tw_identity(x)};

    const std::size_t fibers = inst.fiber_count();
    const int lo = x.min_position(), hi = x.max_position();
    auto e0_block = [&](int p, std::size_t fb) -> ExactMatrix {
        auto it = x.datum.blocks().find({1, 0});
        if (it != x.datum.blocks().end()) {
            auto pm = it->second.find(p);
            if (pm != it->second.end()) return inst.deg0_block(pm->second, fb);
        }
        return ExactMatrix::zero(inst.fiber_dim(x.object_at(p + 1), fb),
                                 inst.fiber_dim(x.object_at(p), fb));
    };

    // fiberwise kernel and image bases, then the instance-level objects
    std::map<int, std::vector<ExactMatrix>> ker, img, img_in_ker;
    for (int p = lo - 1; p <= hi + 2; ++p) {
        std::vector<ExactMatrix> kp(fibers), ip(fibers), iink(fibers);
        for (std::size_t fb = 0; fb < fibers; ++fb) {
            ExactMatrix d = e0_block(p, fb);
            ExactMatrix dprev = e0_block(p - 1, fb);
            kp[fb] = nullspace(d);
            // image basis: independent columns of dprev
            Echelon ech = echelon_form(dprev);
            std::vector<std::vector<Scalar>> cols;
            for (std::size_t c : ech.pivots) cols.push_back(dprev.col(c));
            ip[fb] = ExactMatrix::from_columns(dprev.rows(), cols);
            auto coords = solve_linear_exact(kp[fb], ip[fb]);
            if (!coords) throw SplitError("image does not lie in the kernel: not a complex");
            iink[fb] = std::move(*coords);
        }
        ker[p] = std::move(kp);
        img[p] = std::move(ip);
        img_in_ker[p] = std::move(iink);
    }

    // per position: objects K, H = K/I and the splitting data
    std::map<int, int> h_objs;
    std::map<int, std::vector<ExactMatrix>> f0_blocks, g0_blocks;
    std::map<int, std::vector<ExactMatrix>> q_sections, e_retr, r_retr, h_proj, h_sect;
    for (int p = lo - 1; p <= hi + 1; ++p) {
        auto ksub = inst.subobject(x.object_at(p), ker[p]);
        auto hquot = inst.quotient_object(ksub.object, img_in_ker[p]);
        bool empty = true;
        for (std::size_t fb = 0; fb < fibers; ++fb)
            if (inst.fiber_dim(hquot.object, fb)) empty = false;
        if (!empty) h_objs[p] = hquot.object;

        std::vector<ExactMatrix> f0(fibers), g0(fibers), qs(fibers), er(fibers), rr(fibers), hs(fibers);
        for (std::size_t fb = 0; fb < fibers; ++fb) {
            // first sequence 0 -> I -> K -> H -> 0 in K-coordinates
            Splitting sp1 = choose_splittings(img_in_ker[p][fb], hquot.blocks[fb]);
            // second sequence 0 -> K -> E -> I^{p+1} -> 0
            ExactMatrix dmat = e0_block(p, fb);
            ExactMatrix proj_to_img(0, 0);
            {
                auto coords = solve_linear_exact(img[p + 1][fb], dmat);
                if (!coords) throw SplitError("differential does not factor through its image");
                proj_to_img = std::move(*coords);
            }
            Splitting sp2 = choose_splittings(ker[p][fb], proj_to_img);
            f0[fb] = ker[p][fb] * sp1.section;        // H -> E
            g0[fb] = hquot.blocks[fb] * sp2.retraction;  // E -> H
            qs[fb] = sp2.section;                     // I^{p+1} -> E^p
            er[fb] = sp2.retraction;                  // E -> K
            rr[fb] = sp1.retraction;                  // K -> I
            hs[fb] = sp1.section;                     // H -> K
        }
        f0_blocks[p] = std::move(f0);
        g0_blocks[p] = std::move(g0);
        q_sections[p] = std::move(qs);
        e_retr[p] = std::move(er);
        r_retr[p] = std::move(rr);
        h_sect[p] = std::move(hs);
        h_proj[p] = hquot.blocks;
    }

    // homotopy j = -q o r o e and the retraction identity as a sanity check
    for (int p = lo; p <= hi; ++p) {
        for (std::size_t fb = 0; fb < fibers; ++fb) {
            ExactMatrix j_p = Scalar(-1) * (q_sections[p - 1][fb] * (r_retr[p][fb] * e_retr[p][fb]));
            ExactMatrix j_p1 = Scalar(-1) * (q_sections[p][fb] * (r_retr[p + 1][fb] * e_retr[p + 1][fb]));
            ExactMatrix lhs = e0_block(p - 1, fb) * j_p + j_p1 * e0_block(p, fb);
            ExactMatrix rhs = f0_blocks[p][fb] * g0_blocks[p][fb] -
                              ExactMatrix::identity(inst.fiber_dim(x.object_at(p), fb));
            if (lhs != rhs) throw SplitError("homotopy identity failed in the splitting data");
        }
    }

    TransferInput in;
    in.f_spaces = h_objs;
    for (auto& [p, hobj] : h_objs) {
        in.f0_map.add_block(0, p, inst.deg0_from_blocks(hobj, x.object_at(p), f0_blocks[p]));
        in.g0_map.add_block(0, p, inst.deg0_from_blocks(x.object_at(p), hobj, g0_blocks[p]));
    }
    // the transferred complex carries the zero differential
    TransferOutput t = homotopy_transfer(inst, x, in);
    return {std::move(t.object), std::move(t.map)};
}

// ---------------------------------------------------------------------------
// homotopy-equivalence criterion

struct HomotopyEquivalenceWitness {
    bool equivalent = false;
    // per (fiber, position): the induced map on cohomology in the bases of
    // complex_cohomology representatives
    std::map<std::pair<std::size_t, int>, ExactMatrix> cohomology_maps;
};

inline HomotopyEquivalenceWitness is_homotopy_equivalence(const BigradedMorphism& f,
                                                          const TwObject& src, const TwObject& dst) {
    const CdgInstance& inst = *src.inst;
    if (!tw_differential(f, src, dst).is_zero())
        throw NotClosedError("homotopy-equivalence criterion needs a closed morphism");
    HomotopyEquivalenceWitness w;
    w.equivalent = true;

    auto deg0 = [&](const BigradedMorphism& bm, const TwObject& a, const TwObject& b, int p,
                    std::size_t fb, int internal) -> ExactMatrix {
        auto it = bm.blocks().find({internal, 0});
        if (it != bm.blocks().end()) {
            auto pm = it->second.find(p);
            if (pm != it->second.end()) return inst.deg0_block(pm->second, fb);
        }
        return ExactMatrix::zero(inst.fiber_dim(b.object_at(p + internal), fb),
                                 inst.fiber_dim(a.object_at(p), fb));
    };

    const int lo = std::min(src.min_position(), dst.min_position());
    const int hi = std::max(src.max_position(), dst.max_position());
    for (std::size_t fb = 0; fb < inst.fiber_count(); ++fb) {
        ExactComplex cs, cd;
        for (int p = lo; p <= hi; ++p) {
            cs.spaces.set_dim(p, inst.fiber_dim(src.object_at(p), fb));
            cd.spaces.set_dim(p, inst.fiber_dim(dst.object_at(p), fb));
        }
        for (int p = lo; p <= hi; ++p) {
            cs.differentials[p] = deg0(src.datum, src, src, p, fb, 1);
            cd.differentials[p] = deg0(dst.datum, dst, dst, p, fb, 1);
        }
        auto hs = complex_cohomology(cs), hd = complex_cohomology(cd);
        for (int p = lo; p <= hi; ++p) {
            std::size_t ds = hs.count(p) ? hs[p].dimension : 0;
            std::size_t dd = hd.count(p) ? hd[p].dimension : 0;
            if (ds != dd) {
                w.equivalent = false;
                continue;
            }
            if (ds == 0) continue;
            // express f(representatives) in the target representatives
            ExactMatrix f0 = deg0(f, src, dst, p, fb, 0);
            ExactMatrix mapped = f0 * hs[p].representatives;
            ExactMatrix img = cd.differential(p - 1);
            ExactMatrix sys(mapped.rows(), dd + img.cols());
            for (std::size_t i = 0; i < mapped.rows(); ++i) {
                for (std::size_t j = 0; j < dd; ++j) sys(i, j) = hd[p].representatives(i, j);
                for (std::size_t j = 0; j < img.cols(); ++j) sys(i, dd + j) = img(i, j);
            }
            auto sol = solve_linear_exact(sys, mapped);
            if (!sol) {
                w.equivalent = false;
                continue;
            }
            ExactMatrix hmap(dd, ds);
            for (std::size_t i = 0; i < dd; ++i)
                for (std::size_t j = 0; j < ds; ++j) hmap(i, j) = (*sol)(i, j);
            if (rank(hmap) != dd) w.equivalent = false;
            w.cohomology_maps[{fb, p}] = std::move(hmap);
        }
    }
    return w;
}

}  // namespace curvo
