#pragma once

// Path components of a simplicial monoid, the pullback of representations
// along the projection to components, and the 2-cocycle extracted from a
// projective representation of a product of cyclic groups.

#include "curvo/matrix.hpp"
#include "curvo/rep.hpp"
#include "curvo/simplicial.hpp"

#include <map>
#include <numeric>
#include <vector>

namespace curvo {

struct NotWellDefinedError : std::runtime_error {
    explicit NotWellDefinedError(const std::string& m) : std::runtime_error(m) {}
};
struct NotProjectiveError : std::runtime_error {
    explicit NotProjectiveError(const std::string& m) : std::runtime_error(m) {}
};

struct Pi0 {
    std::vector<int> component;  // per 0-simplex
    std::size_t count = 0;
    std::vector<std::vector<int>> table;  // induced monoid product on components
    int unit = 0;
};

inline Pi0 path_components(const FiniteSimplicialMonoid& s) {
    Pi0 out;
    std::vector<int> parent(s.size(0));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t g = 0; g < s.size(1); ++g) {
        int a = find(s.face_of(1, 0, static_cast<int>(g)));
        int b = find(s.face_of(1, 1, static_cast<int>(g)));
        if (a != b) parent[a] = b;
    }
    std::map<int, int> remap;
    out.component.resize(s.size(0));
    for (std::size_t x = 0; x < s.size(0); ++x) {
        int r = find(static_cast<int>(x));
        if (!remap.count(r)) {
            int id = static_cast<int>(remap.size());
            remap[r] = id;
        }
        out.component[x] = remap[find(static_cast<int>(x))];
    }
    out.count = remap.size();
    out.unit = out.component[s.unit_of(0)];
    out.table.assign(out.count, std::vector<int>(out.count, -1));
    for (std::size_t a = 0; a < s.size(0); ++a)
        for (std::size_t b = 0; b < s.size(0); ++b) {
            int prod = out.component[s.mul(0, static_cast<int>(a), static_cast<int>(b))];
            int& slot = out.table[out.component[a]][out.component[b]];
            if (slot == -1)
                slot = prod;
            else if (slot != prod)
                throw NotWellDefinedError("monoid product does not descend to components");
        }
    return out;
}

struct Pi0Pullback {
    Pi0 pi0;
    FiniteSimplicialMonoid pi0_monoid;  // constant simplicial monoid on the components
    BarCocycle h_upstairs;              // the pulled-back curvature element on S
};

// Pullback data: a group 2-cocycle on pi0(S) (as a function on component
// pairs) induces a curvature element of S whose edge part is trivial, and
// representations pull back along mu'(s) = mu([s]).
inline Pi0Pullback pi0_pullback(const FiniteSimplicialMonoid& s,
                                std::function<Scalar(int, int)> h_pi0) {
    Pi0Pullback out;
    out.pi0 = path_components(s);
    out.pi0_monoid = constant_monoid(out.pi0.table, out.pi0.unit, s.truncation);
    out.h_upstairs = BarCocycle::from_pair_table(
        s, [&](int a, int b) { return h_pi0(out.pi0.component[a], out.pi0.component[b]); });
    if (!out.h_upstairs.is_closed())
        throw NotClosedCocycleError("pulled-back cocycle is not closed");
    return out;
}

inline RepObject pull_back_object(const Pi0Pullback& p, const FiniteSimplicialMonoid& s,
                                  const RepObject& downstairs) {
    RepObject up;
    up.dim = downstairs.dim;
    for (std::size_t x = 0; x < s.size(0); ++x) {
        if (static_cast<int>(x) == s.unit_of(0)) continue;
        int c = p.pi0.component[x];
        if (c == p.pi0.unit)
            up.mu[static_cast<int>(x)] = ExactMatrix::identity(up.dim);
        else
            up.mu[static_cast<int>(x)] = downstairs.mu.at(c);
    }
    return up;
}

// the inverse direction on flat objects: mu'([x]) = mu(x), with the
// representative independence verified on every edge
inline RepObject push_to_components(const Pi0Pullback& p, const FiniteSimplicialMonoid& s,
                                    const RepInstance& inst, int obj) {
    const RepObject& up = inst.object(obj);
    for (std::size_t g = 0; g < s.size(1); ++g) {
        int e = static_cast<int>(g);
        if (s.is_degenerate(1, e)) continue;
        ExactMatrix m0 = inst.action(obj, s.face_of(1, 1, e));
        ExactMatrix m1 = inst.action(obj, s.face_of(1, 0, e));
        if (m0 != m1)
            throw NotWellDefinedError("assignment depends on the component representative");
    }
    RepObject down;
    down.dim = up.dim;
    std::vector<bool> seen(p.pi0.count, false);
    for (std::size_t x = 0; x < s.size(0); ++x) {
        int c = p.pi0.component[x];
        ExactMatrix m = inst.action(obj, static_cast<int>(x));
        if (seen[c]) {
            if (down.mu.count(c) ? down.mu.at(c) != m : m != ExactMatrix::identity(up.dim))
                throw NotWellDefinedError("assignment depends on the component representative");
            continue;
        }
        seen[c] = true;
        if (c != p.pi0.unit) down.mu[c] = m;
    }
    return down;
}

// ---------------------------------------------------------------------------
// the 2-cocycle of a projective representation of a product of cyclic groups

struct ProjectiveCocycle {
    CyclicProductGroup group;
    std::vector<std::vector<Scalar>> df;  // scalar cocycle values per element pair
    bool cocycle_condition_ok = true;
};

// mu maps the i-th generator to gens[i]; mu(g) for g = (e_1, ..., e_r) is the
// ordered product of generator powers with normalized exponents
inline ProjectiveCocycle projective_rep_cocycle(const std::vector<int>& moduli,
                                                const std::vector<ExactMatrix>& gens) {
    ProjectiveCocycle out{CyclicProductGroup(moduli), {}, true};
    const auto& g = out.group;
    const std::size_t dim = gens.front().rows();

    auto scalar_multiple_of_identity = [&](const ExactMatrix& m) -> std::optional<Scalar> {
        Scalar lambda = m(0, 0);
        if (m != lambda * ExactMatrix::identity(dim)) return std::nullopt;
        return lambda;
    };

    // the representation must be projective: generator relations and pairwise
    // commutators hold up to a scalar
    for (std::size_t i = 0; i < gens.size(); ++i) {
        ExactMatrix p = ExactMatrix::identity(dim);
        for (int e = 0; e < g.moduli[i]; ++e) p = p * gens[i];
        if (!scalar_multiple_of_identity(p))
            throw NotProjectiveError("generator order relation fails up to scalar");
        for (std::size_t j = i + 1; j < gens.size(); ++j) {
            auto gj_inv = inverse(gens[j]);
            auto gi_inv = inverse(gens[i]);
            if (!gj_inv || !gi_inv) throw NotProjectiveError("generator is singular");
            ExactMatrix comm = gens[i] * gens[j] * *gi_inv * *gj_inv;
            if (!scalar_multiple_of_identity(comm))
                throw NotProjectiveError("generator commutator is not scalar");
        }
    }

    auto mu = [&](int e) {
        auto exps = g.exps(static_cast<std::size_t>(e));
        ExactMatrix m = ExactMatrix::identity(dim);
        for (std::size_t i = 0; i < exps.size(); ++i)
            for (int k = 0; k < exps[i]; ++k) m = m * gens[i];
        return m;
    };

    out.df.assign(g.order, std::vector<Scalar>(g.order, Scalar(1)));
    for (std::size_t a = 0; a < g.order; ++a)
        for (std::size_t b = 0; b < g.order; ++b) {
            ExactMatrix prod = mu(static_cast<int>(a)) * mu(static_cast<int>(b));
            auto inv_ab = inverse(mu(g.table[a][b]));
            if (!inv_ab) throw NotProjectiveError("product representative is singular");
            auto lambda = scalar_multiple_of_identity(prod * *inv_ab);
            if (!lambda) throw NotProjectiveError("mu(a) mu(b) mu(ab)^{-1} is not scalar");
            out.df[a][b] = *lambda;
        }

    // cocycle identity df(a,b) df(ab,c) = df(b,c) df(a,bc)
    for (std::size_t a = 0; a < g.order && out.cocycle_condition_ok; ++a)
        for (std::size_t b = 0; b < g.order && out.cocycle_condition_ok; ++b)
            for (std::size_t c = 0; c < g.order; ++c) {
                Scalar lhs = out.df[a][b] * out.df[g.table[a][b]][c];
                Scalar rhs = out.df[b][c] * out.df[a][g.table[b][c]];
                if (lhs != rhs) {
                    out.cocycle_condition_ok = false;
                    break;
                }
            }
    return out;
}

// brute force over the normalized {+1,-1}-valued 1-cochains: is the given
// cocycle a coboundary of one of them?
inline bool trivialized_by_sign_cochain(const ProjectiveCocycle& pc) {
    const auto& g = pc.group;
    std::size_t nonunit = g.order - 1;
    for (std::size_t bits = 0; bits < (1u << nonunit); ++bits) {
        std::vector<Scalar> c(g.order, Scalar(1));
        std::size_t k = 0;
        for (std::size_t e = 0; e < g.order; ++e) {
            if (static_cast<int>(e) == g.unit) continue;
            c[e] = ((bits >> k) & 1u) ? Scalar(-1) : Scalar(1);
            ++k;
        }
        bool match = true;
        for (std::size_t a = 0; a < g.order && match; ++a)
            for (std::size_t b = 0; b < g.order; ++b) {
                Scalar dc = c[a] * c[b] * c[g.table[a][b]].inv();
                if (dc != pc.df[a][b]) {
                    match = false;
                    break;
                }
            }
        if (match) return true;
    }
    return false;
}

}  // namespace curvo
