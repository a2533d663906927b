#pragma once

// Twisted complexes over a cdg instance.
//
// A twisted complex is a bounded sequence of instance objects E^p together
// with a connection datum of total degree 1 whose bidegree-(0,1) component
// vanishes, solving  nabla(E) + E o E + R = 0.
//
// Morphisms are bigraded: a block of bidegree (a,b) is a family, indexed by
// the position p, of instance morphisms E^p -> F^{p+a} of instance degree b.
// Compositions carry the sign (-1)^{a' b} where a' is the internal degree of
// the outer factor and b the auxiliary degree of the inner one; the
// differential is d(f) = nabla(f) + F o f - (-1)^{|f|} f o E.

#include "curvo/cdg.hpp"
#include "curvo/graded.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace curvo {

struct CurvedObjectError : std::runtime_error {
    explicit CurvedObjectError(const std::string& m) : std::runtime_error(m) {}
};
struct NotMaurerCartanError : std::runtime_error {
    explicit NotMaurerCartanError(const std::string& m) : std::runtime_error(m) {}
};

struct Bidegree {
    int internal = 0, aux = 0;
    friend bool operator<(const Bidegree& x, const Bidegree& y) {
        return x.internal != y.internal ? x.internal < y.internal : x.aux < y.aux;
    }
    friend bool operator==(const Bidegree& x, const Bidegree& y) {
        return x.internal == y.internal && x.aux == y.aux;
    }
};

class BigradedMorphism {
public:
    BigradedMorphism() = default;
    explicit BigradedMorphism(int total_degree) : degree_(total_degree) {}

    int degree() const { return degree_; }

    void add_block(int internal, int position, Morphism m) {
        if (m.is_zero()) return;
        int aux = m.degree;
        if (internal + aux != degree_) throw DimensionError("block violates the total degree");
        auto& slot = blocks_[{internal, aux}];
        auto it = slot.find(position);
        if (it == slot.end()) {
            slot.emplace(position, std::move(m));
        } else {
            it->second = it->second + m;
            if (it->second.is_zero()) slot.erase(it);
        }
        if (blocks_[{internal, aux}].empty()) blocks_.erase({internal, aux});
    }

    const std::map<Bidegree, std::map<int, Morphism>>& blocks() const { return blocks_; }

    bool is_zero() const { return blocks_.empty(); }

    BigradedMorphism component(int internal, int aux) const {
        BigradedMorphism c(degree_);
        auto it = blocks_.find({internal, aux});
        if (it != blocks_.end())
            for (auto& [p, m] : it->second) c.add_block(internal, p, m);
        return c;
    }
    BigradedMorphism aux_component(int aux) const {
        BigradedMorphism c(degree_);
        for (auto& [bd, fam] : blocks_)
            if (bd.aux == aux)
                for (auto& [p, m] : fam) c.add_block(bd.internal, p, m);
        return c;
    }
    int max_aux() const {
        int m = -1;
        for (auto& [bd, fam] : blocks_) m = std::max(m, bd.aux);
        return m;
    }

    friend BigradedMorphism operator+(BigradedMorphism x, const BigradedMorphism& y) {
        if (x.degree_ != y.degree_) throw DimensionError("bigraded sum: degree mismatch");
        for (auto& [bd, fam] : y.blocks_)
            for (auto& [p, m] : fam) x.add_block(bd.internal, p, m);
        return x;
    }
    friend BigradedMorphism operator-(BigradedMorphism x, const BigradedMorphism& y) {
        if (x.degree_ != y.degree_) throw DimensionError("bigraded difference: degree mismatch");
        for (auto& [bd, fam] : y.blocks_)
            for (auto& [p, m] : fam) x.add_block(bd.internal, p, -m);
        return x;
    }
    friend BigradedMorphism operator*(const Scalar& s, BigradedMorphism x) {
        BigradedMorphism out(x.degree_);
        for (auto& [bd, fam] : x.blocks_)
            for (auto& [p, m] : fam) out.add_block(bd.internal, p, s * m);
        return out;
    }

private:
    int degree_ = 0;
    std::map<Bidegree, std::map<int, Morphism>> blocks_;
};

struct TwObject {
    const CdgInstance* inst = nullptr;
    std::map<int, int> spaces;  // position -> object id
    BigradedMorphism datum{1};

    int object_at(int p) const {
        auto it = spaces.find(p);
        return it == spaces.end() ? inst->zero_object() : it->second;
    }
    int min_position() const { return spaces.empty() ? 0 : spaces.begin()->first; }
    int max_position() const { return spaces.empty() ? 0 : spaces.rbegin()->first; }
};

inline BigradedMorphism tw_compose(const CdgInstance& inst, const BigradedMorphism& g,
                                   const BigradedMorphism& f) {
    BigradedMorphism out(g.degree() + f.degree());
    for (auto& [bdg, famg] : g.blocks())
        for (auto& [bdf, famf] : f.blocks()) {
            Scalar sign = sign_pow(static_cast<long>(bdg.internal) * bdf.aux);
            for (auto& [p, fm] : famf) {
                auto it = famg.find(p + bdf.internal);
                if (it == famg.end()) continue;
                Morphism c = inst.compose(it->second, fm);
                if (!c.is_zero()) out.add_block(bdg.internal + bdf.internal, p, sign * c);
            }
        }
    return out;
}

inline BigradedMorphism tw_nabla(const CdgInstance& inst, const BigradedMorphism& f) {
    BigradedMorphism out(f.degree() + 1);
    for (auto& [bd, fam] : f.blocks())
        for (auto& [p, m] : fam) {
            Morphism n = inst.nabla(m);
            if (!n.is_zero()) out.add_block(bd.internal, p, std::move(n));
        }
    return out;
}

inline BigradedMorphism tw_identity(const TwObject& x) {
    BigradedMorphism id(0);
    for (auto& [p, obj] : x.spaces) id.add_block(0, p, x.inst->identity(obj));
    return id;
}

inline BigradedMorphism curvature_datum(const TwObject& x) {
    BigradedMorphism r(2);
    for (auto& [p, obj] : x.spaces) r.add_block(0, p, x.inst->curvature(obj));
    return r;
}

// residual of nabla(E) + E o E + R, reported per bidegree and position
struct TwValidationEntry {
    Bidegree bidegree;
    int position;
};

inline BigradedMorphism mc_residual(const TwObject& x) {
    return tw_nabla(*x.inst, x.datum) + tw_compose(*x.inst, x.datum, x.datum) + curvature_datum(x);
}

inline std::vector<TwValidationEntry> tw_validate(const TwObject& x) {
    std::vector<TwValidationEntry> bad;
    for (auto& [bd, fam] : x.datum.blocks()) {
        if (bd.internal + bd.aux != 1 || bd.aux == 1 || bd.aux < 0)
            for (auto& [p, m] : fam) bad.push_back({bd, p});
    }
    BigradedMorphism res = mc_residual(x);
    for (auto& [bd, fam] : res.blocks())
        for (auto& [p, m] : fam)
            if (!m.is_zero()) bad.push_back({bd, p});
    return bad;
}

inline BigradedMorphism tw_differential(const BigradedMorphism& f, const TwObject& src,
                                        const TwObject& dst) {
    const CdgInstance& inst = *src.inst;
    BigradedMorphism out = tw_nabla(inst, f) + tw_compose(inst, dst.datum, f) -
                           sign_pow(f.degree()) * tw_compose(inst, f, src.datum);
    return out;
}

// d with the source and target connections twisted by degree-(0,1) data
inline BigradedMorphism twisted_nabla(const CdgInstance& inst, const BigradedMorphism& f,
                                      const BigradedMorphism& a_src, const BigradedMorphism& a_dst) {
    return tw_nabla(inst, f) + tw_compose(inst, a_dst, f) -
           sign_pow(f.degree()) * tw_compose(inst, f, a_src);
}

inline TwObject mc_twist(const TwObject& x, const BigradedMorphism& a) {
    if (a.degree() != 1) throw NotMaurerCartanError("twist must have total degree 1");
    for (auto& [bd, fam] : a.blocks())
        if (bd.aux == 1) throw NotMaurerCartanError("twist has a (0,1) component");
    BigradedMorphism mc = tw_differential(a, x, x) + tw_compose(*x.inst, a, a);
    if (!mc.is_zero()) throw NotMaurerCartanError("d(a) + a o a != 0");
    TwObject y = x;
    y.datum = x.datum + a;
    return y;
}

// ---------------------------------------------------------------------------
// flattening Hom^{p,q} blocks to exact vectors (for the spectral sequence and
// the transfer solver)

struct BlockSpace {
    // positions and per-position hom dimensions of Hom^{(a,b)}(X, Y)
    std::vector<int> positions;
    std::vector<std::size_t> dims;
    std::size_t total = 0;
};

inline BlockSpace block_space(const TwObject& src, const TwObject& dst, int internal, int aux) {
    BlockSpace bs;
    if (aux < 0 || aux > src.inst->max_degree()) return bs;
    int lo = src.min_position(), hi = src.max_position();
    for (int p = lo; p <= hi; ++p) {
        std::size_t d = src.inst->hom_dim(src.object_at(p), dst.object_at(p + internal), aux);
        if (d == 0) continue;
        bs.positions.push_back(p);
        bs.dims.push_back(d);
        bs.total += d;
    }
    return bs;
}

inline std::vector<Scalar> flatten_component(const BigradedMorphism& f, const BlockSpace& bs,
                                             int internal, int aux) {
    std::vector<Scalar> v(bs.total, Scalar(0));
    auto it = f.blocks().find({internal, aux});
    std::size_t off = 0;
    for (std::size_t k = 0; k < bs.positions.size(); ++k) {
        if (it != f.blocks().end()) {
            auto pm = it->second.find(bs.positions[k]);
            if (pm != it->second.end())
                for (std::size_t i = 0; i < pm->second.coeffs.size(); ++i) v[off + i] = pm->second.coeffs[i];
        }
        off += bs.dims[k];
    }
    return v;
}

inline BigradedMorphism unflatten_component(const CdgInstance& inst, const TwObject& src,
                                            const TwObject& dst, const BlockSpace& bs, int internal,
                                            int aux, const std::vector<Scalar>& v) {
    BigradedMorphism f(internal + aux);
    std::size_t off = 0;
    for (std::size_t k = 0; k < bs.positions.size(); ++k) {
        int p = bs.positions[k];
        Morphism m = inst.zero_morphism(src.object_at(p), dst.object_at(p + internal), aux);
        for (std::size_t i = 0; i < bs.dims[k]; ++i) m.coeffs[i] = v[off + i];
        off += bs.dims[k];
        if (!m.is_zero()) f.add_block(internal, p, std::move(m));
    }
    return f;
}

// ---------------------------------------------------------------------------
// spectral sequence of the auxiliary-degree filtration

struct SpectralPages {
    std::map<std::pair<int, int>, std::size_t> e0, e1, e2;  // keyed by (internal, aux)
    std::map<std::pair<int, int>, ExactMatrix> e1_representatives;

    std::size_t dim_e0(int p, int q) const {
        auto it = e0.find({p, q});
        return it == e0.end() ? 0 : it->second;
    }
    std::size_t dim_e1(int p, int q) const {
        auto it = e1.find({p, q});
        return it == e1.end() ? 0 : it->second;
    }
    std::size_t dim_e2(int p, int q) const {
        auto it = e2.find({p, q});
        return it == e2.end() ? 0 : it->second;
    }
};

inline SpectralPages filtration_pages(const TwObject& src, const TwObject& dst) {
    const CdgInstance& inst = *src.inst;
    SpectralPages pages;
    if (!tw_validate(src).empty() || !tw_validate(dst).empty())
        throw CurvedObjectError("filtration pages need valid twisted complexes");

    int internal_lo = dst.min_position() - src.max_position();
    int internal_hi = dst.max_position() - src.min_position();
    const int aux_hi = inst.max_degree();

    const BigradedMorphism e0d = src.datum.aux_component(0);
    const BigradedMorphism f0d = dst.datum.aux_component(0);

    auto d0_matrix = [&](int p, int q) -> ExactMatrix {
        BlockSpace dom = block_space(src, dst, p, q), cod = block_space(src, dst, p + 1, q);
        ExactMatrix m(cod.total, dom.total);
        std::size_t col = 0;
        for (std::size_t k = 0; k < dom.positions.size(); ++k)
            for (std::size_t i = 0; i < dom.dims[k]; ++i, ++col) {
                BigradedMorphism basis(p + q);
                Morphism bm = inst.zero_morphism(src.object_at(dom.positions[k]),
                                                 dst.object_at(dom.positions[k] + p), q);
                bm.coeffs[i] = Scalar(1);
                basis.add_block(p, dom.positions[k], std::move(bm));
                BigradedMorphism img = tw_compose(inst, f0d, basis) -
                                       sign_pow(p + q) * tw_compose(inst, basis, e0d);
                auto v = flatten_component(img, cod, p + 1, q);
                for (std::size_t r = 0; r < cod.total; ++r) m(r, col) = v[r];
            }
        return m;
    };

    // E0 and E1 page, row by row in the auxiliary degree
    for (int q = 0; q <= aux_hi; ++q) {
        ExactComplex row;
        std::map<int, BlockSpace> spaces;
        for (int p = internal_lo; p <= internal_hi; ++p) {
            BlockSpace bs = block_space(src, dst, p, q);
            spaces[p] = bs;
            if (bs.total) {
                row.spaces.set_dim(p, bs.total);
                pages.e0[{p, q}] = bs.total;
            }
        }
        for (int p = internal_lo; p <= internal_hi; ++p)
            if (row.spaces.dim(p) && row.spaces.dim(p + 1)) row.differentials[p] = d0_matrix(p, q);
            else if (row.spaces.dim(p))
                row.differentials[p] = ExactMatrix::zero(row.spaces.dim(p + 1), row.spaces.dim(p));
        for (auto& [p, h] : complex_cohomology(row)) {
            if (h.dimension) pages.e1[{p, q}] = h.dimension;
            pages.e1_representatives[{p, q}] = h.representatives;
        }
    }

    // E2 page: cohomology of E1 with respect to the induced connection
    for (int p = internal_lo; p <= internal_hi; ++p) {
        ExactComplex col;
        std::map<int, ExactMatrix> reps;
        for (int q = 0; q <= aux_hi; ++q) {
            auto it = pages.e1_representatives.find({p, q});
            std::size_t d = pages.dim_e1(p, q);
            if (d) col.spaces.set_dim(q, d);
            if (it != pages.e1_representatives.end()) reps[q] = it->second;
        }
        if (col.spaces.empty()) continue;
        for (int q = 0; q <= aux_hi; ++q) {
            std::size_t dq = col.spaces.dim(q), dq1 = col.spaces.dim(q + 1);
            if (!dq) continue;
            ExactMatrix m(dq1, dq);
            if (dq1) {
                BlockSpace dom = block_space(src, dst, p, q), cod = block_space(src, dst, p, q + 1);
                // express nabla(representative) in E1^{p,q+1} coordinates
                // modulo the image of d0
                ExactMatrix img_basis(cod.total, 0);
                {
                    BlockSpace prev = block_space(src, dst, p - 1, q + 1);
                    ExactMatrix d0prev = ExactMatrix::zero(cod.total, prev.total);
                    if (prev.total) d0prev = d0_matrix(p - 1, q + 1);
                    img_basis = std::move(d0prev);
                }
                const ExactMatrix& r1 = reps[q + 1];
                ExactMatrix sys(cod.total, r1.cols() + img_basis.cols());
                for (std::size_t i = 0; i < cod.total; ++i) {
                    for (std::size_t j = 0; j < r1.cols(); ++j) sys(i, j) = r1(i, j);
                    for (std::size_t j = 0; j < img_basis.cols(); ++j) sys(i, r1.cols() + j) = img_basis(i, j);
                }
                for (std::size_t j = 0; j < dq; ++j) {
                    const ExactMatrix& rq = reps[q];
                    BigradedMorphism rep = unflatten_component(inst, src, dst, dom, p, q, rq.col(j));
                    BigradedMorphism img = tw_nabla(inst, rep);
                    ExactMatrix rhs = ExactMatrix::from_columns(cod.total, {flatten_component(img, cod, p, q + 1)});
                    auto sol = solve_linear_exact(sys, rhs);
                    if (!sol) throw CurvedObjectError("induced connection left the E1 page");
                    for (std::size_t i = 0; i < dq1; ++i) m(i, j) = (*sol)(i, 0);
                }
            }
            col.differentials[q] = std::move(m);
        }
        for (auto& [q, h] : complex_cohomology(col))
            if (h.dimension) pages.e2[{p, q}] = h.dimension;
    }
    return pages;
}

// Completes an auxiliary-degree-0 seed datum to a full connection datum by
// solving the bidegree equations one auxiliary degree at a time. The aux-1
// component of the residual must vanish on its own (the seed has to be
// closed); nullopt when some cone equation is inconsistent.
inline std::optional<TwObject> complete_connection_datum(TwObject seed) {
    const CdgInstance& inst = *seed.inst;
    for (int aux = 1; aux <= inst.max_degree() + 1; ++aux) {
        BigradedMorphism res = mc_residual(seed).aux_component(aux);
        if (res.is_zero()) continue;
        if (aux == 1) return std::nullopt;
        BigradedMorphism e0 = seed.datum.aux_component(0);
        BlockSpace xs = block_space(seed, seed, 1 - aux, aux);
        BlockSpace ps = block_space(seed, seed, 2 - aux, aux);
        ExactMatrix sys(ps.total, xs.total);
        for (std::size_t j = 0; j < xs.total; ++j) {
            std::vector<Scalar> v(xs.total, Scalar(0));
            v[j] = Scalar(1);
            BigradedMorphism x = unflatten_component(inst, seed, seed, xs, 1 - aux, aux, v);
            BigradedMorphism img = tw_compose(inst, e0, x) + tw_compose(inst, x, e0);
            auto col = flatten_component(img, ps, 2 - aux, aux);
            for (std::size_t i = 0; i < ps.total; ++i) sys(i, j) = col[i];
        }
        auto rhs_vec = flatten_component(Scalar(-1) * res, ps, 2 - aux, aux);
        auto sol = solve_linear_exact(sys, ExactMatrix::from_columns(rhs_vec.size(), {rhs_vec}));
        if (!sol) return std::nullopt;
        std::vector<Scalar> v(xs.total);
        for (std::size_t j = 0; j < xs.total; ++j) v[j] = (*sol)(j, 0);
        seed.datum = seed.datum + unflatten_component(inst, seed, seed, xs, 1 - aux, aux, v);
    }
    if (!mc_residual(seed).is_zero()) return std::nullopt;
    return seed;
}

// ---------------------------------------------------------------------------
// inverse of a degree-0 morphism whose (0,0) part is blockwise invertible

inline std::optional<BigradedMorphism> invert_degree0(const BigradedMorphism& g, const TwObject& src,
                                                      const TwObject& dst) {
    const CdgInstance& inst = *src.inst;
    if (g.degree() != 0) return std::nullopt;
    // fiberwise inverse of the (0,0) part
    BigradedMorphism r(0);
    for (auto& [p, obj] : dst.spaces) {
        int sobj = src.object_at(p);
        Morphism g0 = inst.zero_morphism(sobj, obj, 0);
        auto it = g.blocks().find({0, 0});
        if (it != g.blocks().end()) {
            auto pm = it->second.find(p);
            if (pm != it->second.end()) g0 = pm->second;
        }
        std::vector<ExactMatrix> inv_blocks;
        for (std::size_t x = 0; x < inst.fiber_count(); ++x) {
            auto invb = inverse(inst.deg0_block(g0, x));
            if (!invb) return std::nullopt;
            inv_blocks.push_back(std::move(*invb));
        }
        Morphism g0inv = inst.deg0_from_blocks(obj, sobj, inv_blocks);
        if (!g0inv.is_zero()) r.add_block(0, p, std::move(g0inv));
    }
    // g = g0 (id + r g_plus)  =>  g^{-1} = sum_k (-r g_plus)^k r
    BigradedMorphism gplus(0);
    for (auto& [bd, fam] : g.blocks())
        if (bd.aux > 0)
            for (auto& [p, m] : fam) gplus.add_block(bd.internal, p, m);
    BigradedMorphism e = tw_compose(inst, r, gplus);  // aux >= 1, nilpotent
    BigradedMorphism term = r, total = r;
    for (int k = 0; k < inst.max_degree() + 2; ++k) {
        term = Scalar(-1) * tw_compose(inst, e, term);
        if (term.is_zero()) break;
        total = total + term;
    }
    return total;
}

}  // namespace curvo
