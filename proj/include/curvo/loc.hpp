#pragma once

// Finite instances of the category of curved local systems over a finite
// simplicial set S with a multiplicative 2-cocycle H.
//
// An object assigns a vector space to every 0-simplex and a transport matrix
// to every nondegenerate edge (degenerate edges transport by the identity).
// A degree-n morphism assigns to every nondegenerate n-simplex sigma a matrix
// E_{sigma(0)} -> F_{sigma(n)}; assignments on degenerate simplices vanish
// (these form a sub-cdg-category, which the residual suites check).
//
// Structure maps, for f of degree n and sigma of level n+1:
//   (nabla f)(sigma) = (-1)^{n+1} H(sigma_(0,1,n+1)) f(d_0 sigma) P^E(sigma_(0,1))
//                    + H(sigma_(0,n,n+1)) P^F(sigma_(n,n+1)) f(d_{n+1} sigma)
//                    + sum_{i=1..n} (-1)^{i+n+1} f(d_i sigma)
//   (g cup f)(sigma) = H(sigma_(0,i,n)) g(sigma_(i..n)) f(sigma_(0..i))
//   R_E(sigma)       = -P(sigma_(0,2)) + H(sigma) P(sigma_(1,2)) P(sigma_(0,1))

#include "curvo/cdg.hpp"
#include "curvo/simplicial.hpp"

#include <map>
#include <numeric>
#include <vector>

namespace curvo {

struct LocObject {
    std::vector<std::size_t> fiber_dims;          // per 0-simplex
    std::map<int, ExactMatrix> transports;        // per nondegenerate 1-simplex
};

class LocInstance : public CdgInstance {
public:
    LocInstance(const FiniteSimplicialSet& set, SimplicialCocycle h)
        : set_(&set), h_(std::move(h)) {
        if (!h_.is_closed()) throw NotClosedCocycleError("Loc instance needs a closed 2-cocycle");
        for (int d = 0; d <= set_->truncation; ++d) nondeg_.push_back(set_->nondegenerate_elems(d));
        // object 0 is the zero object
        LocObject z;
        z.fiber_dims.assign(set_->size(0), 0);
        objects_.push_back(std::move(z));
    }

    int add_object(LocObject obj) {
        for (int g : nondeg_[1]) {
            int v0 = set_->face_of(1, 1, g), v1 = set_->face_of(1, 0, g);
            auto it = obj.transports.find(g);
            if (it == obj.transports.end())
                throw DimensionError("missing transport on a nondegenerate edge");
            if (it->second.rows() != obj.fiber_dims[v1] || it->second.cols() != obj.fiber_dims[v0])
                throw DimensionError("transport shape mismatch");
        }
        objects_.push_back(std::move(obj));
        return static_cast<int>(objects_.size()) - 1;
    }

    const LocObject& object(int i) const { return objects_.at(i); }
    const FiniteSimplicialSet& simplicial_set() const { return *set_; }
    const SimplicialCocycle& cocycle() const { return h_; }

    std::size_t object_count() const override { return objects_.size(); }
    int zero_object() const override { return 0; }
    int max_degree() const override { return set_->truncation; }

    std::size_t hom_dim(int src, int dst, int degree) const override {
        if (degree < 0 || degree > max_degree()) return 0;
        std::size_t d = 0;
        for (int s : nondeg_[degree]) d += block_size(src, dst, degree, s);
        return d;
    }

    // matrix of f on a (possibly degenerate) simplex; zero off the support
    ExactMatrix value(const Morphism& f, int simplex) const {
        int v0 = set_->vertex(f.degree, simplex, 0);
        int vn = set_->vertex(f.degree, simplex, f.degree);
        std::size_t r = objects_[f.dst].fiber_dims[vn], c = objects_[f.src].fiber_dims[v0];
        ExactMatrix m(r, c);
        if (set_->is_degenerate(f.degree, simplex) && f.degree > 0) return m;
        std::size_t off = offset(f.src, f.dst, f.degree, simplex);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m(i, j) = f.coeffs[off + i * c + j];
        return m;
    }

    Morphism from_values(int src, int dst, int degree,
                         const std::map<int, ExactMatrix>& values) const {
        Morphism m = zero_morphism(src, dst, degree);
        for (auto& [s, mat] : values) {
            std::size_t off = offset(src, dst, degree, s);
            for (std::size_t i = 0; i < mat.rows(); ++i)
                for (std::size_t j = 0; j < mat.cols(); ++j)
                    m.coeffs[off + i * mat.cols() + j] = mat(i, j);
        }
        return m;
    }

    // transport along a (possibly degenerate) edge
    ExactMatrix transport(int obj, int edge) const {
        if (set_->is_degenerate(1, edge)) {
            int v = set_->vertex(1, edge, 0);
            return ExactMatrix::identity(objects_[obj].fiber_dims[v]);
        }
        return objects_[obj].transports.at(edge);
    }

    Morphism nabla(const Morphism& f) const override {
        const int n = f.degree;
        Morphism out = zero_morphism(f.src, f.dst, n + 1);
        if (n < 0 || n + 1 > max_degree() || f.is_zero()) return out;
        std::map<int, ExactMatrix> vals;
        for (int tau : nondeg_[n + 1]) {
            ExactMatrix acc(fiber_dim_at(f.dst, n + 1, tau, n + 1), fiber_dim_at(f.src, n + 1, tau, 0));
            // front term
            {
                int face0 = set_->face_of(n + 1, 0, tau);
                if (n == 0 || !set_->is_degenerate(n, face0)) {
                    Scalar w = sign_pow(n + 1) * h_(set_->subsimplex(n + 1, tau, {0, 1, n + 1}));
                    acc += w * (value_on(f, face0) * transport(f.src, set_->subsimplex(n + 1, tau, {0, 1})));
                }
            }
            // back term
            {
                int face_last = set_->face_of(n + 1, n + 1, tau);
                if (n == 0 || !set_->is_degenerate(n, face_last)) {
                    Scalar w = h_(set_->subsimplex(n + 1, tau, {0, n, n + 1}));
                    acc += w * (transport(f.dst, set_->subsimplex(n + 1, tau, {n, n + 1})) * value_on(f, face_last));
                }
            }
            for (int i = 1; i <= n; ++i) {
                int fi = set_->face_of(n + 1, i, tau);
                if (n > 0 && set_->is_degenerate(n, fi)) continue;
                acc += sign_pow(i + n + 1) * value_on(f, fi);
            }
            if (!acc.is_zero()) vals[tau] = std::move(acc);
        }
        return from_values(f.src, f.dst, n + 1, vals);
    }

    Morphism compose(const Morphism& g, const Morphism& f) const override {
        check_composable(g, f);
        const int i = f.degree, n = f.degree + g.degree;
        Morphism out = zero_morphism(f.src, g.dst, n);
        if (f.degree < 0 || g.degree < 0 || n > max_degree()) return out;
        std::map<int, ExactMatrix> vals;
        for (int sigma : nondeg_[n]) {
            std::vector<int> front(i + 1), back(n - i + 1);
            std::iota(front.begin(), front.end(), 0);
            std::iota(back.begin(), back.end(), i);
            int fr = set_->subsimplex(n, sigma, front);
            int bk = set_->subsimplex(n, sigma, back);
            if ((i > 0 && set_->is_degenerate(i, fr)) || (n - i > 0 && set_->is_degenerate(n - i, bk)))
                continue;
            Scalar w = h_(set_->subsimplex(n, sigma, {0, i, n}));
            ExactMatrix m = w * (value_on(g, bk) * value_on(f, fr));
            if (!m.is_zero()) vals[sigma] = std::move(m);
        }
        return from_values(f.src, g.dst, n, vals);
    }

    Morphism identity(int obj) const override {
        std::map<int, ExactMatrix> vals;
        for (int x : nondeg_[0]) vals[x] = ExactMatrix::identity(objects_[obj].fiber_dims[x]);
        return from_values(obj, obj, 0, vals);
    }

    Morphism curvature(int obj) const override {
        std::map<int, ExactMatrix> vals;
        if (max_degree() < 2) return zero_morphism(obj, obj, 2);
        for (int sigma : nondeg_[2]) {
            ExactMatrix m = -transport(obj, set_->subsimplex(2, sigma, {0, 2})) +
                            h_(sigma) * (transport(obj, set_->subsimplex(2, sigma, {1, 2})) *
                                         transport(obj, set_->subsimplex(2, sigma, {0, 1})));
            if (!m.is_zero()) vals[sigma] = std::move(m);
        }
        return from_values(obj, obj, 2, vals);
    }

    std::size_t fiber_count() const override { return set_->size(0); }
    std::size_t fiber_dim(int obj, std::size_t fiber) const override {
        return objects_[obj].fiber_dims[fiber];
    }
    ExactMatrix deg0_block(const Morphism& f, std::size_t fiber) const override {
        return value(f, static_cast<int>(fiber));
    }
    Morphism deg0_from_blocks(int src, int dst, const std::vector<ExactMatrix>& blocks) const override {
        std::map<int, ExactMatrix> vals;
        for (std::size_t x = 0; x < blocks.size(); ++x) vals[static_cast<int>(x)] = blocks[x];
        return from_values(src, dst, 0, vals);
    }

    SurgeryResult subobject(int obj, const std::vector<ExactMatrix>& inclusion_cols) override {
        LocObject sub;
        sub.fiber_dims.resize(set_->size(0));
        for (std::size_t x = 0; x < set_->size(0); ++x) sub.fiber_dims[x] = inclusion_cols[x].cols();
        for (int g : nondeg_[1]) {
            int v0 = set_->face_of(1, 1, g), v1 = set_->face_of(1, 0, g);
            auto sol = solve_linear_exact(inclusion_cols[v1], objects_[obj].transports.at(g) * inclusion_cols[v0]);
            if (!sol) throw SplitError("subspace family is not transport-stable");
            sub.transports[g] = std::move(*sol);
        }
        objects_.push_back(std::move(sub));
        return {static_cast<int>(objects_.size()) - 1, inclusion_cols};
    }

    SurgeryResult quotient_object(int obj, const std::vector<ExactMatrix>& killed_cols) override {
        LocObject q;
        q.fiber_dims.resize(set_->size(0));
        std::vector<ExactMatrix> basis(set_->size(0)), basis_inv(set_->size(0)), proj(set_->size(0));
        for (std::size_t x = 0; x < set_->size(0); ++x) {
            ExactMatrix comp = extend_to_basis(killed_cols[x]);
            q.fiber_dims[x] = comp.cols();
            std::size_t n = objects_[obj].fiber_dims[x], k = killed_cols[x].cols();
            ExactMatrix b(n, n);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < k; ++j) b(i, j) = killed_cols[x](i, j);
                for (std::size_t j = 0; j < comp.cols(); ++j) b(i, k + j) = comp(i, j);
            }
            auto binv = inverse(b);
            if (!binv) throw SplitError("killed subspace columns are not independent");
            ExactMatrix p(q.fiber_dims[x], n);
            for (std::size_t i = 0; i < q.fiber_dims[x]; ++i)
                for (std::size_t j = 0; j < n; ++j) p(i, j) = (*binv)(k + i, j);
            basis[x] = std::move(b);
            basis_inv[x] = std::move(*binv);
            proj[x] = std::move(p);
        }
        for (int g : nondeg_[1]) {
            int v0 = set_->face_of(1, 1, g), v1 = set_->face_of(1, 0, g);
            ExactMatrix conj = basis_inv[v1] * objects_[obj].transports.at(g) * basis[v0];
            std::size_t k1 = killed_cols[v1].cols(), k0 = killed_cols[v0].cols();
            ExactMatrix block(q.fiber_dims[v1], q.fiber_dims[v0]);
            for (std::size_t i = 0; i < q.fiber_dims[v1]; ++i)
                for (std::size_t j = 0; j < q.fiber_dims[v0]; ++j) block(i, j) = conj(k1 + i, k0 + j);
            q.transports[g] = std::move(block);
        }
        objects_.push_back(std::move(q));
        return {static_cast<int>(objects_.size()) - 1, proj};
    }

    int twist_object(int obj, const Morphism& a) override {
        if (a.src != obj || a.dst != obj || a.degree != 1)
            throw DimensionError("twist datum must be a degree-1 endomorphism");
        LocObject t = objects_[obj];
        for (int g : nondeg_[1]) t.transports[g] += value(a, g);
        objects_.push_back(std::move(t));
        return static_cast<int>(objects_.size()) - 1;
    }

private:
    std::size_t fiber_dim_at(int obj, int level, int simplex, int vtx) const {
        return objects_[obj].fiber_dims[set_->vertex(level, simplex, vtx)];
    }
    std::size_t block_size(int src, int dst, int degree, int simplex) const {
        return objects_[dst].fiber_dims[set_->vertex(degree, simplex, degree)] *
               objects_[src].fiber_dims[set_->vertex(degree, simplex, 0)];
    }
    std::size_t offset(int src, int dst, int degree, int simplex) const {
        std::size_t off = 0;
        for (int s : nondeg_[degree]) {
            if (s == simplex) return off;
            off += block_size(src, dst, degree, s);
        }
        throw DimensionError("simplex is degenerate or out of range");
    }
    // like value() but usable on faces handed in by structure maps
    ExactMatrix value_on(const Morphism& f, int simplex) const { return value(f, simplex); }

    const FiniteSimplicialSet* set_;
    SimplicialCocycle h_;
    std::vector<std::vector<int>> nondeg_;
    std::vector<LocObject> objects_;
};

// convenience: a Loc instance over the given set with fibers of constant
// dimension and scalar transports p(g) * id; with a nontrivial H this yields
// objects whose curvature is a nonzero scalar multiple of the identity
inline int add_scalar_object(LocInstance& inst, std::size_t dim,
                             const std::map<int, Scalar>& edge_scalars) {
    LocObject obj;
    const auto& s = inst.simplicial_set();
    obj.fiber_dims.assign(s.size(0), dim);
    for (int g : s.nondegenerate_elems(1)) {
        auto it = edge_scalars.find(g);
        Scalar v = it == edge_scalars.end() ? Scalar(1) : it->second;
        obj.transports[g] = v * ExactMatrix::identity(dim);
    }
    return inst.add_object(std::move(obj));
}

// transports of the pure-gauge form g_end g_start^{-1}; the curvature is then
// (H(sigma) - 1) g2 g0^{-1}, zero over the trivial cocycle
inline int add_gauge_object(LocInstance& inst, std::size_t dim, SplitMix& rng) {
    const auto& s = inst.simplicial_set();
    std::vector<ExactMatrix> gauge(s.size(0));
    for (std::size_t x = 0; x < s.size(0); ++x) {
        for (;;) {
            ExactMatrix m = ExactMatrix::identity(dim);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j) m(i, j) += rng.gaussian_rational(1, 2);
            if (inverse(m)) {
                gauge[x] = std::move(m);
                break;
            }
        }
    }
    LocObject obj;
    obj.fiber_dims.assign(s.size(0), dim);
    for (int g : s.nondegenerate_elems(1)) {
        int v0 = s.face_of(1, 1, g), v1 = s.face_of(1, 0, g);
        obj.transports[g] = gauge[v1] * *inverse(gauge[v0]);
    }
    return inst.add_object(std::move(obj));
}

inline int add_random_object(LocInstance& inst, std::size_t dim, SplitMix& rng) {
    LocObject obj;
    const auto& s = inst.simplicial_set();
    obj.fiber_dims.assign(s.size(0), dim);
    for (int g : s.nondegenerate_elems(1)) {
        // random invertible transport: identity plus a small perturbation,
        // retried until invertible
        for (;;) {
            ExactMatrix m = ExactMatrix::identity(dim);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j) m(i, j) += rng.gaussian_rational(1, 2);
            if (inverse(m)) {
                obj.transports[g] = std::move(m);
                break;
            }
        }
    }
    return inst.add_object(std::move(obj));
}

}  // namespace curvo
