#include "curvo/loc.hpp"
#include "curvo/tw.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace curvo;

namespace {

// Loc instance over the Z/2 nerve with the sign cocycle; scalar objects have
// curvature (-q + H q^2) id, generally nonzero
struct CurvedSetup {
    FiniteSimplicialMonoid s;
    SimplicialCocycle h;
    LocInstance inst;
    CurvedSetup()
        : s(nerve_monoid(CyclicProductGroup({2}), 3)),
          h(&s, {{1 /* the (1,1) 2-simplex id computed below */, Scalar(-1)}}),
          inst(s, rebuild_cocycle()) {}
    SimplicialCocycle rebuild_cocycle() {
        std::map<int, Scalar> vals;
        for (int e : s.nondegenerate_elems(2)) vals[e] = Scalar(-1);
        h = SimplicialCocycle(&s, vals);
        return h;
    }
};

struct FlatSetup {
    FiniteSimplicialSet s;
    LocInstance inst;
    FlatSetup() : s(standard_simplex_set(2, 3)), inst(s, SimplicialCocycle::trivial(s)) {}
};

// a two-term curved twisted complex over the nerve instance, with the
// auxiliary-degree-2 part found by the exact solver
TwObject curved_two_term(LocInstance& inst, SplitMix& rng) {
    int e0 = add_scalar_object(inst, 2, {{1, Scalar(2, 3)}});
    int e1 = add_scalar_object(inst, 2, {{1, Scalar(2, 3)}});
    TwObject x;
    x.inst = &inst;
    x.spaces = {{0, e0}, {1, e1}};
    BigradedMorphism datum(1);
    // identity-valued closed degree-0 map e0 -> e1 (equal fiber data)
    std::vector<ExactMatrix> blocks;
    for (std::size_t fb = 0; fb < inst.fiber_count(); ++fb)
        blocks.push_back(ExactMatrix::identity(inst.fiber_dim(e0, fb)));
    datum.add_block(1, 0, inst.deg0_from_blocks(e0, e1, blocks));
    x.datum = datum;
    auto full = complete_connection_datum(x);
    REQUIRE(full);
    (void)rng;
    return *full;
}

}  // namespace

TEST_CASE("composition signs, associativity and units") {
    SplitMix rng(404);
    FlatSetup fs;
    int a = add_gauge_object(fs.inst, 2, rng);
    int b = add_gauge_object(fs.inst, 1, rng);
    TwObject x, y, z, w;
    x.inst = y.inst = z.inst = w.inst = &fs.inst;
    x.spaces = {{0, a}, {1, b}};
    y.spaces = {{0, b}, {1, a}};
    z.spaces = {{0, a}, {1, b}};
    w.spaces = {{0, b}};

    auto random_bigraded = [&](const TwObject& src, const TwObject& dst, int deg) {
        BigradedMorphism m(deg);
        for (auto& [p, so] : src.spaces)
            for (int internal = -2; internal <= 2; ++internal) {
                int aux = deg - internal;
                if (aux < 0 || aux > fs.inst.max_degree()) continue;
                int to = dst.object_at(p + internal);
                if (fs.inst.hom_dim(so, to, aux) == 0) continue;
                m.add_block(internal, p, random_morphism(fs.inst, so, to, aux, rng));
            }
        return m;
    };

    // the stated sign: internal-degree-1 after auxiliary-degree-1 picks up -1
    {
        // f of bidegree (0,1): x -> y at position 0, g of bidegree (1,0)
        Morphism fm = random_morphism(fs.inst, x.object_at(0), y.object_at(0), 1, rng);
        Morphism gm = random_morphism(fs.inst, y.object_at(0), z.object_at(1), 0, rng);
        REQUIRE(!gm.coeffs.empty());
        BigradedMorphism f(1), g(1);
        f.add_block(0, 0, fm);
        g.add_block(1, 0, gm);
        BigradedMorphism gf = tw_compose(fs.inst, g, f);
        auto it = gf.blocks().find({1, 1});
        REQUIRE(it != gf.blocks().end());
        Morphism expect = Scalar(-1) * fs.inst.compose(gm, fm);
        REQUIRE((it->second.at(0) - expect).is_zero());
    }
    // plain matrix product at bidegree (0,0) x (0,0)
    {
        Morphism fm = random_morphism(fs.inst, x.object_at(0), y.object_at(0), 0, rng);
        Morphism gm = random_morphism(fs.inst, y.object_at(0), z.object_at(0), 0, rng);
        BigradedMorphism f(0), g(0);
        f.add_block(0, 0, fm);
        g.add_block(0, 0, gm);
        BigradedMorphism gf = tw_compose(fs.inst, g, f);
        REQUIRE((gf.blocks().at({0, 0}).at(0) - fs.inst.compose(gm, fm)).is_zero());
    }
    // associativity on random triples, unitality
    for (int k = 0; k < 50; ++k) {
        BigradedMorphism f = random_bigraded(x, y, static_cast<int>(rng.range(0, 2)));
        BigradedMorphism g = random_bigraded(y, z, static_cast<int>(rng.range(0, 2)));
        BigradedMorphism h = random_bigraded(z, w, static_cast<int>(rng.range(0, 2)));
        BigradedMorphism l = tw_compose(fs.inst, tw_compose(fs.inst, h, g), f);
        BigradedMorphism r = tw_compose(fs.inst, h, tw_compose(fs.inst, g, f));
        REQUIRE((l - r).is_zero());
        REQUIRE((tw_compose(fs.inst, f, tw_identity(x)) - f).is_zero());
        REQUIRE((tw_compose(fs.inst, tw_identity(y), f) - f).is_zero());
    }
}

TEST_CASE("validation flags the broken decomposition equations") {
    SplitMix rng(7001);
    FlatSetup fs;
    int a = add_scalar_object(fs.inst, 2, {});
    TwObject x;
    x.inst = &fs.inst;
    x.spaces = {{0, a}, {1, a}};
    // flat object with zero datum is valid
    REQUIRE(tw_validate(x).empty());
    // a differential that does not square to zero is reported at (2,0)
    TwObject bad = x;
    bad.spaces = {{0, a}, {1, a}, {2, a}};
    BigradedMorphism d(1);
    d.add_block(1, 0, fs.inst.identity(a));
    d.add_block(1, 1, fs.inst.identity(a));
    bad.datum = d;
    auto rep = tw_validate(bad);
    REQUIRE(!rep.empty());
    bool found = false;
    for (auto& e : rep)
        if (e.bidegree == Bidegree{2, 0}) found = true;
    REQUIRE(found);
    (void)rng;
}

TEST_CASE("curved two-term object validates after solving for the correction") {
    SplitMix rng(555);
    CurvedSetup cs;
    TwObject x = curved_two_term(cs.inst, rng);
    REQUIRE(tw_validate(x).empty());
    // the correction has a nonzero (0, 2) block since the objects are curved
    REQUIRE(!x.datum.component(-1, 2).is_zero());
}

TEST_CASE("squared differential vanishes on valid objects") {
    SplitMix rng(808);
    CurvedSetup cs;
    TwObject x = curved_two_term(cs.inst, rng);
    TwObject y = curved_two_term(cs.inst, rng);
    auto random_bigraded = [&](const TwObject& src, const TwObject& dst, int deg) {
        BigradedMorphism m(deg);
        for (auto& [p, so] : src.spaces)
            for (int internal = -2; internal <= 2; ++internal) {
                int aux = deg - internal;
                if (aux < 0 || aux > cs.inst.max_degree()) continue;
                int to = dst.object_at(p + internal);
                if (cs.inst.hom_dim(so, to, aux) == 0) continue;
                m.add_block(internal, p, random_morphism(cs.inst, so, to, aux, rng));
            }
        return m;
    };
    for (int k = 0; k < 200; ++k) {
        int deg = static_cast<int>(rng.range(-1, 2));
        BigradedMorphism f = random_bigraded(x, y, deg);
        BigradedMorphism df = tw_differential(f, x, y);
        BigradedMorphism ddf = tw_differential(df, x, y);
        REQUIRE(ddf.is_zero());
    }
    // d(id) = 0 and the graded Leibniz rule
    REQUIRE(tw_differential(tw_identity(x), x, x).is_zero());
    for (int k = 0; k < 50; ++k) {
        TwObject z = curved_two_term(cs.inst, rng);
        BigradedMorphism f = random_bigraded(x, y, static_cast<int>(rng.range(0, 1)));
        BigradedMorphism g = random_bigraded(y, z, static_cast<int>(rng.range(0, 1)));
        BigradedMorphism lhs = tw_differential(tw_compose(cs.inst, g, f), x, z);
        BigradedMorphism rhs = tw_compose(cs.inst, tw_differential(g, y, z), f) +
                               sign_pow(g.degree()) * tw_compose(cs.inst, g, tw_differential(f, x, y));
        REQUIRE((lhs - rhs).is_zero());
    }
    // the flat case: zero datum, closed morphism has d(f) = nabla(f) and a
    // nabla-closed one is d-closed
    FlatSetup flats;
    int a = add_scalar_object(flats.inst, 1, {});
    TwObject fx;
    fx.inst = &flats.inst;
    fx.spaces = {{0, a}};
    BigradedMorphism idm = tw_identity(fx);
    REQUIRE(tw_differential(idm, fx, fx).is_zero());
}

TEST_CASE("Maurer-Cartan twisting") {
    SplitMix rng(9090);
    FlatSetup fs;
    int a = add_gauge_object(fs.inst, 2, rng);
    int b = add_gauge_object(fs.inst, 2, rng);
    TwObject x;
    x.inst = &fs.inst;
    x.spaces = {{0, a}, {1, b}};

    // a = 0 leaves the object unchanged
    TwObject same = mc_twist(x, BigradedMorphism(1));
    REQUIRE(tw_validate(same).empty());

    // a random nabla-closed (1,0) block is a Maurer-Cartan element over the
    // flat object (its square leaves the window)
    {
        std::size_t dim = fs.inst.hom_dim(a, b, 0);
        ExactMatrix nab(fs.inst.hom_dim(a, b, 1), dim);
        for (std::size_t j = 0; j < dim; ++j) {
            Morphism basis = fs.inst.basis_morphism(a, b, 0, j);
            Morphism img = fs.inst.nabla(basis);
            for (std::size_t i = 0; i < img.coeffs.size(); ++i) nab(i, j) = img.coeffs[i];
        }
        ExactMatrix ker = nullspace(nab);
        REQUIRE(ker.cols() > 0);
        Morphism alpha = fs.inst.zero_morphism(a, b, 0);
        for (std::size_t j = 0; j < ker.cols(); ++j) {
            Scalar w = rng.gaussian_rational(2, 2);
            for (std::size_t i = 0; i < alpha.coeffs.size(); ++i) alpha.coeffs[i] += w * ker(i, j);
        }
        BigradedMorphism mc(1);
        mc.add_block(1, 0, alpha);
        TwObject tx = mc_twist(x, mc);
        REQUIRE(tw_validate(tx).empty());
        // the twist must actually satisfy the MC equation; corrupt it and fail
        if (!alpha.is_zero()) {
            BigradedMorphism broken(1);
            Morphism beta = alpha;
            beta.coeffs[0] += Scalar(1);
            bool still_mc = true;
            try {
                broken.add_block(1, 0, beta);
                mc_twist(x, broken);
            } catch (const NotMaurerCartanError&) {
                still_mc = false;
            }
            // beta is MC only if it happens to stay nabla-closed
            Morphism img = fs.inst.nabla(beta);
            REQUIRE(still_mc == img.is_zero());
        }
    }

    // gauge twist: a = -d(g) g^{-1} for invertible degree-0 g, and g becomes
    // closed into the twisted object
    {
        // the (0,0) part must be nabla-closed so the gauge twist has no
        // (0,1) component; the identity is closed and invertible
        BigradedMorphism g(0);
        for (auto& [p, obj] : x.spaces) g.add_block(0, p, fs.inst.identity(obj));
        // aux >= 1 parts of g
        g.add_block(-1, 1, random_morphism(fs.inst, x.object_at(1), x.object_at(0), 1, rng));
        auto ginv = invert_degree0(g, x, x);
        REQUIRE(ginv);
        REQUIRE((tw_compose(fs.inst, g, *ginv) - tw_identity(x)).is_zero());
        REQUIRE((tw_compose(fs.inst, *ginv, g) - tw_identity(x)).is_zero());
        BigradedMorphism a_gauge =
            Scalar(-1) * tw_compose(fs.inst, tw_differential(g, x, x), *ginv);
        TwObject tx = mc_twist(x, a_gauge);
        REQUIRE(tw_validate(tx).empty());
        // g is closed as a morphism from x to the twisted object
        BigradedMorphism dg = tw_differential(g, x, tx);
        REQUIRE(dg.is_zero());
    }
}

TEST_CASE("filtration pages") {
    SplitMix rng(333);
    FlatSetup fs;
    int a = add_gauge_object(fs.inst, 1, rng);
    int b = add_gauge_object(fs.inst, 2, rng);

    // zero data: first page equals the zeroth page dimensionwise
    {
        TwObject x, y;
        x.inst = y.inst = &fs.inst;
        x.spaces = {{0, a}, {1, b}};
        y.spaces = {{0, b}, {1, a}};
        SpectralPages pages = filtration_pages(x, y);
        for (auto& [pq, dim] : pages.e0) REQUIRE(pages.dim_e1(pq.first, pq.second) == dim);
    }

    // contractible source: identity two-term complex kills the first page
    {
        TwObject x, y;
        x.inst = y.inst = &fs.inst;
        x.spaces = {{0, a}, {1, a}};
        BigradedMorphism d(1);
        d.add_block(1, 0, fs.inst.identity(a));
        x.datum = d;
        y.spaces = {{0, b}};
        REQUIRE(tw_validate(x).empty());
        SpectralPages pages = filtration_pages(x, y);
        for (auto& [pq, dim] : pages.e1) REQUIRE(dim == 0);
        for (auto& [pq, dim] : pages.e2) REQUIRE(dim == 0);
    }

    // three-term complexes: row-by-row dimensions match an independently
    // assembled column complex
    {
        TwObject x, y;
        x.inst = y.inst = &fs.inst;
        int c = add_gauge_object(fs.inst, 1, rng);
        x.spaces = {{0, a}, {1, c}, {2, a}};
        y.spaces = {{0, c}, {1, a}};
        // a nabla-closed differential with square zero: take zero for x and a
        // nontrivial closed one on y if available (keeps the oracle honest
        // through nonzero d0 on the target side)
        BigradedMorphism d(1);
        std::size_t dim = fs.inst.hom_dim(c, a, 0);
        ExactMatrix nab(fs.inst.hom_dim(c, a, 1), dim);
        for (std::size_t j = 0; j < dim; ++j) {
            Morphism basis = fs.inst.basis_morphism(c, a, 0, j);
            Morphism img = fs.inst.nabla(basis);
            for (std::size_t i = 0; i < img.coeffs.size(); ++i) nab(i, j) = img.coeffs[i];
        }
        ExactMatrix ker = nullspace(nab);
        if (ker.cols()) {
            Morphism alpha = fs.inst.zero_morphism(c, a, 0);
            for (std::size_t i = 0; i < alpha.coeffs.size(); ++i) alpha.coeffs[i] = ker(i, 0);
            d.add_block(1, 0, alpha);
        }
        y.datum = d;
        REQUIRE(tw_validate(y).empty());
        SpectralPages pages = filtration_pages(x, y);

        // oracle: assemble each row complex by applying the degree-zero parts
        // through single-block compositions
        for (int q = 0; q <= fs.inst.max_degree(); ++q) {
            ExactComplex row;
            std::map<int, BlockSpace> spaces;
            for (int p = -3; p <= 3; ++p) {
                BlockSpace bs = block_space(x, y, p, q);
                spaces[p] = bs;
                if (bs.total) row.spaces.set_dim(p, bs.total);
            }
            for (int p = -3; p <= 2; ++p) {
                if (!row.spaces.dim(p)) continue;
                ExactMatrix mat(row.spaces.dim(p + 1), row.spaces.dim(p));
                std::size_t col = 0;
                for (std::size_t k = 0; k < spaces[p].positions.size(); ++k)
                    for (std::size_t i = 0; i < spaces[p].dims[k]; ++i, ++col) {
                        int pos = spaces[p].positions[k];
                        Morphism basis = fs.inst.zero_morphism(x.object_at(pos), y.object_at(pos + p), q);
                        basis.coeffs[i] = Scalar(1);
                        BigradedMorphism bm(p + q);
                        bm.add_block(p, pos, basis);
                        BigradedMorphism img =
                            tw_compose(fs.inst, y.datum.aux_component(0), bm) -
                            sign_pow(p + q) * tw_compose(fs.inst, bm, x.datum.aux_component(0));
                        auto v = flatten_component(img, spaces[p + 1], p + 1, q);
                        for (std::size_t r = 0; r < v.size(); ++r) mat(r, col) = v[r];
                    }
                row.differentials[p] = mat;
            }
            for (int p = -3; p <= 3; ++p) {
                std::size_t expect = row.spaces.dim(p) ? cohomology_dim(row, p) : 0;
                REQUIRE(pages.dim_e1(p, q) == expect);
            }
        }
    }
}
