#include "curvo/ainfty.hpp"
#include "curvo/generators.hpp"
#include "curvo/loc.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace curvo;

namespace {

std::vector<Morphism> random_tuple(const CdgInstance& inst, int obj, int arity, SplitMix& rng) {
    std::vector<Morphism> fs;
    for (int i = 0; i < arity; ++i)
        fs.push_back(random_morphism(inst, obj, obj, static_cast<int>(rng.range(0, inst.max_degree())), rng));
    return fs;
}

// all basis tuples of the given arity satisfy residual = 0
bool functor_valid(const AInftyFunctor& f, int obj, int max_check_arity) {
    const CdgInstance& c = *f.source;
    for (int n = 1; n <= max_check_arity; ++n) {
        std::vector<int> degs(n, 0);
        for (;;) {
            std::vector<std::size_t> dims;
            for (int d : degs) dims.push_back(c.hom_dim(obj, obj, d));
            bool any_zero = false;
            for (auto d : dims) any_zero |= (d == 0);
            if (!any_zero) {
                std::vector<std::size_t> idx(n, 0);
                for (;;) {
                    std::vector<Morphism> tuple;
                    for (int j = 0; j < n; ++j)
                        tuple.push_back(c.basis_morphism(obj, obj, degs[j], idx[j]));
                    if (!ainfty_residual(f, tuple).is_zero()) return false;
                    int j = n - 1;
                    while (j >= 0 && ++idx[j] == dims[j]) idx[j--] = 0;
                    if (j < 0) break;
                }
            }
            int j = n - 1;
            while (j >= 0 && ++degs[j] > c.max_degree()) degs[j--] = 0;
            if (j < 0) break;
        }
    }
    return true;
}

TwObject curved_two_term(LocInstance& inst, int obj) {
    TwObject x;
    x.inst = &inst;
    x.spaces = {{0, obj}, {1, obj}};
    BigradedMorphism datum(1);
    std::vector<ExactMatrix> blocks;
    for (std::size_t fb = 0; fb < inst.fiber_count(); ++fb)
        blocks.push_back(ExactMatrix::identity(inst.fiber_dim(obj, fb)));
    datum.add_block(1, 0, inst.deg0_from_blocks(obj, obj, blocks));
    x.datum = datum;
    auto full = complete_connection_datum(x);
    REQUIRE(full);
    return *full;
}

BigradedMorphism random_bigraded(const CdgInstance& inst, const TwObject& src, const TwObject& dst,
                                 int deg, SplitMix& rng) {
    BigradedMorphism m(deg);
    for (auto& [p, so] : src.spaces)
        for (int internal = -2; internal <= 2; ++internal) {
            int aux = deg - internal;
            if (aux < 0 || aux > inst.max_degree()) continue;
            int to = dst.object_at(p + internal);
            if (inst.hom_dim(so, to, aux) == 0) continue;
            m.add_block(internal, p, random_morphism(inst, so, to, aux, rng));
        }
    return m;
}

}  // namespace

TEST_CASE("identity and strict functors have zero residual") {
    SplitMix rng(21);
    // over the curved wedge instance and over a curved matrix-fiber instance
    CircleWedgeInstance cw;
    AInftyFunctor id = identity_functor(cw.inst, 3);
    for (int arity = 1; arity <= 3; ++arity)
        for (int k = 0; k < 20; ++k) {
            auto tuple = random_tuple(cw.inst, cw.object, arity, rng);
            REQUIRE(ainfty_residual(id, tuple).is_zero());
        }
    FiniteSimplicialMonoid s = nerve_monoid(CyclicProductGroup({2}), 3);
    std::map<int, Scalar> vals;
    for (int e : s.nondegenerate_elems(2)) vals[e] = Scalar(-1);
    SimplicialCocycle h(&s, vals);
    LocInstance nerve(s, h);
    int ne = add_scalar_object(nerve, 2, {{1, Scalar(2, 3)}});
    AInftyFunctor id2 = identity_functor(nerve, 3);
    for (int arity = 1; arity <= 3; ++arity)
        for (int k = 0; k < 10; ++k)
            REQUIRE(ainfty_residual(id2, random_tuple(nerve, ne, arity, rng)).is_zero());
}

TEST_CASE("generated proper functors satisfy the relations exactly") {
    SplitMix rng(1234);
    CircleWedgeInstance cw;
    auto gen = random_proper_functors(cw.inst, cw.object, 5, rng,
                                      circle_wedge_corner(cw.inst, cw.object), 3);
    INFO("kernel dimension: " << gen.kernel_dim);
    REQUIRE(gen.kernel_dim > 0);
    int with_higher = 0;
    for (auto& f : gen.functors) {
        if (!f.higher.empty()) ++with_higher;
        REQUIRE(functor_valid(f, cw.object, 4));
    }
    REQUIRE(with_higher >= 3);

    // perturbing outside the valid space breaks some relation: add a value
    // supported on the attaching loop to an arity-2 slot
    AInftyFunctor broken = gen.functors.front();
    REQUIRE(!broken.higher.empty());
    {
        TupleKey key;
        key.objs.assign(3, cw.object);
        key.slots = {{1, 0}, {1, 0}};
        Morphism bump = cw.inst.zero_morphism(cw.object, cw.object, 1);
        for (auto& c : bump.coeffs) c = Scalar(1);
        auto it = broken.higher.find(key);
        if (it == broken.higher.end())
            broken.higher[key] = bump;
        else
            it->second = it->second + bump;
    }
    REQUIRE(!functor_valid(broken, cw.object, 4));
}

TEST_CASE("induced functor on twisted complexes") {
    SplitMix rng(777);
    CircleWedgeInstance gs;
    auto& inst_alias = gs.inst;
    (void)inst_alias;
    auto gen = random_proper_functors(gs.inst, gs.object, 3, rng,
                                      circle_wedge_corner(gs.inst, gs.object), 3);

    // strict identity: the induced datum is the datum itself
    {
        AInftyFunctor id = identity_functor(gs.inst, 3);
        TwFunctor tf(id);
        TwObject x = curved_two_term(gs.inst, gs.object);
        TwObject fx = tf.map_object(x);
        REQUIRE((fx.datum - x.datum).is_zero());
        REQUIRE(tw_validate(fx).empty());
    }

    // zero datum: only the no-insertion terms survive, with their signs
    {
        AInftyFunctor f = gen.functors.front();
        TwFunctor tf(f);
        TwObject x;
        x.inst = &gs.inst;
        x.spaces = {{0, gs.object}, {1, gs.object}};
        TwObject fx = tf.map_object(x);
        REQUIRE(fx.datum.is_zero());
        // a single block passes through with no sign at arity 1
        BigradedMorphism m(2);
        Morphism raw = random_morphism(gs.inst, gs.object, gs.object, 1, rng);
        m.add_block(1, 0, raw);
        BigradedMorphism img = tf.apply({&x, &x}, {&m});
        BigradedMorphism expect(2);
        expect.add_block(1, 0, f.apply1(raw));
        REQUIRE((img - expect).is_zero());
    }

    // the image of a valid object is a valid object
    TwObject x = curved_two_term(gs.inst, gs.object);
    for (auto& f : gen.functors) {
        TwFunctor tf(f);
        TwObject fx = tf.map_object(x);
        REQUIRE(tw_validate(fx).empty());
    }

    // the dg-level relation of the induced functor holds with zero residual
    TwObject y = curved_two_term(gs.inst, gs.object);
    TwObject z = curved_two_term(gs.inst, gs.object);
    TwObject w = curved_two_term(gs.inst, gs.object);
    for (auto& f : gen.functors) {
        TwFunctor tf(f);
        TwObject fx = tf.map_object(x), fy = tf.map_object(y), fz = tf.map_object(z),
                 fw = tf.map_object(w);
        for (int k = 0; k < 6; ++k) {
            BigradedMorphism f1 = random_bigraded(gs.inst, y, x, static_cast<int>(rng.range(0, 2)), rng);
            REQUIRE(induced_relation_residual(tf, {&x, &y}, {&fx, &fy}, {&f1}).is_zero());
            BigradedMorphism f2 = random_bigraded(gs.inst, z, y, static_cast<int>(rng.range(0, 2)), rng);
            REQUIRE(induced_relation_residual(tf, {&x, &y, &z}, {&fx, &fy, &fz}, {&f1, &f2}).is_zero());
            BigradedMorphism f3 = random_bigraded(gs.inst, w, z, static_cast<int>(rng.range(0, 2)), rng);
            REQUIRE(induced_relation_residual(tf, {&x, &y, &z, &w}, {&fx, &fy, &fz, &fw},
                                              {&f1, &f2, &f3})
                        .is_zero());
        }
    }
}

TEST_CASE("natural transformations: identity, generation, composites") {
    SplitMix rng(3141);
    CircleWedgeInstance gs;
    AInftyFunctor id = identity_functor(gs.inst, 3);

    // the identity transformation of the identity functor
    {
        AInftyNat eta;
        eta.from = &id;
        eta.to = &id;
        eta.component[gs.object] = gs.inst.identity(gs.object);
        REQUIRE(nat_residual(eta, {}, gs.object).is_zero());
        for (int k = 0; k < 10; ++k) {
            auto tuple = random_tuple(gs.inst, gs.object, 1 + static_cast<int>(rng.range(0, 2)), rng);
            REQUIRE(nat_residual(eta, tuple).is_zero());
        }
    }

    auto gen = random_nats(id, id, gs.object, 4, rng, 2);
    INFO("nat kernel dimension: " << gen.kernel_dim);
    REQUIRE(gen.kernel_dim >= 1);
    int nontrivial = 0;
    for (auto& eta : gen.nats) {
        if (!eta.data.empty()) ++nontrivial;
        REQUIRE(nat_residual(eta, {}, gs.object).is_zero());
        for (int arity = 1; arity <= 3; ++arity)
            for (int k = 0; k < 15; ++k)
                REQUIRE(nat_residual(eta, random_tuple(gs.inst, gs.object, arity, rng)).is_zero());
    }
    REQUIRE(nontrivial >= 1);

    // composites of valid transformations are valid
    auto& eta = gen.nats[0];
    auto& zeta = gen.nats[1];
    AInftyNat zeta_eta = compose_nat(zeta, eta, {gs.object}, 2);
    REQUIRE(nat_residual(zeta_eta, {}, gs.object).is_zero());
    for (int arity = 1; arity <= 2; ++arity)
        for (int k = 0; k < 15; ++k)
            REQUIRE(nat_residual(zeta_eta, random_tuple(gs.inst, gs.object, arity, rng)).is_zero());

    // composition is associative on the stored data
    auto& xi = gen.nats[2];
    AInftyNat left = compose_nat(compose_nat(xi, zeta, {gs.object}, 2), eta, {gs.object}, 2);
    AInftyNat right = compose_nat(xi, compose_nat(zeta, eta, {gs.object}, 2), {gs.object}, 2);
    for (auto& [key, val] : left.data) {
        auto it = right.data.find(key);
        if (it == right.data.end())
            REQUIRE(val.is_zero());
        else
            REQUIRE((val - it->second).is_zero());
    }
    for (auto& [key, val] : right.data) REQUIRE((left.data.count(key) || val.is_zero()));

    // perturbing in a random direction eventually leaves the kernel
    bool found_invalid = false;
    for (int attempt = 0; attempt < 20 && !found_invalid; ++attempt) {
        AInftyNat broken = gen.nats[0];
        TupleKey key;
        key.objs.assign(2, gs.object);
        key.slots = {{1 + static_cast<int>(rng.range(0, 1)), static_cast<std::size_t>(rng.range(0, 1))}};
        int out_deg = key.slots[0].first - 1;
        if (gs.inst.hom_dim(gs.object, gs.object, out_deg) == 0) continue;
        Morphism bump = random_morphism(gs.inst, gs.object, gs.object, out_deg, rng);
        auto it = broken.data.find(key);
        if (it == broken.data.end())
            broken.data[key] = bump;
        else
            it->second = it->second + bump;
        bool all_zero = nat_residual(broken, {}, gs.object).is_zero();
        for (int k = 0; k < 30 && all_zero; ++k)
            all_zero =
                nat_residual(broken, random_tuple(gs.inst, gs.object, 1 + (k % 2), rng)).is_zero();
        if (!all_zero) found_invalid = true;
    }
    REQUIRE(found_invalid);
}

TEST_CASE("strictification over a flat point instance") {
    SplitMix rng(2718);
    FiniteSimplicialSet pt = standard_simplex_set(0, 3);
    LocInstance inst(pt, SimplicialCocycle::trivial(pt));

    auto make_obj = [&](std::size_t dim) {
        LocObject o;
        o.fiber_dims = {dim};
        return inst.add_object(std::move(o));
    };

    // zero datum: returned unchanged with the identity
    {
        int a = make_obj(2);
        TwObject x;
        x.inst = &inst;
        x.spaces = {{0, a}, {1, a}};
        auto res = strictify(inst, x);
        REQUIRE((res.map - tw_identity(x)).is_zero());
        REQUIRE(res.object.spaces == x.spaces);
    }

    // contractible two-term complex strictifies to the zero object
    {
        int a = make_obj(1);
        TwObject x;
        x.inst = &inst;
        x.spaces = {{0, a}, {1, a}};
        BigradedMorphism d(1);
        d.add_block(1, 0, inst.deg0_from_blocks(a, a, {ExactMatrix::identity(1)}));
        x.datum = d;
        auto res = strictify(inst, x);
        for (auto& [p, obj] : res.object.spaces) REQUIRE(inst.fiber_dim(obj, 0) == 0);
        REQUIRE(tw_validate(res.object).empty());
        auto w = is_homotopy_equivalence(res.map, res.object, x);
        REQUIRE(w.equivalent);
    }

    // rank-one differential on K^2 -> K^2: cohomology (1, 1)
    {
        int a = make_obj(2);
        TwObject x;
        x.inst = &inst;
        x.spaces = {{0, a}, {1, a}};
        ExactMatrix d0(2, 2);
        d0(0, 0) = Scalar(1);
        BigradedMorphism d(1);
        d.add_block(1, 0, inst.deg0_from_blocks(a, a, {d0}));
        x.datum = d;
        auto res = strictify(inst, x);
        REQUIRE(res.object.datum.aux_component(0).is_zero());
        REQUIRE(inst.fiber_dim(res.object.object_at(0), 0) == 1);
        REQUIRE(inst.fiber_dim(res.object.object_at(1), 0) == 1);
        REQUIRE(tw_differential(res.map, res.object, x).is_zero());
        auto w = is_homotopy_equivalence(res.map, res.object, x);
        REQUIRE(w.equivalent);
        // applying strictify twice returns the input unchanged
        auto twice = strictify(inst, res.object);
        REQUIRE((twice.map - tw_identity(res.object)).is_zero());
        REQUIRE(twice.object.spaces == res.object.spaces);
    }
    (void)rng;
}

TEST_CASE("strictification of a curved three-term twisted complex") {
    SplitMix rng(161803);
    FiniteSimplicialMonoid s = nerve_monoid(CyclicProductGroup({2}), 3);
    std::map<int, Scalar> vals;
    for (int e2 : s.nondegenerate_elems(2)) vals[e2] = Scalar(-1);
    SimplicialCocycle h(&s, vals);
    LocInstance inst(s, h);
    int e = add_scalar_object(inst, 2, {{1, Scalar(2, 3)}});

    // three-term object with a rank-one closed differential and the solver's
    // curvature correction
    TwObject x;
    x.inst = &inst;
    x.spaces = {{0, e}, {1, e}, {2, e}};
    ExactMatrix d0(2, 2);
    d0(0, 0) = Scalar(1);  // scalar-transport instance: constant blocks are closed
    BigradedMorphism seed(1);
    seed.add_block(1, 0, inst.deg0_from_blocks(e, e, {d0}));
    // position 1 -> 2: complementary rank-one map with d^2 = 0
    ExactMatrix d1(2, 2);
    d1(1, 1) = Scalar(1);
    seed.add_block(1, 1, inst.deg0_from_blocks(e, e, {d1}));
    x.datum = seed;
    auto full = complete_connection_datum(x);
    REQUIRE(full);
    x = *full;
    REQUIRE(tw_validate(x).empty());

    auto res = strictify(inst, x);
    REQUIRE(res.object.datum.aux_component(0).is_zero());
    REQUIRE(tw_validate(res.object).empty());
    REQUIRE(tw_differential(res.map, res.object, x).is_zero());
    auto w = is_homotopy_equivalence(res.map, res.object, x);
    REQUIRE(w.equivalent);

    // zero map between non-acyclic complexes is closed but not an equivalence
    BigradedMorphism zero(0);
    auto wz = is_homotopy_equivalence(zero, res.object, res.object);
    bool nonzero_cohomology = false;
    for (auto& [p, obj] : res.object.spaces)
        if (inst.fiber_dim(obj, 0) > 0) nonzero_cohomology = true;
    if (nonzero_cohomology) REQUIRE(!wz.equivalent);
    (void)rng;
}

TEST_CASE("homotopy transfer along the identity and along permuted bases") {
    SplitMix rng(55);
    FiniteSimplicialMonoid s = nerve_monoid(CyclicProductGroup({2}), 3);
    std::map<int, Scalar> vals;
    for (int e : s.nondegenerate_elems(2)) vals[e] = Scalar(-1);
    SimplicialCocycle h(&s, vals);
    LocInstance inst(s, h);
    int first_obj = add_scalar_object(inst, 2, {{1, Scalar(2, 3)}});
    TwObject x = curved_two_term(inst, first_obj);

    // f0 = id, F0 = the object's own degree-zero data
    {
        TransferInput in;
        for (auto& [p, obj] : x.spaces) in.f_spaces[p] = obj;
        in.f0_differential = x.datum.aux_component(0);
        for (auto& [p, obj] : x.spaces) {
            std::vector<ExactMatrix> id_blocks;
            for (std::size_t fb = 0; fb < inst.fiber_count(); ++fb)
                id_blocks.push_back(ExactMatrix::identity(inst.fiber_dim(obj, fb)));
            in.f0_map.add_block(0, p, inst.deg0_from_blocks(obj, obj, id_blocks));
            in.g0_map.add_block(0, p, inst.deg0_from_blocks(obj, obj, id_blocks));
        }
        auto out = homotopy_transfer(inst, x, in);
        REQUIRE(tw_validate(out.object).empty());
        REQUIRE(tw_differential(out.map, out.object, x).is_zero());
        auto w = is_homotopy_equivalence(out.map, out.object, x);
        REQUIRE(w.equivalent);
    }

    // transfer onto a conjugated copy: outputs stay valid and equivalent
    {
        ExactMatrix perm(2, 2);
        perm(0, 1) = Scalar(1);
        perm(1, 0) = Scalar(1);
        int e2 = add_scalar_object(inst, 2, {{1, Scalar(2, 3)}});
        TransferInput in;
        in.f_spaces = {{0, e2}, {1, e2}};
        BigradedMorphism pd(1);
        // conjugated differential: P * id * P^{-1} is the identity again, so
        // permute one side only through f0 = P
        std::vector<ExactMatrix> idb = {ExactMatrix::identity(2)};
        pd.add_block(1, 0, inst.deg0_from_blocks(e2, e2, idb));
        in.f0_differential = pd;
        in.f0_map.add_block(0, 0, inst.deg0_from_blocks(e2, x.object_at(0), {perm}));
        in.f0_map.add_block(0, 1, inst.deg0_from_blocks(e2, x.object_at(1), {perm}));
        in.g0_map.add_block(0, 0, inst.deg0_from_blocks(x.object_at(0), e2, {perm}));
        in.g0_map.add_block(0, 1, inst.deg0_from_blocks(x.object_at(1), e2, {perm}));
        auto out = homotopy_transfer(inst, x, in);
        REQUIRE(tw_validate(out.object).empty());
        REQUIRE(tw_differential(out.map, out.object, x).is_zero());
        REQUIRE(is_homotopy_equivalence(out.map, out.object, x).equivalent);
    }
}
