#include "curvo/loc.hpp"
#include "curvo/projective.hpp"
#include "curvo/rep.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace curvo;

namespace {

// violation counts of the cdg axioms on randomized morphisms
struct SuiteResult {
    int leibniz_fail = 0;
    int nabla_sq_fail = 0;
    int curvature_closed_fail = 0;
    int assoc_fail = 0;
    int unital_fail = 0;
    int samples = 0;
};

SuiteResult run_cdg_suite(const CdgInstance& inst, const std::vector<int>& objects, int samples,
                          SplitMix& rng) {
    SuiteResult res;
    auto pick_obj = [&]() { return objects[rng.range(0, static_cast<long>(objects.size()) - 1)]; };
    for (int k = 0; k < samples; ++k) {
        int a = pick_obj(), b = pick_obj(), c = pick_obj(), d = pick_obj();
        int maxd = inst.max_degree();
        int df = static_cast<int>(rng.range(0, maxd));
        int dg = static_cast<int>(rng.range(0, maxd));
        int dh = static_cast<int>(rng.range(0, maxd));
        Morphism f = random_morphism(inst, a, b, df, rng);
        Morphism g = random_morphism(inst, b, c, dg, rng);
        Morphism h = random_morphism(inst, c, d, dh, rng);

        // graded Leibniz (valid whenever the composite degree stays in window)
        if (dg + df + 1 <= maxd) {
            Morphism lhs = inst.nabla(inst.compose(g, f));
            Morphism rhs = inst.compose(inst.nabla(g), f) + sign_pow(dg) * inst.compose(g, inst.nabla(f));
            if (!(lhs - rhs).is_zero()) res.leibniz_fail++;
        }
        // nabla^2 = R o - minus - o R
        if (df + 2 <= maxd) {
            Morphism lhs = inst.nabla(inst.nabla(f));
            Morphism rhs = inst.compose(inst.curvature(b), f) - inst.compose(f, inst.curvature(a));
            if (!(lhs - rhs).is_zero()) res.nabla_sq_fail++;
        }
        // curvature is closed
        if (2 + 1 <= maxd && !inst.nabla(inst.curvature(a)).is_zero()) res.curvature_closed_fail++;
        // associativity and unitality
        if (df + dg + dh <= maxd) {
            Morphism l = inst.compose(inst.compose(h, g), f);
            Morphism r = inst.compose(h, inst.compose(g, f));
            if (!(l - r).is_zero()) res.assoc_fail++;
        }
        if (!(inst.compose(f, inst.identity(a)) - f).is_zero()) res.unital_fail++;
        if (!(inst.compose(inst.identity(b), f) - f).is_zero()) res.unital_fail++;
        res.samples++;
    }
    return res;
}

}  // namespace

TEST_CASE("Loc instance over the standard 2-simplex with a coboundary cocycle") {
    SplitMix rng(2024);
    FiniteSimplicialSet s = standard_simplex_set(2, 3);
    std::map<int, Scalar> c;
    for (int e : s.nondegenerate_elems(1)) c[e] = rng.rational(2, 2);
    for (auto& [k, v] : c)
        if (v.is_zero()) v = Scalar(1, 2);
    SimplicialCocycle h = SimplicialCocycle::coboundary(s, c);
    REQUIRE(h.is_closed());
    LocInstance inst(s, h);
    int e1 = add_random_object(inst, 2, rng);
    int e2 = add_random_object(inst, 1, rng);
    auto res = run_cdg_suite(inst, {e1, e2}, 120, rng);
    REQUIRE(res.samples == 120);
    REQUIRE(res.leibniz_fail == 0);
    REQUIRE(res.nabla_sq_fail == 0);
    REQUIRE(res.curvature_closed_fail == 0);
    REQUIRE(res.assoc_fail == 0);
    REQUIRE(res.unital_fail == 0);
}

TEST_CASE("Loc instance over the Z/2 nerve with the sign cocycle") {
    SplitMix rng(99);
    FiniteSimplicialMonoid s = nerve_monoid(CyclicProductGroup({2}), 3);
    std::map<int, Scalar> vals;
    for (int e : s.nondegenerate_elems(2)) vals[e] = Scalar(-1);  // the 2-simplex (1,1)
    SimplicialCocycle h(&s, vals);
    REQUIRE(h.is_closed());
    LocInstance inst(s, h);
    int e1 = add_random_object(inst, 2, rng);
    int e2 = add_scalar_object(inst, 2, {{1, Scalar(2, 3)}});
    auto res = run_cdg_suite(inst, {e1, e2}, 120, rng);
    REQUIRE(res.leibniz_fail == 0);
    REQUIRE(res.nabla_sq_fail == 0);
    REQUIRE(res.curvature_closed_fail == 0);
    REQUIRE(res.assoc_fail == 0);
    Morphism r = inst.curvature(e2);
    REQUIRE(!r.is_zero());
    // flat transports with trivial cocycle give zero curvature
    FiniteSimplicialSet s2 = standard_simplex_set(2, 3);
    LocInstance flat(s2, SimplicialCocycle::trivial(s2));
    int f1 = add_scalar_object(flat, 2, {});
    REQUIRE(flat.curvature(f1).is_zero());
}

TEST_CASE("Rep instance over constant Z/4 and the sign-twisted Z/2 x Z/2") {
    SplitMix rng(5150);
    CyclicProductGroup z4({4});
    FiniteSimplicialMonoid s = constant_monoid(z4.table, z4.unit, 3);
    RepInstance inst(s, BarCocycle::trivial(s), 3);
    int e1 = add_random_rep_object(inst, 2, rng);
    int e2 = add_random_rep_object(inst, 1, rng);
    auto res = run_cdg_suite(inst, {e1, e2}, 120, rng);
    REQUIRE(res.leibniz_fail == 0);
    REQUIRE(res.nabla_sq_fail == 0);
    REQUIRE(res.curvature_closed_fail == 0);
    REQUIRE(res.assoc_fail == 0);
    REQUIRE(res.unital_fail == 0);

    FiniteSimplicialMonoid s22 = constant_monoid(CyclicProductGroup({2, 2}).table, 0, 3);
    BarCocycle sign_cocycle = BarCocycle::from_pair_table(s22, [](int a, int b) {
        int b1 = a >> 1, a2 = b & 1;
        return (a2 * b1) % 2 ? Scalar(-1) : Scalar(1);
    });
    REQUIRE(sign_cocycle.is_closed());
    RepInstance inst2(s22, sign_cocycle, 3);
    int g1 = add_random_rep_object(inst2, 2, rng);
    auto res2 = run_cdg_suite(inst2, {g1}, 100, rng);
    REQUIRE(res2.leibniz_fail == 0);
    REQUIRE(res2.nabla_sq_fail == 0);
    REQUIRE(res2.curvature_closed_fail == 0);
}

TEST_CASE("Rep instance over the Z/2 nerve with a coboundary cocycle") {
    SplitMix rng(31337);
    FiniteSimplicialMonoid s = nerve_monoid(CyclicProductGroup({2}), 3);
    BarCocycle h = BarCocycle::coboundary(s, {});
    REQUIRE(h.is_closed());
    RepInstance inst(s, h, 4);
    int e1 = add_random_rep_object(inst, 2, rng);
    auto res = run_cdg_suite(inst, {e1}, 100, rng);
    REQUIRE(res.leibniz_fail == 0);
    REQUIRE(res.nabla_sq_fail == 0);
    REQUIRE(res.curvature_closed_fail == 0);
    REQUIRE(res.assoc_fail == 0);
}

TEST_CASE("Rep curvature matches the product defect") {
    CyclicProductGroup z8({8});
    FiniteSimplicialMonoid s = constant_monoid(z8.table, z8.unit, 2);
    RepInstance inst(s, BarCocycle::trivial(s), 3);
    RepObject obj;
    obj.dim = 2;
    ExactMatrix a(2, 2);
    a(0, 0) = Scalar(1);
    a(0, 1) = Scalar(1);
    a(1, 1) = Scalar(1);
    obj.mu[1] = a;
    int e = inst.add_object(obj);
    Morphism r = inst.curvature(e);
    ExactMatrix val = inst.value(r, BarWord{{0, 1}, {0, 1}});
    REQUIRE(val == ExactMatrix::identity(2) - a * a);
    RepObject triv;
    triv.dim = 2;
    int t = inst.add_object(triv);
    REQUIRE(inst.curvature(t).is_zero());
}

TEST_CASE("pi0 pullback and the component quotient") {
    FiniteSimplicialMonoid s = constant_monoid(CyclicProductGroup({2}).table, 0, 3);
    auto pb = pi0_pullback(s, [](int a, int b) {
        return (a == 1 && b == 1) ? Scalar(-1) : Scalar(1);
    });
    REQUIRE(pb.pi0.count == 2);
    RepObject down;
    down.dim = 2;
    ExactMatrix m(2, 2);
    m(0, 1) = Scalar(1);
    m(1, 0) = Scalar(1);
    down.mu[1] = m;
    RepObject up = pull_back_object(pb, s, down);
    REQUIRE(up.mu.at(1) == m);

    FiniteSimplicialMonoid nv = nerve_monoid(CyclicProductGroup({2}), 3);
    auto pb2 = pi0_pullback(nv, [](int, int) { return Scalar(1); });
    REQUIRE(pb2.pi0.count == 1);

    RepInstance inst(s, pb.h_upstairs, 3);
    int e = inst.add_object(up);
    RepObject back = push_to_components(pb, s, inst, e);
    REQUIRE(back.dim == 2);
    REQUIRE(back.mu.at(pb.pi0.component[1]) == m);
}

TEST_CASE("projective representation cocycle of the anticommuting pair") {
    ExactMatrix a(2, 2), b(2, 2);
    a(0, 0) = Scalar(1);
    a(1, 1) = Scalar(-1);
    b(0, 1) = Scalar(1);
    b(1, 0) = Scalar(1);

    auto pc = projective_rep_cocycle({2, 2}, {a, b});
    REQUIRE(pc.cocycle_condition_ok);
    for (std::size_t x = 0; x < 4; ++x)
        for (std::size_t y = 0; y < 4; ++y) {
            auto ex = pc.group.exps(x), ey = pc.group.exps(y);
            Scalar expected = (ey[0] * ex[1]) % 2 ? Scalar(-1) : Scalar(1);
            REQUIRE(pc.df[x][y] == expected);
        }
    REQUIRE(!trivialized_by_sign_cochain(pc));

    ExactMatrix c(2, 2);
    c(0, 1) = Scalar(-1);
    c(1, 0) = Scalar(1);
    auto lin = projective_rep_cocycle({4}, {c});
    for (auto& row : lin.df)
        for (auto& v : row) REQUIRE(v == Scalar(1));
    REQUIRE(trivialized_by_sign_cochain(lin));

    ExactMatrix bad(2, 2);
    bad(0, 0) = Scalar(1);
    bad(0, 1) = Scalar(1);
    bad(1, 1) = Scalar(1);
    REQUIRE_THROWS_AS(projective_rep_cocycle({2}, {bad}), NotProjectiveError);
}
