#include "curvo/bar.hpp"
#include "curvo/cdg.hpp"
#include "curvo/simplicial.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <map>

using namespace curvo;

namespace {
FiniteSimplicialMonoid z2_nerve(int n = 3) { return nerve_monoid(CyclicProductGroup({2}), n); }
FiniteSimplicialMonoid z2_constant(int n = 3) {
    CyclicProductGroup g({2});
    return constant_monoid(g.table, g.unit, n);
}
}  // namespace

TEST_CASE("constant and nerve monoids validate") {
    CyclicProductGroup z4({4});
    REQUIRE(validate_simplicial_monoid(constant_monoid(z4.table, z4.unit, 3)).empty());
    REQUIRE(validate_simplicial_monoid(z2_nerve()).empty());
    REQUIRE(validate_simplicial_monoid(nerve_monoid(CyclicProductGroup({2, 2}), 2)).empty());
}

TEST_CASE("a corrupted face map is reported with its location") {
    FiniteSimplicialMonoid s = z2_nerve(2);
    s.face[2][1][3] = s.face[2][1][3] == 0 ? 1 : 0;
    auto report = validate_simplicial_monoid(s);
    REQUIRE(!report.empty());
    bool found = false;
    for (auto& v : report)
        if (v.level == 2 && !v.element.empty()) found = true;
    REQUIRE(found);
}

TEST_CASE("shuffles and their signs at p = q = 1") {
    auto sh = shuffles(1, 1);
    REQUIRE(sh.size() == 2);
    int plus = 0, minus = 0;
    for (auto& s : sh) (s.sign == 1 ? plus : minus)++;
    REQUIRE(plus == 1);
    REQUIRE(minus == 1);
}

TEST_CASE("degenerate EZ with p = 0 has a single positive term") {
    FiniteSimplicialMonoid s = z2_nerve();
    int g = 1;  // the nondegenerate 1-simplex (1)
    auto terms = ez_shuffle(s, 0, 0, 1, g);
    REQUIRE(terms.size() == 1);
    REQUIRE(terms[0].sign == 1);
}

TEST_CASE("chain-level Leibniz rule for the shuffle product") {
    FiniteSimplicialMonoid s = nerve_monoid(CyclicProductGroup({2}), 4);
    BarCocycle triv = BarCocycle::trivial(s);
    auto normalize_add = [&](std::map<ChainEntry, Scalar>& acc, const ChainEntry& e, Scalar c) {
        if (entry_vanishes(s, e) || c.is_zero()) return;
        acc[e] += c;
        if (acc[e].is_zero()) acc.erase(e);
    };
    auto all_ones = [&](int level) {
        for (std::size_t e = 0; e < s.size(level); ++e)
            if (!s.is_degenerate(level, static_cast<int>(e))) return static_cast<int>(e);
        return -1;
    };
    for (int p = 1; p <= 2; ++p)
        for (int q = 1; q + p <= 4; ++q) {
            ChainEntry x{p, all_ones(p)}, y{q, all_ones(q)};
            std::map<ChainEntry, Scalar> lhs, rhs;
            for (auto& [cxy, exy] : chain_product(s, triv, x, y))
                for (auto& [cd, ed] : chain_differential(s, triv, exy)) normalize_add(lhs, ed, cxy * cd);
            for (auto& [cd, ed] : chain_differential(s, triv, x))
                for (auto& [cp, ep] : chain_product(s, triv, ed, y)) normalize_add(rhs, ep, cd * cp);
            for (auto& [cd, ed] : chain_differential(s, triv, y))
                for (auto& [cp, ep] : chain_product(s, triv, x, ed))
                    normalize_add(rhs, ep, sign_pow(p) * cd * cp);
            REQUIRE(lhs == rhs);
        }
}

TEST_CASE("bar differential basics") {
    FiniteSimplicialMonoid s = z2_constant();
    BarCocycle triv = BarCocycle::trivial(s);
    BarWord g{{0, 1}};
    REQUIRE(bar_differential(s, triv, g).is_zero());
    // in Z/2 the product 1*1 contracts to the unit word, which survives in
    // the pre-bar and dies in the quotient (where morphisms evaluate)
    BarTensor d2 = bar_differential(s, triv, BarWord{{0, 1}, {0, 1}});
    REQUIRE(d2.terms().size() == 1);
    REQUIRE(d2.terms().begin()->first == BarWord{{0, s.unit_of(0)}});
    REQUIRE(d2.terms().begin()->second == Scalar(1));
    // in Z/4 the pair (1 (x) 1) contracts to (2) with sign +1
    CyclicProductGroup z4({4});
    FiniteSimplicialMonoid s4 = constant_monoid(z4.table, z4.unit, 3);
    BarCocycle triv4 = BarCocycle::trivial(s4);
    BarTensor d4 = bar_differential(s4, triv4, BarWord{{0, 1}, {0, 1}});
    REQUIRE(d4.terms().size() == 1);
    REQUIRE(d4.terms().begin()->first == BarWord{{0, 2}});
    REQUIRE(d4.terms().begin()->second == Scalar(1));
}

TEST_CASE("bar differential squares to zero") {
    SplitMix rng(42);
    std::vector<FiniteSimplicialMonoid> monoids;
    monoids.push_back(constant_monoid(CyclicProductGroup({2, 2}).table, 0, 3));
    monoids.push_back(z2_nerve());
    for (auto& s : monoids) {
        std::vector<BarCocycle> cocycles;
        cocycles.push_back(BarCocycle::trivial(s));
        {
            std::map<int, Scalar> c;
            for (std::size_t x = 0; x < s.size(0); ++x)
                if (static_cast<int>(x) != s.unit_of(0)) c[static_cast<int>(x)] = rng.rational(2, 2);
            for (auto& [k, v] : c)
                if (v.is_zero()) v = Scalar(1);
            cocycles.push_back(BarCocycle::coboundary(s, c));
        }
        for (auto& h : cocycles) {
            REQUIRE(h.is_closed());
            int checked = 0;
            for (int deg = 1; deg <= 7; ++deg)
                for (const BarWord& w : bar_word_basis(s, deg, s.truncation)) {
                    if (w.size() > 4) continue;
                    REQUIRE(bar_differential(s, h, bar_differential(s, h, w)).is_zero());
                    ++checked;
                }
            REQUIRE(checked >= 7);  // 120 on the constant monoid, 7 on the nerve
        }
    }
}

TEST_CASE("the sign cocycle on the constant Z/2 monoid is closed") {
    FiniteSimplicialMonoid s = z2_constant();
    BarCocycle h = BarCocycle::from_pair_table(
        s, [](int a, int b) { return (a == 1 && b == 1) ? Scalar(-1) : Scalar(1); });
    REQUIRE(h.is_closed());
    for (int deg = 2; deg <= 4; ++deg)
        for (const BarWord& w : bar_word_basis(s, deg, s.truncation))
            REQUIRE(bar_differential(s, h, bar_differential(s, h, w)).is_zero());
}

TEST_CASE("twisted monoid validates, trivially and with curvature") {
    FiniteSimplicialMonoid s = z2_constant();
    BarCocycle triv = BarCocycle::trivial(s);
    auto t0 = twist_monoid(s, triv);
    REQUIRE(validate_twisted_monoid(t0).empty());

    BarCocycle h = BarCocycle::from_pair_table(
        s, [](int a, int b) { return (a == 1 && b == 1) ? Scalar(-1) : Scalar(1); });
    auto t1 = twist_monoid(s, h);
    REQUIRE(validate_twisted_monoid(t1).empty());

    // nerve of Z/2 with a coboundary element: the twisted last face shows up
    FiniteSimplicialMonoid nv = z2_nerve();
    std::map<int, Scalar> c{{1, Scalar(3, 2)}};
    BarCocycle hb = BarCocycle::coboundary(nv, c);
    REQUIRE(hb.is_closed());
    auto t2 = twist_monoid(nv, hb);
    REQUIRE(validate_twisted_monoid(t2).empty());

    BarCocycle bad = BarCocycle::trivial(nv);
    bad.set_edge(1, Scalar(2));
    REQUIRE_THROWS_AS(twist_monoid(nv, bad), NotClosedCocycleError);
}

TEST_CASE("twists relate cohomologous curvature elements") {
    SplitMix rng(7);
    FiniteSimplicialMonoid c22 = constant_monoid(CyclicProductGroup({2, 2}).table, 0, 3);
    std::map<int, Scalar> cvals;
    for (int x = 1; x < 4; ++x) cvals[x] = rng.rational(2, 2);
    for (auto& [k, v] : cvals)
        if (v.is_zero()) v = Scalar(2);
    BarTwist tw(&c22, cvals);
    BarCocycle h0 = BarCocycle::trivial(c22);
    BarCocycle h1 = BarCocycle::coboundary(c22, cvals);
    REQUIRE(apply_twist(c22, tw, h0, h1).ok());

    BarTwist id(&c22, {});
    REQUIRE(apply_twist(c22, id, h0, h0).ok());

    // round trip: a twist followed by its inverse is the identity map
    for (int lvl = 0; lvl <= 3; ++lvl)
        for (std::size_t e = 0; e < c22.size(lvl); ++e) {
            ScaledElem x{Scalar(1), static_cast<int>(e)};
            auto once = apply_twist_map(c22, tw, lvl, x);
            auto back = apply_twist_map(c22, tw.inverse(), lvl, once);
            REQUIRE(back.coeff == Scalar(1));
            REQUIRE(back.id == x.id);
        }

    // composite of twists is the pointwise product
    std::map<int, Scalar> c2vals{{1, Scalar(5)}, {2, Scalar(1, 3)}, {3, Scalar(-2)}};
    BarTwist tw2(&c22, c2vals);
    auto composed = tw.composed_with(tw2);
    for (int x = 0; x < 4; ++x) REQUIRE(composed(x) == tw(x) * tw2(x));

    REQUIRE_THROWS_AS(apply_twist(c22, tw, h0, h0), NotATwistError);
}
