#include "doctest.h"

#include "mvtgg/errors.hpp"
#include "mvtgg/matching.hpp"
#include "mvtgg/morphism.hpp"
#include "mvtgg/rule.hpp"
#include "mvtgg/type_graph.hpp"
#include "mvtgg/typed_graph.hpp"

#include "test_support.hpp"

#include <memory>

using namespace mvtgg;
using namespace mvtgg::testsupport;

namespace {

std::shared_ptr<const TypeGraph> ab_types()
{
    auto tg = std::make_shared<TypeGraph>();
    NodeTypeId a = tg->add_node_type("A");
    NodeTypeId b = tg->add_node_type("B");
    tg->add_edge_type("e", a, b);
    tg->add_edge_type("loop", a, a);
    return tg;
}

} // namespace

TEST_CASE("type graph registration and lookup")
{
    TypeGraph tg;
    NodeTypeId a = tg.add_node_type("A");
    NodeTypeId b = tg.add_node_type("B");
    EdgeTypeId e = tg.add_edge_type("e", a, b);
    CHECK(tg.node_type("A") == a);
    CHECK(tg.edge_type("e") == e);
    CHECK(tg.edge_src(e) == a);
    CHECK(tg.edge_tgt(e) == b);
    CHECK(tg.node_type_name(b) == "B");
    CHECK(!tg.find_node_type("C").has_value());
    CHECK_THROWS_AS(tg.node_type("C"), InputError);
    CHECK_THROWS_AS(tg.add_node_type("A"), InputError);
    CHECK_THROWS_AS(tg.add_edge_type("e", a, b), InputError);
    CHECK_THROWS_AS(tg.add_edge_type("f", a, 99), InputError);

    TypeGraph same;
    same.add_node_type("A");
    same.add_node_type("B");
    same.add_edge_type("e", 0, 1);
    CHECK(tg == same);
    TypeGraph different;
    different.add_node_type("A");
    different.add_node_type("B");
    different.add_edge_type("e", 1, 0);
    CHECK(!(tg == different));
}

TEST_CASE("typed graph element lifecycle")
{
    auto tg = ab_types();
    TypedGraph g(tg);
    ElementId a1 = g.add_node("A");
    ElementId b1 = g.add_node("B");
    ElementId e1 = g.add_edge("e", a1, b1);
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 1);
    CHECK(g.is_node(a1));
    CHECK(g.is_edge(e1));
    CHECK(g.edge_src(e1) == a1);
    CHECK(g.edge_tgt(e1) == b1);
    CHECK(g.out_degree(a1) == 1);
    CHECK(g.in_degree(b1) == 1);

    SUBCASE("edges are checked against the metamodel")
    {
        CHECK_THROWS_AS(g.add_edge("e", b1, a1), InputError);
        CHECK_THROWS_AS(g.add_edge("loop", a1, b1), InputError);
        CHECK_THROWS_AS(g.add_edge("e", a1, e1), InputError);
    }

    SUBCASE("nodes cannot be removed while edges are attached")
    {
        CHECK_THROWS_AS(g.remove_element(b1), InputError);
        g.remove_element(e1);
        g.remove_element(b1);
        CHECK(g.node_count() == 1);
        CHECK(!g.contains(b1));
        // Retired ids are never handed out again.
        ElementId b2 = g.add_node("B");
        CHECK(b2 > e1);
    }

    SUBCASE("marks follow their element")
    {
        g.set_mark(a1, true);
        g.set_mark(e1, true);
        CHECK(g.marked(a1));
        CHECK(g.marked_count() == 2);
        CHECK(g.marked_elements() == std::vector<ElementId>{a1, e1});
        g.set_mark(a1, false);
        CHECK(!g.marked(a1));
        g.remove_element(e1);
        CHECK(g.marked_count() == 0);
        CHECK_THROWS_AS(g.set_mark(e1, true), InputError);
    }

    SUBCASE("explicit ids must be fresh and nonzero")
    {
        CHECK_THROWS_AS(g.add_node_with_id(a1, 0), InputError);
        CHECK_THROWS_AS(g.add_node_with_id(0, 0), InputError);
        g.add_node_with_id(100, g.types().node_type("A"));
        CHECK(g.add_node("A") == 101);
    }
}

TEST_CASE("typed graph id-wise equality")
{
    auto tg = ab_types();
    TypedGraph g(tg), h(tg);
    ElementId a = g.add_node("A");
    ElementId b = g.add_node("B");
    ElementId e = g.add_edge("e", a, b);
    // Same ids via explicit insertion, different order.
    h.add_node_with_id(b, tg->node_type("B"));
    h.add_node_with_id(a, tg->node_type("A"));
    h.add_edge_with_id(e, tg->edge_type("e"), a, b);
    CHECK(g.equals(h));
    CHECK(h.equals(g));
    h.set_mark(a, true);
    CHECK(!g.equals(h));
    g.set_mark(a, true);
    CHECK(g.equals(h));
}

TEST_CASE("restriction to a subset of elements")
{
    auto tg = ab_types();
    TypedGraph g(tg);
    ElementId a = g.add_node("A");
    ElementId b = g.add_node("B");
    ElementId e = g.add_edge("e", a, b);
    g.set_mark(a, true);

    TypedGraph nodes_only = g.restricted_to({a, b});
    CHECK(nodes_only.node_count() == 2);
    CHECK(nodes_only.edge_count() == 0);
    CHECK(nodes_only.marked(a));

    TypedGraph all = g.restricted_to({a, b, e});
    CHECK(all.equals(g));

    CHECK_THROWS_AS(g.restricted_to({a, e}), InputError);
    CHECK_THROWS_AS(g.restricted_to({a, 999}), InputError);
}

TEST_CASE("morphism validation")
{
    auto tg = ab_types();
    TypedGraph p(tg), h(tg);
    ElementId pa = p.add_node("A");
    ElementId pb = p.add_node("B");
    ElementId pe = p.add_edge("e", pa, pb);
    ElementId ha = h.add_node("A");
    ElementId hb1 = h.add_node("B");
    ElementId hb2 = h.add_node("B");
    ElementId he1 = h.add_edge("e", ha, hb1);
    h.add_edge("e", ha, hb2);

    GraphMorphism good;
    good.node_map = {{pa, ha}, {pb, hb1}};
    good.edge_map = {{pe, he1}};
    CHECK(is_monomorphism(good, p, h));

    GraphMorphism not_commuting = good;
    not_commuting.node_map[pb] = hb2; // edge image still ends at hb1
    CHECK(morphism_violation(not_commuting, p, h, false).has_value());

    GraphMorphism partial = good;
    partial.edge_map.clear();
    CHECK(morphism_violation(partial, p, h, false).has_value());

    GraphMorphism wrong_type = good;
    wrong_type.node_map[pb] = ha;
    CHECK(morphism_violation(wrong_type, p, h, false).has_value());

    CHECK(compose(good, identity_morphism(p)).sorted_pairs() == good.sorted_pairs());
}

TEST_CASE("matcher agrees with the brute-force enumerator")
{
    std::mt19937_64 rng(20260822u);
    for (int iter = 0; iter < 200; ++iter) {
        auto tg = random_type_graph(rng, 1 + iter % 3, 1 + (iter / 2) % 4);
        TypedGraph host = random_typed_graph(rng, tg, 3 + iter % 10, iter % 14);
        TypedGraph pattern = (iter % 2 == 0)
                                 ? sample_pattern_from(rng, host, 5)
                                 : random_typed_graph(rng, tg, 1 + iter % 4, iter % 5);
        CAPTURE(iter);
        auto fast = find_monomorphisms(pattern, host);
        auto slow = naive_find_monomorphisms(pattern, host);
        CHECK(fast.size() == slow.size());
        CHECK(match_set(fast) == match_set(slow));
        // No duplicate matches.
        CHECK(match_set(fast).size() == fast.size());
        if (iter % 2 == 0 && pattern.element_count() > 0)
            CHECK(!fast.empty()); // pattern was sampled from the host
    }
}

TEST_CASE("matcher respects element filters")
{
    std::mt19937_64 rng(7u);
    auto even_only = [](ElementId, ElementId host_elem) { return host_elem % 2 == 0; };
    for (int iter = 0; iter < 60; ++iter) {
        auto tg = random_type_graph(rng, 2, 3);
        TypedGraph host = random_typed_graph(rng, tg, 8, 10);
        TypedGraph pattern = sample_pattern_from(rng, host, 4);
        MatchOptions opts;
        opts.element_filter = even_only;
        auto fast = find_monomorphisms(pattern, host, {}, opts);
        auto slow = naive_find_monomorphisms(pattern, host, even_only);
        CHECK(match_set(fast) == match_set(slow));
    }
}

TEST_CASE("match enumeration order is reproducible")
{
    std::mt19937_64 rng(99u);
    auto tg = random_type_graph(rng, 2, 3);
    TypedGraph host = random_typed_graph(rng, tg, 10, 16);
    TypedGraph pattern = sample_pattern_from(rng, host, 4);
    auto first = find_monomorphisms(pattern, host);
    auto second = find_monomorphisms(pattern, host);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i)
        CHECK(canon(first[i]) == canon(second[i]));
}

TEST_CASE("empty pattern has exactly one (empty) match")
{
    auto tg = ab_types();
    TypedGraph host(tg);
    host.add_node("A");
    TypedGraph empty(tg);
    auto ms = find_monomorphisms(empty, host);
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].size() == 0);
}

TEST_CASE("parallel edges are matched injectively")
{
    auto tg = ab_types();
    TypedGraph host(tg);
    ElementId a = host.add_node("A");
    ElementId b = host.add_node("B");
    host.add_edge("e", a, b);
    host.add_edge("e", a, b);
    host.add_edge("e", a, b);

    TypedGraph pattern(tg);
    ElementId pa = pattern.add_node("A");
    ElementId pb = pattern.add_node("B");
    pattern.add_edge("e", pa, pb);
    pattern.add_edge("e", pa, pb);

    // 3 choices for the first pattern edge, 2 for the second.
    CHECK(find_monomorphisms(pattern, host).size() == 6);
}

TEST_CASE("negative application conditions forbid extensions")
{
    auto tg = ab_types();
    // Pattern: one A node. NAC: the node has an outgoing "loop" to another A.
    TypedGraph pattern(tg);
    ElementId pa = pattern.add_node("A");
    TypedGraph nacg(tg);
    ElementId na = nacg.add_node("A");
    ElementId nb = nacg.add_node("A");
    nacg.add_edge("loop", na, nb);
    Nac nac{nacg, {}};
    nac.embedding.node_map = {{pa, na}};

    TypedGraph host(tg);
    ElementId x = host.add_node("A"); // isolated
    ElementId y = host.add_node("A"); // loop y -> z
    ElementId z = host.add_node("A");
    host.add_edge("loop", y, z);
    ElementId w = host.add_node("A"); // self-loop only: no *other* node reachable
    host.add_edge("loop", w, w);

    auto ms = find_monomorphisms(pattern, host, {nac});
    std::set<ElementId> matched;
    for (const auto& m : ms)
        matched.insert(m.node_image(pa));
    CHECK(matched == std::set<ElementId>{x, z, w});
}

TEST_CASE("seeded search only yields extensions of the seed")
{
    auto tg = ab_types();
    TypedGraph host(tg);
    ElementId a1 = host.add_node("A");
    ElementId a2 = host.add_node("A");
    ElementId b = host.add_node("B");
    host.add_edge("e", a1, b);
    host.add_edge("e", a2, b);

    TypedGraph pattern(tg);
    ElementId pa = pattern.add_node("A");
    ElementId pb = pattern.add_node("B");
    pattern.add_edge("e", pa, pb);

    MatchOptions opts;
    opts.seed.node_map = {{pa, a2}};
    auto ms = find_monomorphisms(pattern, host, {}, opts);
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].node_image(pa) == a2);
    CHECK(ms[0].node_image(pb) == b);
}

TEST_CASE("embedded production application creates fresh elements")
{
    auto tg = ab_types();
    TypedGraph rule_graph(tg);
    ElementId ra = rule_graph.add_node("A");
    ElementId rb = rule_graph.add_node("B");
    ElementId re = rule_graph.add_edge("e", ra, rb);
    Rule grow = Rule::from_embedded("grow", rule_graph, {ra});
    CHECK(grow.is_production());
    CHECK(grow.created_elements() == std::set<ElementId>{rb, re});

    TypedGraph host(tg);
    ElementId h1 = host.add_node("A");
    host.set_mark(h1, true);

    GraphMorphism m;
    m.node_map = {{ra, h1}};
    RuleApplication app = apply_rule(host, grow, m);
    CHECK(app.result.node_count() == 2);
    CHECK(app.result.edge_count() == 1);
    CHECK(app.result.marked(h1)); // marks survive application
    CHECK(!morphism_violation(app.comatch, grow.rhs, app.result, true).has_value());
    CHECK(app.comatch.node_image(ra) == h1);
    CHECK(app.comatch.node_image(rb) != kNoElement);
    CHECK(!app.result.marked(app.comatch.node_image(rb))); // created elements start clean

    // Applying again on the result picks fresh ids.
    RuleApplication app2 = apply_rule(app.result, grow, m);
    CHECK(app2.comatch.node_image(rb) != app.comatch.node_image(rb));
}

TEST_CASE("deleting rules obey the dangling condition")
{
    auto tg = ab_types();
    TypedGraph lhs(tg);
    ElementId la = lhs.add_node("A");
    ElementId lb = lhs.add_node("B");
    ElementId le = lhs.add_edge("e", la, lb);
    TypedGraph glue(tg);
    ElementId ka = glue.add_node("A");
    TypedGraph rhs(tg);
    ElementId ra = rhs.add_node("A");
    GraphMorphism to_lhs, to_rhs;
    to_lhs.node_map = {{ka, la}};
    to_rhs.node_map = {{ka, ra}};
    Rule drop{"dropTarget", lhs, glue, rhs, to_lhs, to_rhs, {}};
    drop.validate();
    CHECK(!drop.is_production());
    CHECK(drop.deleted_elements() == std::set<ElementId>{lb, le});

    SUBCASE("clean deletion")
    {
        TypedGraph host(tg);
        ElementId a = host.add_node("A");
        ElementId b = host.add_node("B");
        ElementId e = host.add_edge("e", a, b);
        GraphMorphism m;
        m.node_map = {{la, a}, {lb, b}};
        m.edge_map = {{le, e}};
        RuleApplication app = apply_rule(host, drop, m);
        CHECK(app.result.node_count() == 1);
        CHECK(app.result.edge_count() == 0);
        CHECK(app.result.contains(a));
    }

    SUBCASE("deletion blocked by a remaining incident edge")
    {
        TypedGraph host(tg);
        ElementId a1 = host.add_node("A");
        ElementId a2 = host.add_node("A");
        ElementId b = host.add_node("B");
        ElementId e1 = host.add_edge("e", a1, b);
        host.add_edge("e", a2, b);
        GraphMorphism m;
        m.node_map = {{la, a1}, {lb, b}};
        m.edge_map = {{le, e1}};
        CHECK(match_violation(drop, host, m).has_value());
        CHECK_THROWS_AS(apply_rule(host, drop, m), ApplicationError);
        // find_matches filters such matches out.
        CHECK(find_matches(drop, host).empty());
    }
}

TEST_CASE("invalid matches are rejected before application")
{
    auto tg = ab_types();
    TypedGraph rule_graph(tg);
    ElementId ra = rule_graph.add_node("A");
    ElementId rb = rule_graph.add_node("B");
    rule_graph.add_edge("e", ra, rb);
    Rule r = Rule::from_embedded("needsBoth", rule_graph, {ra, rb});

    TypedGraph host(tg);
    host.add_node("A");
    GraphMorphism bogus; // empty: not total on the pattern
    CHECK_THROWS_AS(apply_rule(host, r, bogus), ApplicationError);
}
