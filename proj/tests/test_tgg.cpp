#include "doctest.h"

#include "mvtgg/ast2cd.hpp"
#include "mvtgg/errors.hpp"
#include "mvtgg/tgg.hpp"
#include "mvtgg/triple_type_graph.hpp"

#include "test_support.hpp"

#include <algorithm>

using namespace mvtgg;
using namespace mvtgg::testsupport;

TEST_CASE("triple type graph domain rules")
{
    SUBCASE("the demo metamodel is well-formed")
    {
        auto ttg = ast2cd::type_graph();
        CHECK(ttg->node_domain(ttg->types().node_type("ClassDecl")) == Domain::source);
        CHECK(ttg->node_domain(ttg->types().node_type("Class")) == Domain::target);
        CHECK(ttg->node_domain(ttg->types().node_type("CorrField")) == Domain::correspondence);
        CHECK(ttg->is_source_link(ttg->types().edge_type("corrS_class")));
        CHECK(ttg->is_target_link(ttg->types().edge_type("corrT_field")));
        CHECK(!ttg->is_source_link(ttg->types().edge_type("declaration")));
    }

    SUBCASE("source edges may not cross domains")
    {
        TripleTypeGraph t;
        NodeTypeId s = t.add_node_type("S", Domain::source);
        NodeTypeId tt = t.add_node_type("T", Domain::target);
        t.add_edge_type("cross", s, tt, Domain::source);
        CHECK_THROWS_AS(t.validate(), InputError);
    }

    SUBCASE("correspondence links need the reserved name prefixes")
    {
        TripleTypeGraph t;
        NodeTypeId s = t.add_node_type("S", Domain::source);
        NodeTypeId tt = t.add_node_type("T", Domain::target);
        NodeTypeId c = t.add_node_type("C", Domain::correspondence);
        t.add_edge_type("badName", c, s, Domain::correspondence);
        t.add_edge_type("corrT_c", c, tt, Domain::correspondence);
        CHECK_THROWS_AS(t.validate(), InputError);
    }

    SUBCASE("correspondence node types need both links")
    {
        TripleTypeGraph t;
        NodeTypeId s = t.add_node_type("S", Domain::source);
        t.add_node_type("T", Domain::target);
        NodeTypeId c = t.add_node_type("C", Domain::correspondence);
        t.add_edge_type("corrS_c", c, s, Domain::correspondence);
        CHECK_THROWS_AS(t.validate(), InputError);
    }
}

TEST_CASE("forward rule derivation moves created source elements into the pattern")
{
    auto ttg = ast2cd::type_graph();
    auto rules = ast2cd::grammar(ttg);
    REQUIRE(rules.size() == 2);
    auto fwd = derive_forward_rules(rules);

    const ForwardRule& cls = fwd[0];
    CHECK(cls.name == "ClassToClass");
    CHECK(cls.pattern.node_count() == 1);
    CHECK(cls.pattern.edge_count() == 0);
    CHECK(cls.translated.size() == 1);
    CHECK(!cls.degenerate());
    // Applying it builds the class, the correspondence node and both links.
    CHECK(cls.core.created_elements().size() == 4);

    const ForwardRule& fld = fwd[1];
    CHECK(fld.pattern.node_count() == 8);
    CHECK(fld.pattern.edge_count() == 7);
    CHECK(fld.translated.size() == 5);
    std::size_t translated_nodes = 0;
    for (ElementId x : fld.translated)
        if (fld.pattern.is_node(x))
            ++translated_nodes;
    CHECK(translated_nodes == 2); // the field and its type access
    CHECK(fld.rhs.node_count() == 10);
    CHECK(fld.rhs.edge_count() == 11);
    // Only correspondence/target elements are created by the forward form.
    for (ElementId x : fld.core.created_elements())
        CHECK(ttg->element_domain(fld.rhs, x) != Domain::source);
}

TEST_CASE("init marks every source element")
{
    auto ttg = ast2cd::type_graph();
    TypedGraph model = ast2cd::example_model(ttg);
    TypedGraph g = init_forward(model, *ttg);
    CHECK(g.marked_count() == 7);
    CHECK(bookkeeping_set(g).size() == 7);
    CHECK(!translation_complete(g));

    TypedGraph with_target = model;
    with_target.add_node("Class");
    CHECK_THROWS_AS(init_forward(with_target, *ttg), InputError);
}

TEST_CASE("forward matching respects bookkeeping marks")
{
    auto ttg = ast2cd::type_graph();
    auto fwd = derive_forward_rules(ast2cd::grammar(ttg));
    const ForwardRule& cls = fwd[0];
    const ForwardRule& fld = fwd[1];

    TypedGraph g = init_forward(ast2cd::example_model(ttg), *ttg);

    // Right after init only the axiom is enabled: the field rule needs
    // already-translated class declarations as context.
    auto cls_matches = find_forward_matches(cls, g);
    CHECK(cls_matches.size() == 2);
    CHECK(find_forward_matches(fld, g).empty());

    // Translate both classes.
    for (const GraphMorphism& m : cls_matches)
        apply_forward_in_place(g, cls, m);
    CHECK(bookkeeping_set(g).size() == 5);
    CHECK(g.node_count() == 4 + 2 + 2);  // model + classes + correspondence nodes
    CHECK(g.edge_count() == 3 + 4);      // model + correspondence links

    // Now exactly one field translation is possible.
    auto fld_matches = find_forward_matches(fld, g);
    REQUIRE(fld_matches.size() == 1);
    apply_forward_in_place(g, fld, fld_matches[0]);
    CHECK(translation_complete(g));
    CHECK(g.node_count() == 10);
    CHECK(g.edge_count() == 11);
    CHECK(g.node_count_of_type(g.types().node_type("Class")) == 2);
    CHECK(g.node_count_of_type(g.types().node_type("Association")) == 1);
    CHECK(g.node_count_of_type(g.types().node_type("CorrClass")) == 2);
    CHECK(g.node_count_of_type(g.types().node_type("CorrField")) == 1);

    // Re-running any rule finds nothing: all marks are consumed.
    CHECK(find_forward_matches(cls, g).empty());
    CHECK(find_forward_matches(fld, g).empty());
}

TEST_CASE("forward application rejects matches with stale marks")
{
    auto ttg = ast2cd::type_graph();
    auto fwd = derive_forward_rules(ast2cd::grammar(ttg));
    const ForwardRule& cls = fwd[0];

    TypedGraph g = init_forward(ast2cd::example_model(ttg), *ttg);
    auto ms = find_forward_matches(cls, g);
    REQUIRE(ms.size() == 2);
    apply_forward_in_place(g, cls, ms[0]);
    // The first match's element is translated now; replaying it must fail.
    CHECK(forward_match_violation(cls, g, ms[0]).has_value());
    CHECK_THROWS_AS(apply_forward(g, cls, ms[0]), ApplicationError);
    // The second one is still fine.
    CHECK(!forward_match_violation(cls, g, ms[1]).has_value());
}

TEST_CASE("forward match enumeration agrees with the oracle under mark filters")
{
    auto ttg = ast2cd::type_graph();
    auto fwd = derive_forward_rules(ast2cd::grammar(ttg));
    std::mt19937_64 rng(4242u);

    // Walk the demo translation to completion along random orders; at every
    // intermediate state, compare both rules' match sets against the
    // brute-force enumerator with the same mark predicate.
    for (int round = 0; round < 25; ++round) {
        TypedGraph g = init_forward(ast2cd::example_model(ttg), *ttg);
        for (;;) {
            for (const ForwardRule& fr : fwd) {
                auto fast = find_forward_matches(fr, g);
                auto opts = forward_match_options(fr, g);
                auto slow = naive_find_monomorphisms(fr.pattern, g, opts.element_filter);
                CHECK(match_set(fast) == match_set(slow));
            }
            std::vector<std::pair<const ForwardRule*, GraphMorphism>> enabled;
            for (const ForwardRule& fr : fwd)
                for (GraphMorphism& m : find_forward_matches(fr, g))
                    enabled.emplace_back(&fr, std::move(m));
            if (enabled.empty())
                break;
            auto& pick = enabled[std::uniform_int_distribution<std::size_t>(
                0, enabled.size() - 1)(rng)];
            apply_forward_in_place(g, *pick.first, pick.second);
        }
        CHECK(translation_complete(g));
    }
}

TEST_CASE("rules that translate nothing are flagged as degenerate")
{
    auto ttg = ast2cd::type_graph();
    TypedGraph rhs(ttg->graph());
    rhs.add_node("Class");
    TGGRule target_only{"classOutOfThinAir", true, ttg, std::move(rhs), {}};
    ForwardRule fr = derive_forward_rule(target_only);
    CHECK(fr.degenerate());
    CHECK(fr.pattern.element_count() == 0);
}

TEST_CASE("rule graphs with marks are rejected")
{
    auto ttg = ast2cd::type_graph();
    TypedGraph rhs(ttg->graph());
    ElementId c = rhs.add_node("ClassDecl");
    rhs.set_mark(c, true);
    TGGRule bad{"marked", true, ttg, std::move(rhs), {}};
    CHECK_THROWS_AS(bad.validate(), InputError);
    CHECK_THROWS_AS(derive_forward_rule(bad), InputError);
}
