#include "doctest.h"

#include "mvtgg/ast2cd.hpp"
#include "mvtgg/errors.hpp"
#include "mvtgg/history.hpp"
#include "mvtgg/mvm.hpp"
#include "mvtgg/tgg.hpp"
#include "mvtgg/version_graph.hpp"

#include "version_oracle.hpp"

#include <random>

using namespace mvtgg;
using namespace mvtgg::testsupport;

TEST_CASE("version set operations")
{
    VersionSet a(70), b(70);
    a.set(0);
    a.set(65);
    b.set(65);
    b.set(3);
    CHECK(a.count() == 2);
    CHECK((a & b).indices() == std::vector<std::uint32_t>{65});
    CHECK((a | b).count() == 3);
    VersionSet c = a;
    c.subtract(b);
    CHECK(c.indices() == std::vector<std::uint32_t>{0});
    CHECK(VersionSet::all(70).count() == 70);
    CHECK(VersionSet::none(70).empty());
    CHECK_THROWS_AS(a.set(70), InputError);
    CHECK_THROWS_AS((void)(a &= VersionSet(3)), InputError);
}

TEST_CASE("version graph structure queries")
{
    VersionGraph vg;
    vg.add_version(10);
    vg.add_version(20);
    vg.add_version(30);
    vg.add_version(40);
    vg.add_successor(10, 20);
    vg.add_successor(10, 30);
    vg.add_successor(30, 40);
    vg.finalize();

    CHECK(vg.root() == vg.index_of(10));
    CHECK(vg.is_tree());
    CHECK(vg.tree_parent(vg.index_of(40)) == vg.index_of(30));
    CHECK(!vg.tree_parent(vg.index_of(10)).has_value());
    CHECK(vg.reaches(vg.index_of(10), vg.index_of(40)));
    CHECK(!vg.reaches(vg.index_of(20), vg.index_of(40)));
    CHECK(vg.descendants(vg.index_of(30)).count() == 2);
    CHECK(vg.topological_order().front() == vg.index_of(10));

    SUBCASE("merge edges make it a DAG but not a tree")
    {
        vg.add_successor(20, 40);
        vg.finalize();
        CHECK(!vg.is_tree());
        CHECK_THROWS_AS(vg.tree_parent(vg.index_of(40)), InputError);
        CHECK(vg.reaches(vg.index_of(20), vg.index_of(40)));
    }

    SUBCASE("two roots are rejected")
    {
        vg.add_version(50);
        CHECK_THROWS_AS(vg.finalize(), InputError);
    }

    SUBCASE("cycles are rejected")
    {
        vg.add_successor(40, 30);
        CHECK_THROWS_AS(vg.finalize(), InputError);
    }
}

TEST_CASE("history materializes every version's model")
{
    auto ttg = ast2cd::type_graph();
    VersionHistory h = ast2cd::example_history(ttg);

    CHECK(h.version_count() == 2);
    CHECK(h.model(1).equals(ast2cd::example_model(ttg)));
    CHECK(h.model(2).node_count() == 6);
    CHECK(h.model(2).edge_count() == 6);
    CHECK(h.model(2).contains(8));
    CHECK(!h.model(1).contains(8));
    CHECK(h.universe().size() == 12);
    CHECK(h.total_model_elements() == 7 + 12);
    CHECK(h.max_element_id() == 12);
}

TEST_CASE("history rejects inconsistent deltas")
{
    auto ttg = ast2cd::type_graph();
    const TypeGraph& tg = *ttg->graph();

    SUBCASE("deleting an unknown element")
    {
        VersionHistory h(ttg, 1, ast2cd::example_model(ttg));
        Delta d;
        d.del_elements.push_back(99);
        h.add_version(2, 1, d);
        CHECK_THROWS_AS(h.finalize(), InputError);
    }

    SUBCASE("re-adding an element as a different type")
    {
        VersionHistory h(ttg, 1, ast2cd::example_model(ttg));
        Delta drop;
        drop.del_elements = {5, 3}; // declaration edge, then the field node
        h.add_version(2, 1, drop);
        Delta readd;
        readd.add_nodes.push_back({3, tg.node_type(ast2cd::kTypeAccess)}); // was FieldDecl
        h.add_version(3, 2, readd);
        CHECK_THROWS_AS(h.finalize(), InputError);
    }

    SUBCASE("deleting a node whose edges survive")
    {
        VersionHistory h(ttg, 1, ast2cd::example_model(ttg));
        Delta d;
        d.del_elements = {3}; // field node still referenced by edges 5 and 6
        h.add_version(2, 1, d);
        CHECK_THROWS_AS(h.finalize(), InputError);
    }

    SUBCASE("a version before its parent")
    {
        VersionHistory h(ttg, 1, ast2cd::example_model(ttg));
        h.add_version(2, 3, {});
        h.add_version(3, 1, {});
        CHECK_THROWS_AS(h.finalize(), InputError);
    }

    SUBCASE("non-source elements in the base model")
    {
        TypedGraph base(ttg->graph());
        base.add_node("Class");
        VersionHistory h(ttg, 1, base);
        CHECK_THROWS_AS(h.finalize(), InputError);
    }
}

TEST_CASE("adapted type graph layout")
{
    auto ttg = ast2cd::type_graph();
    AdaptedTypeInfo info = adapt_type_graph(ttg);
    const TypeGraph& a = *info.adapted;

    // 7 node types + 9 edge types + "version".
    CHECK(a.node_type_count() == 17);
    // src/tgt per original edge type, suc, cv/dv per structural type,
    // ucv/udv per source-domain type (3 node + 3 edge types).
    CHECK(a.edge_type_count() == 2 * 9 + 1 + 2 * 16 + 2 * 6);

    NodeTypeId decl_rep = a.node_type("declaration");
    CHECK(info.is_structural(decl_rep));
    CHECK(!info.rep_origin[decl_rep]->from_node_type);
    CHECK(a.edge_src(a.edge_type("src@declaration")) == decl_rep);
    CHECK(a.edge_tgt(a.edge_type("src@declaration")) == a.node_type("ClassDecl"));
    CHECK(a.edge_tgt(a.edge_type("cv@Class")) == info.version_type);
    // Bookkeeping links only exist for the source domain.
    CHECK(info.ucv[a.node_type("ClassDecl")] != kNoType);
    CHECK(info.ucv[a.node_type("Class")] == kNoType);
    CHECK(a.find_edge_type("ucv@Class") == std::nullopt);
    CHECK(info.is_version_link(a.edge_type("ucv@ClassDecl")));
    CHECK(info.is_rep_edge(a.edge_type("tgt@access")));
}

TEST_CASE("adaptation rejects colliding type names")
{
    {
        TripleTypeGraph t;
        NodeTypeId s = t.add_node_type("S", Domain::source);
        t.add_edge_type("S", s, s, Domain::source); // edge named like the node type
        CHECK_THROWS_AS(adapt_type_graph(std::make_shared<TripleTypeGraph>(std::move(t))),
                        InputError);
    }
    {
        TripleTypeGraph t;
        t.add_node_type("version", Domain::source);
        CHECK_THROWS_AS(adapt_type_graph(std::make_shared<TripleTypeGraph>(std::move(t))),
                        InputError);
    }
    {
        TripleTypeGraph t;
        t.add_node_type("a@b", Domain::source);
        CHECK_THROWS_AS(adapt_type_graph(std::make_shared<TripleTypeGraph>(std::move(t))),
                        InputError);
    }
}

TEST_CASE("consolidation projects back to the member models")
{
    auto ttg = ast2cd::type_graph();
    VersionHistory h = ast2cd::example_history(ttg);
    MultiVersionModel mvm = MultiVersionModel::consolidate(h);
    mvm.validate();

    CHECK(mvm.structural_node_count() == 12);
    // Projection restores each version exactly, ids included.
    CHECK(mvm.project_at(0).equals(h.model(1)));
    CHECK(mvm.project_at(1).equals(h.model(2)));

    // Shared elements are represented once.
    CHECK(mvm.node_for_origin(1).has_value());
    ElementId c1_rep = *mvm.node_for_origin(1);
    CHECK(mvm.presence(c1_rep).count() == 2);
    CHECK(mvm.origin(c1_rep) == 1);
    CHECK(mvm.domain_of(c1_rep) == Domain::source);
    // Elements added in version 2 are present only there.
    CHECK(mvm.presence(*mvm.node_for_origin(8)).indices() ==
          std::vector<std::uint32_t>{1});
    // Untranslated sets start empty.
    CHECK(mvm.untranslated(c1_rep).empty());
}

TEST_CASE("deleted and re-added elements keep one representative")
{
    auto ttg = ast2cd::type_graph();
    const TypeGraph& tg = *ttg->graph();
    TypedGraph base(ttg->graph());
    base.add_node(ast2cd::kClassDecl); // id 1

    VersionHistory h(ttg, 1, base);
    Delta drop;
    drop.del_elements = {1};
    h.add_version(2, 1, drop);
    Delta readd;
    readd.add_nodes.push_back({1, tg.node_type(ast2cd::kClassDecl)});
    h.add_version(3, 2, readd);
    h.finalize();

    MultiVersionModel mvm = MultiVersionModel::consolidate(h);
    mvm.validate();
    CHECK(mvm.structural_node_count() == 1);
    ElementId rep = *mvm.node_for_origin(1);
    // Non-convex presence: alive in versions 1 and 3, dead in 2.
    CHECK(mvm.presence(rep).indices() == std::vector<std::uint32_t>{0, 2});
    CHECK(mvm.project_at(0).node_count() == 1);
    CHECK(mvm.project_at(1).node_count() == 0);
    CHECK(mvm.project_at(2).node_count() == 1);
}

TEST_CASE("annotation synthesis is exact on random trees")
{
    auto ttg = ast2cd::type_graph();
    std::mt19937_64 rng(31337u);
    for (int iter = 0; iter < 60; ++iter) {
        std::uint32_t n = 1 + iter % 7;
        VersionGraph vg = random_tree_version_graph(rng, n);
        MultiVersionModel mvm(adapt_type_graph(ttg), vg);
        ElementId rep = mvm.add_node_rep(ttg->types().node_type(ast2cd::kClassDecl), 1);

        VersionSet first = random_version_set(rng, n);
        mvm.set_presence(rep, first);
        CHECK(mvm.presence(rep) == first);

        // Overwriting replaces the encoded set completely.
        VersionSet second = random_version_set(rng, n);
        mvm.set_presence(rep, second);
        CHECK(mvm.presence(rep) == second);

        mvm.set_untranslated(rep, first);
        CHECK(mvm.untranslated(rep) == first);
        CHECK(mvm.presence(rep) == second); // p and u are independent

        // The oracle sees the same sets.
        for (std::uint32_t t = 0; t < n; ++t) {
            CHECK(mvm.presence(rep).test(t) == oracle_present(mvm, rep, t));
            CHECK(mvm.untranslated(rep).test(t) == oracle_untranslated(mvm, rep, t));
        }
    }
}

TEST_CASE("presence evaluation agrees with the path oracle on DAGs")
{
    auto ttg = ast2cd::type_graph();
    std::mt19937_64 rng(777u);
    int checked = 0;
    for (int iter = 0; iter < 200; ++iter) {
        std::uint32_t n = 2 + iter % 5;
        VersionGraph vg = random_dag_version_graph(rng, n);
        MultiVersionModel mvm(adapt_type_graph(ttg), vg);
        ElementId rep = mvm.add_node_rep(ttg->types().node_type(ast2cd::kClassDecl), 1);

        // Random created/deleted links written directly into the graph
        // (the tree-only synthesis API does not apply on DAGs).
        NodeTypeId nt = mvm.graph().node_type(rep);
        for (std::uint32_t t = 0; t < n; ++t) {
            int roll = std::uniform_int_distribution<int>(0, 3)(rng);
            if (roll == 0)
                mvm.graph().add_edge(mvm.info().cv[nt], rep, mvm.version_node(t));
            else if (roll == 1)
                mvm.graph().add_edge(mvm.info().dv[nt], rep, mvm.version_node(t));
            else if (roll == 2) {
                mvm.graph().add_edge(mvm.info().cv[nt], rep, mvm.version_node(t));
                mvm.graph().add_edge(mvm.info().dv[nt], rep, mvm.version_node(t));
            }
        }
        VersionSet p = mvm.presence(rep);
        for (std::uint32_t t = 0; t < n; ++t, ++checked)
            CHECK(p.test(t) == oracle_present(mvm, rep, t));
    }
    CHECK(checked > 500);
}

TEST_CASE("fresh bookkeeping equals presence on the source domain")
{
    auto ttg = ast2cd::type_graph();
    VersionHistory h = ast2cd::example_history(ttg);
    MultiVersionModel mvm = MultiVersionModel::consolidate(h);
    mvm.init_bookkeeping();
    mvm.validate();
    for (const auto& [elem, info] : h.universe()) {
        ElementId rep = *mvm.node_for_origin(elem);
        CHECK(mvm.untranslated(rep) == mvm.presence(rep));
    }
}

TEST_CASE("bookkeeping projection equals per-version translation start")
{
    auto ttg = ast2cd::type_graph();
    VersionHistory h = ast2cd::example_history(ttg);
    MultiVersionModel mvm = MultiVersionModel::consolidate(h);
    mvm.init_bookkeeping();
    for (std::uint32_t t = 0; t < 2; ++t) {
        TypedGraph projected = mvm.project_bookkeeping_at(t);
        TypedGraph direct = init_forward(h.model_at(t), *ttg);
        CHECK(projected.equals(direct));
    }
}

TEST_CASE("model copies are independent")
{
    auto ttg = ast2cd::type_graph();
    VersionHistory h = ast2cd::example_history(ttg);
    MultiVersionModel a = MultiVersionModel::consolidate(h);
    MultiVersionModel b = a;
    ElementId rep = *b.node_for_origin(1);
    b.set_presence(rep, b.versions().no_versions());
    CHECK(b.presence(rep).empty());
    CHECK(a.presence(*a.node_for_origin(1)).count() == 2);
    CHECK(a.project_at(0).equals(h.model(1)));
}

TEST_CASE("structural validation catches broken models")
{
    auto ttg = ast2cd::type_graph();
    VersionHistory h = ast2cd::example_history(ttg);

    SUBCASE("structural node without represented element")
    {
        MultiVersionModel mvm = MultiVersionModel::consolidate(h);
        mvm.graph().add_node("ClassDecl");
        CHECK_THROWS_AS(mvm.validate(), InputError);
    }

    SUBCASE("reified edge missing its endpoint edges")
    {
        MultiVersionModel mvm = MultiVersionModel::consolidate(h);
        ElementId rep = *mvm.node_for_origin(5); // the declaration edge
        ElementId src_edge = kNoElement;
        mvm.graph().for_each_out_edge(rep, [&](ElementId e) {
            if (mvm.info().edge_kind[mvm.graph().edge_type(e)] ==
                AdaptedTypeInfo::EdgeKind::src_rep)
                src_edge = e;
        });
        mvm.graph().remove_element(src_edge);
        CHECK_THROWS_AS(mvm.validate(), InputError);
    }

    SUBCASE("projection rejects an edge present without its endpoint")
    {
        MultiVersionModel mvm = MultiVersionModel::consolidate(h);
        // Claim the declaration edge exists in both versions while its field
        // node only exists where the history says; then drop the node from
        // version 1.
        ElementId field_rep = *mvm.node_for_origin(3);
        VersionSet only_v2(2);
        only_v2.set(1);
        mvm.set_presence(field_rep, only_v2);
        CHECK_THROWS_AS(mvm.project_at(0), InputError);
    }
}
