#include "doctest.h"

#include "mvtgg/ast2cd.hpp"
#include "mvtgg/errors.hpp"
#include "mvtgg/mv_rules.hpp"
#include "mvtgg/mvm.hpp"
#include "mvtgg/tgg.hpp"

#include <algorithm>
#include <set>
#include <vector>

using namespace mvtgg;

namespace {

struct Fixture {
    std::shared_ptr<const TripleTypeGraph> types = ast2cd::type_graph();
    std::vector<ForwardRule> fwd = derive_forward_rules(ast2cd::grammar(types));
    AdaptedTypeInfo info = adapt_type_graph(types);
    std::vector<MVForwardRule> mv = adapt_forward_rules(fwd, info);

    const MVForwardRule& rule(const char* name) const
    {
        for (const MVForwardRule& r : mv)
            if (r.name == name) return r;
        throw std::logic_error("no such rule");
    }
};

// The defining property of the applicability set: a version belongs to it
// exactly when the original forward rule fits at the lowered match in that
// version's projected (bookkeeping-carrying) model.
void check_against_projections(const Fixture& fx, const MultiVersionModel& mvm)
{
    for (const MVForwardRule& rule : fx.mv) {
        // All structural matches, including those the pruning filter of
        // find_mv_matches would drop: the applicability set must agree with
        // the per-version view on every one of them.
        std::vector<GraphMorphism> matches =
            find_monomorphisms(rule.pattern, mvm.graph());
        for (const GraphMorphism& m : matches) {
            VersionSet p = applicable_versions(mvm, rule, m);
            GraphMorphism lowered = project_match(rule, m, mvm);
            for (std::uint32_t t = 0; t < mvm.versions().size(); ++t) {
                TypedGraph projected = mvm.project_bookkeeping_at(t);
                bool fits =
                    !forward_match_violation(*rule.original, projected, lowered).has_value();
                CAPTURE(rule.name);
                CAPTURE(t);
                CHECK(p.test(t) == fits);
            }
        }
    }
}

// Applies the first applicable match of any rule; false when none is left.
bool apply_one(const Fixture& fx, MultiVersionModel& mvm)
{
    for (const MVForwardRule& rule : fx.mv)
        for (const GraphMorphism& m : find_mv_matches(rule, mvm))
            if (applicable_versions(mvm, rule, m).any()) {
                apply_mv_rule(mvm, rule, m);
                return true;
            }
    return false;
}

// A history with a non-convex presence set: the field is deleted in the
// middle version and re-added (same ids) in the last one.
VersionHistory delete_readd_history(const std::shared_ptr<const TripleTypeGraph>& types)
{
    VersionHistory h(types, 1, ast2cd::example_model(types));
    Delta drop;
    drop.del_elements = {5, 6, 7, 3, 4};
    h.add_version(2, 1, drop);
    Delta readd;
    NodeTypeId field = types->types().node_type(ast2cd::kFieldDecl);
    NodeTypeId access = types->types().node_type(ast2cd::kTypeAccess);
    readd.add_nodes = {{3, field}, {4, access}};
    readd.add_edges = {{5, types->types().edge_type(ast2cd::kDeclaration), 1, 3},
                       {6, types->types().edge_type(ast2cd::kAccess), 3, 4},
                       {7, types->types().edge_type(ast2cd::kTypeRef), 4, 2}};
    h.add_version(3, 2, readd);
    h.finalize();
    return h;
}

} // namespace

TEST_CASE("encoding reifies nodes and edges")
{
    Fixture fx;
    TypedGraph model = ast2cd::example_model(fx.types);
    MvEncoding enc = mv_encode(model, fx.info);

    CHECK(enc.graph.node_count() == 7);  // 4 node reps + 3 edge reps
    CHECK(enc.graph.edge_count() == 6);  // src@/tgt@ per reified edge
    CHECK(enc.rep_of.size() == 7);

    // The declaration edge 5 runs from class 1 to field 3; its reification
    // carries matching src@/tgt@ edges.
    ElementId rep = enc.rep_of.at(5);
    EdgeTypeId declaration = fx.types->types().edge_type(ast2cd::kDeclaration);
    CHECK(enc.graph.node_type(rep) == fx.info.edge_rep.at(declaration));
    enc.graph.for_each_out_edge(rep, [&](ElementId link) {
        if (enc.graph.edge_type(link) == fx.info.src_rep.at(declaration))
            CHECK(enc.graph.edge_tgt(link) == enc.rep_of.at(1));
        else {
            CHECK(enc.graph.edge_type(link) == fx.info.tgt_rep.at(declaration));
            CHECK(enc.graph.edge_tgt(link) == enc.rep_of.at(3));
        }
    });

    TypedGraph marked = model;
    marked.set_mark(1, true);
    MvEncoding enc2 = mv_encode(marked, fx.info);
    CHECK(enc2.graph.marked_count() == 0); // encodings carry no bookkeeping
}

TEST_CASE("forward rules lift to productions on the adapted graph")
{
    Fixture fx;

    const MVForwardRule& cls = fx.rule("ClassToClass");
    CHECK(cls.pattern.node_count() == 1);
    CHECK(cls.pattern.edge_count() == 0);
    CHECK(cls.all_nodes.size() == 1);
    CHECK(cls.translated_nodes.size() == 1);
    CHECK(cls.context_nodes.empty());
    CHECK(cls.rhs.node_count() == 5); // 3 node reps + 2 corr link reps
    CHECK(cls.rhs.edge_count() == 4);
    CHECK(cls.created_nodes.size() == 4);
    CHECK(!cls.degenerate());
    CHECK(cls.core.is_production());

    const MVForwardRule& fld = fx.rule("FieldToAssociation");
    CHECK(fld.pattern.node_count() == 15); // 8 node + 7 edge reps
    CHECK(fld.pattern.edge_count() == 14);
    CHECK(fld.all_nodes.size() == 15);
    CHECK(fld.translated_nodes.size() == 5); // field, access, 3 source edges
    CHECK(fld.context_nodes.size() == 10);
    CHECK(fld.rhs.node_count() == 21); // 10 node + 11 edge reps
    CHECK(fld.rhs.edge_count() == 22);
    CHECK(fld.created_nodes.size() == 6);
    CHECK(fld.core.is_production());

    // rep_of/elem_of are mutually inverse and cover the whole rule graph.
    CHECK(fld.rep_of.size() == 21);
    for (const auto& [elem, rep] : fld.rep_of)
        CHECK(fld.elem_of.at(rep) == elem);
}

TEST_CASE("applicability sets match per-version bookkeeping")
{
    Fixture fx;
    VersionHistory h = delete_readd_history(fx.types);
    MultiVersionModel mvm = MultiVersionModel::consolidate(h);
    mvm.init_bookkeeping();

    // Field and access exist only in the first and last version.
    ElementId field_rep = *mvm.node_for_origin(3);
    CHECK(mvm.presence(field_rep).indices() == std::vector<std::uint32_t>{0, 2});

    // Before, during and after the translation the applicability set of
    // every structural match must coincide with the per-version fits.
    check_against_projections(fx, mvm);
    std::size_t applications = 0;
    while (apply_one(fx, mvm)) {
        ++applications;
        check_against_projections(fx, mvm);
    }
    // Two classes, then the field once for the two versions it exists in.
    CHECK(applications == 3);

    // Everything translated everywhere it exists.
    mvm.graph().for_each_node([&](ElementId n) {
        if (mvm.is_structural_node(n)) CHECK(mvm.untranslated(n).empty());
    });
    for (std::uint32_t t = 0; t < mvm.versions().size(); ++t)
        CHECK(translation_complete(mvm.project_bookkeeping_at(t)));
}

TEST_CASE("application updates presence and translation state")
{
    Fixture fx;
    VersionHistory h = ast2cd::example_history(fx.types);
    MultiVersionModel mvm = MultiVersionModel::consolidate(h);
    mvm.init_bookkeeping();

    const MVForwardRule& cls = fx.rule("ClassToClass");
    std::vector<GraphMorphism> matches = find_mv_matches(cls, mvm);
    CHECK(matches.size() == 2);

    VersionSet everywhere = mvm.versions().all_versions();
    CHECK(applicable_versions(mvm, cls, matches[0]) == everywhere);

    MvApplication app = apply_mv_rule(mvm, cls, matches[0]);
    CHECK(app.versions == everywhere);
    CHECK(app.created.size() == 4);
    for (ElementId n : app.created) {
        CHECK(mvm.presence(n) == everywhere);
        CHECK(mvm.origin(n) > h.max_element_id()); // fresh represented ids
    }
    ElementId translated_class = app.comatch.node_image(cls.translated_nodes.front());
    CHECK(mvm.untranslated(translated_class).empty());

    // The same match is exhausted now.
    CHECK_THROWS_AS(apply_mv_rule(mvm, cls, matches[0]), ApplicationError);

    // The first version's projection looks like one single-version class
    // translation step: class, correspondence node and links added, the
    // translated class unmarked, everything else still marked.
    TypedGraph proj = mvm.project_bookkeeping_at(0);
    CHECK(proj.node_count() == 6);
    CHECK(proj.edge_count() == 5);
    std::set<ElementId> still = bookkeeping_set(proj);
    CHECK(still.size() == 6);
    CHECK(!still.count(mvm.origin(translated_class)));

    // Drive to completion and compare each projection against an
    // independently computed single-version translation of that version.
    while (apply_one(fx, mvm)) {}
    for (std::uint32_t t = 0; t < mvm.versions().size(); ++t) {
        TypedGraph single = init_forward(h.model_at(t), *fx.types);
        bool progress = true;
        while (progress) {
            progress = false;
            for (const ForwardRule& fr : fx.fwd) {
                std::vector<GraphMorphism> ms = find_forward_matches(fr, single);
                if (!ms.empty()) {
                    apply_forward_in_place(single, fr, ms.front());
                    progress = true;
                    break;
                }
            }
        }
        TypedGraph projected = mvm.project_bookkeeping_at(t);
        CHECK(translation_complete(projected));
        CHECK(projected.node_count() == single.node_count());
        CHECK(projected.edge_count() == single.edge_count());
        for (NodeTypeId nt = 0; nt < fx.types->types().node_type_count(); ++nt)
            CHECK(projected.node_count_of_type(nt) == single.node_count_of_type(nt));
        for (EdgeTypeId et = 0; et < fx.types->types().edge_type_count(); ++et)
            CHECK(projected.edge_count_of_type(et) == single.edge_count_of_type(et));
    }

    // Nothing matchable is left.
    for (const MVForwardRule& rule : fx.mv)
        CHECK(find_mv_matches(rule, mvm).empty());
}

TEST_CASE("application rejects foreign models")
{
    Fixture fx;

    // A second triple type graph with an extra node type adapts to a
    // different graph; rules from one must not run on models of the other.
    auto other = std::make_shared<TripleTypeGraph>();
    TripleTypeGraph& ot = *other;
    ot.add_node_type("ClassDecl", Domain::source);
    ot.add_node_type("Extra", Domain::source);
    ot.validate();
    AdaptedTypeInfo other_info = adapt_type_graph(other);

    VersionGraph vg;
    vg.add_version(1);
    vg.finalize();
    MultiVersionModel foreign(other_info, vg);

    const MVForwardRule& cls = fx.rule("ClassToClass");
    GraphMorphism m;
    m.node_map[cls.all_nodes.front()] = 1;
    CHECK_THROWS_AS(apply_mv_rule(foreign, cls, m), ApplicationError);
}
