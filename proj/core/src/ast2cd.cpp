#include "mvtgg/ast2cd.hpp"

namespace mvtgg::ast2cd {

std::shared_ptr<const TripleTypeGraph> type_graph()
{
    auto ttg = std::make_shared<TripleTypeGraph>();
    NodeTypeId class_decl = ttg->add_node_type(kClassDecl, Domain::source);
    NodeTypeId field_decl = ttg->add_node_type(kFieldDecl, Domain::source);
    NodeTypeId type_access = ttg->add_node_type(kTypeAccess, Domain::source);
    ttg->add_edge_type(kDeclaration, class_decl, field_decl, Domain::source);
    ttg->add_edge_type(kAccess, field_decl, type_access, Domain::source);
    ttg->add_edge_type(kTypeRef, type_access, class_decl, Domain::source);

    NodeTypeId klass = ttg->add_node_type(kClass, Domain::target);
    NodeTypeId assoc = ttg->add_node_type(kAssociation, Domain::target);
    ttg->add_edge_type(kSourceEnd, assoc, klass, Domain::target);
    ttg->add_edge_type(kTargetEnd, assoc, klass, Domain::target);

    NodeTypeId corr_class = ttg->add_node_type("CorrClass", Domain::correspondence);
    NodeTypeId corr_field = ttg->add_node_type("CorrField", Domain::correspondence);
    ttg->add_edge_type("corrS_class", corr_class, class_decl, Domain::correspondence);
    ttg->add_edge_type("corrT_class", corr_class, klass, Domain::correspondence);
    ttg->add_edge_type("corrS_field", corr_field, field_decl, Domain::correspondence);
    ttg->add_edge_type("corrT_field", corr_field, assoc, Domain::correspondence);

    ttg->validate();
    return ttg;
}

std::vector<TGGRule> grammar(std::shared_ptr<const TripleTypeGraph> types)
{
    std::vector<TGGRule> rules;

    {
        // Axiom: translate one class declaration into a class.
        TypedGraph rhs(types->graph());
        ElementId c = rhs.add_node(kClassDecl);
        ElementId k = rhs.add_node(kClass);
        ElementId cc = rhs.add_node("CorrClass");
        rhs.add_edge("corrS_class", cc, c);
        rhs.add_edge("corrT_class", cc, k);
        rules.push_back(TGGRule{"ClassToClass", true, types, std::move(rhs), {}});
    }

    {
        // Translate a field typed by another class into an association
        // between the corresponding classes.
        TypedGraph rhs(types->graph());
        ElementId c1 = rhs.add_node(kClassDecl);
        ElementId c2 = rhs.add_node(kClassDecl);
        ElementId k1 = rhs.add_node(kClass);
        ElementId k2 = rhs.add_node(kClass);
        ElementId cc1 = rhs.add_node("CorrClass");
        ElementId cc2 = rhs.add_node("CorrClass");
        ElementId l1 = rhs.add_edge("corrS_class", cc1, c1);
        ElementId l2 = rhs.add_edge("corrT_class", cc1, k1);
        ElementId l3 = rhs.add_edge("corrS_class", cc2, c2);
        ElementId l4 = rhs.add_edge("corrT_class", cc2, k2);

        ElementId f = rhs.add_node(kFieldDecl);
        ElementId t = rhs.add_node(kTypeAccess);
        rhs.add_edge(kDeclaration, c1, f);
        rhs.add_edge(kAccess, f, t);
        rhs.add_edge(kTypeRef, t, c2);
        ElementId a = rhs.add_node(kAssociation);
        rhs.add_edge(kSourceEnd, a, k1);
        rhs.add_edge(kTargetEnd, a, k2);
        ElementId cf = rhs.add_node("CorrField");
        rhs.add_edge("corrS_field", cf, f);
        rhs.add_edge("corrT_field", cf, a);

        rules.push_back(TGGRule{"FieldToAssociation", false, types, std::move(rhs),
                                {c1, c2, k1, k2, cc1, cc2, l1, l2, l3, l4}});
    }

    for (const TGGRule& r : rules)
        r.validate();
    return rules;
}

TypedGraph example_model(const std::shared_ptr<const TripleTypeGraph>& types)
{
    TypedGraph g(types->graph());
    ElementId c1 = g.add_node(kClassDecl);
    ElementId c2 = g.add_node(kClassDecl);
    ElementId f1 = g.add_node(kFieldDecl);
    ElementId t1 = g.add_node(kTypeAccess);
    g.add_edge(kDeclaration, c1, f1);
    g.add_edge(kAccess, f1, t1);
    g.add_edge(kTypeRef, t1, c2);
    return g;
}

VersionHistory example_history(const std::shared_ptr<const TripleTypeGraph>& types)
{
    const TypeGraph& tg = *types->graph();
    TypedGraph base = example_model(types);
    VersionHistory h(types, 1, base);

    // Version 2 adds a field on the second class, typed by the first; the
    // element ids continue after the base model's 1..7.
    Delta d;
    d.add_nodes.push_back({8, tg.node_type(kFieldDecl)});
    d.add_nodes.push_back({9, tg.node_type(kTypeAccess)});
    d.add_edges.push_back({10, tg.edge_type(kDeclaration), 2, 8});
    d.add_edges.push_back({11, tg.edge_type(kAccess), 8, 9});
    d.add_edges.push_back({12, tg.edge_type(kTypeRef), 9, 1});
    h.add_version(2, 1, std::move(d));
    h.finalize();
    return h;
}

} // namespace mvtgg::ast2cd
