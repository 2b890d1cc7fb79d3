#include "mvtgg/mv_rules.hpp"

#include "mvtgg/errors.hpp"

#include <unordered_set>
#include <utility>

namespace mvtgg {

MvEncoding mv_encode(const TypedGraph& g, const AdaptedTypeInfo& info)
{
    if (!(g.types() == *info.original->graph()))
        throw InputError("mv_encode: graph is not typed over the original type graph");

    MvEncoding enc{TypedGraph(info.adapted), {}};
    g.for_each_node([&](ElementId id) {
        enc.rep_of[id] = enc.graph.add_node(info.node_rep.at(g.node_type(id)));
    });
    g.for_each_edge([&](ElementId id) {
        EdgeTypeId t = g.edge_type(id);
        ElementId rep = enc.graph.add_node(info.edge_rep.at(t));
        enc.graph.add_edge(info.src_rep.at(t), rep, enc.rep_of.at(g.edge_src(id)));
        enc.graph.add_edge(info.tgt_rep.at(t), rep, enc.rep_of.at(g.edge_tgt(id)));
        enc.rep_of[id] = rep;
    });
    return enc;
}

namespace {

bool same_triple_types(const TripleTypeGraph& a, const TripleTypeGraph& b)
{
    if (&a == &b) return true;
    if (!(a.types() == b.types())) return false;
    for (NodeTypeId t = 0; t < a.types().node_type_count(); ++t)
        if (a.node_domain(t) != b.node_domain(t)) return false;
    for (EdgeTypeId t = 0; t < a.types().edge_type_count(); ++t)
        if (a.edge_domain(t) != b.edge_domain(t)) return false;
    return true;
}

} // namespace

MVForwardRule adapt_forward_rule(const ForwardRule& fr, const AdaptedTypeInfo& info)
{
    if (!same_triple_types(*fr.types, *info.original))
        throw InputError("adapt_forward_rule: rule '" + fr.name +
                         "' is not typed over the adapted type graph's original");

    MvEncoding enc = mv_encode(fr.rhs, info);

    // The encoded pattern is the restriction of the encoded rule graph to the
    // representations of the pattern elements (plus the src@/tgt@ edges of
    // pattern edge representations), so pattern and rhs share element ids.
    std::set<ElementId> keep;
    for (ElementId n : fr.pattern.node_ids())
        keep.insert(enc.rep_of.at(n));
    for (ElementId e : fr.pattern.edge_ids()) {
        ElementId rep = enc.rep_of.at(e);
        keep.insert(rep);
        enc.graph.for_each_out_edge(rep, [&](ElementId link) { keep.insert(link); });
    }

    MVForwardRule mv{fr.name,
                     std::make_shared<ForwardRule>(fr),
                     info,
                     enc.graph.restricted_to(keep),
                     enc.graph,
                     {},
                     {},
                     {},
                     {},
                     std::move(enc.rep_of),
                     {},
                     Rule::from_embedded(fr.name, enc.graph, keep)};

    for (const auto& [elem, rep] : mv.rep_of)
        mv.elem_of[rep] = elem;

    auto classify = [&](ElementId elem) {
        ElementId rep = mv.rep_of.at(elem);
        mv.all_nodes.push_back(rep);
        if (fr.translated.count(elem))
            mv.translated_nodes.push_back(rep);
        else
            mv.context_nodes.push_back(rep);
    };
    for (ElementId n : fr.pattern.node_ids())
        classify(n);
    for (ElementId e : fr.pattern.edge_ids())
        classify(e);

    std::set<ElementId> created = fr.core.created_elements();
    for (ElementId n : fr.rhs.node_ids())
        if (created.count(n)) mv.created_nodes.push_back(mv.rep_of.at(n));
    for (ElementId e : fr.rhs.edge_ids())
        if (created.count(e)) mv.created_nodes.push_back(mv.rep_of.at(e));

    return mv;
}

std::vector<MVForwardRule> adapt_forward_rules(const std::vector<ForwardRule>& rules,
                                               const AdaptedTypeInfo& info)
{
    std::vector<MVForwardRule> out;
    out.reserve(rules.size());
    for (const ForwardRule& fr : rules)
        out.push_back(adapt_forward_rule(fr, info));
    return out;
}

VersionSet applicable_versions(const MultiVersionModel& mvm, const MVForwardRule& rule,
                               const GraphMorphism& match)
{
    VersionSet p = mvm.versions().all_versions();
    for (ElementId v : rule.all_nodes)
        p &= mvm.presence(match.node_image(v));
    for (ElementId v : rule.translated_nodes)
        p &= mvm.untranslated(match.node_image(v));
    for (ElementId v : rule.context_nodes)
        p.subtract(mvm.untranslated(match.node_image(v)));
    return p;
}

std::vector<GraphMorphism> find_mv_matches(const MVForwardRule& rule,
                                           const MultiVersionModel& mvm)
{
    std::unordered_set<ElementId> translated(rule.translated_nodes.begin(),
                                             rule.translated_nodes.end());
    MatchOptions opts;
    opts.element_filter = [&](ElementId pat, ElementId host) {
        // An element translated everywhere can never be consumed again, so
        // matches through it are dead on arrival and pruned here. Everything
        // else is left to applicable_versions.
        if (!translated.count(pat)) return true;
        return mvm.untranslated(host).any();
    };
    return find_monomorphisms(rule.pattern, mvm.graph(), {}, opts);
}

MvApplication apply_mv_rule(MultiVersionModel& mvm, const MVForwardRule& rule,
                            const GraphMorphism& match)
{
    if (!mvm.graph().same_type_graph(rule.rhs))
        throw ApplicationError("apply_mv_rule: rule '" + rule.name +
                               "' and model use different adapted type graphs");

    VersionSet p = applicable_versions(mvm, rule, match);
    if (p.empty())
        throw ApplicationError("apply_mv_rule: rule '" + rule.name +
                               "' is not applicable in any version at this match");

    // Pre-application untranslated sets of the consumed elements; the match
    // images stay alive (forward rules never delete), the sets change below.
    std::vector<std::pair<ElementId, VersionSet>> consumed;
    consumed.reserve(rule.translated_nodes.size());
    for (ElementId v : rule.translated_nodes) {
        ElementId img = match.node_image(v);
        consumed.emplace_back(img, mvm.untranslated(img));
    }

    MvApplication app;
    app.versions = p;
    apply_rule_in_place(mvm.graph(), rule.core, match, &app.comatch);

    // Created structural nodes represent fresh elements: give them ids and
    // make them present exactly where the application is justified.
    for (ElementId r : rule.created_nodes) {
        ElementId node = app.comatch.node_image(r);
        mvm.set_origin(node, mvm.fresh_origin());
        app.created.push_back(node);
    }
    for (ElementId node : app.created)
        mvm.set_presence(node, p);

    // The consumed elements are translated in p from now on.
    for (auto& [img, u] : consumed) {
        VersionSet rest = u;
        rest.subtract(p);
        mvm.set_untranslated(img, rest);
    }
    return app;
}

GraphMorphism project_match(const MVForwardRule& rule, const GraphMorphism& mv_match,
                            const MultiVersionModel& mvm)
{
    GraphMorphism m;
    const ForwardRule& fr = *rule.original;
    fr.pattern.for_each_node([&](ElementId id) {
        m.node_map[id] = mvm.origin(mv_match.node_image(rule.rep_of.at(id)));
    });
    fr.pattern.for_each_edge([&](ElementId id) {
        m.edge_map[id] = mvm.origin(mv_match.node_image(rule.rep_of.at(id)));
    });
    return m;
}

} // namespace mvtgg
