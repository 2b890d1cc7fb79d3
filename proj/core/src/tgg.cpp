#include "mvtgg/tgg.hpp"

#include "mvtgg/errors.hpp"

namespace mvtgg {

std::set<ElementId> TGGRule::created() const
{
    std::set<ElementId> out;
    rhs.for_each_node([&](ElementId x) {
        if (!preserved.count(x))
            out.insert(x);
    });
    rhs.for_each_edge([&](ElementId x) {
        if (!preserved.count(x))
            out.insert(x);
    });
    return out;
}

void TGGRule::validate() const
{
    if (!types)
        throw InputError("rule '" + name + "' has no triple type graph");
    if (rhs.marked_count() != 0)
        throw InputError("rule '" + name + "': rule graphs must not carry bookkeeping marks");
    if (axiom && !preserved.empty())
        throw InputError("axiom '" + name + "' must have an empty left-hand side");
    for (ElementId x : preserved)
        if (!rhs.contains(x))
            throw InputError("rule '" + name + "': preserved element " + std::to_string(x) +
                             " is not in the rule graph");
    // restricted_to rejects non-edge-closed preserved sets.
    (void)rhs.restricted_to(preserved);
    if (!(*types->graph() == rhs.types()))
        throw InputError("rule '" + name + "' is typed over a foreign type graph");
}

ForwardRule derive_forward_rule(const TGGRule& rule)
{
    rule.validate();
    const TripleTypeGraph& ttg = *rule.types;

    // The forward pattern keeps the whole left side and adopts the created
    // source elements; created correspondence/target elements remain
    // right-side only.
    std::set<ElementId> pattern_ids = rule.preserved;
    std::set<ElementId> translated;
    auto consider = [&](ElementId x) {
        if (rule.preserved.count(x))
            return;
        if (ttg.element_domain(rule.rhs, x) == Domain::source) {
            pattern_ids.insert(x);
            translated.insert(x);
        }
    };
    rule.rhs.for_each_node(consider);
    rule.rhs.for_each_edge(consider);

    TypedGraph pattern = rule.rhs.restricted_to(pattern_ids);
    Rule core = Rule::from_embedded(rule.name, rule.rhs, pattern_ids);
    return ForwardRule{rule.name, rule.types, std::move(pattern), rule.rhs,
                       std::move(translated), std::move(core)};
}

std::vector<ForwardRule> derive_forward_rules(const std::vector<TGGRule>& rules)
{
    std::vector<ForwardRule> out;
    out.reserve(rules.size());
    for (const TGGRule& r : rules)
        out.push_back(derive_forward_rule(r));
    return out;
}

TypedGraph init_forward(const TypedGraph& source_model, const TripleTypeGraph& types)
{
    if (!(*types.graph() == source_model.types()))
        throw InputError("source model is typed over a foreign type graph");
    TypedGraph g = source_model;
    g.clear_all_marks();
    auto mark = [&](ElementId x) {
        if (types.element_domain(g, x) != Domain::source)
            throw InputError("source model contains non-source element " + std::to_string(x));
        g.set_mark(x, true);
    };
    g.for_each_node(mark);
    g.for_each_edge(mark);
    return g;
}

std::set<ElementId> bookkeeping_set(const TypedGraph& g)
{
    std::vector<ElementId> v = g.marked_elements();
    return std::set<ElementId>(v.begin(), v.end());
}

bool translation_complete(const TypedGraph& g) { return g.marked_count() == 0; }

MatchOptions forward_match_options(const ForwardRule& fr, const TypedGraph& host)
{
    MatchOptions opts;
    const std::set<ElementId>* translated = &fr.translated;
    const TypedGraph* h = &host;
    opts.element_filter = [translated, h](ElementId p, ElementId x) {
        return h->marked(x) == (translated->count(p) != 0);
    };
    return opts;
}

std::optional<std::string> forward_match_violation(const ForwardRule& fr, const TypedGraph& host,
                                                   const GraphMorphism& m)
{
    if (auto why = morphism_violation(m, fr.pattern, host, true))
        return "match is not a monomorphism: " + *why;
    std::optional<std::string> why;
    auto check = [&](ElementId p) {
        if (why)
            return;
        bool need_mark = fr.translated.count(p) != 0;
        if (host.marked(m.image(p)) != need_mark)
            why = std::string(need_mark ? "element " : "context element ") +
                  std::to_string(m.image(p)) +
                  (need_mark ? " is already translated" : " is still untranslated");
    };
    fr.pattern.for_each_node(check);
    fr.pattern.for_each_edge(check);
    return why;
}

std::vector<GraphMorphism> find_forward_matches(const ForwardRule& fr, const TypedGraph& host)
{
    return find_monomorphisms(fr.pattern, host, {}, forward_match_options(fr, host));
}

void apply_forward_in_place(TypedGraph& host, const ForwardRule& fr, const GraphMorphism& m,
                            GraphMorphism* comatch)
{
    if (auto why = forward_match_violation(fr, host, m))
        throw ApplicationError("forward rule '" + fr.name + "': " + *why);
    apply_rule_in_place(host, fr.core, m, comatch);
    for (ElementId p : fr.translated)
        host.set_mark(m.image(p), false);
}

TypedGraph apply_forward(const TypedGraph& host, const ForwardRule& fr, const GraphMorphism& m)
{
    TypedGraph out = host;
    apply_forward_in_place(out, fr, m);
    return out;
}

} // namespace mvtgg
