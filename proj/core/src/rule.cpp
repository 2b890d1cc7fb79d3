#include "mvtgg/rule.hpp"

#include "mvtgg/errors.hpp"

#include <algorithm>

namespace mvtgg {

namespace {

// Inverse of a (monomorphic) leg K -> X as X-element -> K-element.
std::unordered_map<ElementId, ElementId> invert(const GraphMorphism& leg)
{
    std::unordered_map<ElementId, ElementId> inv;
    inv.reserve(leg.node_map.size() + leg.edge_map.size());
    for (const auto& [k, x] : leg.node_map)
        inv.emplace(x, k);
    for (const auto& [k, x] : leg.edge_map)
        inv.emplace(x, k);
    return inv;
}

} // namespace

bool Rule::is_production() const
{
    return glue.node_count() == lhs.node_count() && glue.edge_count() == lhs.edge_count();
}

std::set<ElementId> Rule::deleted_elements() const
{
    std::set<ElementId> out;
    auto img = invert(to_lhs);
    lhs.for_each_node([&](ElementId n) {
        if (!img.count(n))
            out.insert(n);
    });
    lhs.for_each_edge([&](ElementId e) {
        if (!img.count(e))
            out.insert(e);
    });
    return out;
}

std::set<ElementId> Rule::created_elements() const
{
    std::set<ElementId> out;
    auto img = invert(to_rhs);
    rhs.for_each_node([&](ElementId n) {
        if (!img.count(n))
            out.insert(n);
    });
    rhs.for_each_edge([&](ElementId e) {
        if (!img.count(e))
            out.insert(e);
    });
    return out;
}

void Rule::validate() const
{
    if (auto why = morphism_violation(to_lhs, glue, lhs, true))
        throw InputError("rule '" + name + "': interface embedding into the left side: " + *why);
    if (auto why = morphism_violation(to_rhs, glue, rhs, true))
        throw InputError("rule '" + name + "': interface embedding into the right side: " + *why);
    for (std::size_t i = 0; i < nacs.size(); ++i) {
        if (auto why = morphism_violation(nacs[i].embedding, lhs, nacs[i].graph, true))
            throw InputError("rule '" + name + "': NAC " + std::to_string(i) +
                             " embedding: " + *why);
    }
}

Rule Rule::from_embedded(std::string name, const TypedGraph& rhs,
                         const std::set<ElementId>& preserved)
{
    TypedGraph lhs = rhs.restricted_to(preserved);
    GraphMorphism id = identity_morphism(lhs);
    Rule r{std::move(name), lhs, lhs, rhs, id, id, {}};
    r.validate();
    return r;
}

std::optional<std::string> match_violation(const Rule& rule, const TypedGraph& host,
                                           const GraphMorphism& m)
{
    if (auto why = morphism_violation(m, rule.lhs, host, true))
        return "match is not a monomorphism: " + *why;

    // NACs: the match must not extend along any NAC embedding.
    for (std::size_t i = 0; i < rule.nacs.size(); ++i) {
        const Nac& nac = rule.nacs[i];
        MatchOptions ext;
        for (const auto& [l, h] : m.node_map) {
            ElementId n = nac.embedding.node_image(l);
            if (n != kNoElement)
                ext.seed.node_map.emplace(n, h);
        }
        for (const auto& [l, h] : m.edge_map) {
            ElementId n = nac.embedding.edge_image(l);
            if (n != kNoElement)
                ext.seed.edge_map.emplace(n, h);
        }
        if (find_monomorphism(nac.graph, host, {}, ext))
            return "NAC " + std::to_string(i) + " is violated";
    }

    // Dangling condition: every edge incident to a to-be-deleted node must
    // itself be deleted by the rule (i.e. be the image of a deleted
    // pattern edge).
    std::set<ElementId> deleted = rule.deleted_elements();
    if (deleted.empty())
        return std::nullopt;
    std::unordered_set<ElementId> deleted_host_edges;
    for (ElementId d : deleted)
        if (rule.lhs.is_edge(d))
            deleted_host_edges.insert(m.edge_image(d));
    std::optional<std::string> why;
    for (ElementId d : deleted) {
        if (!rule.lhs.is_node(d))
            continue;
        ElementId h = m.node_image(d);
        auto check = [&](ElementId he) {
            if (!why && !deleted_host_edges.count(he))
                why = "dangling condition fails: edge " + std::to_string(he) +
                      " would lose node " + std::to_string(h);
        };
        host.for_each_out_edge(h, check);
        host.for_each_in_edge(h, check);
        if (why)
            return why;
    }
    return std::nullopt;
}

std::vector<GraphMorphism> find_matches(const Rule& rule, const TypedGraph& host,
                                        const MatchOptions& options)
{
    std::vector<GraphMorphism> out;
    bool deleting = !rule.is_production();
    for_each_monomorphism(rule.lhs, host, rule.nacs, options, [&](const GraphMorphism& m) {
        if (!deleting || !match_violation(rule, host, m))
            out.push_back(m);
        return true;
    });
    return out;
}

void apply_rule_in_place(TypedGraph& host, const Rule& rule, const GraphMorphism& m,
                         GraphMorphism* comatch)
{
    if (auto why = match_violation(rule, host, m))
        throw ApplicationError("rule '" + rule.name + "': " + *why);

    // Delete L \ K, edges first so nodes are bare when removed.
    std::set<ElementId> deleted = rule.deleted_elements();
    for (ElementId d : deleted)
        if (rule.lhs.is_edge(d))
            host.remove_element(m.edge_image(d));
    for (ElementId d : deleted)
        if (rule.lhs.is_node(d))
            host.remove_element(m.node_image(d));

    // The comatch R -> host: preserved elements land on their match images
    // (through K), created ones on fresh hosts.
    GraphMorphism co;
    for (const auto& [k, r] : rule.to_rhs.node_map)
        co.node_map.emplace(r, m.node_image(rule.to_lhs.node_image(k)));
    for (const auto& [k, r] : rule.to_rhs.edge_map)
        co.edge_map.emplace(r, m.edge_image(rule.to_lhs.edge_image(k)));

    // Create R \ K, nodes first, both in the rule graph's insertion order so
    // fresh ids are assigned deterministically.
    std::set<ElementId> created = rule.created_elements();
    rule.rhs.for_each_node([&](ElementId r) {
        if (created.count(r))
            co.node_map.emplace(r, host.add_node(rule.rhs.node_type(r)));
    });
    rule.rhs.for_each_edge([&](ElementId r) {
        if (!created.count(r))
            return;
        ElementId src = co.node_image(rule.rhs.edge_src(r));
        ElementId tgt = co.node_image(rule.rhs.edge_tgt(r));
        co.edge_map.emplace(r, host.add_edge(rule.rhs.edge_type(r), src, tgt));
    });

    if (comatch)
        *comatch = std::move(co);
}

RuleApplication apply_rule(const TypedGraph& host, const Rule& rule, const GraphMorphism& m)
{
    RuleApplication out{host, {}};
    apply_rule_in_place(out.result, rule, m, &out.comatch);
    return out;
}

} // namespace mvtgg
