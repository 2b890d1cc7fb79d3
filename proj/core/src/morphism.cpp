#include "mvtgg/morphism.hpp"

#include "mvtgg/errors.hpp"

#include <algorithm>
#include <unordered_set>

namespace mvtgg {

ElementId GraphMorphism::node_image(ElementId n) const
{
    auto it = node_map.find(n);
    return it == node_map.end() ? kNoElement : it->second;
}

ElementId GraphMorphism::edge_image(ElementId e) const
{
    auto it = edge_map.find(e);
    return it == edge_map.end() ? kNoElement : it->second;
}

ElementId GraphMorphism::image(ElementId x) const
{
    if (ElementId n = node_image(x); n != kNoElement)
        return n;
    return edge_image(x);
}

std::vector<std::pair<ElementId, ElementId>> GraphMorphism::sorted_pairs() const
{
    std::vector<std::pair<ElementId, ElementId>> out;
    out.reserve(size());
    out.insert(out.end(), node_map.begin(), node_map.end());
    out.insert(out.end(), edge_map.begin(), edge_map.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::string> morphism_violation(const GraphMorphism& m, const TypedGraph& from,
                                              const TypedGraph& to, bool require_mono)
{
    if (!from.same_type_graph(to))
        return "graphs are typed over different type graphs";

    std::optional<std::string> result;
    auto fail = [&](std::string why) {
        if (!result)
            result = std::move(why);
    };

    from.for_each_node([&](ElementId n) {
        ElementId img = m.node_image(n);
        if (img == kNoElement) {
            fail("node " + std::to_string(n) + " has no image");
            return;
        }
        if (!to.is_node(img)) {
            fail("node " + std::to_string(n) + " maps to non-node " + std::to_string(img));
            return;
        }
        if (to.node_type(img) != from.node_type(n))
            fail("node " + std::to_string(n) + " maps to node of different type");
    });
    if (result)
        return result;

    from.for_each_edge([&](ElementId e) {
        ElementId img = m.edge_image(e);
        if (img == kNoElement) {
            fail("edge " + std::to_string(e) + " has no image");
            return;
        }
        if (!to.is_edge(img)) {
            fail("edge " + std::to_string(e) + " maps to non-edge " + std::to_string(img));
            return;
        }
        if (to.edge_type(img) != from.edge_type(e)) {
            fail("edge " + std::to_string(e) + " maps to edge of different type");
            return;
        }
        if (to.edge_src(img) != m.node_image(from.edge_src(e)) ||
            to.edge_tgt(img) != m.node_image(from.edge_tgt(e)))
            fail("edge " + std::to_string(e) + " does not commute with source/target");
    });
    if (result)
        return result;

    if (m.node_map.size() != from.node_count() || m.edge_map.size() != from.edge_count())
        return std::string("morphism maps elements outside its domain");

    if (require_mono) {
        std::unordered_set<ElementId> seen;
        for (const auto& [x, y] : m.node_map)
            if (!seen.insert(y).second)
                return "two nodes share the image " + std::to_string(y);
        seen.clear();
        for (const auto& [x, y] : m.edge_map)
            if (!seen.insert(y).second)
                return "two edges share the image " + std::to_string(y);
    }
    return std::nullopt;
}

bool is_morphism(const GraphMorphism& m, const TypedGraph& from, const TypedGraph& to)
{
    return !morphism_violation(m, from, to, false).has_value();
}

bool is_monomorphism(const GraphMorphism& m, const TypedGraph& from, const TypedGraph& to)
{
    return !morphism_violation(m, from, to, true).has_value();
}

GraphMorphism compose(const GraphMorphism& g, const GraphMorphism& f)
{
    GraphMorphism out;
    out.node_map.reserve(f.node_map.size());
    out.edge_map.reserve(f.edge_map.size());
    for (const auto& [x, y] : f.node_map) {
        ElementId z = g.node_image(y);
        if (z == kNoElement)
            throw InputError("composition undefined on node " + std::to_string(x));
        out.node_map.emplace(x, z);
    }
    for (const auto& [x, y] : f.edge_map) {
        ElementId z = g.edge_image(y);
        if (z == kNoElement)
            throw InputError("composition undefined on edge " + std::to_string(x));
        out.edge_map.emplace(x, z);
    }
    return out;
}

GraphMorphism identity_morphism(const TypedGraph& g)
{
    GraphMorphism out;
    g.for_each_node([&](ElementId n) { out.node_map.emplace(n, n); });
    g.for_each_edge([&](ElementId e) { out.edge_map.emplace(e, e); });
    return out;
}

} // namespace mvtgg
