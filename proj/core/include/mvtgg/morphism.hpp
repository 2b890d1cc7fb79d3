#pragma once

#include "mvtgg/ids.hpp"
#include "mvtgg/typed_graph.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mvtgg {

// A mapping between the elements of two typed graphs. The struct itself is
// just the two id maps; which graphs it relates is supplied at validation or
// use sites, so morphisms can be stored and copied freely.
struct GraphMorphism {
    std::unordered_map<ElementId, ElementId> node_map;
    std::unordered_map<ElementId, ElementId> edge_map;

    ElementId node_image(ElementId n) const;
    ElementId edge_image(ElementId e) const;
    // Image of any element, nodes and edges alike; kNoElement if unmapped.
    ElementId image(ElementId x) const;

    std::size_t size() const { return node_map.size() + edge_map.size(); }

    // Binding as (from-element, to-element) pairs sorted by from-element —
    // the canonical order used in logs and error messages.
    std::vector<std::pair<ElementId, ElementId>> sorted_pairs() const;
};

// Checks that m is a graph morphism from `from` to `to`: total on `from`,
// type preserving, and commuting with source/target. With `require_mono`,
// additionally injective. Returns a description of the first violation, or
// nullopt if the morphism is valid.
std::optional<std::string> morphism_violation(const GraphMorphism& m,
                                              const TypedGraph& from,
                                              const TypedGraph& to,
                                              bool require_mono);

bool is_morphism(const GraphMorphism& m, const TypedGraph& from, const TypedGraph& to);
bool is_monomorphism(const GraphMorphism& m, const TypedGraph& from, const TypedGraph& to);

// g after f (apply f, then g).
GraphMorphism compose(const GraphMorphism& g, const GraphMorphism& f);

// Identity on all elements of g.
GraphMorphism identity_morphism(const TypedGraph& g);

} // namespace mvtgg
