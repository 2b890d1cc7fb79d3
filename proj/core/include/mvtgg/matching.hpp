#pragma once

#include "mvtgg/morphism.hpp"
#include "mvtgg/typed_graph.hpp"

#include <functional>
#include <vector>

namespace mvtgg {

// A negative application condition: a pattern extension N together with an
// embedding of the match pattern L into N (as id maps). A match m: L -> host
// violates the NAC iff m extends to a monomorphism N -> host along the
// embedding.
struct Nac {
    TypedGraph graph;        // N
    GraphMorphism embedding; // L -> N
};

struct MatchOptions {
    // Optional admissibility predicate (pattern element, host element) for
    // both nodes and edges; candidates failing it are skipped. Used for the
    // bookkeeping mark constraints of forward rules, among other filters.
    std::function<bool(ElementId, ElementId)> element_filter;
    // Pre-bound pattern->host assignments the search must respect (seeds for
    // NAC extension checks and applicability probes).
    GraphMorphism seed;
};

// Enumerates the monomorphisms pattern -> host that satisfy the options and
// all NACs, invoking cb for each. cb returns false to stop early. The
// enumeration order is deterministic: pattern elements are processed in a
// connectivity-aware order fixed by the pattern alone, and host candidates
// are tried in ascending id order at every backtrack point, so for a given
// pattern and host the sequence of matches is always the same.
void for_each_monomorphism(const TypedGraph& pattern, const TypedGraph& host,
                           const std::vector<Nac>& nacs, const MatchOptions& options,
                           const std::function<bool(const GraphMorphism&)>& cb);

std::vector<GraphMorphism> find_monomorphisms(const TypedGraph& pattern, const TypedGraph& host,
                                              const std::vector<Nac>& nacs = {},
                                              const MatchOptions& options = {});

// First match in enumeration order, if any.
std::optional<GraphMorphism> find_monomorphism(const TypedGraph& pattern, const TypedGraph& host,
                                               const std::vector<Nac>& nacs = {},
                                               const MatchOptions& options = {});

} // namespace mvtgg
