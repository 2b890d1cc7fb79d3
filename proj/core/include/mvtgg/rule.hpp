#pragma once

#include "mvtgg/matching.hpp"
#include "mvtgg/morphism.hpp"
#include "mvtgg/typed_graph.hpp"

#include <set>
#include <string>
#include <vector>

namespace mvtgg {

// A span rule L <- K -> R with monomorphic legs, applied by
// delete-then-glue with the dangling condition (no deletion of a node whose
// incident edges survive outside the match).
struct Rule {
    std::string name;
    TypedGraph lhs;
    TypedGraph glue; // K
    TypedGraph rhs;
    GraphMorphism to_lhs; // K -> L
    GraphMorphism to_rhs; // K -> R
    std::vector<Nac> nacs; // embeddings L -> N

    // A production deletes nothing: K -> L is bijective.
    bool is_production() const;

    // Elements of L that the rule deletes / elements of R that it creates.
    std::set<ElementId> deleted_elements() const;
    std::set<ElementId> created_elements() const;

    // Throws InputError unless both legs are valid monomorphisms over
    // matching type graphs and every NAC embedding is a valid monomorphism.
    void validate() const;

    // Convenience for the common "embedded" shape used throughout this code
    // base: R is given as one graph and L = K is its restriction to
    // `preserved`, with identity legs. Such rules are productions by
    // construction and L shares element ids with R.
    static Rule from_embedded(std::string name, const TypedGraph& rhs,
                              const std::set<ElementId>& preserved);
};

struct RuleApplication {
    TypedGraph result;
    GraphMorphism comatch; // R -> result
};

// Checks that m is a valid monomorphic match for rule.lhs in host that
// satisfies the NACs and the dangling condition; returns a reason string if
// not (used both for validation before apply and for applicability probes).
std::optional<std::string> match_violation(const Rule& rule, const TypedGraph& host,
                                           const GraphMorphism& m);

// All valid matches of the rule in host, in deterministic enumeration order.
std::vector<GraphMorphism> find_matches(const Rule& rule, const TypedGraph& host,
                                        const MatchOptions& options = {});

// Applies the rule at m. Throws ApplicationError if m is not a valid match.
// Marks: preserved elements keep their marks, created elements start
// unmarked; callers adjust marks afterwards when the formalism asks for it.
RuleApplication apply_rule(const TypedGraph& host, const Rule& rule, const GraphMorphism& m);

// In-place variant for engine loops; fills *comatch (R -> host) if nonnull.
void apply_rule_in_place(TypedGraph& host, const Rule& rule, const GraphMorphism& m,
                         GraphMorphism* comatch = nullptr);

} // namespace mvtgg
