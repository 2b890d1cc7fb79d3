#pragma once

#include "mvtgg/rule.hpp"
#include "mvtgg/triple_type_graph.hpp"
#include "mvtgg/typed_graph.hpp"

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace mvtgg {

// A triple graph grammar rule in embedded form: the rule graph R (spanning
// all three domains) plus the set of preserved element ids; everything else
// is created. TGG rules never delete. An axiom has an empty left-hand side.
struct TGGRule {
    std::string name;
    bool axiom = false;
    std::shared_ptr<const TripleTypeGraph> types;
    TypedGraph rhs;
    std::set<ElementId> preserved;

    TypedGraph lhs() const { return rhs.restricted_to(preserved); }
    Rule core() const { return Rule::from_embedded(name, rhs, preserved); }
    std::set<ElementId> created() const;

    // Structural checks (ids exist, edge-closed preserved set, axiom has
    // empty lhs, rule graph carries no bookkeeping marks); throws InputError.
    void validate() const;
};

// The forward operationalization of a TGG rule: the pattern additionally
// contains the source elements the rule would have created, and application
// only builds the correspondence and target parts. Bookkeeping marks steer
// applicability: the `translated` elements of the pattern must still be
// marked (not yet translated), everything else in the pattern must be
// unmarked; applying the rule clears the marks on the matched translated
// elements.
struct ForwardRule {
    std::string name;
    std::shared_ptr<const TripleTypeGraph> types;
    TypedGraph pattern;             // L and the source part of R, shared ids with rhs
    TypedGraph rhs;                 // full rule graph
    std::set<ElementId> translated; // pattern ids whose marks this rule consumes
    Rule core;                      // pattern -> rhs production

    // A degenerate forward rule consumes no marks; repeated application
    // would never terminate, so the engine refuses such rule sets.
    bool degenerate() const { return translated.empty(); }
};

ForwardRule derive_forward_rule(const TGGRule& rule);
std::vector<ForwardRule> derive_forward_rules(const std::vector<TGGRule>& rules);

// Start state of a forward translation: a copy of the source model with
// every element marked untranslated. Throws InputError if the model contains
// non-source-domain elements.
TypedGraph init_forward(const TypedGraph& source_model, const TripleTypeGraph& types);

// The bookkeeping set: ids of the elements still marked untranslated.
std::set<ElementId> bookkeeping_set(const TypedGraph& g);

// True when nothing is left to translate.
bool translation_complete(const TypedGraph& g);

// Match options whose element filter realizes the mark constraints of fr.
MatchOptions forward_match_options(const ForwardRule& fr, const TypedGraph& host);

// Check a given pattern match against structure and mark constraints.
std::optional<std::string> forward_match_violation(const ForwardRule& fr, const TypedGraph& host,
                                                   const GraphMorphism& m);

std::vector<GraphMorphism> find_forward_matches(const ForwardRule& fr, const TypedGraph& host);

// Applies fr at m: creates the correspondence/target parts and clears the
// marks on the matched translated elements. Throws ApplicationError for
// invalid matches.
void apply_forward_in_place(TypedGraph& host, const ForwardRule& fr, const GraphMorphism& m,
                            GraphMorphism* comatch = nullptr);
TypedGraph apply_forward(const TypedGraph& host, const ForwardRule& fr, const GraphMorphism& m);

} // namespace mvtgg
