#pragma once

#include "mvtgg/mvm.hpp"
#include "mvtgg/tgg.hpp"

#include <memory>
#include <unordered_map>
#include <vector>

namespace mvtgg {

// An original-typed graph re-expressed over the adapted type graph: every
// element becomes a structural node, edges additionally get their src@/tgt@
// representation edges. Bookkeeping marks and version links do not occur in
// encodings — versions enter only through the model's annotations.
struct MvEncoding {
    TypedGraph graph;
    std::unordered_map<ElementId, ElementId> rep_of; // original element -> node
};

MvEncoding mv_encode(const TypedGraph& g, const AdaptedTypeInfo& info);

// A forward rule lifted to the multi-version level. Structurally it is an
// ordinary production on the adapted graph (no marks, no version links); the
// bookkeeping of the single-version form is replaced by the applicability
// version set computed per match, and by the presence/untranslated updates
// performed on application.
struct MVForwardRule {
    std::string name;
    std::shared_ptr<const ForwardRule> original;
    AdaptedTypeInfo info;
    TypedGraph pattern; // encoded forward pattern (subgraph of rhs, shared ids)
    TypedGraph rhs;     // encoded rule graph

    // Structural pattern nodes (in the original pattern's element order):
    std::vector<ElementId> all_nodes;
    std::vector<ElementId> translated_nodes; // reps of mark-consuming elements
    std::vector<ElementId> context_nodes;    // the rest
    // Structural rhs nodes the rule creates, in creation order.
    std::vector<ElementId> created_nodes;

    std::unordered_map<ElementId, ElementId> rep_of;  // rule element -> node
    std::unordered_map<ElementId, ElementId> elem_of; // node -> rule element

    Rule core; // pattern -> rhs production on the adapted graph

    bool degenerate() const { return translated_nodes.empty(); }
};

MVForwardRule adapt_forward_rule(const ForwardRule& fr, const AdaptedTypeInfo& info);
std::vector<MVForwardRule> adapt_forward_rules(const std::vector<ForwardRule>& rules,
                                               const AdaptedTypeInfo& info);

// The versions in which applying the rule at this match is justified: the
// match must exist there (presence of every pattern node), the elements to
// be translated must still await translation, and the context must already
// be translated (its untranslated versions are excluded).
VersionSet applicable_versions(const MultiVersionModel& mvm, const MVForwardRule& rule,
                               const GraphMorphism& match);

// Structural matches of the rule pattern in the model. Matches whose
// translated images are translated everywhere (empty untranslated set) are
// pruned early; the caller still has to check applicable_versions.
std::vector<GraphMorphism> find_mv_matches(const MVForwardRule& rule,
                                           const MultiVersionModel& mvm);

struct MvApplication {
    GraphMorphism comatch;            // rhs -> model graph
    VersionSet versions;              // the version set it applied under
    std::vector<ElementId> created;   // created structural nodes
};

// Applies the rule at the match: rewrites the graph, gives created
// structural nodes fresh represented-element ids and presence = P, and
// removes P from the untranslated sets of the translated images. Throws
// ApplicationError when the match is invalid or P is empty.
MvApplication apply_mv_rule(MultiVersionModel& mvm, const MVForwardRule& rule,
                            const GraphMorphism& match);

// Lowers a multi-version match to a single-version match of the original
// forward rule's pattern, expressed in represented-element ids (suitable for
// the per-version projections).
GraphMorphism project_match(const MVForwardRule& rule, const GraphMorphism& mv_match,
                            const MultiVersionModel& mvm);

} // namespace mvtgg
