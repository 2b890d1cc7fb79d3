#pragma once

#include "mvtgg/history.hpp"
#include "mvtgg/triple_type_graph.hpp"
#include "mvtgg/typed_graph.hpp"
#include "mvtgg/version_graph.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

namespace mvtgg {

// The adapted (multi-version) type graph derived from a triple type graph,
// plus lookup tables between the two levels.
//
// Every original node type and every original edge type becomes a node type
// ("structural" node types); original edges are reified so that their
// presence can differ from their endpoints'. Src/tgt of a reified edge are
// recorded by "src@<edge>" / "tgt@<edge>" edges. A "version" node type with
// "suc" edges carries the version graph inside the model. Presence is
// encoded by "cv@<type>" (created, visible from here on) and "dv@<type>"
// (deleted from here on) edges into version nodes; translation bookkeeping
// by "ucv@<type>" / "udv@<type>" edges, which exist for source-domain types
// only.
struct AdaptedTypeInfo {
    enum class EdgeKind : std::uint8_t { suc, src_rep, tgt_rep, cv, dv, ucv, udv };

    std::shared_ptr<const TripleTypeGraph> original;
    std::shared_ptr<const TypeGraph> adapted;

    NodeTypeId version_type = kNoType;
    EdgeTypeId suc_type = kNoType;

    // original node/edge type -> adapted structural node type
    std::vector<NodeTypeId> node_rep;
    std::vector<NodeTypeId> edge_rep;
    // original edge type -> adapted src@/tgt@ edge types
    std::vector<EdgeTypeId> src_rep;
    std::vector<EdgeTypeId> tgt_rep;
    // adapted structural node type -> version link edge types (kNoType where
    // a kind does not exist, e.g. ucv on non-source types)
    std::vector<EdgeTypeId> cv;
    std::vector<EdgeTypeId> dv;
    std::vector<EdgeTypeId> ucv;
    std::vector<EdgeTypeId> udv;

    // reverse direction, per adapted type
    struct NodeOrigin {
        bool from_node_type;
        std::uint32_t original_type; // NodeTypeId or EdgeTypeId
    };
    std::vector<std::optional<NodeOrigin>> rep_origin; // nullopt for "version"
    std::vector<Domain> rep_domain;                    // valid where rep_origin is set
    std::vector<EdgeKind> edge_kind;
    std::vector<std::uint32_t> edge_target_type; // src/tgt_rep: original edge
                                                 // type; cv..udv: adapted node type

    bool is_structural(NodeTypeId adapted_type) const
    {
        return adapted_type < rep_origin.size() && rep_origin[adapted_type].has_value();
    }
    bool is_version_link(EdgeTypeId t) const
    {
        EdgeKind k = edge_kind.at(t);
        return k == EdgeKind::cv || k == EdgeKind::dv || k == EdgeKind::ucv ||
               k == EdgeKind::udv;
    }
    bool is_rep_edge(EdgeTypeId t) const
    {
        EdgeKind k = edge_kind.at(t);
        return k == EdgeKind::src_rep || k == EdgeKind::tgt_rep;
    }
};

// Builds the adapted type graph. Original type names must not contain '@',
// must not be named "version"/"suc", and node and edge type names must be
// disjoint (both become node types).
AdaptedTypeInfo adapt_type_graph(std::shared_ptr<const TripleTypeGraph> original);

// A model consolidating every version of a history into one graph typed over
// the adapted type graph. Structural nodes are tied to the element ids of
// the represented original elements by the origin bijection; each structural
// node carries a presence set p (in which versions the element exists) and,
// for source-domain elements, an untranslated set u (in which versions it
// still awaits translation).
class MultiVersionModel {
public:
    // Fresh empty model: builds the version nodes and suc edges.
    MultiVersionModel(AdaptedTypeInfo info, VersionGraph versions);
    // Adopt a pre-built adapted graph (loader path); validates coherence.
    MultiVersionModel(AdaptedTypeInfo info, VersionGraph versions, TypedGraph graph,
                      std::unordered_map<ElementId, ElementId> origin,
                      std::vector<ElementId> version_nodes);

    MultiVersionModel(const MultiVersionModel& o);
    MultiVersionModel& operator=(const MultiVersionModel& o);
    MultiVersionModel(MultiVersionModel&&) = default;
    MultiVersionModel& operator=(MultiVersionModel&&) = default;

    // Consolidation: one structural node per universe element, presence from
    // version membership. Untranslated sets start empty.
    static MultiVersionModel consolidate(const VersionHistory& history);

    const AdaptedTypeInfo& info() const { return info_; }
    const VersionGraph& versions() const { return versions_; }
    const TypedGraph& graph() const { return graph_; }
    // The transformation machinery rewrites the graph directly; everyone
    // else should treat it as read-only.
    TypedGraph& graph() { return graph_; }

    ElementId version_node(std::uint32_t idx) const;
    std::optional<std::uint32_t> version_of_node(ElementId id) const;
    bool is_version_node(ElementId id) const;
    bool is_structural_node(ElementId id) const;
    Domain domain_of(ElementId structural_node) const;

    std::size_t structural_node_count() const;

    // ---- origin bijection -------------------------------------------------

    ElementId origin(ElementId structural_node) const;
    std::optional<ElementId> node_for_origin(ElementId original_element) const;
    ElementId fresh_origin() { return next_origin_++; }
    void set_origin(ElementId structural_node, ElementId original_element);

    // ---- structural construction ------------------------------------------

    ElementId add_node_rep(NodeTypeId original_type, ElementId origin_id);
    // Creates the reified edge node together with its src@/tgt@ edges.
    ElementId add_edge_rep(EdgeTypeId original_type, ElementId src_node, ElementId tgt_node,
                           ElementId origin_id);
    // Endpoints of a reified edge (follows the src@/tgt@ edges).
    ElementId rep_edge_src(ElementId edge_rep_node) const;
    ElementId rep_edge_tgt(ElementId edge_rep_node) const;

    // ---- version annotations ----------------------------------------------

    VersionSet presence(ElementId structural_node) const;
    // Untranslated set; empty for non-source elements.
    VersionSet untranslated(ElementId structural_node) const;

    // Rewrites the cv/dv (resp. ucv/udv) edges so that the annotation equals
    // exactly the given set. Requires a tree version graph.
    void set_presence(ElementId structural_node, const VersionSet& versions);
    void set_untranslated(ElementId structural_node, const VersionSet& versions);

    // Fresh translation state: u := p on all source-domain elements (the
    // whole model is untranslated everywhere it exists).
    void init_bookkeeping();

    // ---- projection -------------------------------------------------------

    // The single-version model of version index t: all original elements
    // whose presence contains t, under their original ids, without marks.
    TypedGraph project_at(std::uint32_t t) const;
    // Same, plus bookkeeping: a source element is marked untranslated at t
    // iff t is in its untranslated set.
    TypedGraph project_bookkeeping_at(std::uint32_t t) const;

    // Structural coherence check (origin bijection total on structural
    // nodes, reified edges have exactly one src@ and one tgt@, suc edges
    // mirror the version graph); throws InputError.
    void validate() const;

private:
    VersionSet links_to_set(ElementId node, EdgeTypeId created_link,
                            EdgeTypeId deleted_link) const;
    void write_boundary_links(ElementId node, EdgeTypeId created_link, EdgeTypeId deleted_link,
                              const VersionSet& versions);
    void invalidate_annotations(ElementId node) const;
    EdgeTypeId link_type(ElementId node, AdaptedTypeInfo::EdgeKind kind) const;
    TypedGraph project_impl(std::uint32_t t, bool with_bookkeeping) const;

    AdaptedTypeInfo info_;
    VersionGraph versions_;
    TypedGraph graph_;
    std::vector<ElementId> version_nodes_;                    // by version index
    std::unordered_map<ElementId, std::uint32_t> node_version_;
    std::unordered_map<ElementId, ElementId> origin_;         // structural node -> element
    std::unordered_map<ElementId, ElementId> origin_inverse_; // element -> structural node
    ElementId next_origin_ = 1;

    struct AnnotationCache {
        std::unordered_map<ElementId, VersionSet> presence;
        std::unordered_map<ElementId, VersionSet> untranslated;
    };
    mutable AnnotationCache cache_;
    mutable std::mutex cache_mutex_;
};

} // namespace mvtgg
