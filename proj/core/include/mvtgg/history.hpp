#pragma once

#include "mvtgg/triple_type_graph.hpp"
#include "mvtgg/typed_graph.hpp"
#include "mvtgg/version_graph.hpp"

#include <memory>
#include <unordered_map>
#include <vector>

namespace mvtgg {

// One version's changes relative to its parent. Element ids are global to
// the history: the same id in two versions means "the same element", and a
// deleted id may be re-added later (it is then the same element again, so
// kind, type and endpoints must agree).
struct Delta {
    struct NodeAdd {
        ElementId id;
        NodeTypeId type;
    };
    struct EdgeAdd {
        ElementId id;
        EdgeTypeId type;
        ElementId src;
        ElementId tgt;
    };
    std::vector<NodeAdd> add_nodes;
    std::vector<EdgeAdd> add_edges;
    std::vector<ElementId> del_elements;
};

// A version history of source models: an initial model plus one delta per
// further version, each relative to a single parent version (so the version
// graph is a tree). finalize() materializes every version's model.
class VersionHistory {
public:
    VersionHistory(std::shared_ptr<const TripleTypeGraph> types, VersionId initial,
                   TypedGraph base_model);

    void add_version(VersionId id, VersionId parent, Delta delta);
    void finalize();

    const std::shared_ptr<const TripleTypeGraph>& triple() const { return types_; }
    const VersionGraph& version_graph() const;
    VersionId initial_version() const { return versions_.empty() ? 0 : versions_[0].id; }

    const TypedGraph& model(VersionId id) const;
    const TypedGraph& model_at(std::uint32_t idx) const;

    std::size_t version_count() const { return versions_.size(); }
    // Version ids in insertion order (== version graph index order).
    std::vector<VersionId> version_ids() const;
    VersionId parent_of(VersionId id) const; // initial version throws
    const Delta& delta_of(VersionId id) const;

    // What an element id denotes, globally across all versions.
    struct ElementInfo {
        bool is_node;
        NodeTypeId node_type;
        EdgeTypeId edge_type;
        ElementId src;
        ElementId tgt;
    };
    const std::unordered_map<ElementId, ElementInfo>& universe() const;
    ElementId max_element_id() const { return max_element_id_; }

    // Sum of all per-version model sizes (the workload a version-by-version
    // translation has to process).
    std::size_t total_model_elements() const;

private:
    struct VersionRec {
        VersionId id;
        VersionId parent;
        Delta delta;
    };

    void require_finalized() const;
    void record_universe(const TypedGraph& model);

    std::shared_ptr<const TripleTypeGraph> types_;
    std::vector<VersionRec> versions_;
    TypedGraph base_;
    std::vector<TypedGraph> models_;
    VersionGraph vgraph_;
    std::unordered_map<ElementId, ElementInfo> universe_;
    ElementId max_element_id_ = 0;
    bool finalized_ = false;
};

} // namespace mvtgg
