#pragma once

#include "mvtgg/type_graph.hpp"
#include "mvtgg/typed_graph.hpp"

#include <memory>
#include <string>
#include <vector>

namespace mvtgg {

enum class Domain : std::uint8_t { source, correspondence, target };

const char* domain_name(Domain d);

// Correspondence node types are linked to the two outer domains by edge
// types whose names carry these reserved prefixes.
inline constexpr const char* kCorrSourcePrefix = "corrS";
inline constexpr const char* kCorrTargetPrefix = "corrT";

// A type graph partitioned into source, correspondence and target domains.
// Source and target edge types stay inside their domain; every
// correspondence node type has exactly one corrS-prefixed link edge type
// into the source domain and one corrT-prefixed link into the target domain.
class TripleTypeGraph {
public:
    TripleTypeGraph();

    NodeTypeId add_node_type(std::string name, Domain d);
    EdgeTypeId add_edge_type(std::string name, NodeTypeId src, NodeTypeId tgt, Domain d);

    const std::shared_ptr<const TypeGraph>& graph() const { return graph_view_; }
    const TypeGraph& types() const { return *graph_; }

    Domain node_domain(NodeTypeId t) const;
    Domain edge_domain(EdgeTypeId t) const;
    Domain element_domain(const TypedGraph& g, ElementId x) const;

    // Correspondence-domain edge type pointing into the source (corrS) or
    // target (corrT) domain.
    bool is_source_link(EdgeTypeId t) const;
    bool is_target_link(EdgeTypeId t) const;

    // Checks the partition rules above; throws InputError with the first
    // offending type.
    void validate() const;

private:
    std::shared_ptr<TypeGraph> graph_;
    std::shared_ptr<const TypeGraph> graph_view_;
    std::vector<Domain> node_domains_;
    std::vector<Domain> edge_domains_;
};

} // namespace mvtgg
