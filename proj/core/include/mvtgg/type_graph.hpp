#pragma once

#include "mvtgg/ids.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mvtgg {

// A type graph (metamodel): named node types plus named edge types with fixed
// source and target node types. Names are unique within their kind; ids are
// dense and assigned in registration order, so two type graphs built by the
// same sequence of calls are identical.
class TypeGraph {
public:
    NodeTypeId add_node_type(std::string name);
    EdgeTypeId add_edge_type(std::string name, NodeTypeId src, NodeTypeId tgt);

    std::size_t node_type_count() const { return node_names_.size(); }
    std::size_t edge_type_count() const { return edge_types_.size(); }

    // Lookup by name; the find_* forms return nullopt for unknown names, the
    // plain forms throw InputError.
    std::optional<NodeTypeId> find_node_type(std::string_view name) const;
    std::optional<EdgeTypeId> find_edge_type(std::string_view name) const;
    NodeTypeId node_type(std::string_view name) const;
    EdgeTypeId edge_type(std::string_view name) const;

    const std::string& node_type_name(NodeTypeId t) const;
    const std::string& edge_type_name(EdgeTypeId t) const;
    NodeTypeId edge_src(EdgeTypeId t) const;
    NodeTypeId edge_tgt(EdgeTypeId t) const;

    // Structural equality (same types, same names, same endpoints, same
    // order). Used to decide whether two TypedGraphs are compatible when the
    // type graph instances are distinct objects.
    bool operator==(const TypeGraph& other) const;

private:
    struct EdgeType {
        std::string name;
        NodeTypeId src;
        NodeTypeId tgt;
    };

    std::vector<std::string> node_names_;
    std::vector<EdgeType> edge_types_;
    std::unordered_map<std::string, NodeTypeId> node_index_;
    std::unordered_map<std::string, EdgeTypeId> edge_index_;
};

} // namespace mvtgg
