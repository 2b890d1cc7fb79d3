#include "mvtgg/type_graph.hpp"

#include "mvtgg/errors.hpp"

namespace mvtgg {

NodeTypeId TypeGraph::add_node_type(std::string name)
{
    if (name.empty())
        throw InputError("node type name must not be empty");
    if (node_index_.count(name))
        throw InputError("duplicate node type name: " + name);
    NodeTypeId id = static_cast<NodeTypeId>(node_names_.size());
    node_index_.emplace(name, id);
    node_names_.push_back(std::move(name));
    return id;
}

EdgeTypeId TypeGraph::add_edge_type(std::string name, NodeTypeId src, NodeTypeId tgt)
{
    if (name.empty())
        throw InputError("edge type name must not be empty");
    if (edge_index_.count(name))
        throw InputError("duplicate edge type name: " + name);
    if (src >= node_names_.size() || tgt >= node_names_.size())
        throw InputError("edge type '" + name + "' references an unknown node type");
    EdgeTypeId id = static_cast<EdgeTypeId>(edge_types_.size());
    edge_index_.emplace(name, id);
    edge_types_.push_back(EdgeType{std::move(name), src, tgt});
    return id;
}

std::optional<NodeTypeId> TypeGraph::find_node_type(std::string_view name) const
{
    auto it = node_index_.find(std::string(name));
    if (it == node_index_.end())
        return std::nullopt;
    return it->second;
}

std::optional<EdgeTypeId> TypeGraph::find_edge_type(std::string_view name) const
{
    auto it = edge_index_.find(std::string(name));
    if (it == edge_index_.end())
        return std::nullopt;
    return it->second;
}

NodeTypeId TypeGraph::node_type(std::string_view name) const
{
    if (auto t = find_node_type(name))
        return *t;
    throw InputError("unknown node type: " + std::string(name));
}

EdgeTypeId TypeGraph::edge_type(std::string_view name) const
{
    if (auto t = find_edge_type(name))
        return *t;
    throw InputError("unknown edge type: " + std::string(name));
}

const std::string& TypeGraph::node_type_name(NodeTypeId t) const
{
    if (t >= node_names_.size())
        throw InputError("node type id out of range");
    return node_names_[t];
}

const std::string& TypeGraph::edge_type_name(EdgeTypeId t) const
{
    if (t >= edge_types_.size())
        throw InputError("edge type id out of range");
    return edge_types_[t].name;
}

NodeTypeId TypeGraph::edge_src(EdgeTypeId t) const
{
    if (t >= edge_types_.size())
        throw InputError("edge type id out of range");
    return edge_types_[t].src;
}

NodeTypeId TypeGraph::edge_tgt(EdgeTypeId t) const
{
    if (t >= edge_types_.size())
        throw InputError("edge type id out of range");
    return edge_types_[t].tgt;
}

bool TypeGraph::operator==(const TypeGraph& other) const
{
    if (node_names_ != other.node_names_)
        return false;
    if (edge_types_.size() != other.edge_types_.size())
        return false;
    for (std::size_t i = 0; i < edge_types_.size(); ++i) {
        const EdgeType& a = edge_types_[i];
        const EdgeType& b = other.edge_types_[i];
        if (a.name != b.name || a.src != b.src || a.tgt != b.tgt)
            return false;
    }
    return true;
}

} // namespace mvtgg
