#include "mvtgg/typed_graph.hpp"

#include <algorithm>
#include <string>

namespace mvtgg {

namespace {

std::string id_str(ElementId id) { return std::to_string(id); }

} // namespace

TypedGraph::TypedGraph(std::shared_ptr<const TypeGraph> types)
    : types_(std::move(types))
{
    if (!types_)
        throw InputError("typed graph needs a type graph");
    nodes_by_type_.resize(types_->node_type_count());
    edges_by_type_.resize(types_->edge_type_count());
}

bool TypedGraph::same_type_graph(const TypedGraph& other) const
{
    return types_ == other.types_ || *types_ == *other.types_;
}

ElementId TypedGraph::add_node(NodeTypeId type)
{
    ElementId id = next_id_++;
    insert_node(id, type);
    return id;
}

ElementId TypedGraph::add_node(std::string_view type_name)
{
    return add_node(types_->node_type(type_name));
}

ElementId TypedGraph::add_edge(EdgeTypeId type, ElementId src, ElementId tgt)
{
    ElementId id = next_id_++;
    insert_edge(id, type, src, tgt);
    return id;
}

ElementId TypedGraph::add_edge(std::string_view type_name, ElementId src, ElementId tgt)
{
    return add_edge(types_->edge_type(type_name), src, tgt);
}

void TypedGraph::add_node_with_id(ElementId id, NodeTypeId type)
{
    if (id == kNoElement)
        throw InputError("element id 0 is reserved");
    if (index_.count(id))
        throw InputError("duplicate element id: " + id_str(id));
    insert_node(id, type);
    reserve_ids_above(id);
}

void TypedGraph::add_edge_with_id(ElementId id, EdgeTypeId type, ElementId src, ElementId tgt)
{
    if (id == kNoElement)
        throw InputError("element id 0 is reserved");
    if (index_.count(id))
        throw InputError("duplicate element id: " + id_str(id));
    insert_edge(id, type, src, tgt);
    reserve_ids_above(id);
}

void TypedGraph::insert_node(ElementId id, NodeTypeId type)
{
    if (type >= types_->node_type_count())
        throw InputError("node type id out of range for node " + id_str(id));
    std::uint32_t slot = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(NodeRec{id, type, true, {}, {}});
    index_.emplace(id, Slot{slot, true});
    nodes_by_type_[type].push_back(slot);
    ++alive_nodes_;
}

void TypedGraph::insert_edge(ElementId id, EdgeTypeId type, ElementId src, ElementId tgt)
{
    if (type >= types_->edge_type_count())
        throw InputError("edge type id out of range for edge " + id_str(id));
    if (!is_node(src))
        throw InputError("edge " + id_str(id) + ": source " + id_str(src) + " is not a node");
    if (!is_node(tgt))
        throw InputError("edge " + id_str(id) + ": target " + id_str(tgt) + " is not a node");
    Slot ss = slot_of(src);
    Slot ts = slot_of(tgt);
    if (nodes_[ss.index].type != types_->edge_src(type) ||
        nodes_[ts.index].type != types_->edge_tgt(type))
        throw InputError("edge " + id_str(id) + " of type '" + types_->edge_type_name(type) +
                         "' connects nodes of the wrong types");
    std::uint32_t slot = static_cast<std::uint32_t>(edges_.size());
    edges_.push_back(EdgeRec{id, type, src, tgt, true});
    index_.emplace(id, Slot{slot, false});
    edges_by_type_[type].push_back(slot);
    nodes_[ss.index].out.push_back(slot);
    nodes_[ts.index].in.push_back(slot);
    ++alive_edges_;
}

void TypedGraph::remove_element(ElementId id)
{
    Slot s = slot_of(id);
    if (s.is_node) {
        NodeRec& n = nodes_[s.index];
        for (std::uint32_t eslot : n.out)
            if (edges_[eslot].alive)
                throw InputError("cannot remove node " + id_str(id) + ": edge " +
                                 id_str(edges_[eslot].id) + " is still attached");
        for (std::uint32_t eslot : n.in)
            if (edges_[eslot].alive)
                throw InputError("cannot remove node " + id_str(id) + ": edge " +
                                 id_str(edges_[eslot].id) + " is still attached");
        n.alive = false;
        n.out.clear();
        n.in.clear();
        --alive_nodes_;
    } else {
        EdgeRec& e = edges_[s.index];
        e.alive = false;
        auto detach = [&](std::vector<std::uint32_t>& list) {
            list.erase(std::remove(list.begin(), list.end(), s.index), list.end());
        };
        detach(nodes_[slot_of(e.src).index].out);
        detach(nodes_[slot_of(e.tgt).index].in);
        --alive_edges_;
    }
    index_.erase(id);
    marks_.erase(id);
}

void TypedGraph::set_mark(ElementId id, bool marked)
{
    if (!contains(id))
        throw InputError("cannot mark unknown element " + id_str(id));
    if (marked)
        marks_.insert(id);
    else
        marks_.erase(id);
}

void TypedGraph::clear_all_marks() { marks_.clear(); }

void TypedGraph::reserve_ids_above(ElementId bound)
{
    if (next_id_ <= bound)
        next_id_ = bound + 1;
}

bool TypedGraph::contains(ElementId id) const { return index_.count(id) != 0; }

bool TypedGraph::is_node(ElementId id) const
{
    auto it = index_.find(id);
    return it != index_.end() && it->second.is_node;
}

bool TypedGraph::is_edge(ElementId id) const
{
    auto it = index_.find(id);
    return it != index_.end() && !it->second.is_node;
}

TypedGraph::Slot TypedGraph::slot_of(ElementId id) const
{
    auto it = index_.find(id);
    if (it == index_.end())
        throw InputError("unknown element id: " + id_str(id));
    return it->second;
}

const TypedGraph::NodeRec& TypedGraph::node_rec(ElementId id) const
{
    Slot s = slot_of(id);
    if (!s.is_node)
        throw InputError("element " + id_str(id) + " is an edge, not a node");
    return nodes_[s.index];
}

const TypedGraph::EdgeRec& TypedGraph::edge_rec(ElementId id) const
{
    Slot s = slot_of(id);
    if (s.is_node)
        throw InputError("element " + id_str(id) + " is a node, not an edge");
    return edges_[s.index];
}

NodeTypeId TypedGraph::node_type(ElementId node) const { return node_rec(node).type; }
EdgeTypeId TypedGraph::edge_type(ElementId edge) const { return edge_rec(edge).type; }
ElementId TypedGraph::edge_src(ElementId edge) const { return edge_rec(edge).src; }
ElementId TypedGraph::edge_tgt(ElementId edge) const { return edge_rec(edge).tgt; }

bool TypedGraph::marked(ElementId id) const
{
    if (!contains(id))
        throw InputError("unknown element id: " + id_str(id));
    return marks_.count(id) != 0;
}

std::size_t TypedGraph::node_count_of_type(NodeTypeId t) const
{
    if (t >= nodes_by_type_.size())
        throw InputError("node type id out of range");
    std::size_t n = 0;
    for (std::uint32_t slot : nodes_by_type_[t])
        if (nodes_[slot].alive)
            ++n;
    return n;
}

std::size_t TypedGraph::edge_count_of_type(EdgeTypeId t) const
{
    if (t >= edges_by_type_.size())
        throw InputError("edge type id out of range");
    std::size_t n = 0;
    for (std::uint32_t slot : edges_by_type_[t])
        if (edges_[slot].alive)
            ++n;
    return n;
}

std::size_t TypedGraph::out_degree(ElementId node) const
{
    std::size_t n = 0;
    for (std::uint32_t slot : node_rec(node).out)
        if (edges_[slot].alive)
            ++n;
    return n;
}

std::size_t TypedGraph::in_degree(ElementId node) const
{
    std::size_t n = 0;
    for (std::uint32_t slot : node_rec(node).in)
        if (edges_[slot].alive)
            ++n;
    return n;
}

std::vector<ElementId> TypedGraph::marked_elements() const
{
    std::vector<ElementId> out(marks_.begin(), marks_.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ElementId> TypedGraph::node_ids() const
{
    std::vector<ElementId> out;
    out.reserve(alive_nodes_);
    for_each_node([&](ElementId id) { out.push_back(id); });
    return out;
}

std::vector<ElementId> TypedGraph::edge_ids() const
{
    std::vector<ElementId> out;
    out.reserve(alive_edges_);
    for_each_edge([&](ElementId id) { out.push_back(id); });
    return out;
}

bool TypedGraph::equals(const TypedGraph& other) const
{
    if (!same_type_graph(other))
        return false;
    if (alive_nodes_ != other.alive_nodes_ || alive_edges_ != other.alive_edges_ ||
        marks_.size() != other.marks_.size())
        return false;
    for (const NodeRec& n : nodes_) {
        if (!n.alive)
            continue;
        if (!other.is_node(n.id) || other.node_type(n.id) != n.type)
            return false;
    }
    for (const EdgeRec& e : edges_) {
        if (!e.alive)
            continue;
        if (!other.is_edge(e.id))
            return false;
        if (other.edge_type(e.id) != e.type || other.edge_src(e.id) != e.src ||
            other.edge_tgt(e.id) != e.tgt)
            return false;
    }
    for (ElementId m : marks_)
        if (!other.marks_.count(m))
            return false;
    return true;
}

TypedGraph TypedGraph::restricted_to(const std::set<ElementId>& keep) const
{
    TypedGraph out(types_);
    for (const NodeRec& n : nodes_)
        if (n.alive && keep.count(n.id))
            out.add_node_with_id(n.id, n.type);
    for (const EdgeRec& e : edges_) {
        if (!e.alive || !keep.count(e.id))
            continue;
        if (!keep.count(e.src) || !keep.count(e.tgt))
            throw InputError("restriction is not edge-closed: edge " + id_str(e.id) +
                             " kept without its endpoints");
        out.add_edge_with_id(e.id, e.type, e.src, e.tgt);
    }
    for (ElementId id : keep) {
        if (!contains(id))
            throw InputError("restriction names unknown element " + id_str(id));
        if (marks_.count(id))
            out.set_mark(id, true);
    }
    out.reserve_ids_above(next_id_ - 1);
    return out;
}

} // namespace mvtgg
