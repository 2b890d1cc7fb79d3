#pragma once

#include "mvtgg/errors.hpp"
#include "mvtgg/ids.hpp"
#include "mvtgg/type_graph.hpp"

#include <memory>
#include <set>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mvtgg {

// A finite graph typed over a TypeGraph, with a bookkeeping mark on each
// element (node or edge). Nodes and edges share one id space; ids are stable
// across copies and never reused after removal, so rewrite logs can name
// elements unambiguously.
//
// Iteration (for_each_*) visits elements in insertion order, which together
// with the never-reused ids makes every algorithm built on top of this class
// deterministic for a given construction sequence.
class TypedGraph {
public:
    explicit TypedGraph(std::shared_ptr<const TypeGraph> types);

    const TypeGraph& types() const { return *types_; }
    const std::shared_ptr<const TypeGraph>& type_graph() const { return types_; }

    // True when other is typed over the same metamodel (same object or
    // structurally equal), i.e. type ids mean the same thing in both graphs.
    bool same_type_graph(const TypedGraph& other) const;

    // ---- construction -----------------------------------------------------

    ElementId add_node(NodeTypeId type);
    ElementId add_node(std::string_view type_name);
    ElementId add_edge(EdgeTypeId type, ElementId src, ElementId tgt);
    ElementId add_edge(std::string_view type_name, ElementId src, ElementId tgt);

    // Explicit-id variants for loaders and replay; the id must be unused and
    // nonzero. The internal id counter is bumped past it.
    void add_node_with_id(ElementId id, NodeTypeId type);
    void add_edge_with_id(ElementId id, EdgeTypeId type, ElementId src, ElementId tgt);

    // Removes a node (which must have no remaining incident edges) or an
    // edge. The id is retired, never reassigned.
    void remove_element(ElementId id);

    void set_mark(ElementId id, bool marked);
    void clear_all_marks();

    // Makes sure freshly generated ids are > bound (used when several graphs
    // must draw from one id space).
    void reserve_ids_above(ElementId bound);
    ElementId peek_next_id() const { return next_id_; }

    // ---- queries ----------------------------------------------------------

    bool contains(ElementId id) const;
    bool is_node(ElementId id) const;
    bool is_edge(ElementId id) const;

    NodeTypeId node_type(ElementId node) const;
    EdgeTypeId edge_type(ElementId edge) const;
    ElementId edge_src(ElementId edge) const;
    ElementId edge_tgt(ElementId edge) const;
    bool marked(ElementId id) const;

    std::size_t node_count() const { return alive_nodes_; }
    std::size_t edge_count() const { return alive_edges_; }
    std::size_t element_count() const { return alive_nodes_ + alive_edges_; }
    std::size_t marked_count() const { return marks_.size(); }
    std::size_t node_count_of_type(NodeTypeId t) const;
    std::size_t edge_count_of_type(EdgeTypeId t) const;
    std::size_t out_degree(ElementId node) const;
    std::size_t in_degree(ElementId node) const;

    // Marked element ids, ascending.
    std::vector<ElementId> marked_elements() const;
    // All element ids (nodes then edges), insertion order.
    std::vector<ElementId> node_ids() const;
    std::vector<ElementId> edge_ids() const;

    // ---- iteration --------------------------------------------------------

    template <class F> void for_each_node(F&& f) const {
        for (const NodeRec& n : nodes_)
            if (n.alive) f(n.id);
    }
    template <class F> void for_each_edge(F&& f) const {
        for (const EdgeRec& e : edges_)
            if (e.alive) f(e.id);
    }
    template <class F> void for_each_node_of_type(NodeTypeId t, F&& f) const {
        for (std::uint32_t slot : nodes_by_type_[t])
            if (nodes_[slot].alive) f(nodes_[slot].id);
    }
    template <class F> void for_each_edge_of_type(EdgeTypeId t, F&& f) const {
        for (std::uint32_t slot : edges_by_type_[t])
            if (edges_[slot].alive) f(edges_[slot].id);
    }
    // f(edge_id); insertion order of the incident edges.
    template <class F> void for_each_out_edge(ElementId node, F&& f) const {
        for (std::uint32_t slot : node_rec(node).out)
            if (edges_[slot].alive) f(edges_[slot].id);
    }
    template <class F> void for_each_in_edge(ElementId node, F&& f) const {
        for (std::uint32_t slot : node_rec(node).in)
            if (edges_[slot].alive) f(edges_[slot].id);
    }

    // ---- whole-graph operations -------------------------------------------

    // Id-wise equality: same elements (ids, types, endpoints) and same marks.
    // Insertion order is irrelevant.
    bool equals(const TypedGraph& other) const;

    // Subgraph induced by keeping exactly the given elements (ids and marks
    // preserved). Throws InputError if a kept edge loses an endpoint.
    TypedGraph restricted_to(const std::set<ElementId>& keep) const;

private:
    struct NodeRec {
        ElementId id;
        NodeTypeId type;
        bool alive = true;
        std::vector<std::uint32_t> out; // edge slots
        std::vector<std::uint32_t> in;  // edge slots
    };
    struct EdgeRec {
        ElementId id;
        EdgeTypeId type;
        ElementId src;
        ElementId tgt;
        bool alive = true;
    };
    struct Slot {
        std::uint32_t index;
        bool is_node;
    };

    const NodeRec& node_rec(ElementId id) const;
    const EdgeRec& edge_rec(ElementId id) const;
    Slot slot_of(ElementId id) const;
    void insert_node(ElementId id, NodeTypeId type);
    void insert_edge(ElementId id, EdgeTypeId type, ElementId src, ElementId tgt);

    std::shared_ptr<const TypeGraph> types_;
    std::vector<NodeRec> nodes_;
    std::vector<EdgeRec> edges_;
    std::unordered_map<ElementId, Slot> index_;
    std::vector<std::vector<std::uint32_t>> nodes_by_type_;
    std::vector<std::vector<std::uint32_t>> edges_by_type_;
    std::unordered_set<ElementId> marks_;
    std::size_t alive_nodes_ = 0;
    std::size_t alive_edges_ = 0;
    ElementId next_id_ = 1;
};

} // namespace mvtgg
