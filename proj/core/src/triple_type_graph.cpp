#include "mvtgg/triple_type_graph.hpp"

#include "mvtgg/errors.hpp"

#include <string_view>

namespace mvtgg {

namespace {

bool has_prefix(std::string_view name, std::string_view prefix)
{
    return name.size() >= prefix.size() && name.substr(0, prefix.size()) == prefix;
}

} // namespace

const char* domain_name(Domain d)
{
    switch (d) {
    case Domain::source: return "source";
    case Domain::correspondence: return "correspondence";
    case Domain::target: return "target";
    }
    return "?";
}

TripleTypeGraph::TripleTypeGraph()
    : graph_(std::make_shared<TypeGraph>()), graph_view_(graph_)
{
}

NodeTypeId TripleTypeGraph::add_node_type(std::string name, Domain d)
{
    NodeTypeId t = graph_->add_node_type(std::move(name));
    node_domains_.push_back(d);
    return t;
}

EdgeTypeId TripleTypeGraph::add_edge_type(std::string name, NodeTypeId src, NodeTypeId tgt,
                                          Domain d)
{
    EdgeTypeId t = graph_->add_edge_type(std::move(name), src, tgt);
    edge_domains_.push_back(d);
    return t;
}

Domain TripleTypeGraph::node_domain(NodeTypeId t) const
{
    if (t >= node_domains_.size())
        throw InputError("node type id out of range");
    return node_domains_[t];
}

Domain TripleTypeGraph::edge_domain(EdgeTypeId t) const
{
    if (t >= edge_domains_.size())
        throw InputError("edge type id out of range");
    return edge_domains_[t];
}

Domain TripleTypeGraph::element_domain(const TypedGraph& g, ElementId x) const
{
    return g.is_node(x) ? node_domain(g.node_type(x)) : edge_domain(g.edge_type(x));
}

bool TripleTypeGraph::is_source_link(EdgeTypeId t) const
{
    return edge_domain(t) == Domain::correspondence &&
           node_domain(graph_->edge_tgt(t)) == Domain::source;
}

bool TripleTypeGraph::is_target_link(EdgeTypeId t) const
{
    return edge_domain(t) == Domain::correspondence &&
           node_domain(graph_->edge_tgt(t)) == Domain::target;
}

void TripleTypeGraph::validate() const
{
    for (EdgeTypeId t = 0; t < edge_domains_.size(); ++t) {
        const std::string& name = graph_->edge_type_name(t);
        Domain d = edge_domains_[t];
        Domain sd = node_domain(graph_->edge_src(t));
        Domain td = node_domain(graph_->edge_tgt(t));
        switch (d) {
        case Domain::source:
        case Domain::target:
            if (sd != d || td != d)
                throw InputError("edge type '" + name + "' of the " +
                                 domain_name(d) + " domain must stay inside that domain");
            break;
        case Domain::correspondence:
            if (sd != Domain::correspondence)
                throw InputError("correspondence edge type '" + name +
                                 "' must start at a correspondence node type");
            if (td == Domain::source) {
                if (!has_prefix(name, kCorrSourcePrefix))
                    throw InputError("correspondence edge type '" + name +
                                     "' into the source domain must be named corrS*");
            } else if (td == Domain::target) {
                if (!has_prefix(name, kCorrTargetPrefix))
                    throw InputError("correspondence edge type '" + name +
                                     "' into the target domain must be named corrT*");
            } else {
                throw InputError("correspondence edge type '" + name +
                                 "' must point into the source or target domain");
            }
            break;
        }
    }
    // Every correspondence node type carries exactly one link of each kind.
    for (NodeTypeId n = 0; n < node_domains_.size(); ++n) {
        if (node_domains_[n] != Domain::correspondence)
            continue;
        int to_source = 0, to_target = 0;
        for (EdgeTypeId t = 0; t < edge_domains_.size(); ++t) {
            if (graph_->edge_src(t) != n || edge_domains_[t] != Domain::correspondence)
                continue;
            if (node_domain(graph_->edge_tgt(t)) == Domain::source)
                ++to_source;
            else
                ++to_target;
        }
        if (to_source != 1 || to_target != 1)
            throw InputError("correspondence node type '" + graph_->node_type_name(n) +
                             "' must have exactly one corrS* and one corrT* link type");
    }
}

} // namespace mvtgg
