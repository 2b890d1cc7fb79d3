#include "mvtgg/mvm.hpp"

#include "mvtgg/errors.hpp"

#include <algorithm>
#include <string>

namespace mvtgg {

namespace {

void check_type_name(const std::string& name)
{
    if (name.find('@') != std::string::npos)
        throw InputError("type name '" + name + "' must not contain '@'");
    if (name == "version" || name == "suc")
        throw InputError("type name '" + name + "' is reserved for the adapted type graph");
}

} // namespace

AdaptedTypeInfo adapt_type_graph(std::shared_ptr<const TripleTypeGraph> original)
{
    if (!original)
        throw InputError("adapt_type_graph needs a triple type graph");
    original->validate();
    const TypeGraph& og = original->types();

    AdaptedTypeInfo info;
    info.original = original;
    auto adapted = std::make_shared<TypeGraph>();

    // Node and edge types both become node types, so their names must not
    // collide.
    for (NodeTypeId t = 0; t < og.node_type_count(); ++t)
        check_type_name(og.node_type_name(t));
    for (EdgeTypeId t = 0; t < og.edge_type_count(); ++t) {
        check_type_name(og.edge_type_name(t));
        if (og.find_node_type(og.edge_type_name(t)))
            throw InputError("type name '" + og.edge_type_name(t) +
                             "' is used for both a node and an edge type");
    }

    for (NodeTypeId t = 0; t < og.node_type_count(); ++t) {
        info.node_rep.push_back(adapted->add_node_type(og.node_type_name(t)));
        info.rep_origin.push_back(AdaptedTypeInfo::NodeOrigin{true, t});
        info.rep_domain.push_back(original->node_domain(t));
    }
    for (EdgeTypeId t = 0; t < og.edge_type_count(); ++t) {
        info.edge_rep.push_back(adapted->add_node_type(og.edge_type_name(t)));
        info.rep_origin.push_back(AdaptedTypeInfo::NodeOrigin{false, t});
        info.rep_domain.push_back(original->edge_domain(t));
    }
    info.version_type = adapted->add_node_type("version");
    info.rep_origin.push_back(std::nullopt);
    info.rep_domain.push_back(Domain::source); // unused slot, keeps vectors aligned

    auto add_edge = [&](const std::string& name, NodeTypeId src, NodeTypeId tgt,
                        AdaptedTypeInfo::EdgeKind kind, std::uint32_t target_type) {
        EdgeTypeId t = adapted->add_edge_type(name, src, tgt);
        info.edge_kind.push_back(kind);
        info.edge_target_type.push_back(target_type);
        return t;
    };

    for (EdgeTypeId t = 0; t < og.edge_type_count(); ++t) {
        const std::string& name = og.edge_type_name(t);
        info.src_rep.push_back(add_edge("src@" + name, info.edge_rep[t],
                                        info.node_rep[og.edge_src(t)],
                                        AdaptedTypeInfo::EdgeKind::src_rep, t));
        info.tgt_rep.push_back(add_edge("tgt@" + name, info.edge_rep[t],
                                        info.node_rep[og.edge_tgt(t)],
                                        AdaptedTypeInfo::EdgeKind::tgt_rep, t));
    }
    info.suc_type = add_edge("suc", info.version_type, info.version_type,
                             AdaptedTypeInfo::EdgeKind::suc, 0);

    std::size_t structural_types = adapted->node_type_count();
    info.cv.assign(structural_types, kNoType);
    info.dv.assign(structural_types, kNoType);
    info.ucv.assign(structural_types, kNoType);
    info.udv.assign(structural_types, kNoType);
    for (NodeTypeId a = 0; a < structural_types; ++a) {
        if (!info.rep_origin[a])
            continue;
        const std::string& name = adapted->node_type_name(a);
        info.cv[a] = add_edge("cv@" + name, a, info.version_type,
                              AdaptedTypeInfo::EdgeKind::cv, a);
        info.dv[a] = add_edge("dv@" + name, a, info.version_type,
                              AdaptedTypeInfo::EdgeKind::dv, a);
    }
    for (NodeTypeId a = 0; a < structural_types; ++a) {
        if (!info.rep_origin[a] || info.rep_domain[a] != Domain::source)
            continue;
        const std::string& name = adapted->node_type_name(a);
        info.ucv[a] = add_edge("ucv@" + name, a, info.version_type,
                               AdaptedTypeInfo::EdgeKind::ucv, a);
        info.udv[a] = add_edge("udv@" + name, a, info.version_type,
                               AdaptedTypeInfo::EdgeKind::udv, a);
    }

    info.adapted = adapted;
    return info;
}

MultiVersionModel::MultiVersionModel(AdaptedTypeInfo info, VersionGraph versions)
    : info_(std::move(info)), versions_(std::move(versions)), graph_(info_.adapted)
{
    if (!versions_.finalized())
        throw InputError("multi-version model needs a finalized version graph");
    for (std::uint32_t i = 0; i < versions_.size(); ++i) {
        ElementId id = graph_.add_node(info_.version_type);
        version_nodes_.push_back(id);
        node_version_.emplace(id, i);
    }
    for (std::uint32_t i = 0; i < versions_.size(); ++i)
        for (std::uint32_t c : versions_.children(i))
            graph_.add_edge(info_.suc_type, version_nodes_[i], version_nodes_[c]);
}

MultiVersionModel::MultiVersionModel(AdaptedTypeInfo info, VersionGraph versions,
                                     TypedGraph graph,
                                     std::unordered_map<ElementId, ElementId> origin,
                                     std::vector<ElementId> version_nodes)
    : info_(std::move(info)), versions_(std::move(versions)), graph_(std::move(graph)),
      version_nodes_(std::move(version_nodes)), origin_(std::move(origin))
{
    if (!versions_.finalized())
        throw InputError("multi-version model needs a finalized version graph");
    for (std::uint32_t i = 0; i < version_nodes_.size(); ++i)
        node_version_.emplace(version_nodes_[i], i);
    for (const auto& [node, elem] : origin_) {
        if (!origin_inverse_.emplace(elem, node).second)
            throw InputError("two structural nodes share the represented element " +
                             std::to_string(elem));
        next_origin_ = std::max(next_origin_, elem + 1);
    }
    validate();
}

MultiVersionModel::MultiVersionModel(const MultiVersionModel& o)
    : info_(o.info_), versions_(o.versions_), graph_(o.graph_),
      version_nodes_(o.version_nodes_), node_version_(o.node_version_), origin_(o.origin_),
      origin_inverse_(o.origin_inverse_), next_origin_(o.next_origin_)
{
    std::lock_guard<std::mutex> lock(o.cache_mutex_);
    cache_ = o.cache_;
}

MultiVersionModel& MultiVersionModel::operator=(const MultiVersionModel& o)
{
    if (this == &o)
        return *this;
    MultiVersionModel tmp(o);
    *this = std::move(tmp);
    return *this;
}

MultiVersionModel MultiVersionModel::consolidate(const VersionHistory& history)
{
    AdaptedTypeInfo info = adapt_type_graph(history.triple());
    MultiVersionModel mvm(std::move(info), history.version_graph());
    std::uint32_t n = mvm.versions_.size();

    std::vector<ElementId> node_elems, edge_elems;
    for (const auto& [id, ei] : history.universe())
        (ei.is_node ? node_elems : edge_elems).push_back(id);
    std::sort(node_elems.begin(), node_elems.end());
    std::sort(edge_elems.begin(), edge_elems.end());

    auto membership = [&](ElementId e) {
        VersionSet s(n);
        for (std::uint32_t t = 0; t < n; ++t)
            if (history.model_at(t).contains(e))
                s.set(t);
        return s;
    };

    for (ElementId e : node_elems) {
        const auto& ei = history.universe().at(e);
        ElementId v = mvm.add_node_rep(ei.node_type, e);
        mvm.set_presence(v, membership(e));
    }
    for (ElementId e : edge_elems) {
        const auto& ei = history.universe().at(e);
        ElementId v = mvm.add_edge_rep(ei.edge_type, *mvm.node_for_origin(ei.src),
                                       *mvm.node_for_origin(ei.tgt), e);
        mvm.set_presence(v, membership(e));
    }
    return mvm;
}

ElementId MultiVersionModel::version_node(std::uint32_t idx) const
{
    if (idx >= version_nodes_.size())
        throw InputError("version index out of range");
    return version_nodes_[idx];
}

std::optional<std::uint32_t> MultiVersionModel::version_of_node(ElementId id) const
{
    auto it = node_version_.find(id);
    if (it == node_version_.end())
        return std::nullopt;
    return it->second;
}

bool MultiVersionModel::is_version_node(ElementId id) const
{
    return node_version_.count(id) != 0;
}

bool MultiVersionModel::is_structural_node(ElementId id) const
{
    return graph_.is_node(id) && info_.is_structural(graph_.node_type(id));
}

Domain MultiVersionModel::domain_of(ElementId node) const
{
    if (!is_structural_node(node))
        throw InputError("element " + std::to_string(node) + " is not a structural node");
    return info_.rep_domain[graph_.node_type(node)];
}

std::size_t MultiVersionModel::structural_node_count() const
{
    return origin_.size();
}

ElementId MultiVersionModel::origin(ElementId node) const
{
    auto it = origin_.find(node);
    if (it == origin_.end())
        throw InputError("node " + std::to_string(node) + " represents no element");
    return it->second;
}

std::optional<ElementId> MultiVersionModel::node_for_origin(ElementId elem) const
{
    auto it = origin_inverse_.find(elem);
    if (it == origin_inverse_.end())
        return std::nullopt;
    return it->second;
}

void MultiVersionModel::set_origin(ElementId node, ElementId elem)
{
    if (!is_structural_node(node))
        throw InputError("node " + std::to_string(node) + " cannot represent an element");
    if (origin_.count(node))
        throw InputError("node " + std::to_string(node) + " already represents an element");
    if (!origin_inverse_.emplace(elem, node).second)
        throw InputError("element " + std::to_string(elem) + " is already represented");
    origin_.emplace(node, elem);
    next_origin_ = std::max(next_origin_, elem + 1);
}

ElementId MultiVersionModel::add_node_rep(NodeTypeId original_type, ElementId origin_id)
{
    if (original_type >= info_.node_rep.size())
        throw InputError("original node type out of range");
    ElementId v = graph_.add_node(info_.node_rep[original_type]);
    set_origin(v, origin_id);
    return v;
}

ElementId MultiVersionModel::add_edge_rep(EdgeTypeId original_type, ElementId src_node,
                                          ElementId tgt_node, ElementId origin_id)
{
    if (original_type >= info_.edge_rep.size())
        throw InputError("original edge type out of range");
    ElementId v = graph_.add_node(info_.edge_rep[original_type]);
    graph_.add_edge(info_.src_rep[original_type], v, src_node);
    graph_.add_edge(info_.tgt_rep[original_type], v, tgt_node);
    set_origin(v, origin_id);
    return v;
}

ElementId MultiVersionModel::rep_edge_src(ElementId node) const
{
    ElementId out = kNoElement;
    graph_.for_each_out_edge(node, [&](ElementId e) {
        if (out == kNoElement &&
            info_.edge_kind[graph_.edge_type(e)] == AdaptedTypeInfo::EdgeKind::src_rep)
            out = graph_.edge_tgt(e);
    });
    if (out == kNoElement)
        throw InputError("node " + std::to_string(node) + " has no source representation edge");
    return out;
}

ElementId MultiVersionModel::rep_edge_tgt(ElementId node) const
{
    ElementId out = kNoElement;
    graph_.for_each_out_edge(node, [&](ElementId e) {
        if (out == kNoElement &&
            info_.edge_kind[graph_.edge_type(e)] == AdaptedTypeInfo::EdgeKind::tgt_rep)
            out = graph_.edge_tgt(e);
    });
    if (out == kNoElement)
        throw InputError("node " + std::to_string(node) + " has no target representation edge");
    return out;
}

EdgeTypeId MultiVersionModel::link_type(ElementId node, AdaptedTypeInfo::EdgeKind kind) const
{
    if (!is_structural_node(node))
        throw InputError("element " + std::to_string(node) + " is not a structural node");
    NodeTypeId t = graph_.node_type(node);
    switch (kind) {
    case AdaptedTypeInfo::EdgeKind::cv: return info_.cv[t];
    case AdaptedTypeInfo::EdgeKind::dv: return info_.dv[t];
    case AdaptedTypeInfo::EdgeKind::ucv: return info_.ucv[t];
    case AdaptedTypeInfo::EdgeKind::udv: return info_.udv[t];
    default: throw InputError("not a version link kind");
    }
}

// t is in the set iff some "created" link leads to an ancestor-or-self c of
// t with no "deleted" link on a version between c and t (inclusive).
VersionSet MultiVersionModel::links_to_set(ElementId node, EdgeTypeId created_link,
                                           EdgeTypeId deleted_link) const
{
    VersionSet out(versions_.size());
    std::vector<std::uint32_t> created, deleted;
    graph_.for_each_out_edge(node, [&](ElementId e) {
        EdgeTypeId t = graph_.edge_type(e);
        if (t == created_link)
            created.push_back(*version_of_node(graph_.edge_tgt(e)));
        else if (t == deleted_link)
            deleted.push_back(*version_of_node(graph_.edge_tgt(e)));
    });
    for (std::uint32_t c : created) {
        VersionSet reach = versions_.descendants(c);
        for (std::uint32_t d : deleted)
            if (versions_.reaches(c, d))
                reach.subtract(versions_.descendants(d));
        out |= reach;
    }
    return out;
}

VersionSet MultiVersionModel::presence(ElementId node) const
{
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.presence.find(node);
        if (it != cache_.presence.end())
            return it->second;
    }
    VersionSet s = links_to_set(node, link_type(node, AdaptedTypeInfo::EdgeKind::cv),
                                link_type(node, AdaptedTypeInfo::EdgeKind::dv));
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return cache_.presence.emplace(node, std::move(s)).first->second;
}

VersionSet MultiVersionModel::untranslated(ElementId node) const
{
    if (domain_of(node) != Domain::source)
        return versions_.no_versions();
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.untranslated.find(node);
        if (it != cache_.untranslated.end())
            return it->second;
    }
    VersionSet s = links_to_set(node, link_type(node, AdaptedTypeInfo::EdgeKind::ucv),
                                link_type(node, AdaptedTypeInfo::EdgeKind::udv));
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return cache_.untranslated.emplace(node, std::move(s)).first->second;
}

void MultiVersionModel::invalidate_annotations(ElementId node) const
{
    std::lock_guard<std::mutex> lock(cache_mutex_);
    cache_.presence.erase(node);
    cache_.untranslated.erase(node);
}

// Boundary synthesis on tree version graphs: one created-link per entry
// point of the set (member whose parent is outside), one deleted-link per
// exit point (non-member whose parent is inside). On trees this encodes any
// version set exactly: along the unique root path, the nearest boundary
// event decides membership.
void MultiVersionModel::write_boundary_links(ElementId node, EdgeTypeId created_link,
                                             EdgeTypeId deleted_link,
                                             const VersionSet& versions)
{
    if (!versions_.is_tree())
        throw InputError("version annotations can only be written on tree version graphs");
    if (versions.universe_size() != versions_.size())
        throw InputError("version set over the wrong version graph");

    std::vector<ElementId> stale;
    graph_.for_each_out_edge(node, [&](ElementId e) {
        EdgeTypeId t = graph_.edge_type(e);
        if (t == created_link || t == deleted_link)
            stale.push_back(e);
    });
    for (ElementId e : stale)
        graph_.remove_element(e);

    for (std::uint32_t t = 0; t < versions_.size(); ++t) {
        auto parent = versions_.tree_parent(t);
        if (versions.test(t)) {
            if (!parent || !versions.test(*parent))
                graph_.add_edge(created_link, node, version_nodes_[t]);
        } else {
            if (parent && versions.test(*parent))
                graph_.add_edge(deleted_link, node, version_nodes_[t]);
        }
    }
    invalidate_annotations(node);
}

void MultiVersionModel::set_presence(ElementId node, const VersionSet& versions)
{
    write_boundary_links(node, link_type(node, AdaptedTypeInfo::EdgeKind::cv),
                         link_type(node, AdaptedTypeInfo::EdgeKind::dv), versions);
}

void MultiVersionModel::set_untranslated(ElementId node, const VersionSet& versions)
{
    if (domain_of(node) != Domain::source)
        throw InputError("only source-domain elements carry translation bookkeeping");
    write_boundary_links(node, link_type(node, AdaptedTypeInfo::EdgeKind::ucv),
                         link_type(node, AdaptedTypeInfo::EdgeKind::udv), versions);
}

void MultiVersionModel::init_bookkeeping()
{
    // Mirror the cv/dv structure into ucv/udv on source-domain nodes: the
    // model is untranslated exactly where it is present.
    std::vector<ElementId> nodes;
    for (const auto& [node, elem] : origin_)
        nodes.push_back(node);
    std::sort(nodes.begin(), nodes.end());
    for (ElementId node : nodes) {
        if (domain_of(node) != Domain::source)
            continue;
        EdgeTypeId cv = link_type(node, AdaptedTypeInfo::EdgeKind::cv);
        EdgeTypeId dv = link_type(node, AdaptedTypeInfo::EdgeKind::dv);
        EdgeTypeId ucv = link_type(node, AdaptedTypeInfo::EdgeKind::ucv);
        EdgeTypeId udv = link_type(node, AdaptedTypeInfo::EdgeKind::udv);
        std::vector<ElementId> stale;
        std::vector<ElementId> created_targets, deleted_targets;
        graph_.for_each_out_edge(node, [&](ElementId e) {
            EdgeTypeId t = graph_.edge_type(e);
            if (t == ucv || t == udv)
                stale.push_back(e);
            else if (t == cv)
                created_targets.push_back(graph_.edge_tgt(e));
            else if (t == dv)
                deleted_targets.push_back(graph_.edge_tgt(e));
        });
        for (ElementId e : stale)
            graph_.remove_element(e);
        for (ElementId v : created_targets)
            graph_.add_edge(ucv, node, v);
        for (ElementId v : deleted_targets)
            graph_.add_edge(udv, node, v);
        invalidate_annotations(node);
    }
}

TypedGraph MultiVersionModel::project_impl(std::uint32_t t, bool with_bookkeeping) const
{
    if (t >= versions_.size())
        throw InputError("version index out of range");
    TypedGraph out(info_.original->graph());

    std::vector<ElementId> node_reps, edge_reps;
    graph_.for_each_node([&](ElementId v) {
        auto it = origin_.find(v);
        if (it == origin_.end())
            return;
        const auto& o = info_.rep_origin[graph_.node_type(v)];
        (o->from_node_type ? node_reps : edge_reps).push_back(v);
    });

    for (ElementId v : node_reps)
        if (presence(v).test(t))
            out.add_node_with_id(origin_.at(v), info_.rep_origin[graph_.node_type(v)]->original_type);
    for (ElementId v : edge_reps) {
        if (!presence(v).test(t))
            continue;
        ElementId src = origin_.at(rep_edge_src(v));
        ElementId tgt = origin_.at(rep_edge_tgt(v));
        if (!out.is_node(src) || !out.is_node(tgt))
            throw InputError("edge " + std::to_string(origin_.at(v)) +
                             " is present in version " + std::to_string(versions_.id_of(t)) +
                             " but an endpoint is not");
        out.add_edge_with_id(origin_.at(v), info_.rep_origin[graph_.node_type(v)]->original_type,
                             src, tgt);
    }

    if (with_bookkeeping) {
        for (ElementId v : node_reps)
            if (info_.rep_domain[graph_.node_type(v)] == Domain::source &&
                untranslated(v).test(t)) {
                if (!presence(v).test(t))
                    throw InputError("element " + std::to_string(origin_.at(v)) +
                                     " is untranslated in a version it is absent from");
                out.set_mark(origin_.at(v), true);
            }
        for (ElementId v : edge_reps)
            if (info_.rep_domain[graph_.node_type(v)] == Domain::source &&
                untranslated(v).test(t)) {
                if (!presence(v).test(t))
                    throw InputError("element " + std::to_string(origin_.at(v)) +
                                     " is untranslated in a version it is absent from");
                out.set_mark(origin_.at(v), true);
            }
    }
    return out;
}

TypedGraph MultiVersionModel::project_at(std::uint32_t t) const
{
    return project_impl(t, false);
}

TypedGraph MultiVersionModel::project_bookkeeping_at(std::uint32_t t) const
{
    return project_impl(t, true);
}

void MultiVersionModel::validate() const
{
    if (graph_.marked_count() != 0)
        throw InputError("multi-version graphs do not use bookkeeping marks");
    if (version_nodes_.size() != versions_.size())
        throw InputError("version node count does not match the version graph");
    for (std::uint32_t i = 0; i < version_nodes_.size(); ++i) {
        ElementId v = version_nodes_[i];
        if (!graph_.is_node(v) || graph_.node_type(v) != info_.version_type)
            throw InputError("version " + std::to_string(versions_.id_of(i)) +
                             " has no version node");
    }

    std::size_t structural = 0, suc_edges = 0;
    graph_.for_each_node([&](ElementId v) {
        NodeTypeId t = graph_.node_type(v);
        if (t == info_.version_type) {
            if (!node_version_.count(v))
                throw InputError("stray version node " + std::to_string(v));
            return;
        }
        if (!info_.is_structural(t))
            throw InputError("node " + std::to_string(v) + " has no adapted role");
        ++structural;
        if (!origin_.count(v))
            throw InputError("structural node " + std::to_string(v) +
                             " represents no element");
        const auto& o = info_.rep_origin[t];
        if (!o->from_node_type) {
            std::size_t src_edges = 0, tgt_edges = 0;
            graph_.for_each_out_edge(v, [&](ElementId e) {
                switch (info_.edge_kind[graph_.edge_type(e)]) {
                case AdaptedTypeInfo::EdgeKind::src_rep: ++src_edges; break;
                case AdaptedTypeInfo::EdgeKind::tgt_rep: ++tgt_edges; break;
                default: break;
                }
            });
            if (src_edges != 1 || tgt_edges != 1)
                throw InputError("reified edge " + std::to_string(v) +
                                 " needs exactly one source and one target edge");
        }
    });
    if (structural != origin_.size() || origin_.size() != origin_inverse_.size())
        throw InputError("origin mapping is not a bijection on the structural nodes");

    std::size_t expected_suc = 0;
    for (std::uint32_t i = 0; i < versions_.size(); ++i)
        expected_suc += versions_.children(i).size();
    graph_.for_each_edge([&](ElementId e) {
        if (graph_.edge_type(e) != info_.suc_type)
            return;
        ++suc_edges;
        auto a = version_of_node(graph_.edge_src(e));
        auto b = version_of_node(graph_.edge_tgt(e));
        const auto& kids = versions_.children(*a);
        if (std::find(kids.begin(), kids.end(), *b) == kids.end())
            throw InputError("successor edge " + std::to_string(e) +
                             " is not part of the version graph");
    });
    if (suc_edges != expected_suc)
        throw InputError("successor edges do not mirror the version graph");
}

} // namespace mvtgg
