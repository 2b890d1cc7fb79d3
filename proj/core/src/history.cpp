#include "mvtgg/history.hpp"

#include "mvtgg/errors.hpp"

#include <algorithm>
#include <unordered_set>

namespace mvtgg {

VersionHistory::VersionHistory(std::shared_ptr<const TripleTypeGraph> types, VersionId initial,
                               TypedGraph base_model)
    : types_(std::move(types)), base_(std::move(base_model))
{
    if (!types_)
        throw InputError("history needs a triple type graph");
    if (!(*types_->graph() == base_.types()))
        throw InputError("base model is typed over a foreign type graph");
    if (base_.marked_count() != 0)
        throw InputError("history models must not carry bookkeeping marks");
    versions_.push_back(VersionRec{initial, initial, {}});
}

void VersionHistory::add_version(VersionId id, VersionId parent, Delta delta)
{
    versions_.push_back(VersionRec{id, parent, std::move(delta)});
    finalized_ = false;
}

void VersionHistory::record_universe(const TypedGraph& model)
{
    auto merge = [&](ElementId x, ElementInfo info) {
        auto [it, inserted] = universe_.emplace(x, info);
        if (!inserted) {
            const ElementInfo& have = it->second;
            if (have.is_node != info.is_node || have.node_type != info.node_type ||
                have.edge_type != info.edge_type || have.src != info.src ||
                have.tgt != info.tgt)
                throw InputError("element " + std::to_string(x) +
                                 " changes its identity across versions");
        }
        max_element_id_ = std::max(max_element_id_, x);
    };
    model.for_each_node([&](ElementId x) {
        if (types_->node_domain(model.node_type(x)) != Domain::source)
            throw InputError("history model contains non-source element " + std::to_string(x));
        merge(x, ElementInfo{true, model.node_type(x), 0, kNoElement, kNoElement});
    });
    model.for_each_edge([&](ElementId x) {
        if (types_->edge_domain(model.edge_type(x)) != Domain::source)
            throw InputError("history model contains non-source element " + std::to_string(x));
        merge(x, ElementInfo{false, 0, model.edge_type(x), model.edge_src(x),
                             model.edge_tgt(x)});
    });
}

void VersionHistory::finalize()
{
    vgraph_ = VersionGraph();
    models_.clear();
    universe_.clear();
    max_element_id_ = 0;

    std::unordered_map<VersionId, std::uint32_t> seen;
    for (const VersionRec& v : versions_) {
        std::uint32_t idx = vgraph_.add_version(v.id); // rejects duplicates
        seen.emplace(v.id, idx);
    }
    for (std::size_t i = 1; i < versions_.size(); ++i) {
        if (!seen.count(versions_[i].parent))
            throw InputError("version " + std::to_string(versions_[i].id) +
                             " has unknown parent " + std::to_string(versions_[i].parent));
        if (seen.at(versions_[i].parent) >= i)
            throw InputError("version " + std::to_string(versions_[i].id) +
                             " must come after its parent");
        vgraph_.add_successor(versions_[i].parent, versions_[i].id);
    }
    vgraph_.finalize();

    // Build the models in index order; every parent is already built.
    models_.reserve(versions_.size());
    for (std::size_t i = 0; i < versions_.size(); ++i) {
        const VersionRec& v = versions_[i];
        TypedGraph m = i == 0 ? base_ : models_[seen.at(v.parent)];
        const Delta& d = v.delta;

        std::unordered_set<ElementId> touched;
        auto touch = [&](ElementId x) {
            if (!touched.insert(x).second)
                throw InputError("delta of version " + std::to_string(v.id) +
                                 " mentions element " + std::to_string(x) + " twice");
        };

        // Deletions first (edges before nodes), then node adds, then edges.
        for (ElementId x : d.del_elements) {
            touch(x);
            if (!m.contains(x))
                throw InputError("delta of version " + std::to_string(v.id) +
                                 " deletes unknown element " + std::to_string(x));
        }
        for (ElementId x : d.del_elements)
            if (m.is_edge(x))
                m.remove_element(x);
        for (ElementId x : d.del_elements)
            if (m.contains(x)) // remaining: nodes
                m.remove_element(x);
        for (const Delta::NodeAdd& a : d.add_nodes) {
            touch(a.id);
            m.add_node_with_id(a.id, a.type);
        }
        for (const Delta::EdgeAdd& a : d.add_edges) {
            touch(a.id);
            m.add_edge_with_id(a.id, a.type, a.src, a.tgt);
        }
        record_universe(m);
        models_.push_back(std::move(m));
    }
    finalized_ = true;
}

void VersionHistory::require_finalized() const
{
    if (!finalized_)
        throw InputError("history is not finalized");
}

const VersionGraph& VersionHistory::version_graph() const
{
    require_finalized();
    return vgraph_;
}

const TypedGraph& VersionHistory::model(VersionId id) const
{
    require_finalized();
    return models_[vgraph_.index_of(id)];
}

const TypedGraph& VersionHistory::model_at(std::uint32_t idx) const
{
    require_finalized();
    if (idx >= models_.size())
        throw InputError("version index out of range");
    return models_[idx];
}

std::vector<VersionId> VersionHistory::version_ids() const
{
    std::vector<VersionId> out;
    out.reserve(versions_.size());
    for (const VersionRec& v : versions_)
        out.push_back(v.id);
    return out;
}

VersionId VersionHistory::parent_of(VersionId id) const
{
    for (std::size_t i = 0; i < versions_.size(); ++i)
        if (versions_[i].id == id) {
            if (i == 0)
                throw InputError("the initial version has no parent");
            return versions_[i].parent;
        }
    throw InputError("unknown version id " + std::to_string(id));
}

const Delta& VersionHistory::delta_of(VersionId id) const
{
    for (const VersionRec& v : versions_)
        if (v.id == id)
            return v.delta;
    throw InputError("unknown version id " + std::to_string(id));
}

const std::unordered_map<ElementId, VersionHistory::ElementInfo>& VersionHistory::universe() const
{
    require_finalized();
    return universe_;
}

std::size_t VersionHistory::total_model_elements() const
{
    require_finalized();
    std::size_t n = 0;
    for (const TypedGraph& m : models_)
        n += m.element_count();
    return n;
}

} // namespace mvtgg
