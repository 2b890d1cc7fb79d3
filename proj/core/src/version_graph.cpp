#include "mvtgg/version_graph.hpp"

#include <algorithm>
#include <string>

namespace mvtgg {

VersionSet::VersionSet(std::uint32_t universe)
    : size_(universe), words_((universe + 63) / 64, 0)
{
}

VersionSet VersionSet::all(std::uint32_t universe)
{
    VersionSet s(universe);
    for (std::uint32_t i = 0; i < universe; ++i)
        s.set(i);
    return s;
}

void VersionSet::set(std::uint32_t i)
{
    if (i >= size_)
        throw InputError("version index out of range");
    words_[i / 64] |= std::uint64_t(1) << (i % 64);
}

void VersionSet::reset(std::uint32_t i)
{
    if (i >= size_)
        throw InputError("version index out of range");
    words_[i / 64] &= ~(std::uint64_t(1) << (i % 64));
}

bool VersionSet::test(std::uint32_t i) const
{
    if (i >= size_)
        throw InputError("version index out of range");
    return (words_[i / 64] >> (i % 64)) & 1;
}

void VersionSet::check_compatible(const VersionSet& o) const
{
    if (size_ != o.size_)
        throw InputError("version sets over different version graphs");
}

VersionSet& VersionSet::operator&=(const VersionSet& o)
{
    check_compatible(o);
    for (std::size_t w = 0; w < words_.size(); ++w)
        words_[w] &= o.words_[w];
    return *this;
}

VersionSet& VersionSet::operator|=(const VersionSet& o)
{
    check_compatible(o);
    for (std::size_t w = 0; w < words_.size(); ++w)
        words_[w] |= o.words_[w];
    return *this;
}

VersionSet& VersionSet::subtract(const VersionSet& o)
{
    check_compatible(o);
    for (std::size_t w = 0; w < words_.size(); ++w)
        words_[w] &= ~o.words_[w];
    return *this;
}

bool VersionSet::any() const
{
    for (std::uint64_t w : words_)
        if (w)
            return true;
    return false;
}

std::uint32_t VersionSet::count() const
{
    std::uint32_t n = 0;
    for (std::uint64_t w : words_)
        n += static_cast<std::uint32_t>(__builtin_popcountll(w));
    return n;
}

std::vector<std::uint32_t> VersionSet::indices() const
{
    std::vector<std::uint32_t> out;
    for_each([&](std::uint32_t i) { out.push_back(i); });
    return out;
}

std::uint32_t VersionGraph::add_version(VersionId id)
{
    if (index_.count(id))
        throw InputError("duplicate version id " + std::to_string(id));
    std::uint32_t idx = static_cast<std::uint32_t>(ids_.size());
    index_.emplace(id, idx);
    ids_.push_back(id);
    parents_.emplace_back();
    children_.emplace_back();
    finalized_ = false;
    return idx;
}

void VersionGraph::add_successor(VersionId from, VersionId to)
{
    std::uint32_t f = index_of(from);
    std::uint32_t t = index_of(to);
    if (f == t)
        throw InputError("version " + std::to_string(from) + " cannot succeed itself");
    if (std::find(children_[f].begin(), children_[f].end(), t) != children_[f].end())
        throw InputError("duplicate successor edge " + std::to_string(from) + " -> " +
                         std::to_string(to));
    children_[f].push_back(t);
    parents_[t].push_back(f);
    finalized_ = false;
}

void VersionGraph::finalize()
{
    if (ids_.empty())
        throw InputError("a version graph needs at least one version");

    std::vector<std::uint32_t> roots;
    for (std::uint32_t i = 0; i < size(); ++i)
        if (parents_[i].empty())
            roots.push_back(i);
    if (roots.size() != 1)
        throw InputError("version graph must have exactly one initial version, found " +
                         std::to_string(roots.size()));
    root_ = roots[0];

    // Kahn's algorithm; leftover versions mean a cycle.
    topo_.clear();
    std::vector<std::uint32_t> pending(size());
    for (std::uint32_t i = 0; i < size(); ++i)
        pending[i] = static_cast<std::uint32_t>(parents_[i].size());
    std::vector<std::uint32_t> queue{root_};
    while (!queue.empty()) {
        std::uint32_t v = queue.front();
        queue.erase(queue.begin());
        topo_.push_back(v);
        for (std::uint32_t c : children_[v])
            if (--pending[c] == 0)
                queue.push_back(c);
    }
    if (topo_.size() != size())
        throw InputError("version graph contains a cycle or an unreachable version");

    // Descendant sets bottom-up.
    descendants_.assign(size(), VersionSet(size()));
    for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
        std::uint32_t v = *it;
        descendants_[v].set(v);
        for (std::uint32_t c : children_[v])
            descendants_[v] |= descendants_[c];
    }
    finalized_ = true;
}

void VersionGraph::require_finalized() const
{
    if (!finalized_)
        throw InputError("version graph is not finalized");
}

std::uint32_t VersionGraph::index_of(VersionId id) const
{
    auto it = index_.find(id);
    if (it == index_.end())
        throw InputError("unknown version id " + std::to_string(id));
    return it->second;
}

VersionId VersionGraph::id_of(std::uint32_t idx) const
{
    if (idx >= ids_.size())
        throw InputError("version index out of range");
    return ids_[idx];
}

std::uint32_t VersionGraph::root() const
{
    require_finalized();
    return root_;
}

const std::vector<std::uint32_t>& VersionGraph::parents(std::uint32_t idx) const
{
    if (idx >= parents_.size())
        throw InputError("version index out of range");
    return parents_[idx];
}

const std::vector<std::uint32_t>& VersionGraph::children(std::uint32_t idx) const
{
    if (idx >= children_.size())
        throw InputError("version index out of range");
    return children_[idx];
}

const std::vector<std::uint32_t>& VersionGraph::topological_order() const
{
    require_finalized();
    return topo_;
}

bool VersionGraph::is_tree() const
{
    for (const auto& p : parents_)
        if (p.size() > 1)
            return false;
    return true;
}

std::optional<std::uint32_t> VersionGraph::tree_parent(std::uint32_t idx) const
{
    const auto& p = parents(idx);
    if (p.empty())
        return std::nullopt;
    if (p.size() > 1)
        throw InputError("version " + std::to_string(ids_[idx]) + " has several predecessors");
    return p[0];
}

bool VersionGraph::reaches(std::uint32_t from, std::uint32_t to) const
{
    return descendants(from).test(to);
}

const VersionSet& VersionGraph::descendants(std::uint32_t idx) const
{
    require_finalized();
    if (idx >= descendants_.size())
        throw InputError("version index out of range");
    return descendants_[idx];
}

bool VersionGraph::operator==(const VersionGraph& o) const
{
    return ids_ == o.ids_ && parents_ == o.parents_ && children_ == o.children_;
}

} // namespace mvtgg
