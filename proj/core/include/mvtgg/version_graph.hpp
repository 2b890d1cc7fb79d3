#pragma once

#include "mvtgg/errors.hpp"
#include "mvtgg/ids.hpp"

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace mvtgg {

// A set of versions, addressed by dense VersionGraph indices.
class VersionSet {
public:
    VersionSet() = default;
    explicit VersionSet(std::uint32_t universe);

    static VersionSet none(std::uint32_t universe) { return VersionSet(universe); }
    static VersionSet all(std::uint32_t universe);

    std::uint32_t universe_size() const { return size_; }

    void set(std::uint32_t i);
    void reset(std::uint32_t i);
    bool test(std::uint32_t i) const;

    VersionSet& operator&=(const VersionSet& o);
    VersionSet& operator|=(const VersionSet& o);
    // this \ o
    VersionSet& subtract(const VersionSet& o);

    friend VersionSet operator&(VersionSet a, const VersionSet& b) { return a &= b; }
    friend VersionSet operator|(VersionSet a, const VersionSet& b) { return a |= b; }

    bool any() const;
    bool empty() const { return !any(); }
    std::uint32_t count() const;
    bool operator==(const VersionSet& o) const = default;

    std::vector<std::uint32_t> indices() const;
    template <class F> void for_each(F&& f) const
    {
        for (std::uint32_t i = 0; i < size_; ++i)
            if (test(i)) f(i);
    }

private:
    void check_compatible(const VersionSet& o) const;

    std::uint32_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

// The version graph: versions connected by successor edges. General DAGs are
// supported for querying; operations that synthesize version annotations
// additionally require a tree (every version has at most one predecessor),
// which is what histories produce.
class VersionGraph {
public:
    std::uint32_t add_version(VersionId id);
    void add_successor(VersionId from, VersionId to);

    // Checks for a unique root and acyclicity, fixes the topological order
    // and precomputes reachability. Must be called before queries.
    void finalize();
    bool finalized() const { return finalized_; }

    std::uint32_t size() const { return static_cast<std::uint32_t>(ids_.size()); }
    std::uint32_t index_of(VersionId id) const;
    bool has_version(VersionId id) const { return index_.count(id) != 0; }
    VersionId id_of(std::uint32_t idx) const;
    const std::vector<VersionId>& ids() const { return ids_; }

    std::uint32_t root() const;
    const std::vector<std::uint32_t>& parents(std::uint32_t idx) const;
    const std::vector<std::uint32_t>& children(std::uint32_t idx) const;
    // Version indices in a topological order (parents before children).
    const std::vector<std::uint32_t>& topological_order() const;

    bool is_tree() const;
    // The unique parent on tree version graphs (nullopt for the root).
    std::optional<std::uint32_t> tree_parent(std::uint32_t idx) const;

    // Reflexive-transitive successor relation.
    bool reaches(std::uint32_t from, std::uint32_t to) const;
    const VersionSet& descendants(std::uint32_t idx) const;

    VersionSet no_versions() const { return VersionSet::none(size()); }
    VersionSet all_versions() const { return VersionSet::all(size()); }

    bool operator==(const VersionGraph& o) const;

private:
    void require_finalized() const;

    std::vector<VersionId> ids_;
    std::unordered_map<VersionId, std::uint32_t> index_;
    std::vector<std::vector<std::uint32_t>> parents_;
    std::vector<std::vector<std::uint32_t>> children_;
    std::vector<std::uint32_t> topo_;
    std::vector<VersionSet> descendants_;
    std::uint32_t root_ = 0;
    bool finalized_ = false;
};

} // namespace mvtgg
