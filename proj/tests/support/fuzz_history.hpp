#pragma once

// Random version histories for the equivalence properties. Unlike the
// benchmark generator, which only emits totally translatable models, this
// fuzzer grows abstract-syntax models in arbitrary states of disrepair:
// fields without a declaring class, type accesses without a type, chains cut
// anywhere, elements deleted and re-added versions later. The consolidated
// and the version-by-version pipelines must agree on such leftovers too —
// untranslated is a perfectly fine final state.
//
// The one thing kept sane is multiplicity: at most one declaration edge into
// a field, one access edge out of it, one access edge into a type reference
// and one type edge out of it. That rules out two matches competing for the
// same element, which is the determinism premise the engine checks anyway.

#include "mvtgg/ast2cd.hpp"
#include "mvtgg/history.hpp"
#include "mvtgg/typed_graph.hpp"

#include <memory>
#include <random>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mvtgg::testsupport {

namespace fuzz_detail {

// Globally consistent description of one element id (same id in different
// versions must mean the same element).
struct ElementRec {
    bool is_node = true;
    NodeTypeId node_type = 0;
    EdgeTypeId edge_type = 0;
    ElementId src = 0;
    ElementId tgt = 0;
};

inline bool has_out_edge_of(const TypedGraph& m, ElementId node, EdgeTypeId t)
{
    bool found = false;
    m.for_each_out_edge(node, [&](ElementId e) { found |= m.edge_type(e) == t; });
    return found;
}

inline bool has_in_edge_of(const TypedGraph& m, ElementId node, EdgeTypeId t)
{
    bool found = false;
    m.for_each_in_edge(node, [&](ElementId e) { found |= m.edge_type(e) == t; });
    return found;
}

} // namespace fuzz_detail

// A random history over the demonstration metamodel: up to max_versions
// versions (tree-shaped, branching allowed), every model staying at or below
// max_elements elements.
inline VersionHistory fuzz_history(std::mt19937_64& rng,
                                   std::shared_ptr<const TripleTypeGraph> ttg,
                                   unsigned max_versions = 6, unsigned max_elements = 60)
{
    using fuzz_detail::ElementRec;
    using fuzz_detail::has_in_edge_of;
    using fuzz_detail::has_out_edge_of;

    const TypeGraph& tg = ttg->types();
    const NodeTypeId class_t = tg.node_type(ast2cd::kClassDecl);
    const NodeTypeId field_t = tg.node_type(ast2cd::kFieldDecl);
    const NodeTypeId access_t = tg.node_type(ast2cd::kTypeAccess);
    const EdgeTypeId decl_e = tg.edge_type(ast2cd::kDeclaration);
    const EdgeTypeId acc_e = tg.edge_type(ast2cd::kAccess);
    const EdgeTypeId type_e = tg.edge_type(ast2cd::kTypeRef);

    ElementId next_id = 1;
    // Everything that ever existed, for consistent re-adds.
    std::unordered_map<ElementId, ElementRec> universe;

    auto chance = [&](double p) {
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
    };
    auto pick = [&](const std::vector<ElementId>& v) {
        return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
    };
    auto nodes_of = [&](const TypedGraph& m, NodeTypeId t) {
        std::vector<ElementId> out;
        m.for_each_node_of_type(t, [&](ElementId id) { out.push_back(id); });
        return out;
    };

    // One random edit against the working model. `touched` enforces the
    // one-mention-per-delta rule; skipped edits just do nothing.
    auto edit = [&](TypedGraph& m, Delta& d, std::unordered_set<ElementId>& touched) {
        auto fresh_node = [&](NodeTypeId t) {
            ElementId id = next_id++;
            m.add_node_with_id(id, t);
            d.add_nodes.push_back({id, t});
            touched.insert(id);
            universe[id] = {true, t, 0, 0, 0};
        };
        auto fresh_edge = [&](EdgeTypeId t, ElementId src, ElementId tgt) {
            ElementId id = next_id++;
            m.add_edge_with_id(id, t, src, tgt);
            d.add_edges.push_back({id, t, src, tgt});
            touched.insert(id);
            universe[id] = {false, 0, t, src, tgt};
        };

        int roll = std::uniform_int_distribution<int>(0, 9)(rng);
        bool room = m.element_count() < max_elements;
        switch (roll) {
        case 0:
            if (room)
                fresh_node(class_t);
            return;
        case 1:
            if (room)
                fresh_node(field_t);
            return;
        case 2:
            if (room)
                fresh_node(access_t);
            return;
        case 3: { // declaration: any class -> a field without one
            if (!room)
                return;
            std::vector<ElementId> fields;
            for (ElementId f : nodes_of(m, field_t))
                if (!has_in_edge_of(m, f, decl_e))
                    fields.push_back(f);
            std::vector<ElementId> classes = nodes_of(m, class_t);
            if (fields.empty() || classes.empty())
                return;
            fresh_edge(decl_e, pick(classes), pick(fields));
            return;
        }
        case 4: { // access: a field without one -> an access without one
            if (!room)
                return;
            std::vector<ElementId> fields, accesses;
            for (ElementId f : nodes_of(m, field_t))
                if (!has_out_edge_of(m, f, acc_e))
                    fields.push_back(f);
            for (ElementId a : nodes_of(m, access_t))
                if (!has_in_edge_of(m, a, acc_e))
                    accesses.push_back(a);
            if (fields.empty() || accesses.empty())
                return;
            fresh_edge(acc_e, pick(fields), pick(accesses));
            return;
        }
        case 5: { // type: an access without one -> any class (self-typing fine)
            if (!room)
                return;
            std::vector<ElementId> accesses;
            for (ElementId a : nodes_of(m, access_t))
                if (!has_out_edge_of(m, a, type_e))
                    accesses.push_back(a);
            std::vector<ElementId> classes = nodes_of(m, class_t);
            if (accesses.empty() || classes.empty())
                return;
            fresh_edge(type_e, pick(accesses), pick(classes));
            return;
        }
        case 6:
        case 7: { // delete an element (nodes take their edges along)
            std::vector<ElementId> all = m.node_ids();
            for (ElementId e : m.edge_ids())
                all.push_back(e);
            if (all.empty())
                return;
            ElementId victim = pick(all);
            std::vector<ElementId> doomed;
            if (m.is_node(victim)) {
                m.for_each_out_edge(victim, [&](ElementId e) { doomed.push_back(e); });
                m.for_each_in_edge(victim, [&](ElementId e) {
                    if (m.edge_src(e) != victim) // self-loops appear once
                        doomed.push_back(e);
                });
            }
            doomed.push_back(victim);
            for (ElementId x : doomed)
                if (touched.count(x))
                    return; // already changed in this version; skip
            for (ElementId x : doomed) {
                d.del_elements.push_back(x);
                touched.insert(x);
            }
            for (ElementId x : doomed)
                if (m.is_edge(x))
                    m.remove_element(x);
            for (ElementId x : doomed)
                if (m.contains(x))
                    m.remove_element(x);
            return;
        }
        default: { // re-add something previously deleted, same identity
            if (!room)
                return;
            std::vector<ElementId> gone;
            for (const auto& [id, rec] : universe)
                if (!m.contains(id) && !touched.count(id))
                    gone.push_back(id);
            if (gone.empty())
                return;
            ElementId id = pick(gone);
            const ElementRec& rec = universe.at(id);
            if (rec.is_node) {
                m.add_node_with_id(id, rec.node_type);
                d.add_nodes.push_back({id, rec.node_type});
                touched.insert(id);
                return;
            }
            // Edges come back only when their endpoints exist and the slot
            // they occupied is still free.
            if (!m.is_node(rec.src) || !m.is_node(rec.tgt))
                return;
            if (rec.edge_type == decl_e && has_in_edge_of(m, rec.tgt, decl_e))
                return;
            if (rec.edge_type == acc_e &&
                (has_out_edge_of(m, rec.src, acc_e) || has_in_edge_of(m, rec.tgt, acc_e)))
                return;
            if (rec.edge_type == type_e && has_out_edge_of(m, rec.src, type_e))
                return;
            m.add_edge_with_id(id, rec.edge_type, rec.src, rec.tgt);
            d.add_edges.push_back({id, rec.edge_type, rec.src, rec.tgt});
            touched.insert(id);
            return;
        }
        }
    };

    // Base model: a couple of classes, then a burst of random edits.
    TypedGraph base(ttg->graph());
    {
        Delta scratch;
        std::unordered_set<ElementId> touched;
        unsigned classes = 1 + std::uniform_int_distribution<unsigned>(0, 2)(rng);
        for (unsigned i = 0; i < classes; ++i) {
            ElementId id = next_id++;
            base.add_node_with_id(id, class_t);
            universe[id] = {true, class_t, 0, 0, 0};
        }
        unsigned burst = std::uniform_int_distribution<unsigned>(0, 12)(rng);
        for (unsigned i = 0; i < burst; ++i)
            edit(base, scratch, touched); // delta is thrown away for the base
    }

    VersionHistory history(ttg, 1, base);
    std::vector<TypedGraph> models{base};

    unsigned versions = 1 + std::uniform_int_distribution<unsigned>(0, max_versions - 1)(rng);
    for (unsigned v = 1; v < versions; ++v) {
        std::uint32_t parent =
            chance(0.3) ? std::uniform_int_distribution<std::uint32_t>(0, v - 1)(rng) : v - 1;
        TypedGraph m = models[parent];
        Delta d;
        std::unordered_set<ElementId> touched;
        unsigned edits = 1 + std::uniform_int_distribution<unsigned>(0, 7)(rng);
        for (unsigned i = 0; i < edits; ++i)
            edit(m, d, touched);
        history.add_version(v + 1, parent + 1, d);
        models.push_back(std::move(m));
    }
    history.finalize();
    return history;
}

} // namespace mvtgg::testsupport
