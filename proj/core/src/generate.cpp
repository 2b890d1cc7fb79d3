#include "mvtgg/generate.hpp"

#include "mvtgg/ast2cd.hpp"
#include "mvtgg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

namespace mvtgg {
namespace {

// One complete field: the FieldDecl and TypeAccess nodes plus the three
// edges wiring them to the owning and the referenced class. Fields only ever
// appear and disappear as a whole, which keeps every model totally
// translatable.
struct FieldRec {
    ElementId decl;
    ElementId access;
    ElementId decl_edge;
    ElementId access_edge;
    ElementId type_edge;
    ElementId owner;
    ElementId typed_by;
};

struct ModelIndex {
    std::vector<ElementId> classes;
    std::vector<FieldRec> fields;
};

struct TypeIds {
    NodeTypeId class_decl;
    NodeTypeId field_decl;
    NodeTypeId type_access;
    EdgeTypeId declaration;
    EdgeTypeId access;
    EdgeTypeId type_ref;

    explicit TypeIds(const TypeGraph& tg)
        : class_decl(tg.node_type(ast2cd::kClassDecl)),
          field_decl(tg.node_type(ast2cd::kFieldDecl)),
          type_access(tg.node_type(ast2cd::kTypeAccess)),
          declaration(tg.edge_type(ast2cd::kDeclaration)),
          access(tg.edge_type(ast2cd::kAccess)),
          type_ref(tg.edge_type(ast2cd::kTypeRef)) {}
};

ModelIndex index_model(const TypedGraph& g, const TypeIds& t)
{
    ModelIndex idx;
    g.for_each_node_of_type(t.class_decl, [&](ElementId c) { idx.classes.push_back(c); });
    g.for_each_node_of_type(t.field_decl, [&](ElementId f) {
        FieldRec rec{};
        rec.decl = f;
        g.for_each_in_edge(f, [&](ElementId e) {
            if (g.edge_type(e) == t.declaration) {
                rec.decl_edge = e;
                rec.owner = g.edge_src(e);
            }
        });
        g.for_each_out_edge(f, [&](ElementId e) {
            if (g.edge_type(e) == t.access) {
                rec.access_edge = e;
                rec.access = g.edge_tgt(e);
            }
        });
        g.for_each_out_edge(rec.access, [&](ElementId e) {
            if (g.edge_type(e) == t.type_ref) {
                rec.type_edge = e;
                rec.typed_by = g.edge_tgt(e);
            }
        });
        idx.fields.push_back(rec);
    });
    return idx;
}

// Mutates one working model while recording the edit into a delta (null for
// the base model, which is built directly).
struct Editor {
    TypedGraph& m;
    ModelIndex& idx;
    const TypeIds& t;
    Delta* delta;
    ElementId& next_id;
    std::mt19937_64& rng;
    // Ids added while recording the current delta.
    std::unordered_set<ElementId> fresh_ids;

    ElementId fresh() { return next_id++; }

    std::size_t pick(std::size_t bound)
    {
        return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
    }

    bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

    void add_node(ElementId id, NodeTypeId type)
    {
        m.add_node_with_id(id, type);
        if (delta) {
            delta->add_nodes.push_back({id, type});
            fresh_ids.insert(id);
        }
    }

    void add_edge(ElementId id, EdgeTypeId type, ElementId src, ElementId tgt)
    {
        m.add_edge_with_id(id, type, src, tgt);
        if (delta) {
            delta->add_edges.push_back({id, type, src, tgt});
            fresh_ids.insert(id);
        }
    }

    // Elements added in this very version must not be deleted here again: a
    // delta applies its deletions against the parent model, where they do
    // not exist yet. A field is fresh as a whole or not at all (its five
    // elements are created together and ids are never reused).
    bool deletable_field(const FieldRec& rec) const { return !fresh_ids.count(rec.decl); }

    bool deletable_class(ElementId c) const
    {
        if (fresh_ids.count(c)) return false;
        for (const FieldRec& f : idx.fields)
            if ((f.owner == c || f.typed_by == c) && !deletable_field(f)) return false;
        return true;
    }

    std::vector<std::size_t> deletable_fields() const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < idx.fields.size(); ++i)
            if (deletable_field(idx.fields[i])) out.push_back(i);
        return out;
    }

    void add_class()
    {
        ElementId c = fresh();
        add_node(c, t.class_decl);
        idx.classes.push_back(c);
    }

    // Owner and referenced class are always distinct; with self-references
    // the field pattern of the demonstration grammar could not match
    // injectively and the model would stop being totally translatable.
    void add_field_on(ElementId owner)
    {
        ElementId typed_by = owner;
        while (typed_by == owner)
            typed_by = idx.classes[pick(idx.classes.size())];

        FieldRec rec{};
        rec.owner = owner;
        rec.typed_by = typed_by;
        rec.decl = fresh();
        rec.access = fresh();
        rec.decl_edge = fresh();
        rec.access_edge = fresh();
        rec.type_edge = fresh();
        add_node(rec.decl, t.field_decl);
        add_node(rec.access, t.type_access);
        add_edge(rec.decl_edge, t.declaration, owner, rec.decl);
        add_edge(rec.access_edge, t.access, rec.decl, rec.access);
        add_edge(rec.type_edge, t.type_ref, rec.access, rec.typed_by);
        idx.fields.push_back(rec);
    }

    void add_field() { add_field_on(idx.classes[pick(idx.classes.size())]); }

    void delete_field(std::size_t i)
    {
        const FieldRec rec = idx.fields[i];
        for (ElementId e : {rec.decl_edge, rec.access_edge, rec.type_edge})
            m.remove_element(e);
        m.remove_element(rec.access);
        m.remove_element(rec.decl);
        if (delta)
            delta->del_elements.insert(delta->del_elements.end(),
                                       {rec.decl_edge, rec.access_edge, rec.type_edge,
                                        rec.access, rec.decl});
        idx.fields[i] = idx.fields.back();
        idx.fields.pop_back();
    }

    // Elements a class deletion would remove: the class and every field
    // that declares or references it.
    std::size_t class_cost(ElementId c) const
    {
        std::size_t cost = 1;
        for (const FieldRec& f : idx.fields)
            if (f.owner == c || f.typed_by == c) cost += 5;
        return cost;
    }

    // Removes the class together with every field that declares or
    // references it; returns how many elements disappeared.
    std::size_t delete_class(std::size_t i)
    {
        ElementId c = idx.classes[i];
        std::size_t removed = 1;
        for (std::size_t f = idx.fields.size(); f-- > 0;) {
            if (idx.fields[f].owner != c && idx.fields[f].typed_by != c) continue;
            delete_field(f);
            removed += 5;
        }
        m.remove_element(c);
        if (delta) delta->del_elements.push_back(c);
        idx.classes[i] = idx.classes.back();
        idx.classes.pop_back();
        return removed;
    }
};

} // namespace

void BenchConfig::validate() const
{
    if (versions == 0) throw InputError("config: versions must be positive");
    if (base_classes < 2) throw InputError("config: at least two base classes required");
    if (fields_per_class == 0) throw InputError("config: fields per class must be positive");
    if (!(change_rate >= 0.0 && change_rate <= 1.0))
        throw InputError("config: change rate must lie in [0,1]");
    if (!(branch_probability >= 0.0 && branch_probability <= 1.0))
        throw InputError("config: branch probability must lie in [0,1]");
}

VersionHistory generate_history(const BenchConfig& cfg)
{
    cfg.validate();
    std::shared_ptr<const TripleTypeGraph> types = ast2cd::type_graph();
    const TypeIds t(types->types());
    std::mt19937_64 rng(cfg.seed);

    // Base model: the configured classes, then the configured number of
    // fields on each, typed by random other classes.
    ElementId next_id = 1;
    TypedGraph base(types->graph());
    ModelIndex base_idx;
    {
        Editor ed{base, base_idx, t, nullptr, next_id, rng, {}};
        for (std::uint32_t i = 0; i < cfg.base_classes; ++i)
            ed.add_class();
        // Give every class its configured share of fields (add_field would
        // spread them randomly).
        for (std::uint32_t i = 0; i < cfg.base_classes; ++i)
            for (std::uint32_t f = 0; f < cfg.fields_per_class; ++f)
                ed.add_field_on(base_idx.classes[i]);
    }

    VersionHistory history(types, 1, base);
    std::vector<TypedGraph> models;
    models.push_back(std::move(base));

    for (std::uint32_t v = 1; v < cfg.versions; ++v) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::size_t parent = models.size() - 1;
        if (models.size() > 1 && unit(rng) < cfg.branch_probability)
            parent = std::uniform_int_distribution<std::size_t>(0, models.size() - 1)(rng);

        TypedGraph model = models[parent];
        model.reserve_ids_above(next_id - 1);
        ModelIndex idx = index_model(model, t);
        Delta delta;
        Editor ed{model, idx, t, &delta, next_id, rng, {}};

        // Touch roughly change_rate of the parent's elements: even odds of
        // growing vs shrinking, with whole-field edits dominating both. An
        // op may overrun the budget by at most one field's worth, so the
        // drift stays close to the configured rate; in particular a class
        // whose deletion would cascade too widely is left alone.
        std::size_t budget = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(cfg.change_rate * model.element_count())));
        std::size_t spent = 0;
        while (spent < budget) {
            if (!ed.chance(0.5)) {
                bool want_field = ed.chance(0.9);
                std::vector<std::size_t> victims = ed.deletable_fields();
                if (want_field && !victims.empty()) {
                    ed.delete_field(victims[ed.pick(victims.size())]);
                    spent += 5;
                    continue;
                }
                if (idx.classes.size() > 2) {
                    std::size_t i = ed.pick(idx.classes.size());
                    if (ed.deletable_class(idx.classes[i]) &&
                        spent + ed.class_cost(idx.classes[i]) <= budget + 4) {
                        spent += ed.delete_class(i);
                        continue;
                    }
                }
                if (!victims.empty()) {
                    ed.delete_field(victims[ed.pick(victims.size())]);
                    spent += 5;
                    continue;
                }
                // Nothing left to shrink; grow instead.
            }
            if (ed.chance(0.8)) {
                ed.add_field();
                spent += 5;
            } else {
                ed.add_class();
                spent += 1;
            }
        }

        history.add_version(v + 1, static_cast<VersionId>(parent + 1), std::move(delta));
        models.push_back(std::move(model));
    }

    history.finalize();
    return history;
}

SharingStats adjacent_sharing(const VersionHistory& history)
{
    const VersionGraph& vg = history.version_graph();
    SharingStats stats;
    double sum = 0.0;
    for (std::uint32_t i = 0; i < vg.size(); ++i) {
        std::optional<std::uint32_t> parent = vg.tree_parent(i);
        if (!parent) continue;

        const TypedGraph& a = history.model_at(*parent);
        const TypedGraph& b = history.model_at(i);
        std::unordered_set<ElementId> in_a;
        a.for_each_node([&](ElementId x) { in_a.insert(x); });
        a.for_each_edge([&](ElementId x) { in_a.insert(x); });
        std::size_t shared = 0;
        b.for_each_node([&](ElementId x) { shared += in_a.count(x); });
        b.for_each_edge([&](ElementId x) { shared += in_a.count(x); });

        std::size_t united = a.element_count() + b.element_count() - shared;
        double ratio = united == 0 ? 1.0 : static_cast<double>(shared) / united;
        sum += ratio;
        stats.min = std::min(stats.min, ratio);
        ++stats.pairs;
    }
    if (stats.pairs != 0) stats.mean = sum / stats.pairs;
    return stats;
}

} // namespace mvtgg
