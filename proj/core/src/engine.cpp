#include "mvtgg/engine.hpp"

#include "mvtgg/errors.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace mvtgg {
namespace {

std::string describe_binding(const GraphMorphism& m)
{
    std::string s = "[";
    bool first = true;
    for (const auto& [from, to] : m.sorted_pairs()) {
        if (!first) s += ", ";
        first = false;
        s += std::to_string(from) + "->" + std::to_string(to);
    }
    return s + "]";
}

// One applicable rule application a step could pick.
struct Candidate {
    std::size_t rule = 0;
    GraphMorphism match;
    VersionSet versions;           // empty universe on single-version runs
    std::vector<ElementId> clears; // sorted host elements it would translate
};

bool same_binding(const GraphMorphism& a, const GraphMorphism& b)
{
    return a.node_map == b.node_map && a.edge_map == b.edge_map;
}

std::optional<ElementId> shared_element(const std::vector<ElementId>& a,
                                        const std::vector<ElementId>& b)
{
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) return *i;
        if (*i < *j)
            ++i;
        else
            ++j;
    }
    return std::nullopt;
}

// How many applicable candidates a step must gather: the winner, plus the
// runner-up for the adjacent guard, or everything for full checking and for
// shuffled runs. 0 means "all".
std::size_t candidates_needed(const EngineOptions& o)
{
    if (o.shuffle_seed != 0 || o.guard == GuardMode::full) return 0;
    return o.guard == GuardMode::adjacent ? 2 : 1;
}

// Two distinct candidates wanting to translate a shared element (in
// overlapping versions, for multi-version runs) make the outcome depend on
// the choice between them — exactly what the determinism assumption forbids.
void check_guard(const std::vector<Candidate>& cands,
                 const std::function<const std::string&(std::size_t)>& rule_name, GuardMode mode,
                 bool versioned)
{
    if (mode == GuardMode::none || cands.size() < 2) return;
    auto conflict = [&](const Candidate& a, const Candidate& b) -> std::optional<ElementId> {
        if (a.rule == b.rule && same_binding(a.match, b.match)) return std::nullopt;
        if (versioned && (a.versions & b.versions).empty()) return std::nullopt;
        return shared_element(a.clears, b.clears);
    };
    auto trip = [&](const Candidate& a, const Candidate& b, ElementId shared) {
        throw DeterminismError(
            "determinism guard: rule '" + rule_name(a.rule) + "' at " + describe_binding(a.match) +
            " and rule '" + rule_name(b.rule) + "' at " + describe_binding(b.match) +
            " would both translate element " + std::to_string(shared));
    };
    if (mode == GuardMode::adjacent) {
        if (auto s = conflict(cands[0], cands[1])) trip(cands[0], cands[1], *s);
        return;
    }
    for (std::size_t i = 0; i < cands.size(); ++i)
        for (std::size_t j = i + 1; j < cands.size(); ++j)
            if (auto s = conflict(cands[i], cands[j])) trip(cands[i], cands[j], *s);
}

[[noreturn]] void throw_bound(std::size_t bound)
{
    throw TerminationError("application bound of " + std::to_string(bound) +
                           " exceeded; the rule set does not seem to terminate");
}

[[noreturn]] void throw_degenerate(const std::string& rule)
{
    throw DeterminismError("forward rule '" + rule +
                           "' translates nothing and could apply forever");
}

GraphMorphism binding_to_morphism(const TypedGraph& pattern,
                                  const std::vector<std::pair<ElementId, ElementId>>& binding)
{
    GraphMorphism m;
    for (const auto& [from, to] : binding) {
        if (pattern.is_node(from))
            m.node_map[from] = to;
        else if (pattern.is_edge(from))
            m.edge_map[from] = to;
        else
            throw ApplicationError("log binds element " + std::to_string(from) +
                                   " that is not in the rule pattern");
    }
    return m;
}

} // namespace

ForwardResult transform_forward(const TypedGraph& source, const std::vector<ForwardRule>& rules,
                                const TripleTypeGraph& types, const EngineOptions& options)
{
    for (const ForwardRule& fr : rules)
        if (fr.degenerate()) throw_degenerate(fr.name);

    ForwardResult res{init_forward(source, types), {}, false};
    TypedGraph& g = res.graph;
    const std::size_t bound =
        options.max_applications ? options.max_applications : 10 * g.element_count();
    const std::size_t need = candidates_needed(options);
    std::mt19937_64 rng(options.shuffle_seed);
    std::size_t applied = 0;

    for (;;) {
        std::vector<Candidate> cands;
        for (std::size_t i = 0; i < rules.size(); ++i) {
            const ForwardRule& fr = rules[i];
            for_each_monomorphism(fr.pattern, g, {}, forward_match_options(fr, g),
                                  [&](const GraphMorphism& m) {
                                      Candidate c{i, m, {}, {}};
                                      for (ElementId p : fr.translated)
                                          c.clears.push_back(m.image(p));
                                      std::sort(c.clears.begin(), c.clears.end());
                                      cands.push_back(std::move(c));
                                      return need == 0 || cands.size() < need;
                                  });
            if (need != 0 && cands.size() >= need) break;
        }
        if (cands.empty()) break;
        if (options.shuffle_seed != 0) std::shuffle(cands.begin(), cands.end(), rng);
        check_guard(
            cands, [&](std::size_t i) -> const std::string& { return rules[i].name; },
            options.guard, false);
        if (applied >= bound) throw_bound(bound);

        const ForwardRule& fr = rules[cands[0].rule];
        apply_forward_in_place(g, fr, cands[0].match);
        res.log.steps.push_back({fr.name, cands[0].match.sorted_pairs(), VersionSet()});
        ++applied;
    }
    res.complete = translation_complete(g);
    return res;
}

TypedGraph replay_forward(const TypedGraph& source, const std::vector<ForwardRule>& rules,
                          const TripleTypeGraph& types, const ApplicationLog& log)
{
    TypedGraph g = init_forward(source, types);
    std::unordered_map<std::string, const ForwardRule*> by_name;
    for (const ForwardRule& fr : rules)
        by_name[fr.name] = &fr;
    for (const AppliedStep& step : log.steps) {
        auto it = by_name.find(step.rule);
        if (it == by_name.end())
            throw ApplicationError("log names unknown rule '" + step.rule + "'");
        const ForwardRule& fr = *it->second;
        apply_forward_in_place(g, fr, binding_to_morphism(fr.pattern, step.binding));
    }
    return g;
}

MvForwardResult transform_forward_mv(const MultiVersionModel& start,
                                     const std::vector<MVForwardRule>& rules,
                                     const EngineOptions& options)
{
    for (const MVForwardRule& r : rules)
        if (r.degenerate()) throw_degenerate(r.name);

    MvForwardResult res{start, {}, {}, false};
    MultiVersionModel& mvm = res.model;
    mvm.init_bookkeeping();
    const std::size_t bound = options.max_applications ? options.max_applications
                                                       : 10 * mvm.graph().element_count();
    const std::size_t need = candidates_needed(options);
    std::mt19937_64 rng(options.shuffle_seed);
    std::size_t applied = 0;

    for (;;) {
        std::vector<Candidate> cands;
        for (std::size_t i = 0; i < rules.size(); ++i) {
            const MVForwardRule& r = rules[i];
            std::unordered_set<ElementId> translated(r.translated_nodes.begin(),
                                                     r.translated_nodes.end());
            MatchOptions opts;
            opts.element_filter = [&](ElementId pat, ElementId host) {
                if (!translated.count(pat)) return true;
                return mvm.untranslated(host).any();
            };
            for_each_monomorphism(r.pattern, mvm.graph(), {}, opts,
                                  [&](const GraphMorphism& m) {
                                      VersionSet p = applicable_versions(mvm, r, m);
                                      if (p.any()) {
                                          Candidate c{i, m, std::move(p), {}};
                                          for (ElementId v : r.translated_nodes)
                                              c.clears.push_back(m.node_image(v));
                                          std::sort(c.clears.begin(), c.clears.end());
                                          cands.push_back(std::move(c));
                                      }
                                      return need == 0 || cands.size() < need;
                                  });
            if (need != 0 && cands.size() >= need) break;
        }
        if (cands.empty()) break;
        if (options.shuffle_seed != 0) std::shuffle(cands.begin(), cands.end(), rng);
        check_guard(
            cands, [&](std::size_t i) -> const std::string& { return rules[i].name; },
            options.guard, true);
        if (applied >= bound) throw_bound(bound);

        const MVForwardRule& r = rules[cands[0].rule];
        apply_mv_rule(mvm, r, cands[0].match);
        res.log.steps.push_back({r.name, cands[0].match.sorted_pairs(), cands[0].versions});
        ++applied;
    }

    res.complete_per_version.assign(mvm.versions().size(), true);
    mvm.graph().for_each_node([&](ElementId v) {
        if (!mvm.is_structural_node(v) || mvm.domain_of(v) != Domain::source) return;
        mvm.untranslated(v).for_each(
            [&](std::uint32_t t) { res.complete_per_version[t] = false; });
    });
    res.complete = std::all_of(res.complete_per_version.begin(), res.complete_per_version.end(),
                               [](bool b) { return b; });
    return res;
}

MultiVersionModel replay_forward_mv(const MultiVersionModel& start,
                                    const std::vector<MVForwardRule>& rules,
                                    const ApplicationLog& log)
{
    MultiVersionModel mvm = start;
    mvm.init_bookkeeping();
    std::unordered_map<std::string, const MVForwardRule*> by_name;
    for (const MVForwardRule& r : rules)
        by_name[r.name] = &r;
    for (const AppliedStep& step : log.steps) {
        auto it = by_name.find(step.rule);
        if (it == by_name.end())
            throw ApplicationError("log names unknown rule '" + step.rule + "'");
        const MVForwardRule& r = *it->second;
        GraphMorphism m = binding_to_morphism(r.pattern, step.binding);
        if (auto why = morphism_violation(m, r.pattern, mvm.graph(), true))
            throw ApplicationError("log step for rule '" + step.rule +
                                   "' does not fit the model: " + *why);
        if (step.versions.universe_size() != 0 &&
            !(applicable_versions(mvm, r, m) == step.versions))
            throw ApplicationError("log step for rule '" + step.rule +
                                   "' applies to different versions than recorded");
        apply_mv_rule(mvm, r, m);
    }
    return mvm;
}

// ---- isomorphism ----------------------------------------------------------

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v)
{
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

// Iterated neighborhood refinement: nodes start colored by (type, mark) and
// repeatedly absorb the sorted colors of their incident edges/neighbors.
// Isomorphic graphs end up with equal color multisets; unequal multisets
// prove non-isomorphism, while the backtracking below settles the rest.
std::unordered_map<ElementId, std::uint64_t> refine_colors(const TypedGraph& g,
                                                           std::size_t rounds)
{
    std::unordered_map<ElementId, std::uint64_t> color;
    g.for_each_node([&](ElementId n) {
        color[n] = mix(mix(0xa11ce, g.node_type(n)), g.marked(n) ? 1 : 2);
    });
    for (std::size_t r = 0; r < rounds; ++r) {
        std::unordered_map<ElementId, std::uint64_t> next;
        g.for_each_node([&](ElementId n) {
            std::vector<std::uint64_t> sig;
            g.for_each_out_edge(n, [&](ElementId e) {
                std::uint64_t s = mix(1, g.edge_type(e));
                s = mix(s, g.marked(e) ? 1 : 2);
                sig.push_back(mix(s, color.at(g.edge_tgt(e))));
            });
            g.for_each_in_edge(n, [&](ElementId e) {
                std::uint64_t s = mix(2, g.edge_type(e));
                s = mix(s, g.marked(e) ? 1 : 2);
                sig.push_back(mix(s, color.at(g.edge_src(e))));
            });
            std::sort(sig.begin(), sig.end());
            std::uint64_t c = color.at(n);
            for (std::uint64_t s : sig)
                c = mix(c, s);
            next[n] = c;
        });
        color = std::move(next);
    }
    return color;
}

std::vector<std::uint64_t> sorted_values(const std::unordered_map<ElementId, std::uint64_t>& m)
{
    std::vector<std::uint64_t> v;
    v.reserve(m.size());
    for (const auto& [_, c] : m)
        v.push_back(c);
    std::sort(v.begin(), v.end());
    return v;
}

// Multiset of (type, mark) over the edges a -> b.
std::vector<std::pair<EdgeTypeId, bool>> edges_between(const TypedGraph& x, ElementId a,
                                                       ElementId b)
{
    std::vector<std::pair<EdgeTypeId, bool>> v;
    x.for_each_out_edge(a, [&](ElementId e) {
        if (x.edge_tgt(e) == b) v.emplace_back(x.edge_type(e), x.marked(e));
    });
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

std::optional<GraphMorphism> graph_isomorphic(const TypedGraph& g, const TypedGraph& h)
{
    if (!g.same_type_graph(h))
        throw InputError("isomorphism check requires a common type graph");
    if (g.node_count() != h.node_count() || g.edge_count() != h.edge_count() ||
        g.marked_count() != h.marked_count())
        return std::nullopt;
    for (NodeTypeId t = 0; t < g.types().node_type_count(); ++t)
        if (g.node_count_of_type(t) != h.node_count_of_type(t)) return std::nullopt;
    for (EdgeTypeId t = 0; t < g.types().edge_type_count(); ++t)
        if (g.edge_count_of_type(t) != h.edge_count_of_type(t)) return std::nullopt;

    const std::size_t rounds = std::min<std::size_t>(g.node_count(), 12);
    auto gc = refine_colors(g, rounds);
    auto hc = refine_colors(h, rounds);
    if (sorted_values(gc) != sorted_values(hc)) return std::nullopt;

    std::unordered_map<std::uint64_t, std::vector<ElementId>> h_by_color;
    h.for_each_node([&](ElementId n) { h_by_color[hc.at(n)].push_back(n); });
    for (auto& [_, v] : h_by_color)
        std::sort(v.begin(), v.end());

    // Most-constrained first: small candidate classes up front shrink the
    // search tree; ids break ties so the found witness is deterministic.
    std::vector<ElementId> order;
    g.for_each_node([&](ElementId n) { order.push_back(n); });
    std::sort(order.begin(), order.end(), [&](ElementId a, ElementId b) {
        std::size_t ca = h_by_color.at(gc.at(a)).size();
        std::size_t cb = h_by_color.at(gc.at(b)).size();
        return std::tie(ca, a) < std::tie(cb, b);
    });

    std::unordered_map<ElementId, ElementId> assign;
    std::unordered_set<ElementId> used;

    std::function<bool(std::size_t)> place = [&](std::size_t idx) -> bool {
        if (idx == order.size()) return true;
        ElementId gn = order[idx];
        for (ElementId hn : h_by_color.at(gc.at(gn))) {
            if (used.count(hn)) continue;
            if (h.node_type(hn) != g.node_type(gn) || h.marked(hn) != g.marked(gn)) continue;
            if (h.out_degree(hn) != g.out_degree(gn) || h.in_degree(hn) != g.in_degree(gn))
                continue;
            assign[gn] = hn;
            used.insert(hn);
            std::unordered_set<ElementId> nbrs;
            g.for_each_out_edge(gn, [&](ElementId e) { nbrs.insert(g.edge_tgt(e)); });
            g.for_each_in_edge(gn, [&](ElementId e) { nbrs.insert(g.edge_src(e)); });
            bool ok = true;
            for (ElementId u : nbrs) {
                auto it = assign.find(u);
                if (it == assign.end()) continue;
                if (edges_between(g, gn, u) != edges_between(h, hn, it->second) ||
                    edges_between(g, u, gn) != edges_between(h, it->second, hn)) {
                    ok = false;
                    break;
                }
            }
            if (ok && place(idx + 1)) return true;
            assign.erase(gn);
            used.erase(hn);
        }
        return false;
    };
    if (!place(0)) return std::nullopt;

    // The node bijection fixes the edge bijection up to parallel edges of
    // equal type and mark, which are interchangeable; pair those by id.
    using EdgeKey = std::tuple<ElementId, ElementId, EdgeTypeId, bool>;
    std::map<EdgeKey, std::vector<ElementId>> h_edges;
    h.for_each_edge([&](ElementId e) {
        h_edges[{h.edge_src(e), h.edge_tgt(e), h.edge_type(e), h.marked(e)}].push_back(e);
    });
    for (auto& [_, v] : h_edges)
        std::sort(v.begin(), v.end());

    GraphMorphism iso;
    iso.node_map = std::move(assign);
    std::vector<ElementId> g_edges = g.edge_ids();
    std::sort(g_edges.begin(), g_edges.end());
    std::map<EdgeKey, std::size_t> cursor;
    for (ElementId e : g_edges) {
        EdgeKey key{iso.node_map.at(g.edge_src(e)), iso.node_map.at(g.edge_tgt(e)),
                    g.edge_type(e), g.marked(e)};
        auto it = h_edges.find(key);
        std::size_t& at = cursor[key];
        if (it == h_edges.end() || at >= it->second.size()) return std::nullopt;
        iso.edge_map[e] = it->second[at++];
    }
    return iso;
}

// ---- equivalence verification ---------------------------------------------

namespace {

std::string first_difference(const TypedGraph& projected, const TypedGraph& single)
{
    if (projected.node_count() != single.node_count())
        return "node counts differ: " + std::to_string(projected.node_count()) + " vs " +
               std::to_string(single.node_count());
    if (projected.edge_count() != single.edge_count())
        return "edge counts differ: " + std::to_string(projected.edge_count()) + " vs " +
               std::to_string(single.edge_count());
    const TypeGraph& types = projected.types();
    for (NodeTypeId t = 0; t < types.node_type_count(); ++t)
        if (projected.node_count_of_type(t) != single.node_count_of_type(t))
            return "counts of '" + types.node_type_name(t) + "' nodes differ: " +
                   std::to_string(projected.node_count_of_type(t)) + " vs " +
                   std::to_string(single.node_count_of_type(t));
    for (EdgeTypeId t = 0; t < types.edge_type_count(); ++t)
        if (projected.edge_count_of_type(t) != single.edge_count_of_type(t))
            return "counts of '" + types.edge_type_name(t) + "' edges differ: " +
                   std::to_string(projected.edge_count_of_type(t)) + " vs " +
                   std::to_string(single.edge_count_of_type(t));
    if (projected.marked_count() != single.marked_count())
        return "numbers of untranslated elements differ: " +
               std::to_string(projected.marked_count()) + " vs " +
               std::to_string(single.marked_count());
    return "equal element counts, but no mark-preserving isomorphism exists";
}

} // namespace

EquivalenceReport verify_equivalence(const VersionHistory& history,
                                     const std::vector<TGGRule>& grammar,
                                     const EngineOptions& options)
{
    using Clock = std::chrono::steady_clock;
    auto ms = [](Clock::duration d) {
        return std::chrono::duration<double, std::milli>(d).count();
    };

    std::vector<ForwardRule> fwd = derive_forward_rules(grammar);

    EquivalenceReport report;
    Clock::time_point t0 = Clock::now();
    AdaptedTypeInfo info = adapt_type_graph(history.triple());
    std::vector<MVForwardRule> mv_rules = adapt_forward_rules(fwd, info);
    MultiVersionModel start = MultiVersionModel::consolidate(history);
    Clock::time_point t1 = Clock::now();
    report.comb_ms = ms(t1 - t0);

    MvForwardResult mv = transform_forward_mv(start, mv_rules, options);
    report.mv_ms = ms(Clock::now() - t1);
    report.mv_applications = mv.log.steps.size();

    report.equivalent = true;
    const VersionGraph& vg = history.version_graph();
    for (std::uint32_t t = 0; t < vg.size(); ++t) {
        VersionVerdict v;
        v.version = vg.id_of(t);
        Clock::time_point s0 = Clock::now();
        ForwardResult single =
            transform_forward(history.model_at(t), fwd, *history.triple(), options);
        v.svm_ms = ms(Clock::now() - s0);
        v.svm_applications = single.log.steps.size();

        TypedGraph projected = mv.model.project_bookkeeping_at(t);
        v.bookkeeping_equal = bookkeeping_set(projected) == bookkeeping_set(single.graph);
        v.witness = graph_isomorphic(projected, single.graph);
        v.isomorphic = v.witness.has_value();
        if (!v.isomorphic)
            v.discrepancy = first_difference(projected, single.graph);
        else if (!v.bookkeeping_equal)
            v.discrepancy = "isomorphic, but the untranslated element ids disagree";
        if (!v.isomorphic || !v.bookkeeping_equal) report.equivalent = false;
        report.versions.push_back(std::move(v));
    }
    return report;
}

} // namespace mvtgg
