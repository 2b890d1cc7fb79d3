#include "mvtgg/matching.hpp"

#include "mvtgg/errors.hpp"

#include <algorithm>
#include <unordered_set>

namespace mvtgg {

namespace {

// The search interleaves node placement and edge placement. Edges are bound
// as soon as one endpoint is placed (walking the host adjacency lists), which
// keeps the candidate sets small and makes parallel edges ordinary backtrack
// points instead of a special case.
struct Step {
    enum class Kind { place_node, edge_from_src, edge_from_tgt };
    Kind kind;
    ElementId elem; // pattern node or pattern edge
};

std::vector<Step> build_plan(const TypedGraph& pattern)
{
    std::vector<Step> plan;
    std::unordered_set<ElementId> covered_nodes, covered_edges;
    std::vector<ElementId> nodes = pattern.node_ids();
    std::vector<ElementId> edges = pattern.edge_ids();

    auto cover_edge_if_possible = [&]() -> bool {
        // Prefer edges whose endpoints are both already placed (pure checks),
        // then edges with one placed endpoint; insertion order breaks ties.
        for (int pass = 0; pass < 2; ++pass) {
            for (ElementId e : edges) {
                if (covered_edges.count(e))
                    continue;
                bool src_in = covered_nodes.count(pattern.edge_src(e)) != 0;
                bool tgt_in = covered_nodes.count(pattern.edge_tgt(e)) != 0;
                if (pass == 0 && !(src_in && tgt_in))
                    continue;
                if (pass == 1 && !(src_in || tgt_in))
                    continue;
                plan.push_back({src_in ? Step::Kind::edge_from_src : Step::Kind::edge_from_tgt, e});
                covered_edges.insert(e);
                covered_nodes.insert(pattern.edge_src(e));
                covered_nodes.insert(pattern.edge_tgt(e));
                return true;
            }
        }
        return false;
    };

    while (covered_nodes.size() < nodes.size() || covered_edges.size() < edges.size()) {
        if (cover_edge_if_possible())
            continue;
        // No edge reachable from the placed part: open a new component at its
        // highest-degree node (most constrained first).
        ElementId best = kNoElement;
        std::size_t best_deg = 0;
        for (ElementId n : nodes) {
            if (covered_nodes.count(n))
                continue;
            std::size_t deg = pattern.out_degree(n) + pattern.in_degree(n);
            if (best == kNoElement || deg > best_deg) {
                best = n;
                best_deg = deg;
            }
        }
        plan.push_back({Step::Kind::place_node, best});
        covered_nodes.insert(best);
    }
    return plan;
}

class Search {
public:
    Search(const TypedGraph& pattern, const TypedGraph& host, const std::vector<Nac>& nacs,
           const MatchOptions& options, const std::function<bool(const GraphMorphism&)>& cb)
        : pattern_(pattern), host_(host), nacs_(nacs), options_(options), cb_(cb)
    {
        if (!pattern.same_type_graph(host))
            throw InputError("pattern and host are typed over different type graphs");
        plan_ = build_plan(pattern);
        apply_seed();
    }

    void run() { descend(0); }

private:
    bool passes_filter(ElementId p, ElementId h) const
    {
        return !options_.element_filter || options_.element_filter(p, h);
    }

    void apply_seed()
    {
        for (const auto& [p, h] : options_.seed.node_map) {
            if (!pattern_.is_node(p) || !host_.is_node(h) ||
                pattern_.node_type(p) != host_.node_type(h))
                throw InputError("match seed binds node " + std::to_string(p) +
                                 " incompatibly");
            assignment_.node_map.emplace(p, h);
            if (!used_nodes_.insert(h).second)
                throw InputError("match seed is not injective on nodes");
        }
        for (const auto& [p, h] : options_.seed.edge_map) {
            if (!pattern_.is_edge(p) || !host_.is_edge(h) ||
                pattern_.edge_type(p) != host_.edge_type(h))
                throw InputError("match seed binds edge " + std::to_string(p) +
                                 " incompatibly");
            assignment_.edge_map.emplace(p, h);
            if (!used_edges_.insert(h).second)
                throw InputError("match seed is not injective on edges");
        }
    }

    const std::vector<ElementId>& node_candidates(NodeTypeId t)
    {
        auto it = node_candidates_.find(t);
        if (it != node_candidates_.end())
            return it->second;
        std::vector<ElementId> c;
        host_.for_each_node_of_type(t, [&](ElementId id) { c.push_back(id); });
        std::sort(c.begin(), c.end());
        return node_candidates_.emplace(t, std::move(c)).first->second;
    }

    void descend(std::size_t step_index)
    {
        if (stopped_)
            return;
        if (step_index == plan_.size()) {
            emit();
            return;
        }
        const Step& step = plan_[step_index];
        switch (step.kind) {
        case Step::Kind::place_node:
            place_node(step_index, step.elem);
            break;
        case Step::Kind::edge_from_src:
            place_edge(step_index, step.elem, /*from_src=*/true);
            break;
        case Step::Kind::edge_from_tgt:
            place_edge(step_index, step.elem, /*from_src=*/false);
            break;
        }
    }

    void place_node(std::size_t step_index, ElementId p)
    {
        if (assignment_.node_map.count(p)) { // pre-bound by the seed
            descend(step_index + 1);
            return;
        }
        for (ElementId h : node_candidates(pattern_.node_type(p))) {
            if (stopped_)
                return;
            if (used_nodes_.count(h) || !passes_filter(p, h))
                continue;
            assignment_.node_map.emplace(p, h);
            used_nodes_.insert(h);
            descend(step_index + 1);
            assignment_.node_map.erase(p);
            used_nodes_.erase(h);
        }
    }

    void place_edge(std::size_t step_index, ElementId e, bool from_src)
    {
        ElementId p_anchor = from_src ? pattern_.edge_src(e) : pattern_.edge_tgt(e);
        ElementId p_other = from_src ? pattern_.edge_tgt(e) : pattern_.edge_src(e);
        ElementId h_anchor = assignment_.node_image(p_anchor);

        if (ElementId he = assignment_.edge_image(e); he != kNoElement) {
            // Pre-bound edge: only check that it commutes with the node part.
            ElementId h_src = host_.edge_src(he);
            ElementId h_tgt = host_.edge_tgt(he);
            ElementId p_src_img = assignment_.node_image(pattern_.edge_src(e));
            ElementId p_tgt_img = assignment_.node_image(pattern_.edge_tgt(e));
            if ((from_src ? h_src : h_tgt) != h_anchor)
                return;
            if (p_src_img != kNoElement && p_src_img != h_src)
                return;
            if (p_tgt_img != kNoElement && p_tgt_img != h_tgt)
                return;
            if (p_src_img == kNoElement || p_tgt_img == kNoElement) {
                // Seeded edge fixes a not-yet-placed endpoint.
                ElementId p_free = p_src_img == kNoElement ? pattern_.edge_src(e)
                                                           : pattern_.edge_tgt(e);
                ElementId h_free = p_src_img == kNoElement ? h_src : h_tgt;
                if (used_nodes_.count(h_free) || !passes_filter(p_free, h_free))
                    return;
                assignment_.node_map.emplace(p_free, h_free);
                used_nodes_.insert(h_free);
                descend(step_index + 1);
                assignment_.node_map.erase(p_free);
                used_nodes_.erase(h_free);
            } else {
                descend(step_index + 1);
            }
            return;
        }

        EdgeTypeId want = pattern_.edge_type(e);
        std::vector<ElementId> candidates;
        if (from_src)
            host_.for_each_out_edge(h_anchor, [&](ElementId he) {
                if (host_.edge_type(he) == want)
                    candidates.push_back(he);
            });
        else
            host_.for_each_in_edge(h_anchor, [&](ElementId he) {
                if (host_.edge_type(he) == want)
                    candidates.push_back(he);
            });
        std::sort(candidates.begin(), candidates.end());

        ElementId other_img = assignment_.node_image(p_other);
        for (ElementId he : candidates) {
            if (stopped_)
                return;
            if (used_edges_.count(he) || !passes_filter(e, he))
                continue;
            ElementId h_other = from_src ? host_.edge_tgt(he) : host_.edge_src(he);
            if (other_img != kNoElement) {
                if (h_other != other_img)
                    continue;
                bind_edge_and_descend(step_index, e, he, kNoElement, kNoElement);
            } else {
                if (used_nodes_.count(h_other) || !passes_filter(p_other, h_other))
                    continue;
                bind_edge_and_descend(step_index, e, he, p_other, h_other);
            }
        }
    }

    void bind_edge_and_descend(std::size_t step_index, ElementId e, ElementId he,
                               ElementId p_node, ElementId h_node)
    {
        assignment_.edge_map.emplace(e, he);
        used_edges_.insert(he);
        if (p_node != kNoElement) {
            assignment_.node_map.emplace(p_node, h_node);
            used_nodes_.insert(h_node);
        }
        descend(step_index + 1);
        if (p_node != kNoElement) {
            assignment_.node_map.erase(p_node);
            used_nodes_.erase(h_node);
        }
        assignment_.edge_map.erase(e);
        used_edges_.erase(he);
    }

    bool nac_violated() const
    {
        for (const Nac& nac : nacs_) {
            // Seed the NAC graph's search with the committed match along the
            // embedding; element filters deliberately do not apply to the
            // NAC extension, only to the match itself.
            MatchOptions ext;
            for (const auto& [l, h] : assignment_.node_map) {
                ElementId n = nac.embedding.node_image(l);
                if (n != kNoElement)
                    ext.seed.node_map.emplace(n, h);
            }
            for (const auto& [l, h] : assignment_.edge_map) {
                ElementId n = nac.embedding.edge_image(l);
                if (n != kNoElement)
                    ext.seed.edge_map.emplace(n, h);
            }
            bool found = false;
            for_each_monomorphism(nac.graph, host_, {}, ext, [&](const GraphMorphism&) {
                found = true;
                return false;
            });
            if (found)
                return true;
        }
        return false;
    }

    void emit()
    {
        if (!nacs_.empty() && nac_violated())
            return;
        if (!cb_(assignment_))
            stopped_ = true;
    }

    const TypedGraph& pattern_;
    const TypedGraph& host_;
    const std::vector<Nac>& nacs_;
    const MatchOptions& options_;
    const std::function<bool(const GraphMorphism&)>& cb_;
    std::vector<Step> plan_;
    GraphMorphism assignment_;
    std::unordered_set<ElementId> used_nodes_, used_edges_;
    std::unordered_map<NodeTypeId, std::vector<ElementId>> node_candidates_;
    bool stopped_ = false;
};

} // namespace

void for_each_monomorphism(const TypedGraph& pattern, const TypedGraph& host,
                           const std::vector<Nac>& nacs, const MatchOptions& options,
                           const std::function<bool(const GraphMorphism&)>& cb)
{
    Search(pattern, host, nacs, options, cb).run();
}

std::vector<GraphMorphism> find_monomorphisms(const TypedGraph& pattern, const TypedGraph& host,
                                              const std::vector<Nac>& nacs,
                                              const MatchOptions& options)
{
    std::vector<GraphMorphism> out;
    for_each_monomorphism(pattern, host, nacs, options, [&](const GraphMorphism& m) {
        out.push_back(m);
        return true;
    });
    return out;
}

std::optional<GraphMorphism> find_monomorphism(const TypedGraph& pattern, const TypedGraph& host,
                                               const std::vector<Nac>& nacs,
                                               const MatchOptions& options)
{
    std::optional<GraphMorphism> out;
    for_each_monomorphism(pattern, host, nacs, options, [&](const GraphMorphism& m) {
        out = m;
        return false;
    });
    return out;
}

} // namespace mvtgg
