#include <benchmark/benchmark.h>

// Microbenchmarks for the stages the end-to-end numbers are made of:
// matching, consolidation, projection, annotation evaluation and the two
// whole-history translation strategies. Workloads come from the generator
// and are built once per size, outside the timed loops.

#include "mvtgg/ast2cd.hpp"
#include "mvtgg/engine.hpp"
#include "mvtgg/generate.hpp"
#include "mvtgg/mv_rules.hpp"
#include "mvtgg/mvm.hpp"
#include "mvtgg/tgg.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

using namespace mvtgg;

namespace {

const VersionHistory& history_of(std::uint32_t versions)
{
    static std::map<std::uint32_t, VersionHistory> cache;
    auto it = cache.find(versions);
    if (it == cache.end()) {
        BenchConfig cfg;
        cfg.versions = versions;
        cfg.base_classes = 16;
        cfg.change_rate = 0.05;
        cfg.seed = 1234;
        it = cache.emplace(versions, generate_history(cfg)).first;
    }
    return it->second;
}

const TypedGraph& model_of(std::uint32_t base_classes)
{
    static std::map<std::uint32_t, TypedGraph> cache;
    auto it = cache.find(base_classes);
    if (it == cache.end()) {
        BenchConfig cfg;
        cfg.versions = 1;
        cfg.base_classes = base_classes;
        cfg.seed = 1234;
        it = cache.emplace(base_classes, generate_history(cfg).model_at(0)).first;
    }
    return it->second;
}

const ForwardRule& forward_rule(const char* name)
{
    static std::vector<ForwardRule> rules =
        derive_forward_rules(ast2cd::grammar(ast2cd::type_graph()));
    for (const ForwardRule& fr : rules)
        if (fr.name == name)
            return fr;
    throw std::logic_error("no such rule");
}

// A model with every class translated and every field still pending: the
// state in which the field pattern actually has matches to enumerate.
const TypedGraph& half_translated(std::uint32_t base_classes)
{
    static std::map<std::uint32_t, TypedGraph> cache;
    auto it = cache.find(base_classes);
    if (it == cache.end()) {
        auto types = ast2cd::type_graph();
        std::vector<ForwardRule> axiom_only{forward_rule("ClassToClass")};
        ForwardResult r = transform_forward(model_of(base_classes), axiom_only, *types);
        it = cache.emplace(base_classes, std::move(r.graph)).first;
    }
    return it->second;
}

} // namespace

static void BM_MatchFieldPattern(benchmark::State& state)
{
    const TypedGraph& host = half_translated(static_cast<std::uint32_t>(state.range(0)));
    const ForwardRule& fr = forward_rule("FieldToAssociation");
    std::size_t matches = 0;
    for (auto _ : state) {
        std::vector<GraphMorphism> found = find_forward_matches(fr, host);
        matches = found.size();
        benchmark::DoNotOptimize(found);
    }
    state.counters["matches"] = static_cast<double>(matches);
}
BENCHMARK(BM_MatchFieldPattern)->Arg(8)->Arg(32)->Arg(128);

static void BM_TransformForward(benchmark::State& state)
{
    auto types = ast2cd::type_graph();
    std::vector<ForwardRule> rules = derive_forward_rules(ast2cd::grammar(types));
    const TypedGraph& model = model_of(static_cast<std::uint32_t>(state.range(0)));
    for (auto _ : state) {
        ForwardResult r = transform_forward(model, rules, *types);
        benchmark::DoNotOptimize(r.graph);
    }
}
BENCHMARK(BM_TransformForward)->Arg(8)->Arg(32)->Arg(128);

static void BM_Consolidate(benchmark::State& state)
{
    const VersionHistory& h = history_of(static_cast<std::uint32_t>(state.range(0)));
    for (auto _ : state) {
        MultiVersionModel mvm = MultiVersionModel::consolidate(h);
        benchmark::DoNotOptimize(mvm.graph());
    }
}
BENCHMARK(BM_Consolidate)->Arg(10)->Arg(50);

static void BM_ProjectVersion(benchmark::State& state)
{
    std::uint32_t versions = static_cast<std::uint32_t>(state.range(0));
    MultiVersionModel mvm = MultiVersionModel::consolidate(history_of(versions));
    mvm.init_bookkeeping();
    for (auto _ : state) {
        TypedGraph projected = mvm.project_bookkeeping_at(versions - 1);
        benchmark::DoNotOptimize(projected);
    }
}
BENCHMARK(BM_ProjectVersion)->Arg(10)->Arg(50);

static void BM_PresenceEvaluation(benchmark::State& state)
{
    MultiVersionModel mvm =
        MultiVersionModel::consolidate(history_of(static_cast<std::uint32_t>(state.range(0))));
    std::vector<ElementId> nodes;
    mvm.graph().for_each_node([&](ElementId n) {
        if (mvm.is_structural_node(n))
            nodes.push_back(n);
    });
    for (auto _ : state) {
        std::uint64_t total = 0;
        for (ElementId n : nodes)
            total += mvm.presence(n).count();
        benchmark::DoNotOptimize(total);
    }
}
BENCHMARK(BM_PresenceEvaluation)->Arg(10)->Arg(50);

static void BM_TransformForwardMv(benchmark::State& state)
{
    auto types = ast2cd::type_graph();
    std::vector<MVForwardRule> rules = adapt_forward_rules(
        derive_forward_rules(ast2cd::grammar(types)), adapt_type_graph(types));
    MultiVersionModel start =
        MultiVersionModel::consolidate(history_of(static_cast<std::uint32_t>(state.range(0))));
    for (auto _ : state) {
        MvForwardResult r = transform_forward_mv(start, rules);
        benchmark::DoNotOptimize(r.model.graph());
    }
}
BENCHMARK(BM_TransformForwardMv)->Arg(10)->Arg(50);

static void BM_VerifyEquivalence(benchmark::State& state)
{
    std::vector<TGGRule> grammar = ast2cd::grammar(ast2cd::type_graph());
    const VersionHistory& h = history_of(static_cast<std::uint32_t>(state.range(0)));
    for (auto _ : state) {
        EquivalenceReport r = verify_equivalence(h, grammar);
        benchmark::DoNotOptimize(r.equivalent);
    }
}
BENCHMARK(BM_VerifyEquivalence)->Arg(10);

BENCHMARK_MAIN();
