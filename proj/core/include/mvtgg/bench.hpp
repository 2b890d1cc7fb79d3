#pragma once

#include "mvtgg/engine.hpp"
#include "mvtgg/history.hpp"
#include "mvtgg/tgg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mvtgg {

// Wall-time measurement of one translation strategy over a whole history.
struct StrategyTiming {
    std::string strategy;
    std::size_t versions = 0;
    // Model elements the strategy processes: the summed per-version model
    // sizes for version-by-version runs, the number of consolidated
    // structural elements for the multi-version run.
    std::size_t elements = 0;
    std::size_t applications = 0;
    std::vector<double> runs_ms;

    double mean_ms() const;
    // Sample standard deviation over the repeats.
    double stddev_ms() const;
    // True when the spread exceeds 5% of the mean — the run is too noisy to
    // quote.
    bool noisy() const;
};

struct BenchOptions {
    std::size_t repeats = 10;
    // Additionally times the version-by-version strategy with one thread
    // per version (reported as its own row; the sequential number stays the
    // baseline).
    bool parallel_svm = false;
    EngineOptions engine;
};

struct BenchResult {
    StrategyTiming svm;
    StrategyTiming mvm;
    std::optional<StrategyTiming> svm_parallel;

    // Sequential version-by-version time over consolidated time.
    double speedup() const;
};

// Times both strategies over the history: the version-by-version strategy
// translates every version's model independently; the consolidated strategy
// translates the consolidated model once. Consolidation and projection stay
// outside the timed sections. Runs the equivalence verification first and
// throws VerificationError instead of timing a run whose strategies
// disagree.
BenchResult run_bench(const VersionHistory& history, const std::vector<TGGRule>& grammar,
                      const BenchOptions& options = {});

// One row per strategy: strategy,versions,elements,mean_ms,stddev_ms,applications
std::string bench_to_csv(const BenchResult& result);

} // namespace mvtgg
