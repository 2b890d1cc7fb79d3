#pragma once

#include "mvtgg/history.hpp"
#include "mvtgg/mv_rules.hpp"
#include "mvtgg/mvm.hpp"
#include "mvtgg/tgg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mvtgg {

// How thoroughly each transformation step checks for competing matches that
// want to translate the same elements (a sign of a non-deterministic rule
// set). `adjacent` compares the applied match against the next applicable
// one only; `full` compares all simultaneously applicable matches pairwise.
// Conflicts the cheap modes miss surface later as equivalence failures.
enum class GuardMode : std::uint8_t { none, adjacent, full };

struct EngineOptions {
    // Application-count ceiling; 0 means 10 x the initial element count.
    std::size_t max_applications = 0;
    GuardMode guard = GuardMode::adjacent;
    // 0 runs rules in declaration order and matches in enumeration order;
    // any other value applies a seeded shuffle to the applicable matches at
    // every step (the result must not depend on the choice — used to test
    // exactly that).
    std::uint64_t shuffle_seed = 0;
};

// One recorded rule application: enough to reproduce it exactly.
struct AppliedStep {
    std::string rule;
    // Pattern element -> host element, sorted by pattern element.
    std::vector<std::pair<ElementId, ElementId>> binding;
    // The version set the application was justified in; universe size 0 on
    // single-version runs.
    VersionSet versions;
};

struct ApplicationLog {
    std::vector<AppliedStep> steps;
};

struct ForwardResult {
    TypedGraph graph;
    ApplicationLog log;
    // True iff no bookkeeping mark remains (every element translated).
    bool complete = false;
};

// Marks the source model, then applies forward rules until none matches.
// Throws DeterminismError on degenerate rules or guard conflicts and
// TerminationError when the application bound is exceeded.
ForwardResult transform_forward(const TypedGraph& source, const std::vector<ForwardRule>& rules,
                                const TripleTypeGraph& types, const EngineOptions& options = {});

// Reapplies a recorded log; the result reproduces the original run's graph
// bit for bit (same element ids). Throws ApplicationError when the log does
// not fit the input.
TypedGraph replay_forward(const TypedGraph& source, const std::vector<ForwardRule>& rules,
                          const TripleTypeGraph& types, const ApplicationLog& log);

struct MvForwardResult {
    MultiVersionModel model;
    ApplicationLog log;
    // Indexed by version: true iff every source element present in the
    // version has been translated there.
    std::vector<bool> complete_per_version;
    bool complete = false; // conjunction over all versions
};

// Initializes the translation bookkeeping, then applies multi-version rules
// until none is applicable in any version. Guards as in transform_forward;
// two matches conflict when they want to translate a shared element in
// overlapping versions.
MvForwardResult transform_forward_mv(const MultiVersionModel& start,
                                     const std::vector<MVForwardRule>& rules,
                                     const EngineOptions& options = {});

// Replays a multi-version log (including the per-step version sets, which
// are recomputed and checked). Bit-reproduces the model graph.
MultiVersionModel replay_forward_mv(const MultiVersionModel& start,
                                    const std::vector<MVForwardRule>& rules,
                                    const ApplicationLog& log);

// Exact isomorphism test: returns a type- and mark-preserving bijection
// g -> h, or nullopt. Color refinement narrows the search, backtracking
// decides. Throws InputError when the graphs use different type graphs.
std::optional<GraphMorphism> graph_isomorphic(const TypedGraph& g, const TypedGraph& h);

// The per-version outcome of comparing the consolidated translation against
// the independent single-version translation.
struct VersionVerdict {
    VersionId version = 0;
    bool isomorphic = false;
    bool bookkeeping_equal = false;
    std::optional<GraphMorphism> witness; // projection -> single-version result
    std::string discrepancy;              // first difference when not equivalent
    double svm_ms = 0.0;
    std::size_t svm_applications = 0;
};

struct EquivalenceReport {
    bool equivalent = false;
    std::vector<VersionVerdict> versions;
    std::size_t mv_applications = 0;
    double comb_ms = 0.0; // consolidation + rule adaptation (setup)
    double mv_ms = 0.0;   // the consolidated transformation itself
};

// Runs the consolidated and the version-by-version pipelines end to end and
// compares them per version: the bookkeeping-carrying projection of the
// consolidated result must be isomorphic (marks included) to the
// single-version result, with equal bookkeeping sets.
EquivalenceReport verify_equivalence(const VersionHistory& history,
                                     const std::vector<TGGRule>& grammar,
                                     const EngineOptions& options = {});

} // namespace mvtgg
