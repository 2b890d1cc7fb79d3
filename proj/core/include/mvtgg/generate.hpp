#pragma once

#include "mvtgg/history.hpp"

#include <cstdint>

namespace mvtgg {

// Parameters of the synthetic workload: version histories of AST-like models
// (class declarations with typed fields) evolving by small random edits.
struct BenchConfig {
    std::uint32_t versions = 1;
    std::uint32_t base_classes = 10;
    std::uint32_t fields_per_class = 2;
    // Fraction of the parent model's elements touched per new version.
    double change_rate = 0.02;
    // Chance that a new version branches off a random earlier version
    // instead of continuing the latest one.
    double branch_probability = 0.0;
    std::uint64_t seed = 1;

    // Counts must be positive (at least two base classes, so every field can
    // reference a class other than its owner), fractions within [0,1];
    // throws InputError.
    void validate() const;
};

// Builds a version history over the demonstration type graph,
// deterministically for a fixed config. Every model is kept totally
// translatable by the demonstration grammar: fields are created and deleted
// as whole declaration/access/type-reference chains, never typed by their
// owning class, and class deletion cascades to every field that mentions the
// class.
VersionHistory generate_history(const BenchConfig& cfg);

// Element sharing between each version and its parent, measured on the
// generated models as |intersection| / |union| of element-id sets.
struct SharingStats {
    double mean = 1.0;
    double min = 1.0;
    std::size_t pairs = 0;
};

SharingStats adjacent_sharing(const VersionHistory& history);

} // namespace mvtgg
