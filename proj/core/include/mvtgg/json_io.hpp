#pragma once

#include "mvtgg/engine.hpp"
#include "mvtgg/history.hpp"
#include "mvtgg/mv_rules.hpp"
#include "mvtgg/mvm.hpp"
#include "mvtgg/tgg.hpp"

#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace mvtgg {

// JSON formats. Every document carries a versioned "format" field; arrays
// are emitted in ascending id order and keys in a fixed order, so equal
// inputs serialize byte for byte.
//
//   graph:    {format, nodes:[{id,type}], edges:[{id,type,src,tgt}],
//              bookkeeping:[ids]} — typed against an externally known
//              type graph (grammar and history documents embed theirs)
//   grammar:  {format, typegraph, rules:[{name, axiom, nodes, edges}]}
//              with created elements tagged "action": "++"
//   history:  {format, typegraph, versions:[{id,parents}], base_model,
//              deltas:[{version, add_nodes, add_edges, del_elements}]}
//   mvm:      {format, typegraph, version_graph, version_nodes, graph,
//              origin}
//
// Loaders throw InputError on malformed documents.

std::string graph_to_json(const TypedGraph& g);
TypedGraph graph_from_json(const std::string& text, std::shared_ptr<const TypeGraph> types);

std::string grammar_to_json(const std::vector<TGGRule>& rules);
std::pair<std::shared_ptr<const TripleTypeGraph>, std::vector<TGGRule>>
grammar_from_json(const std::string& text);

std::string history_to_json(const VersionHistory& history);
VersionHistory history_from_json(const std::string& text);

std::string mvm_to_json(const MultiVersionModel& mvm);
MultiVersionModel mvm_from_json(const std::string& text);

// Inspection output for derived rules (not meant to be loaded back).
std::string forward_rule_to_json(const ForwardRule& fr);
std::string mv_rule_to_json(const MVForwardRule& rule);

std::string log_to_json(const ApplicationLog& log);
ApplicationLog log_from_json(const std::string& text);

std::string report_to_json(const EquivalenceReport& report);
std::string report_to_text(const EquivalenceReport& report);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

} // namespace mvtgg
