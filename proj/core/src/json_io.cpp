#include "mvtgg/json_io.hpp"

#include "mvtgg/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mvtgg {
namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kGraphFormat = "mvtgg-graph/1";
constexpr const char* kGrammarFormat = "mvtgg-grammar/1";
constexpr const char* kHistoryFormat = "mvtgg-history/1";
constexpr const char* kMvmFormat = "mvtgg-mvm/1";
constexpr const char* kForwardRuleFormat = "mvtgg-forward-rule/1";
constexpr const char* kMvRuleFormat = "mvtgg-mv-rule/1";
constexpr const char* kLogFormat = "mvtgg-log/1";
constexpr const char* kReportFormat = "mvtgg-report/1";

Json parse(const std::string& text, const char* what)
{
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string(what) + ": not valid JSON: " + e.what());
    }
}

// Runs a loader body; json accesses that slip past the explicit field checks
// (wrong scalar types deep inside arrays, mostly) still come out as
// InputError.
template <class F> auto guarded(const char* what, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string(what) + ": malformed document: " + e.what());
    }
}

void require_format(const Json& j, const char* expected, const char* what)
{
    if (!j.is_object() || !j.contains("format") || !j["format"].is_string() ||
        j["format"].get<std::string>() != expected)
        throw InputError(std::string(what) + ": expected a document with format '" + expected +
                         "'");
}

// Wraps the member lookups so a missing or mistyped field reports its path
// instead of a bare type error.
template <class T> T field(const Json& j, const char* key, const char* what)
{
    if (!j.is_object() || !j.contains(key))
        throw InputError(std::string(what) + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InputError(std::string(what) + ": field '" + key + "' has the wrong type");
    }
}

const Json& array_field(const Json& j, const char* key, const char* what)
{
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_array())
        throw InputError(std::string(what) + ": missing array field '" + key + "'");
    return j.at(key);
}

const Json& object_field(const Json& j, const char* key, const char* what)
{
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_object())
        throw InputError(std::string(what) + ": missing object field '" + key + "'");
    return j.at(key);
}

// ---- graphs ---------------------------------------------------------------

Json graph_body(const TypedGraph& g)
{
    Json nodes = Json::array();
    std::vector<ElementId> node_ids = g.node_ids();
    std::sort(node_ids.begin(), node_ids.end());
    for (ElementId n : node_ids)
        nodes.push_back({{"id", n}, {"type", g.types().node_type_name(g.node_type(n))}});

    Json edges = Json::array();
    std::vector<ElementId> edge_ids = g.edge_ids();
    std::sort(edge_ids.begin(), edge_ids.end());
    for (ElementId e : edge_ids)
        edges.push_back({{"id", e},
                         {"type", g.types().edge_type_name(g.edge_type(e))},
                         {"src", g.edge_src(e)},
                         {"tgt", g.edge_tgt(e)}});

    Json body;
    body["nodes"] = std::move(nodes);
    body["edges"] = std::move(edges);
    body["bookkeeping"] = g.marked_elements();
    return body;
}

TypedGraph graph_from_body(const Json& j, std::shared_ptr<const TypeGraph> types,
                           const char* what)
{
    TypedGraph g(std::move(types));
    for (const Json& n : array_field(j, "nodes", what)) {
        ElementId id = field<ElementId>(n, "id", what);
        std::string type = field<std::string>(n, "type", what);
        g.add_node_with_id(id, g.types().node_type(type));
    }
    for (const Json& e : array_field(j, "edges", what)) {
        ElementId id = field<ElementId>(e, "id", what);
        std::string type = field<std::string>(e, "type", what);
        g.add_edge_with_id(id, g.types().edge_type(type), field<ElementId>(e, "src", what),
                           field<ElementId>(e, "tgt", what));
    }
    if (j.contains("bookkeeping"))
        for (const Json& id : array_field(j, "bookkeeping", what))
            g.set_mark(id.get<ElementId>(), true);
    return g;
}

// ---- triple type graphs ---------------------------------------------------

Domain domain_from_string(const std::string& s, const char* what)
{
    if (s == "source") return Domain::source;
    if (s == "correspondence") return Domain::correspondence;
    if (s == "target") return Domain::target;
    throw InputError(std::string(what) + ": unknown domain '" + s + "'");
}

Json triple_to_body(const TripleTypeGraph& ttg)
{
    const TypeGraph& tg = ttg.types();
    Json nodes = Json::array();
    for (NodeTypeId t = 0; t < tg.node_type_count(); ++t)
        nodes.push_back(
            {{"name", tg.node_type_name(t)}, {"domain", domain_name(ttg.node_domain(t))}});
    Json edges = Json::array();
    for (EdgeTypeId t = 0; t < tg.edge_type_count(); ++t)
        edges.push_back({{"name", tg.edge_type_name(t)},
                         {"src", tg.node_type_name(tg.edge_src(t))},
                         {"tgt", tg.node_type_name(tg.edge_tgt(t))},
                         {"domain", domain_name(ttg.edge_domain(t))}});
    Json body;
    body["nodes"] = std::move(nodes);
    body["edges"] = std::move(edges);
    return body;
}

std::shared_ptr<const TripleTypeGraph> triple_from_body(const Json& j, const char* what)
{
    auto ttg = std::make_shared<TripleTypeGraph>();
    for (const Json& n : array_field(j, "nodes", what))
        ttg->add_node_type(field<std::string>(n, "name", what),
                           domain_from_string(field<std::string>(n, "domain", what), what));
    for (const Json& e : array_field(j, "edges", what)) {
        const TypeGraph& tg = ttg->types();
        ttg->add_edge_type(field<std::string>(e, "name", what),
                           tg.node_type(field<std::string>(e, "src", what)),
                           tg.node_type(field<std::string>(e, "tgt", what)),
                           domain_from_string(field<std::string>(e, "domain", what), what));
    }
    ttg->validate();
    return ttg;
}

// ---- rule graphs ----------------------------------------------------------

// Rule graphs are emitted like plain graphs but with per-element domain tags
// and the created elements (everything outside `preserved`) tagged "++".
Json rule_body(const TripleTypeGraph& ttg, const TypedGraph& rhs,
               const std::set<ElementId>& preserved)
{
    Json nodes = Json::array();
    std::vector<ElementId> node_ids = rhs.node_ids();
    std::sort(node_ids.begin(), node_ids.end());
    for (ElementId n : node_ids) {
        Json entry = {{"id", n},
                      {"type", rhs.types().node_type_name(rhs.node_type(n))},
                      {"domain", domain_name(ttg.node_domain(rhs.node_type(n)))}};
        if (!preserved.count(n)) entry["action"] = "++";
        nodes.push_back(std::move(entry));
    }
    Json edges = Json::array();
    std::vector<ElementId> edge_ids = rhs.edge_ids();
    std::sort(edge_ids.begin(), edge_ids.end());
    for (ElementId e : edge_ids) {
        Json entry = {{"id", e},
                      {"type", rhs.types().edge_type_name(rhs.edge_type(e))},
                      {"src", rhs.edge_src(e)},
                      {"tgt", rhs.edge_tgt(e)},
                      {"domain", domain_name(ttg.edge_domain(rhs.edge_type(e)))}};
        if (!preserved.count(e)) entry["action"] = "++";
        edges.push_back(std::move(entry));
    }
    Json body;
    body["nodes"] = std::move(nodes);
    body["edges"] = std::move(edges);
    return body;
}

} // namespace

std::string graph_to_json(const TypedGraph& g)
{
    Json j;
    j["format"] = kGraphFormat;
    j.update(graph_body(g));
    return j.dump(2) + "\n";
}

TypedGraph graph_from_json(const std::string& text, std::shared_ptr<const TypeGraph> types)
{
    Json j = parse(text, "graph");
    require_format(j, kGraphFormat, "graph");
    return guarded("graph", [&] { return graph_from_body(j, std::move(types), "graph"); });
}

std::string grammar_to_json(const std::vector<TGGRule>& rules)
{
    if (rules.empty()) throw InputError("grammar: cannot serialize an empty rule set");
    const TripleTypeGraph& ttg = *rules.front().types;
    Json out;
    out["format"] = kGrammarFormat;
    out["typegraph"] = triple_to_body(ttg);
    Json list = Json::array();
    for (const TGGRule& r : rules) {
        Json entry;
        entry["name"] = r.name;
        entry["axiom"] = r.axiom;
        entry.update(rule_body(ttg, r.rhs, r.preserved));
        list.push_back(std::move(entry));
    }
    out["rules"] = std::move(list);
    return out.dump(2) + "\n";
}

std::pair<std::shared_ptr<const TripleTypeGraph>, std::vector<TGGRule>>
grammar_from_json(const std::string& text)
{
    Json j = parse(text, "grammar");
    require_format(j, kGrammarFormat, "grammar");
    return guarded("grammar",
                   [&]() -> std::pair<std::shared_ptr<const TripleTypeGraph>,
                                      std::vector<TGGRule>> {
        std::shared_ptr<const TripleTypeGraph> types =
            triple_from_body(object_field(j, "typegraph", "grammar"), "grammar typegraph");
        std::vector<TGGRule> rules;
        for (const Json& r : array_field(j, "rules", "grammar")) {
            TypedGraph rhs = graph_from_body(r, types->graph(), "grammar rule");
            std::set<ElementId> preserved;
            auto collect = [&](const char* key) {
                for (const Json& entry : array_field(r, key, "grammar rule"))
                    if (!entry.contains("action"))
                        preserved.insert(field<ElementId>(entry, "id", "grammar rule"));
            };
            collect("nodes");
            collect("edges");
            TGGRule rule{field<std::string>(r, "name", "grammar rule"),
                         field<bool>(r, "axiom", "grammar rule"), types, std::move(rhs),
                         std::move(preserved)};
            rule.validate();
            rules.push_back(std::move(rule));
        }
        if (rules.empty()) throw InputError("grammar: no rules");
        return {types, std::move(rules)};
    });
}

std::string history_to_json(const VersionHistory& history)
{
    Json j;
    j["format"] = kHistoryFormat;
    j["typegraph"] = triple_to_body(*history.triple());

    const VersionGraph& vg = history.version_graph();
    Json versions = Json::array();
    for (std::uint32_t i = 0; i < vg.size(); ++i) {
        Json parents = Json::array();
        for (std::uint32_t p : vg.parents(i))
            parents.push_back(vg.id_of(p));
        versions.push_back({{"id", vg.id_of(i)}, {"parents", std::move(parents)}});
    }
    j["versions"] = std::move(versions);
    j["base_model"] = graph_body(history.model_at(0));

    const TypeGraph& tg = history.triple()->types();
    Json deltas = Json::array();
    for (std::uint32_t i = 1; i < vg.size(); ++i) {
        VersionId id = vg.id_of(i);
        const Delta& d = history.delta_of(id);
        Json add_nodes = Json::array();
        for (const Delta::NodeAdd& n : d.add_nodes)
            add_nodes.push_back({{"id", n.id}, {"type", tg.node_type_name(n.type)}});
        Json add_edges = Json::array();
        for (const Delta::EdgeAdd& e : d.add_edges)
            add_edges.push_back({{"id", e.id},
                                 {"type", tg.edge_type_name(e.type)},
                                 {"src", e.src},
                                 {"tgt", e.tgt}});
        deltas.push_back({{"version", id},
                          {"add_nodes", std::move(add_nodes)},
                          {"add_edges", std::move(add_edges)},
                          {"del_elements", d.del_elements}});
    }
    j["deltas"] = std::move(deltas);
    return j.dump(2) + "\n";
}

static VersionHistory history_from_doc(const Json& j)
{
    std::shared_ptr<const TripleTypeGraph> types =
        triple_from_body(object_field(j, "typegraph", "history"), "history typegraph");
    const TypeGraph& tg = types->types();

    const Json& versions = array_field(j, "versions", "history");
    if (versions.empty()) throw InputError("history: no versions");

    const Json& first = versions[0];
    if (!array_field(first, "parents", "history version").empty())
        throw InputError("history: the first version must have no parents");
    TypedGraph base = graph_from_body(object_field(j, "base_model", "history"), types->graph(),
                                      "history base model");
    VersionHistory history(types, field<VersionId>(first, "id", "history version"),
                           std::move(base));

    std::unordered_map<VersionId, const Json*> delta_by_version;
    for (const Json& d : array_field(j, "deltas", "history"))
        delta_by_version[field<VersionId>(d, "version", "history delta")] = &d;

    for (std::size_t i = 1; i < versions.size(); ++i) {
        const Json& v = versions[i];
        VersionId id = field<VersionId>(v, "id", "history version");
        const Json& parents = array_field(v, "parents", "history version");
        if (parents.size() != 1)
            throw InputError("history: version " + std::to_string(id) +
                             " must have exactly one parent");
        auto it = delta_by_version.find(id);
        if (it == delta_by_version.end())
            throw InputError("history: version " + std::to_string(id) + " has no delta");
        const Json& d = *it->second;
        Delta delta;
        for (const Json& n : array_field(d, "add_nodes", "history delta"))
            delta.add_nodes.push_back(
                {field<ElementId>(n, "id", "history delta"),
                 tg.node_type(field<std::string>(n, "type", "history delta"))});
        for (const Json& e : array_field(d, "add_edges", "history delta"))
            delta.add_edges.push_back(
                {field<ElementId>(e, "id", "history delta"),
                 tg.edge_type(field<std::string>(e, "type", "history delta")),
                 field<ElementId>(e, "src", "history delta"),
                 field<ElementId>(e, "tgt", "history delta")});
        for (const Json& x : array_field(d, "del_elements", "history delta"))
            delta.del_elements.push_back(x.get<ElementId>());
        history.add_version(id, parents[0].get<VersionId>(), std::move(delta));
    }
    history.finalize();
    return history;
}

VersionHistory history_from_json(const std::string& text)
{
    Json j = parse(text, "history");
    require_format(j, kHistoryFormat, "history");
    return guarded("history", [&] { return history_from_doc(j); });
}

std::string mvm_to_json(const MultiVersionModel& mvm)
{
    Json j;
    j["format"] = kMvmFormat;
    j["typegraph"] = triple_to_body(*mvm.info().original);

    const VersionGraph& vg = mvm.versions();
    Json versions = Json::array();
    for (std::uint32_t i = 0; i < vg.size(); ++i) {
        Json parents = Json::array();
        for (std::uint32_t p : vg.parents(i))
            parents.push_back(vg.id_of(p));
        versions.push_back({{"id", vg.id_of(i)}, {"parents", std::move(parents)}});
    }
    j["version_graph"] = {{"versions", std::move(versions)}};

    Json version_nodes = Json::array();
    for (std::uint32_t i = 0; i < vg.size(); ++i)
        version_nodes.push_back(mvm.version_node(i));
    j["version_nodes"] = std::move(version_nodes);

    j["graph"] = graph_body(mvm.graph());

    Json origin = Json::array();
    std::vector<ElementId> structural;
    mvm.graph().for_each_node([&](ElementId n) {
        if (mvm.is_structural_node(n)) structural.push_back(n);
    });
    std::sort(structural.begin(), structural.end());
    for (ElementId n : structural)
        origin.push_back({{"node", n}, {"element", mvm.origin(n)}});
    j["origin"] = std::move(origin);
    return j.dump(2) + "\n";
}

static MultiVersionModel mvm_from_doc(const Json& j)
{
    std::shared_ptr<const TripleTypeGraph> types =
        triple_from_body(object_field(j, "typegraph", "mvm"), "mvm typegraph");
    AdaptedTypeInfo info = adapt_type_graph(types);

    VersionGraph vg;
    const Json& vgraph = object_field(j, "version_graph", "mvm");
    for (const Json& v : array_field(vgraph, "versions", "mvm version graph"))
        vg.add_version(field<VersionId>(v, "id", "mvm version"));
    for (const Json& v : array_field(vgraph, "versions", "mvm version graph")) {
        VersionId id = field<VersionId>(v, "id", "mvm version");
        for (const Json& p : array_field(v, "parents", "mvm version"))
            vg.add_successor(p.get<VersionId>(), id);
    }
    vg.finalize();

    TypedGraph graph =
        graph_from_body(object_field(j, "graph", "mvm"), info.adapted, "mvm graph");

    std::unordered_map<ElementId, ElementId> origin;
    for (const Json& o : array_field(j, "origin", "mvm"))
        origin[field<ElementId>(o, "node", "mvm origin")] =
            field<ElementId>(o, "element", "mvm origin");

    std::vector<ElementId> version_nodes;
    for (const Json& n : array_field(j, "version_nodes", "mvm"))
        version_nodes.push_back(n.get<ElementId>());

    return MultiVersionModel(std::move(info), std::move(vg), std::move(graph),
                             std::move(origin), std::move(version_nodes));
}

MultiVersionModel mvm_from_json(const std::string& text)
{
    Json j = parse(text, "mvm");
    require_format(j, kMvmFormat, "mvm");
    return guarded("mvm", [&] { return mvm_from_doc(j); });
}

std::string forward_rule_to_json(const ForwardRule& fr)
{
    std::set<ElementId> pattern_ids;
    fr.pattern.for_each_node([&](ElementId n) { pattern_ids.insert(n); });
    fr.pattern.for_each_edge([&](ElementId e) { pattern_ids.insert(e); });

    Json j;
    j["format"] = kForwardRuleFormat;
    j["name"] = fr.name;
    j.update(rule_body(*fr.types, fr.rhs, pattern_ids));
    j["pattern"] = std::vector<ElementId>(pattern_ids.begin(), pattern_ids.end());
    j["translated"] = std::vector<ElementId>(fr.translated.begin(), fr.translated.end());
    return j.dump(2) + "\n";
}

std::string mv_rule_to_json(const MVForwardRule& rule)
{
    Json j;
    j["format"] = kMvRuleFormat;
    j["name"] = rule.name;

    std::set<ElementId> pattern_ids;
    rule.pattern.for_each_node([&](ElementId n) { pattern_ids.insert(n); });
    rule.pattern.for_each_edge([&](ElementId e) { pattern_ids.insert(e); });
    // The adapted type graph has no domains; emit the plain graph body with
    // "++" tags instead of the domain-tagged rule body.
    const TypedGraph& rhs = rule.rhs;
    Json nodes = Json::array();
    std::vector<ElementId> node_ids = rhs.node_ids();
    std::sort(node_ids.begin(), node_ids.end());
    for (ElementId n : node_ids) {
        Json entry = {{"id", n}, {"type", rhs.types().node_type_name(rhs.node_type(n))}};
        if (!pattern_ids.count(n)) entry["action"] = "++";
        nodes.push_back(std::move(entry));
    }
    Json edges = Json::array();
    std::vector<ElementId> edge_ids = rhs.edge_ids();
    std::sort(edge_ids.begin(), edge_ids.end());
    for (ElementId e : edge_ids) {
        Json entry = {{"id", e},
                      {"type", rhs.types().edge_type_name(rhs.edge_type(e))},
                      {"src", rhs.edge_src(e)},
                      {"tgt", rhs.edge_tgt(e)}};
        if (!pattern_ids.count(e)) entry["action"] = "++";
        edges.push_back(std::move(entry));
    }
    j["nodes"] = std::move(nodes);
    j["edges"] = std::move(edges);
    j["pattern"] = std::vector<ElementId>(pattern_ids.begin(), pattern_ids.end());
    j["translated"] = rule.translated_nodes;
    j["context"] = rule.context_nodes;
    j["created"] = rule.created_nodes;
    return j.dump(2) + "\n";
}

std::string log_to_json(const ApplicationLog& log)
{
    Json steps = Json::array();
    for (const AppliedStep& s : log.steps) {
        Json binding = Json::array();
        for (const auto& [from, to] : s.binding)
            binding.push_back({from, to});
        Json entry;
        entry["rule"] = s.rule;
        entry["binding"] = std::move(binding);
        if (s.versions.universe_size() != 0)
            entry["versions"] = {{"universe", s.versions.universe_size()},
                                 {"members", s.versions.indices()}};
        steps.push_back(std::move(entry));
    }
    Json j;
    j["format"] = kLogFormat;
    j["steps"] = std::move(steps);
    return j.dump(2) + "\n";
}

static ApplicationLog log_from_doc(const Json& j)
{
    ApplicationLog log;
    for (const Json& s : array_field(j, "steps", "log")) {
        AppliedStep step;
        step.rule = field<std::string>(s, "rule", "log step");
        for (const Json& pair : array_field(s, "binding", "log step")) {
            if (!pair.is_array() || pair.size() != 2)
                throw InputError("log step: binding entries must be [from, to] pairs");
            step.binding.emplace_back(pair[0].get<ElementId>(), pair[1].get<ElementId>());
        }
        if (s.contains("versions")) {
            const Json& v = s.at("versions");
            VersionSet set(field<std::uint32_t>(v, "universe", "log step"));
            for (const Json& m : array_field(v, "members", "log step"))
                set.set(m.get<std::uint32_t>());
            step.versions = std::move(set);
        }
        log.steps.push_back(std::move(step));
    }
    return log;
}

ApplicationLog log_from_json(const std::string& text)
{
    Json j = parse(text, "log");
    require_format(j, kLogFormat, "log");
    return guarded("log", [&] { return log_from_doc(j); });
}

std::string report_to_json(const EquivalenceReport& report)
{
    Json versions = Json::array();
    for (const VersionVerdict& v : report.versions) {
        Json entry;
        entry["version"] = v.version;
        entry["isomorphic"] = v.isomorphic;
        entry["bookkeeping_equal"] = v.bookkeeping_equal;
        entry["svm_ms"] = v.svm_ms;
        entry["svm_applications"] = v.svm_applications;
        if (!v.discrepancy.empty()) entry["discrepancy"] = v.discrepancy;
        if (v.witness) {
            Json pairs = Json::array();
            for (const auto& [from, to] : v.witness->sorted_pairs())
                pairs.push_back({from, to});
            entry["witness"] = std::move(pairs);
        }
        versions.push_back(std::move(entry));
    }
    Json j;
    j["format"] = kReportFormat;
    j["equivalent"] = report.equivalent;
    j["mv_applications"] = report.mv_applications;
    j["comb_ms"] = report.comb_ms;
    j["mv_ms"] = report.mv_ms;
    j["versions"] = std::move(versions);
    return j.dump(2) + "\n";
}

std::string report_to_text(const EquivalenceReport& report)
{
    std::ostringstream out;
    out << (report.equivalent ? "EQUIVALENT" : "NOT EQUIVALENT") << ": consolidated vs "
        << report.versions.size() << " single-version runs\n";
    out << "  consolidation " << report.comb_ms << " ms, consolidated transformation "
        << report.mv_ms << " ms, " << report.mv_applications << " applications\n";
    std::size_t svm_total = 0;
    for (const VersionVerdict& v : report.versions) {
        out << "  version " << v.version << ": "
            << (v.isomorphic ? "isomorphic" : "NOT isomorphic") << ", bookkeeping "
            << (v.bookkeeping_equal ? "equal" : "DIFFERENT") << ", " << v.svm_applications
            << " applications, " << v.svm_ms << " ms";
        if (!v.discrepancy.empty()) out << " — " << v.discrepancy;
        out << "\n";
        svm_total += v.svm_applications;
    }
    out << "  total single-version applications: " << svm_total << "\n";
    return out.str();
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write file: " + path.string());
    out << content;
    if (!out) throw InputError("write failed: " + path.string());
}

} // namespace mvtgg
