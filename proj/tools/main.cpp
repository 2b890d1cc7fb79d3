#include "mvtgg/ast2cd.hpp"
#include "mvtgg/bench.hpp"
#include "mvtgg/engine.hpp"
#include "mvtgg/errors.hpp"
#include "mvtgg/generate.hpp"
#include "mvtgg/json_io.hpp"
#include "mvtgg/mv_rules.hpp"
#include "mvtgg/mvm.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace mvtgg;

// Every verb writes its primary document to --output, or to stdout when the
// flag is absent (or "-"). Diagnostics go to stderr.
void emit(const std::string& content, const std::string& output)
{
    if (output.empty() || output == "-")
        std::cout << content;
    else
        write_text_file(output, content);
}

// The demonstration grammar doubles as the default, so the tool works out
// of the box on generated histories.
std::pair<std::shared_ptr<const TripleTypeGraph>, std::vector<TGGRule>>
load_grammar(const std::string& path)
{
    if (path.empty()) {
        std::shared_ptr<const TripleTypeGraph> types = ast2cd::type_graph();
        return {types, ast2cd::grammar(types)};
    }
    return grammar_from_json(read_text_file(path));
}

VersionHistory load_history(const std::string& path)
{
    return history_from_json(read_text_file(path));
}

// Joins per-rule documents into one JSON array.
std::string join_docs(const std::vector<std::string>& docs)
{
    std::string out = "[\n";
    for (std::size_t i = 0; i < docs.size(); ++i) {
        std::string doc = docs[i];
        while (!doc.empty() && doc.back() == '\n')
            doc.pop_back();
        out += doc;
        out += i + 1 < docs.size() ? ",\n" : "\n";
    }
    out += "]\n";
    return out;
}

struct CommonFlags {
    std::string grammar;
    std::string output;
    std::uint64_t seed = 0;
    std::size_t max_apps = 0;
    std::string guard = "adjacent";

    EngineOptions engine() const
    {
        EngineOptions o;
        o.max_applications = max_apps;
        o.shuffle_seed = seed;
        if (guard == "none")
            o.guard = GuardMode::none;
        else if (guard == "adjacent")
            o.guard = GuardMode::adjacent;
        else if (guard == "full")
            o.guard = GuardMode::full;
        else
            throw InputError("unknown guard mode '" + guard + "'");
        return o;
    }
};

void add_engine_flags(CLI::App& cmd, CommonFlags& flags)
{
    cmd.add_option("--seed", flags.seed,
                   "Shuffle the applicable matches at every step with this seed (0: off)");
    cmd.add_option("--max-apps", flags.max_apps,
                   "Application ceiling (0: ten times the model size)");
    cmd.add_option("--guard", flags.guard,
                   "Determinism guard: none, adjacent or full (default adjacent)")
        ->check(CLI::IsMember({"none", "adjacent", "full"}));
}

void add_grammar_flag(CLI::App& cmd, CommonFlags& flags)
{
    cmd.add_option("--grammar", flags.grammar,
                   "Grammar document (default: the built-in AST-to-class-diagram grammar)");
}

int run_derive(const CommonFlags& flags, bool mv)
{
    auto [types, grammar] = load_grammar(flags.grammar);
    std::vector<ForwardRule> fwd = derive_forward_rules(grammar);
    std::vector<std::string> docs;
    if (mv) {
        AdaptedTypeInfo info = adapt_type_graph(types);
        for (const MVForwardRule& rule : adapt_forward_rules(fwd, info))
            docs.push_back(mv_rule_to_json(rule));
    } else {
        for (const ForwardRule& fr : fwd)
            docs.push_back(forward_rule_to_json(fr));
    }
    emit(join_docs(docs), flags.output);
    return 0;
}

int run_comb(const std::string& history_path, const CommonFlags& flags)
{
    VersionHistory history = load_history(history_path);
    emit(mvm_to_json(MultiVersionModel::consolidate(history)), flags.output);
    return 0;
}

int run_project(const std::string& mvm_path, VersionId version, bool bookkeeping,
                const CommonFlags& flags)
{
    MultiVersionModel mvm = mvm_from_json(read_text_file(mvm_path));
    std::uint32_t idx = mvm.versions().index_of(version);
    TypedGraph projected =
        bookkeeping ? mvm.project_bookkeeping_at(idx) : mvm.project_at(idx);
    emit(graph_to_json(projected), flags.output);
    return 0;
}

int run_transform(const std::string& model_path, const std::string& log_path,
                  const CommonFlags& flags)
{
    auto [types, grammar] = load_grammar(flags.grammar);
    TypedGraph model = graph_from_json(read_text_file(model_path), types->graph());
    ForwardResult result =
        transform_forward(model, derive_forward_rules(grammar), *types, flags.engine());
    if (!result.complete)
        std::cerr << "warning: " << bookkeeping_set(result.graph).size()
                  << " elements left untranslated\n";
    if (!log_path.empty()) write_text_file(log_path, log_to_json(result.log));
    emit(graph_to_json(result.graph), flags.output);
    return 0;
}

int run_mv_transform(const std::string& history_path, const std::string& log_path,
                     const CommonFlags& flags)
{
    auto [types, grammar] = load_grammar(flags.grammar);
    VersionHistory history = load_history(history_path);
    std::vector<MVForwardRule> rules =
        adapt_forward_rules(derive_forward_rules(grammar), adapt_type_graph(types));
    MvForwardResult result =
        transform_forward_mv(MultiVersionModel::consolidate(history), rules, flags.engine());
    if (!result.complete) {
        std::size_t open = 0;
        for (bool done : result.complete_per_version)
            open += !done;
        std::cerr << "warning: translation incomplete in " << open << " of "
                  << result.complete_per_version.size() << " versions\n";
    }
    if (!log_path.empty()) write_text_file(log_path, log_to_json(result.log));
    emit(mvm_to_json(result.model), flags.output);
    return 0;
}

int run_verify(const std::string& history_path, const CommonFlags& flags)
{
    auto [types, grammar] = load_grammar(flags.grammar);
    VersionHistory history = load_history(history_path);
    EquivalenceReport report = verify_equivalence(history, grammar, flags.engine());
    std::cout << report_to_text(report);
    if (!flags.output.empty()) write_text_file(flags.output, report_to_json(report));
    return report.equivalent ? 0 : 1;
}

int run_generate(const BenchConfig& cfg, const CommonFlags& flags)
{
    VersionHistory history = generate_history(cfg);
    SharingStats sharing = adjacent_sharing(history);
    std::cerr << "generated " << history.version_count() << " versions, "
              << history.total_model_elements() << " summed elements";
    if (sharing.pairs != 0)
        std::cerr << ", adjacent sharing mean " << sharing.mean << " min " << sharing.min;
    std::cerr << "\n";
    emit(history_to_json(history), flags.output);
    return 0;
}

int run_bench(const std::string& history_path, const BenchConfig& cfg, BenchOptions options,
              const CommonFlags& flags)
{
    auto [types, grammar] = load_grammar(flags.grammar);
    VersionHistory history =
        history_path.empty() ? generate_history(cfg) : load_history(history_path);
    options.engine = flags.engine();
    BenchResult result = ::mvtgg::run_bench(history, grammar, options);

    std::cerr << "speedup " << result.speedup() << "x (svm " << result.svm.mean_ms()
              << " ms, mvm " << result.mvm.mean_ms() << " ms)\n";
    for (const StrategyTiming* t : {&result.svm, &result.mvm}) {
        if (t->noisy())
            std::cerr << "warning: " << t->strategy << " spread above 5% of mean (sigma "
                      << t->stddev_ms() << " ms)\n";
    }
    emit(bench_to_csv(result), flags.output);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Forward graph transformation of version histories: one model at a time, or "
                 "all versions at once on a consolidated model"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string history_path;
    std::string model_path;
    std::string mvm_path;
    std::string log_path;
    VersionId version = 0;
    bool mv = false;
    bool bookkeeping = false;
    BenchConfig cfg;
    BenchOptions bench_options;

    CLI::App* derive = app.add_subcommand("derive", "Derive forward rules from a grammar");
    add_grammar_flag(*derive, flags);
    derive->add_flag("--mv", mv, "Emit the multi-version adaptations of the forward rules");
    derive->add_option("--output", flags.output, "Write the rule documents here");

    CLI::App* comb = app.add_subcommand("comb", "Consolidate a history into one model");
    comb->add_option("--history", history_path, "History document")->required();
    comb->add_option("--output", flags.output, "Write the consolidated model here");

    CLI::App* project = app.add_subcommand("project", "Extract one version from a consolidated model");
    project->add_option("--mvm", mvm_path, "Consolidated model document")->required();
    project->add_option("--version", version, "Version id to extract")->required();
    project->add_flag("--bookkeeping", bookkeeping,
                      "Mark elements whose translation is still pending in that version");
    project->add_option("--output", flags.output, "Write the projected model here");

    CLI::App* transform = app.add_subcommand("transform", "Translate a single source model");
    transform->add_option("--model", model_path, "Source model document")->required();
    add_grammar_flag(*transform, flags);
    add_engine_flags(*transform, flags);
    transform->add_option("--log", log_path, "Also record the applied steps here");
    transform->add_option("--output", flags.output, "Write the translated model here");

    CLI::App* mv_transform =
        app.add_subcommand("mv-transform", "Translate all versions on the consolidated model");
    mv_transform->add_option("--history", history_path, "History document")->required();
    add_grammar_flag(*mv_transform, flags);
    add_engine_flags(*mv_transform, flags);
    mv_transform->add_option("--log", log_path, "Also record the applied steps here");
    mv_transform->add_option("--output", flags.output, "Write the transformed model here");

    CLI::App* verify = app.add_subcommand(
        "verify", "Check that the consolidated translation matches every per-version run");
    verify->add_option("--history", history_path, "History document")->required();
    add_grammar_flag(*verify, flags);
    add_engine_flags(*verify, flags);
    verify->add_option("--output", flags.output, "Write the JSON report here");

    CLI::App* generate = app.add_subcommand("generate", "Generate a synthetic version history");
    generate->add_option("--versions", cfg.versions, "Number of versions");
    generate->add_option("--base-classes", cfg.base_classes, "Classes in the base model");
    generate->add_option("--fields-per-class", cfg.fields_per_class,
                         "Fields per class in the base model");
    generate->add_option("--change-rate", cfg.change_rate,
                         "Fraction of elements touched per version");
    generate->add_option("--branch-probability", cfg.branch_probability,
                         "Chance a version branches off a random earlier one");
    generate->add_option("--seed", cfg.seed, "Generator seed");
    generate->add_option("--output", flags.output, "Write the history here");

    CLI::App* bench = app.add_subcommand(
        "bench", "Time the per-version strategy against the consolidated one");
    bench->add_option("--history", history_path,
                      "History document (default: generate one from the flags below)");
    add_grammar_flag(*bench, flags);
    bench->add_option("--versions", cfg.versions, "Generated history: number of versions");
    bench->add_option("--base-classes", cfg.base_classes, "Generated history: base classes");
    bench->add_option("--fields-per-class", cfg.fields_per_class,
                      "Generated history: fields per class");
    bench->add_option("--change-rate", cfg.change_rate,
                      "Generated history: fraction of elements touched per version");
    bench->add_option("--branch-probability", cfg.branch_probability,
                      "Generated history: branch chance");
    bench->add_option("--seed", cfg.seed, "Generated history: seed");
    bench->add_option("--repeat", bench_options.repeats, "Timed repetitions per strategy");
    bench->add_flag("--parallel", bench_options.parallel_svm,
                    "Also time the per-version strategy with one thread per version");
    bench->add_option("--max-apps", flags.max_apps,
                      "Application ceiling (0: ten times the model size)");
    bench->add_option("--output", flags.output, "Write the CSV here");

    try {
        app.parse(argc, argv);
        if (derive->parsed()) return run_derive(flags, mv);
        if (comb->parsed()) return run_comb(history_path, flags);
        if (project->parsed()) return run_project(mvm_path, version, bookkeeping, flags);
        if (transform->parsed()) return run_transform(model_path, log_path, flags);
        if (mv_transform->parsed()) return run_mv_transform(history_path, log_path, flags);
        if (verify->parsed()) return run_verify(history_path, flags);
        if (generate->parsed()) return run_generate(cfg, flags);
        if (bench->parsed()) return run_bench(history_path, cfg, bench_options, flags);
        return 2;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        // Determinism, termination, application and verification failures:
        // the run itself went wrong, not the way the tool was called.
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
