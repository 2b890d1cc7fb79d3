#include "mvtgg/bench.hpp"

#include "mvtgg/errors.hpp"
#include "mvtgg/mv_rules.hpp"
#include "mvtgg/mvm.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>

namespace mvtgg {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// One warmup pass, then the timed repeats.
template <class F> std::vector<double> measure(std::size_t repeats, F&& run)
{
    run();
    std::vector<double> times;
    times.reserve(repeats);
    for (std::size_t i = 0; i < repeats; ++i) {
        Clock::time_point start = Clock::now();
        run();
        times.push_back(ms_since(start));
    }
    return times;
}

} // namespace

double StrategyTiming::mean_ms() const
{
    if (runs_ms.empty()) return 0.0;
    double sum = 0.0;
    for (double t : runs_ms)
        sum += t;
    return sum / runs_ms.size();
}

double StrategyTiming::stddev_ms() const
{
    if (runs_ms.size() < 2) return 0.0;
    double mean = mean_ms();
    double sq = 0.0;
    for (double t : runs_ms)
        sq += (t - mean) * (t - mean);
    return std::sqrt(sq / (runs_ms.size() - 1));
}

bool StrategyTiming::noisy() const
{
    double mean = mean_ms();
    return mean > 0.0 && stddev_ms() > 0.05 * mean;
}

double BenchResult::speedup() const
{
    double mvm_mean = mvm.mean_ms();
    return mvm_mean > 0.0 ? svm.mean_ms() / mvm_mean : 0.0;
}

BenchResult run_bench(const VersionHistory& history, const std::vector<TGGRule>& grammar,
                      const BenchOptions& options)
{
    if (options.repeats == 0) throw InputError("bench: repeats must be positive");

    EquivalenceReport report = verify_equivalence(history, grammar, options.engine);
    if (!report.equivalent) {
        std::string why = "bench: strategies disagree, refusing to time";
        for (const VersionVerdict& v : report.versions)
            if (!v.discrepancy.empty()) {
                why += " (version " + std::to_string(v.version) + ": " + v.discrepancy + ")";
                break;
            }
        throw VerificationError(why);
    }

    const TripleTypeGraph& types = *history.triple();
    std::vector<ForwardRule> fwd = derive_forward_rules(grammar);
    AdaptedTypeInfo info = adapt_type_graph(history.triple());
    std::vector<MVForwardRule> mv_rules = adapt_forward_rules(fwd, info);
    MultiVersionModel start = MultiVersionModel::consolidate(history);

    std::size_t version_count = history.version_count();

    BenchResult result;
    result.svm.strategy = "svm";
    result.svm.versions = version_count;
    result.svm.elements = history.total_model_elements();
    for (std::uint32_t t = 0; t < version_count; ++t)
        result.svm.applications +=
            transform_forward(history.model_at(t), fwd, types, options.engine).log.steps.size();
    result.svm.runs_ms = measure(options.repeats, [&] {
        for (std::uint32_t t = 0; t < version_count; ++t)
            transform_forward(history.model_at(t), fwd, types, options.engine);
    });

    result.mvm.strategy = "mvm";
    result.mvm.versions = version_count;
    result.mvm.elements = start.structural_node_count();
    result.mvm.applications = transform_forward_mv(start, mv_rules, options.engine)
                                  .log.steps.size();
    result.mvm.runs_ms = measure(options.repeats, [&] {
        transform_forward_mv(start, mv_rules, options.engine);
    });

    if (options.parallel_svm) {
        StrategyTiming par;
        par.strategy = "svm-parallel";
        par.versions = version_count;
        par.elements = result.svm.elements;
        par.applications = result.svm.applications;
        par.runs_ms = measure(options.repeats, [&] {
            std::vector<std::future<void>> tasks;
            tasks.reserve(version_count);
            for (std::uint32_t t = 0; t < version_count; ++t)
                tasks.push_back(std::async(std::launch::async, [&, t] {
                    transform_forward(history.model_at(t), fwd, types, options.engine);
                }));
            for (std::future<void>& task : tasks)
                task.get();
        });
        result.svm_parallel = std::move(par);
    }

    return result;
}

std::string bench_to_csv(const BenchResult& result)
{
    std::ostringstream out;
    out << "strategy,versions,elements,mean_ms,stddev_ms,applications\n";
    auto row = [&](const StrategyTiming& t) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.4f,%.4f", t.mean_ms(), t.stddev_ms());
        out << t.strategy << ',' << t.versions << ',' << t.elements << ',' << buf << ','
            << t.applications << '\n';
    };
    row(result.svm);
    row(result.mvm);
    if (result.svm_parallel) row(*result.svm_parallel);
    return out.str();
}

} // namespace mvtgg
