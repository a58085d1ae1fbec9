#include "cli.hpp"

#include "latcount/bench.hpp"
#include "latcount/error.hpp"
#include "latcount/estimator.hpp"
#include "latcount/oracle.hpp"
#include "latcount/sampler.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace latcount::cli {

namespace {

using nlohmann::json;

struct Loaded {
    Polytope polytope;
    std::vector<std::string> warnings;
};

Loaded load(const std::string& path, const std::string& format)
{
    const std::string text = read_file(path);
    if (format == "native") return {parse_polytope(text, PolytopeFormat::native), {}};
    if (format == "dense") return {parse_polytope(text, PolytopeFormat::dense_matrix), {}};
    ParsedConstraints pc = format == "constraints" ? parse_constraints(text) : parse_any(text);
    return {std::move(pc.polytope), std::move(pc.warnings)};
}

void add_format_option(CLI::App* cmd, std::string& format)
{
    cmd->add_option("--format", format, "Input format")
        ->check(CLI::IsMember({"auto", "native", "dense", "constraints"}))
        ->capture_default_str();
}

std::string point_line(const LatticePoint& p)
{
    std::string line;
    for (std::size_t j = 0; j < p.coords.size(); ++j) {
        if (j) line.push_back(' ');
        line += std::to_string(p.coords[j]);
    }
    return line;
}

json config_json(const RunConfig& cfg, std::size_t n)
{
    return json{
        {"epsilon", cfg.epsilon},
        {"delta", cfg.delta},
        {"s", cfg.samples_per_round()},
        {"gamma", cfg.gamma},
        {"w", cfg.w ? cfg.w : n},
        {"r_min", cfg.r_min},
        {"r_max", cfg.r_max},
        {"mu", cfg.mu},
        {"seed", cfg.seed},
        {"threads", cfg.threads},
        {"max_rounds", cfg.max_rounds},
    };
}

json estimate_json(const CountEstimate& est, const RunConfig& cfg, std::size_t n,
                   const std::vector<std::string>& warnings)
{
    json levels = json::array();
    for (std::size_t i = 0; i < est.levels.size(); ++i) {
        const auto& d = est.diagnostics[i];
        levels.push_back(json{
            {"r", est.levels[i].r},
            {"v", est.levels[i].v},
            {"attempts", d.attempts},
            {"accepted", d.accepted},
            {"reused", d.reused},
            {"cut_rows", d.cut_rows},
            {"disturbs", d.disturbs},
            {"window_relaxed", d.window_relaxed},
            {"weak_rounding", d.weak_rounding},
            {"rounding_iterations", d.rounding_iterations},
        });
    }
    return json{
        {"estimate", est.count_as_double()},
        {"rect_count", est.rect_count.str()},
        {"r", est.r},
        {"v", est.v},
        {"chain_length", est.chain_length},
        {"rounds", est.rounds},
        {"total_samples", est.total_samples},
        {"groups", est.groups},
        {"group_size", est.group_size},
        {"weak_rounding", est.weak_rounding},
        {"levels", levels},
        {"config", config_json(cfg, n)},
        {"input_warnings", warnings},
    };
}

std::vector<FamilySpec> families_from(const json& cfg, const std::string& only)
{
    std::vector<FamilySpec> out;
    if (!cfg.contains("families") || !cfg["families"].is_array()) {
        throw Error(ErrorKind::input, "bench config: missing \"families\" array");
    }
    for (const auto& f : cfg["families"]) {
        FamilySpec spec;
        spec.family = f.at("family").get<std::string>();
        if (only != "all" && spec.family != only) continue;
        spec.m = f.value("m", std::size_t{0});
        spec.n = f.value("n", std::size_t{3});
        spec.lambda = f.value("lambda", std::int64_t{8});
        spec.tau = f.value("tau", 1.0);
        spec.count = f.value("count", std::size_t{1});
        out.push_back(spec);
    }
    if (out.empty()) throw Error(ErrorKind::input, "bench config: no families match '" + only + "'");
    return out;
}

json report_json(const BoundReport& report)
{
    json runs = json::array();
    for (const auto& r : report.runs) {
        runs.push_back(json{
            {"instance_id", r.instance_id},
            {"seed", r.seed},
            {"run_idx", r.run_idx},
            {"exact_count", r.exact_count.str()},
            {"estimate", r.estimate},
            {"rel_error", r.rel_error},
            {"within_bound", r.within_bound},
            {"rounds", r.rounds},
            {"total_samples", r.total_samples},
            {"chain_length", r.chain_length},
            {"wall_ms", r.wall_ms},
            {"error", r.error},
        });
    }
    json instances = json::array();
    for (const auto& s : report.instances) {
        instances.push_back(json{{"instance_id", s.instance_id}, {"runs", s.runs}, {"within", s.within},
                                 {"frequency", s.frequency()}});
    }
    return json{
        {"epsilon", report.epsilon},
        {"delta", report.delta},
        {"runs", runs},
        {"instances", instances},
        {"within", report.within},
        {"frequency", report.frequency()},
        {"total_ms", report.total_ms},
    };
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::input, "cannot write '" + path + "'");
    return f;
}

int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::resource_cap:
    case ErrorKind::numerical:
        return kCap;
    default:
        return kInput;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Approximate and exact lattice point counting for H-polytopes", "latcount"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string file;
    std::string format = "auto";
    bool as_json = false;

    auto* count = app.add_subcommand("count", "Estimate the number of lattice points");
    count->add_option("FILE", file, "Polytope file")->required();
    count->add_option("--epsilon", cfg.epsilon, "Relative error bound")->capture_default_str();
    count->add_option("--delta", cfg.delta, "Failure probability")->capture_default_str();
    count->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    count->add_option("--s", cfg.s, "Samples per level per round (0: 2/(delta eps^2))");
    count->add_option("--gamma", cfg.gamma, "Group size step")->capture_default_str();
    count->add_option("--walk-len", cfg.w, "Hit-and-run steps per sample (0: n)");
    count->add_option("--rmin", cfg.r_min, "Lower ratio target")->capture_default_str();
    count->add_option("--rmax", cfg.r_max, "Upper ratio target")->capture_default_str();
    count->add_option("--mu", cfg.mu, "Disturb width")->capture_default_str();
    count->add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();
    count->add_option("--max-rounds", cfg.max_rounds, "Round cap")->capture_default_str();
    count->add_flag("--json", as_json, "Print JSON");
    add_format_option(count, format);

    std::string limit = "100000000";
    bool dump = false;
    std::size_t exact_threads = 1;
    auto* exact = app.add_subcommand("exact", "Count lattice points by enumeration");
    exact->add_option("FILE", file, "Polytope file")->required();
    exact->add_option("--limit", limit, "Largest bounding box to enumerate")->capture_default_str();
    exact->add_flag("--dump-points", dump, "Print every point after the count");
    exact->add_option("--threads", exact_threads, "Worker threads")->capture_default_str();
    add_format_option(exact, format);

    std::size_t sample_count = 0;
    std::uint64_t sample_seed = 0;
    std::size_t sample_walk = 0;
    auto* sample = app.add_subcommand("sample", "Draw lattice points uniformly");
    sample->add_option("FILE", file, "Polytope file")->required();
    sample->add_option("--count", sample_count, "Number of points")->required()->check(CLI::PositiveNumber);
    sample->add_option("--seed", sample_seed, "Random seed")->capture_default_str();
    sample->add_option("--walk-len", sample_walk, "Hit-and-run steps per sample (0: n)");
    add_format_option(sample, format);

    std::string gen_out;
    std::uint64_t gen_seed = 0;
    std::size_t gen_m = 0, gen_n = 3;
    std::int64_t gen_lambda = 8;
    double gen_tau = 1.0;
    bool gen_axis = false;
    auto* gen = app.add_subcommand("gen", "Generate a benchmark instance");
    gen->require_subcommand(1);
    auto* gen_random_cmd = gen->add_subcommand("random", "{Ax <= b, -lambda <= x_i <= lambda}");
    gen_random_cmd->add_option("--m", gen_m, "Random rows (0: n)");
    gen_random_cmd->add_option("--n", gen_n, "Dimension")->capture_default_str();
    gen_random_cmd->add_option("--lambda", gen_lambda, "Box half-width")->capture_default_str();
    auto* gen_thin_cmd = gen->add_subcommand("thinrect", "Rotated thin rectangle");
    gen_thin_cmd->add_option("--n", gen_n, "Dimension")->capture_default_str();
    gen_thin_cmd->add_option("--tau", gen_tau, "Half-width of the thin axes")->capture_default_str();
    gen_thin_cmd->add_flag("--no-rotate", gen_axis, "Keep the box axis-aligned");
    for (auto* c : {gen_random_cmd, gen_thin_cmd}) {
        c->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
        c->add_option("-o,--output", gen_out, "Output file (default stdout)");
    }

    std::string family = "all";
    std::string bench_config;
    std::string bench_out;
    auto* bench = app.add_subcommand("bench", "Run the (eps, delta) bound experiment");
    bench->add_option("--family", family, "random, thinrect or all")
        ->check(CLI::IsMember({"all", "random", "thinrect"}))
        ->capture_default_str();
    bench->add_option("--config", bench_config, "JSON experiment description")->required();
    bench->add_option("-o,--output", bench_out, "Report file (.json or .csv)")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*count) {
            const auto t0 = std::chrono::steady_clock::now();
            const Loaded in = load(file, format);
            for (const auto& w : in.warnings) err << "warning: " << w << '\n';
            const CountEstimate est = estimate(in.polytope, cfg);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (as_json) {
                out << estimate_json(est, cfg, in.polytope.dim(), in.warnings).dump(2) << '\n';
            } else {
                out << std::setprecision(10);
                out << "estimate      " << est.count_as_double() << '\n'
                    << "r             " << est.r << '\n'
                    << "v             " << est.v << '\n'
                    << "|P0 cap Z^n|  " << est.rect_count << '\n'
                    << "chain length  " << est.chain_length << '\n'
                    << "rounds        " << est.rounds << '\n'
                    << "samples       " << est.total_samples << '\n'
                    << "time (s)      " << secs << '\n';
                if (est.weak_rounding) out << "note: rounding fell back to the bounding-box map\n";
            }
        } else if (*exact) {
            const Loaded in = load(file, format);
            for (const auto& w : in.warnings) err << "warning: " << w << '\n';
            OracleOptions opts;
            try {
                opts.limit = BigInt(limit);
            } catch (const std::exception&) {
                err << "error: --limit must be a non-negative integer\n";
                return kUsage;
            }
            opts.collect_points = dump;
            opts.threads = exact_threads;
            const OracleResult res = exact_count(in.polytope, opts);
            out << res.count << '\n';
            if (dump) {
                if (!res.points) {
                    err << "warning: more than 100000 points, not dumped\n";
                } else {
                    for (const auto& p : *res.points) out << point_line(p) << '\n';
                }
            }
        } else if (*sample) {
            const Loaded in = load(file, format);
            for (const auto& w : in.warnings) err << "warning: " << w << '\n';
            const ShiftedPolytope sp = shift_facets(in.polytope);
            Rng rng(sample_seed, 0);
            SampleOptions opts;
            opts.walk_length = sample_walk;
            const SampleSet set = sample_lattice(sp, sample_count, rng, {}, opts);
            for (const auto& p : set.points) out << point_line(p) << '\n';
        } else if (*gen) {
            Rng rng(gen_seed, 0);
            Polytope P;
            std::string note;
            if (*gen_random_cmd) {
                const std::size_t m = gen_m ? gen_m : gen_n;
                GeneratedPolytope g = gen_random(m, gen_n, gen_lambda, rng);
                P = std::move(g.polytope);
                note = "# random m=" + std::to_string(m) + " n=" + std::to_string(gen_n) +
                       " lambda=" + std::to_string(gen_lambda) + " seed=" + std::to_string(gen_seed) +
                       " redraws=" + std::to_string(g.redraws) + "\n";
            } else {
                P = gen_thin_rect(gen_n, gen_tau, rng, !gen_axis);
                std::ostringstream s;
                s << "# thinrect n=" << gen_n << " tau=" << gen_tau << " seed=" << gen_seed
                  << (gen_axis ? " axis-aligned" : "") << '\n';
                note = s.str();
            }
            const std::string text = note + serialize_polytope(P);
            if (gen_out.empty()) {
                out << text;
            } else {
                open_out(gen_out) << text;
            }
        } else if (*bench) {
            json spec;
            try {
                spec = json::parse(read_file(bench_config));
            } catch (const json::exception& e) {
                throw Error(ErrorKind::input, std::string("bench config: ") + e.what());
            }
            RunConfig run = cfg;
            run.epsilon = spec.value("epsilon", run.epsilon);
            run.delta = spec.value("delta", run.delta);
            run.seed = spec.value("seed", std::uint64_t{0});
            const auto repeats = spec.value("repeats", std::size_t{10});
            const auto threads = spec.value("threads", std::size_t{1});
            BigInt max_exact(1000000);
            if (spec.contains("max_exact")) {
                const auto& v = spec["max_exact"];
                max_exact = v.is_string() ? BigInt(v.get<std::string>()) : BigInt(v.get<std::uint64_t>());
            }
            const auto instances = make_instances(families_from(spec, family), run.seed, max_exact);
            const BoundReport report = bound_experiment(instances, run, repeats, threads);
            auto f = open_out(bench_out);
            if (bench_out.size() >= 5 && bench_out.substr(bench_out.size() - 5) == ".json") {
                f << report_json(report).dump(2) << '\n';
            } else {
                write_csv(report, f);
            }
            out << report.runs.size() << " runs over " << instances.size() << " instances, "
                << report.within << " within [" << 1.0 - run.epsilon << ", " << 1.0 + run.epsilon
                << "], frequency " << report.frequency() << '\n';
        }
    } catch (const Error& e) {
        err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInput;
    }
    return kOk;
}

}  // namespace latcount::cli
