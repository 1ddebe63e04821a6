// Command-line front end: generate instances, run the solvers, compare them
// over a (P, q) grid, tune NSGA-II parameters and compute exact fronts.
//
// Exit codes: 0 success, 2 usage or input error, 3 size / guard-rail error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rlip/experiment.hpp"
#include "rlip/instance.hpp"
#include "rlip/oracle.hpp"
#include "rlip/rsm.hpp"

namespace {

constexpr int kUsageError = 2;
constexpr int kSizeError = 3;

struct Options {
    std::string instance_path;
    std::vector<std::size_t> generate;   // n_customers, n_sites
    std::uint64_t instance_seed = 1;
    std::uint64_t seed = 1;
    std::string algo = "nsga2";
    std::size_t pop = 60;
    double pc = 0.7;
    double pm = 0.5;
    std::optional<std::size_t> iters;
    std::optional<double> q;
    std::optional<std::size_t> levels;
    std::optional<std::size_t> facilities;
    std::size_t refset = 10;
    std::string out = ".";
    std::size_t threads = 1;
    std::optional<std::string> distance;
    std::string clock = "wall";
    // compare
    std::vector<double> q_list{0.1, 0.2, 0.3, 0.4, 0.5};
    std::vector<std::size_t> p_list{5, 7, 9, 11, 13};
    std::size_t reps = 1;
    // tune
    std::size_t tune_reps = 10;
    std::size_t center_reps = 5;
    std::size_t region_moves = 3;
    std::string response = "diversity";
    // oracle
    std::string oracle_mode = "both";
    std::size_t max_sites = 6, max_customers = 6, max_levels = 2;
};

void add_instance_options(CLI::App& cmd, Options& o)
{
    auto* path = cmd.add_option("--instance", o.instance_path, "Instance CSV file")->check(CLI::ExistingFile);
    auto* gen = cmd.add_option("--generate", o.generate, "Generate an instance: n_customers,n_sites")
                    ->delimiter(',')
                    ->expected(2);
    path->excludes(gen);
    cmd.add_option("--instance-seed", o.instance_seed, "Seed for --generate");
    cmd.add_option("--q", o.q, "Facility failure probability")->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--R", o.levels, "Assignment levels")->check(CLI::PositiveNumber);
    cmd.add_option("--distance", o.distance, "squared_euclidean|euclidean")
        ->check(CLI::IsMember({"squared_euclidean", "euclidean"}));
    cmd.add_option("--out", o.out, "Output directory");
}

void add_solver_options(CLI::App& cmd, Options& o)
{
    cmd.add_option("--seed", o.seed, "Solver seed");
    cmd.add_option("--pop", o.pop, "NSGA-II population size");
    cmd.add_option("--pc", o.pc, "Crossover rate")->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--pm", o.pm, "Mutation rate")->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--iters", o.iters, "Iterations (default: 60 for nsga2, 10 for moss)");
    cmd.add_option("--P", o.facilities, "Number of facilities to open");
    cmd.add_option("--refset", o.refset, "Scatter search reference set size B");
    cmd.add_option("--threads", o.threads, "Evaluation threads")->check(CLI::PositiveNumber);
    cmd.add_option("--clock", o.clock, "wall|none; none writes 0 for solution times")
        ->check(CLI::IsMember({"wall", "none"}));
}

rlip::ProblemInstance load_instance(const Options& o)
{
    rlip::ProblemInstance inst;
    if (!o.instance_path.empty()) {
        inst = rlip::load_csv(o.instance_path);
    } else if (o.generate.size() == 2) {
        rlip::InstanceRecipe recipe;
        if (o.levels) recipe.max_levels = *o.levels;
        if (o.q) recipe.failure_probability = *o.q;
        if (o.distance) recipe.metric = rlip::parse_metric(*o.distance);
        inst = rlip::generate(o.generate[0], o.generate[1], o.instance_seed, recipe);
    } else {
        throw CLI::ValidationError("one of --instance or --generate is required");
    }
    if (o.q) inst.set_failure_probability(*o.q);
    if (o.levels) inst.set_max_levels(*o.levels);
    if (o.distance) inst.set_metric(rlip::parse_metric(*o.distance));
    return inst;
}

rlip::RunSettings settings_from(const Options& o)
{
    rlip::RunSettings s;
    s.nsga.population = o.pop;
    s.nsga.crossover_rate = o.pc;
    s.nsga.mutation_rate = o.pm;
    if (o.iters) s.nsga.iterations = *o.iters;
    s.nsga.solver.facilities = o.facilities;
    s.nsga.solver.threads = o.threads;
    s.moss.refset_size = o.refset;
    s.moss.crossover_rate = o.pc;
    s.moss.mutation_rate = o.pm;
    if (o.iters) s.moss.iterations = *o.iters;
    s.moss.solver = s.nsga.solver;
    s.clock = o.clock == "none" ? rlip::Clock::None : rlip::Clock::Wall;
    return s;
}

int cmd_generate(const Options& o)
{
    const auto inst = load_instance(o);
    std::filesystem::create_directories(o.out);
    const auto path = std::filesystem::path(o.out) / "instance.csv";
    rlip::save_csv(inst, path.string());
    std::cout << "wrote " << path.string() << " (" << inst.num_customers() << " customers, " << inst.num_sites()
              << " sites)\n";
    return 0;
}

int cmd_solve(const Options& o)
{
    const auto inst = load_instance(o);
    const auto settings = settings_from(o);
    const auto algo = rlip::parse_algorithm(o.algo);
    const auto run = rlip::run_algorithm(inst, algo, o.seed, settings);
    rlip::write_run_files(o.out, {run});
    const auto sp = run.spacing_metric();
    std::cout << rlip::to_string(algo) << ": " << run.archive.size() << " pareto points, diversity "
              << run.diversity_metric() << ", spacing " << (sp ? std::to_string(*sp) : std::string("n/a")) << ", "
              << run.solution_time_s << " s\n";
    return 0;
}

int cmd_compare(const Options& o)
{
    const auto inst = load_instance(o);
    rlip::CompareGrid grid;
    grid.q_values = o.q_list;
    grid.facility_counts = o.p_list;
    grid.replicates = o.reps;
    grid.seed = o.seed;
    for (auto p : grid.facility_counts)
        if (p > inst.num_sites()) throw std::domain_error("facility count P exceeds number of candidate sites");
    const auto cells = rlip::run_compare(inst, grid, settings_from(o));
    rlip::write_compare_files(o.out, cells);
    std::cout << "compared " << cells.size() << " problems x " << grid.replicates << " replicate(s) into " << o.out
              << "\n";
    return 0;
}

int cmd_tune(const Options& o)
{
    const auto inst = load_instance(o);
    const auto base = settings_from(o);
    rlip::rsm::TuneOptions opt;
    opt.replicates = o.tune_reps;
    opt.center_replicates = o.center_reps;
    opt.max_region_moves = o.region_moves;
    const std::string response = o.response;
    auto fn = [&](const rlip::rsm::Levels& levels, std::uint64_t seed) {
        auto cfg = base.nsga;
        const auto pop = static_cast<std::size_t>(std::max(2.0, std::round(levels[0] / 2.0)));
        cfg.population = 2 * pop;
        cfg.crossover_rate = levels[1];
        cfg.mutation_rate = levels[2];
        cfg.solver.seed = seed;
        const auto front = rlip::run_nsga2(inst, cfg).objectives();
        if (response == "obj1") {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& v : front) best = std::min(best, v.obj1);
            return best;
        }
        if (response == "spacing") return -rlip::spacing(front).value_or(0.0);
        return rlip::diversity(front);
    };
    const auto result = rlip::rsm::tune(fn, opt, o.seed);

    std::filesystem::create_directories(o.out);
    std::ostringstream hist;
    hist << "phase,region,population,crossover_rate,mutation_rate,response\n";
    for (const auto& h : result.history)
        hist << h.phase << ',' << h.region << ',' << rlip::format_real(h.natural[0]) << ','
             << rlip::format_real(h.natural[1]) << ',' << rlip::format_real(h.natural[2]) << ','
             << rlip::format_real(h.response) << "\n";
    rlip::write_text(std::filesystem::path(o.out) / "tune_history.csv", hist.str());
    nlohmann::json fits = nlohmann::json::array();
    for (const auto& f : result.first_order_fits)
        fits.push_back({{"beta", f.beta}, {"curvature", f.curvature}, {"corner_mean", f.corner_mean},
                        {"center_mean", f.center_mean}, {"center_se", f.center_se}});
    nlohmann::json j = {{"response", response},
                        {"best", {{"population", result.best[0]},
                                  {"crossover_rate", result.best[1]},
                                  {"mutation_rate", result.best[2]}}},
                        {"best_response", result.best_response},
                        {"first_order_fits", fits}};
    if (result.second_order) j["second_order_coefficients"] = result.second_order->coef;
    rlip::write_text(std::filesystem::path(o.out) / "tune.json", j.dump(1) + "\n");
    std::cout << "best: population " << result.best[0] << ", pc " << result.best[1] << ", pm " << result.best[2]
              << " (" << response << " " << result.best_response << ")\n";
    return 0;
}

int cmd_oracle(const Options& o)
{
    const auto inst = load_instance(o);
    if (!o.facilities) throw CLI::ValidationError("--P is required for the oracle");
    rlip::OracleLimits limits;
    limits.max_sites = o.max_sites;
    limits.max_customers = o.max_customers;
    limits.max_levels = o.max_levels;
    std::filesystem::create_directories(o.out);
    std::ostringstream os;
    os << "front,point,obj1,obj2\n";
    if (o.oracle_mode == "full" || o.oracle_mode == "both") {
        const auto full = rlip::exact_front_full(inst, *o.facilities, limits);
        for (std::size_t k = 0; k < full.size(); ++k)
            os << "full," << k << ',' << rlip::format_real(full[k].objectives.obj1) << ','
               << rlip::format_real(full[k].objectives.obj2) << "\n";
        std::cout << "full front: " << full.size() << " points\n";
    }
    if (o.oracle_mode == "reachable" || o.oracle_mode == "both") {
        const auto reach = rlip::exact_front_decoder_reachable(inst, *o.facilities, limits);
        for (std::size_t k = 0; k < reach.size(); ++k)
            os << "reachable," << k << ',' << rlip::format_real(reach[k].obj1) << ','
               << rlip::format_real(reach[k].obj2) << "\n";
        std::cout << "decoder-reachable front: " << reach.size() << " points\n";
    }
    rlip::write_text(std::filesystem::path(o.out) / "oracle.csv", os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bi-objective reliable location-inventory solver"};
    app.require_subcommand(1);
    Options o;

    auto* gen = app.add_subcommand("generate", "Generate a synthetic instance");
    add_instance_options(*gen, o);

    auto* solve = app.add_subcommand("solve", "Run one solver and write its Pareto archive");
    add_instance_options(*solve, o);
    add_solver_options(*solve, o);
    solve->add_option("--algo", o.algo, "nsga2|moss")->check(CLI::IsMember({"nsga2", "moss"}));

    auto* compare = app.add_subcommand("compare", "Run both solvers over a (P, q) grid");
    add_instance_options(*compare, o);
    add_solver_options(*compare, o);
    compare->add_option("--q-list", o.q_list, "Failure probabilities")->delimiter(',');
    compare->add_option("--P-list", o.p_list, "Facility counts")->delimiter(',');
    compare->add_option("--reps", o.reps, "Matched-seed replicates per problem")->check(CLI::PositiveNumber);

    auto* tune = app.add_subcommand("tune", "Response surface tuning of NSGA-II parameters");
    add_instance_options(*tune, o);
    add_solver_options(*tune, o);
    tune->add_option("--reps", o.tune_reps, "Runs averaged per design point")->check(CLI::PositiveNumber);
    tune->add_option("--center-reps", o.center_reps, "Centre replicates of the factorial design");
    tune->add_option("--moves", o.region_moves, "Maximum region moves");
    tune->add_option("--response", o.response, "diversity|obj1|spacing")
        ->check(CLI::IsMember({"diversity", "obj1", "spacing"}));

    auto* oracle = app.add_subcommand("oracle", "Exact fronts of a tiny instance");
    add_instance_options(*oracle, o);
    oracle->add_option("--P", o.facilities, "Number of facilities to open")->required();
    oracle->add_option("--mode", o.oracle_mode, "full|reachable|both")
        ->check(CLI::IsMember({"full", "reachable", "both"}));
    oracle->add_option("--max-sites", o.max_sites);
    oracle->add_option("--max-customers", o.max_customers);
    oracle->add_option("--max-levels", o.max_levels);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        if (*gen) return cmd_generate(o);
        if (*solve) return cmd_solve(o);
        if (*compare) return cmd_compare(o);
        if (*tune) return cmd_tune(o);
        if (*oracle) return cmd_oracle(o);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const rlip::OracleSizeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSizeError;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSizeError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    }
    return kUsageError;
}
