#pragma once

// Run records, result files and the algorithm comparison grid.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rlip/instance.hpp"
#include "rlip/moss.hpp"
#include "rlip/nsga2.hpp"
#include "rlip/pareto.hpp"

namespace rlip {

enum class Algorithm { Nsga2, Moss };

inline const char* to_string(Algorithm a) { return a == Algorithm::Nsga2 ? "nsga2" : "moss"; }

inline Algorithm parse_algorithm(const std::string& s)
{
    if (s == "nsga2") return Algorithm::Nsga2;
    if (s == "moss") return Algorithm::Moss;
    throw std::invalid_argument("unknown algorithm '" + s + "'");
}

/// Wall-clock timing can be switched off so repeated runs write identical bytes.
enum class Clock { Wall, None };

struct RunSettings {
    NsgaConfig nsga;
    MossConfig moss;
    Clock clock = Clock::Wall;
};

struct RunRecord {
    Algorithm algorithm = Algorithm::Nsga2;
    std::uint64_t seed = 0;
    double q = 0.0;
    std::optional<std::size_t> facilities;
    double solution_time_s = 0.0;
    std::vector<ArchiveEntry> archive;   // sorted by obj1

    std::vector<ObjectiveVector> front() const
    {
        std::vector<ObjectiveVector> v;
        for (const auto& e : archive) v.push_back(e.objectives);
        return v;
    }
    /// Best obj1 and best obj2 found in the archive.
    ObjectiveVector best() const
    {
        ObjectiveVector b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
        for (const auto& e : archive) {
            b.obj1 = std::min(b.obj1, e.objectives.obj1);
            b.obj2 = std::min(b.obj2, e.objectives.obj2);
        }
        return b;
    }
    std::optional<double> spacing_metric() const { return spacing(front()); }
    double diversity_metric() const { return diversity(front()); }
};

inline RunRecord run_algorithm(const ProblemInstance& instance, Algorithm algo, std::uint64_t seed,
                               const RunSettings& settings)
{
    RunRecord rec;
    rec.algorithm = algo;
    rec.seed = seed;
    rec.q = instance.failure_probability();
    const auto start = std::chrono::steady_clock::now();
    ParetoArchive archive;
    if (algo == Algorithm::Nsga2) {
        auto cfg = settings.nsga;
        cfg.solver.seed = seed;
        rec.facilities = cfg.solver.facilities;
        archive = run_nsga2(instance, cfg);
    } else {
        auto cfg = settings.moss;
        cfg.solver.seed = seed;
        rec.facilities = cfg.solver.facilities;
        archive = run_moss(instance, cfg);
    }
    const auto stop = std::chrono::steady_clock::now();
    if (settings.clock == Clock::Wall) rec.solution_time_s = std::chrono::duration<double>(stop - start).count();
    rec.archive = archive.sorted();
    return rec;
}

// ---------------------------------------------------------------------------
// CSV tables

inline std::string optional_real(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

inline const char* kResultsHeader =
    "algorithm,seed,q,facilities,archive_size,solution_time_s,obj1,obj2,diversity,spacing";

inline void write_results_row(std::ostream& os, const RunRecord& r)
{
    const auto best = r.best();
    os << to_string(r.algorithm) << ',' << r.seed << ',' << format_real(r.q) << ','
       << (r.facilities ? std::to_string(*r.facilities) : std::string()) << ',' << r.archive.size() << ','
       << format_real(r.solution_time_s) << ',' << format_real(best.obj1) << ',' << format_real(best.obj2) << ','
       << format_real(r.diversity_metric()) << ',' << optional_real(r.spacing_metric()) << "\n";
}

inline void write_front_rows(std::ostream& os, const RunRecord& r)
{
    for (std::size_t k = 0; k < r.archive.size(); ++k)
        os << to_string(r.algorithm) << ',' << r.seed << ',' << k << ',' << format_real(r.archive[k].objectives.obj1)
           << ',' << format_real(r.archive[k].objectives.obj2) << "\n";
}

/// Generic CSV table: header plus rows of raw string cells.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const
    {
        for (std::size_t k = 0; k < header.size(); ++k)
            if (header[k] == name) return k;
        throw std::out_of_range("no column '" + name + "'");
    }
};

inline CsvTable read_csv_table(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    CsvTable t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = detail::split_csv(line);
        if (t.header.empty()) {
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != t.header.size())
            throw ParseError(line_no, cells.size(), "row width differs from header");
        t.rows.push_back(std::move(cells));
    }
    return t;
}

// ---------------------------------------------------------------------------
// JSON archives

inline nlohmann::json to_json(const Solution& s)
{
    nlohmann::json assignment = nlohmann::json::array();
    for (const auto& row : s.assignment) {
        nlohmann::json levels = nlohmann::json::array();
        for (const auto& site : row) levels.push_back(site ? nlohmann::json(*site) : nlohmann::json(nullptr));
        assignment.push_back(levels);
    }
    nlohmann::json lost = nlohmann::json::array();
    for (const auto& l : s.lost_level) lost.push_back(l ? nlohmann::json(*l) : nlohmann::json(nullptr));
    return {{"open", s.open}, {"assignment", assignment}, {"lost_level", lost}};
}

inline Solution solution_from_json(const nlohmann::json& j)
{
    Solution s;
    s.open = j.at("open").get<std::vector<std::uint8_t>>();
    for (const auto& row : j.at("assignment")) {
        std::vector<std::optional<std::size_t>> levels;
        for (const auto& v : row) levels.push_back(v.is_null() ? std::nullopt : std::optional(v.get<std::size_t>()));
        s.assignment.push_back(std::move(levels));
    }
    for (const auto& v : j.at("lost_level"))
        s.lost_level.push_back(v.is_null() ? std::nullopt : std::optional(v.get<std::size_t>()));
    return s;
}

inline nlohmann::json to_json(const RunRecord& r)
{
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : r.archive)
        entries.push_back({{"obj1", e.objectives.obj1},
                           {"obj2", e.objectives.obj2},
                           {"genotype", {{"site_bits", e.genotype.site_bits}, {"priority", e.genotype.priority}}},
                           {"solution", to_json(e.solution)}});
    nlohmann::json j = {{"algorithm", to_string(r.algorithm)},
                        {"seed", r.seed},
                        {"q", r.q},
                        {"facilities", r.facilities ? nlohmann::json(*r.facilities) : nlohmann::json(nullptr)},
                        {"solution_time_s", r.solution_time_s},
                        {"archive", entries}};
    const auto sp = r.spacing_metric();
    j["spacing"] = sp ? nlohmann::json(*sp) : nlohmann::json(nullptr);
    j["diversity"] = r.diversity_metric();
    return j;
}

inline RunRecord run_record_from_json(const nlohmann::json& j)
{
    RunRecord r;
    r.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    r.q = j.at("q").get<double>();
    if (!j.at("facilities").is_null()) r.facilities = j.at("facilities").get<std::size_t>();
    r.solution_time_s = j.at("solution_time_s").get<double>();
    for (const auto& e : j.at("archive")) {
        ArchiveEntry entry;
        entry.objectives = {e.at("obj1").get<double>(), e.at("obj2").get<double>()};
        entry.genotype.site_bits = e.at("genotype").at("site_bits").get<std::vector<std::uint8_t>>();
        entry.genotype.priority = e.at("genotype").at("priority").get<std::vector<std::size_t>>();
        entry.solution = solution_from_json(e.at("solution"));
        r.archive.push_back(std::move(entry));
    }
    return r;
}

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    os << text;
}

inline std::vector<RunRecord> read_archive_json(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
    const auto j = nlohmann::json::parse(is);
    std::vector<RunRecord> out;
    for (const auto& r : j.at("runs")) out.push_back(run_record_from_json(r));
    return out;
}

/// results.csv, front.csv and archive.json for a list of runs.
inline void write_run_files(const std::filesystem::path& dir, const std::vector<RunRecord>& runs)
{
    std::filesystem::create_directories(dir);
    std::ostringstream results, front;
    results << kResultsHeader << "\n";
    front << "algorithm,seed,point,obj1,obj2\n";
    nlohmann::json all = {{"runs", nlohmann::json::array()}};
    for (const auto& r : runs) {
        write_results_row(results, r);
        write_front_rows(front, r);
        all["runs"].push_back(to_json(r));
    }
    write_text(dir / "results.csv", results.str());
    write_text(dir / "front.csv", front.str());
    write_text(dir / "archive.json", all.dump(1) + "\n");
}

// ---------------------------------------------------------------------------
// Comparison grid

struct CompareGrid {
    std::vector<double> q_values{0.1, 0.2, 0.3, 0.4, 0.5};
    std::vector<std::size_t> facility_counts{5, 7, 9, 11, 13};
    std::size_t replicates = 1;   // matched seeds per cell
    std::uint64_t seed = 1;
};

struct CompareCell {
    std::size_t facilities = 0;
    double q = 0.0;
    std::vector<RunRecord> nsga2;   // one per replicate, matched seeds
    std::vector<RunRecord> moss;
};

/// Share of replicates each algorithm wins; ties split evenly.
struct WinShare {
    double nsga2 = 0.0;
    double moss = 0.0;
};

/// Lower diversity wins.
inline WinShare diversity_wins(const CompareCell& cell)
{
    WinShare w;
    const auto n = static_cast<double>(cell.nsga2.size());
    for (std::size_t k = 0; k < cell.nsga2.size(); ++k) {
        const double a = cell.nsga2[k].diversity_metric(), b = cell.moss[k].diversity_metric();
        if (a < b) w.nsga2 += 1;
        else if (b < a) w.moss += 1;
        else { w.nsga2 += 0.5; w.moss += 0.5; }
    }
    if (n > 0) { w.nsga2 /= n; w.moss /= n; }
    return w;
}

/// Higher spacing wins; a run with no defined spacing loses to one with a value.
inline WinShare spacing_wins(const CompareCell& cell)
{
    WinShare w;
    const auto n = static_cast<double>(cell.nsga2.size());
    for (std::size_t k = 0; k < cell.nsga2.size(); ++k) {
        const auto a = cell.nsga2[k].spacing_metric(), b = cell.moss[k].spacing_metric();
        const double va = a.value_or(-1.0), vb = b.value_or(-1.0);
        if (va > vb) w.nsga2 += 1;
        else if (vb > va) w.moss += 1;
        else { w.nsga2 += 0.5; w.moss += 0.5; }
    }
    if (n > 0) { w.nsga2 /= n; w.moss /= n; }
    return w;
}

inline std::uint64_t replicate_seed(std::uint64_t base, std::size_t replicate) { return base + 1000003ULL * replicate; }

/// Cells ordered facility count first, then q (the row order of the result tables).
inline std::vector<CompareCell> run_compare(const ProblemInstance& base, const CompareGrid& grid,
                                            const RunSettings& settings)
{
    std::vector<CompareCell> cells;
    for (std::size_t p : grid.facility_counts) {
        for (double q : grid.q_values) {
            ProblemInstance instance = base;
            instance.set_failure_probability(q);
            RunSettings s = settings;
            s.nsga.solver.facilities = p;
            s.moss.solver.facilities = p;
            CompareCell cell{p, q, {}, {}};
            for (std::size_t rep = 0; rep < grid.replicates; ++rep) {
                const auto seed = replicate_seed(grid.seed, rep);
                cell.nsga2.push_back(run_algorithm(instance, Algorithm::Nsga2, seed, s));
                cell.moss.push_back(run_algorithm(instance, Algorithm::Moss, seed, s));
            }
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

inline const char* kTableHeader = "N,q_percent,pareto_count,solution_time_s,facilities,obj1,obj2,diversity,spacing";

inline std::string percent(double q)
{
    std::ostringstream os;
    os << std::llround(q * 100.0);
    return os.str();
}

/// Writes the per-algorithm result tables (first replicate of each cell), the
/// win-share and timing comparisons, plot data and every individual run.
inline void write_compare_files(const std::filesystem::path& dir, const std::vector<CompareCell>& cells)
{
    std::filesystem::create_directories(dir);
    for (Algorithm algo : {Algorithm::Nsga2, Algorithm::Moss}) {
        std::ostringstream t;
        t << kTableHeader << "\n";
        for (std::size_t n = 0; n < cells.size(); ++n) {
            const auto& r = (algo == Algorithm::Nsga2 ? cells[n].nsga2 : cells[n].moss).front();
            const auto best = r.best();
            t << n + 1 << ',' << percent(cells[n].q) << ',' << r.archive.size() << ','
              << format_real(r.solution_time_s) << ',' << cells[n].facilities << ',' << format_real(best.obj1)
              << ',' << format_real(best.obj2) << ',' << format_real(r.diversity_metric()) << ','
              << optional_real(r.spacing_metric()) << "\n";
        }
        write_text(dir / (std::string("table_") + to_string(algo) + ".csv"), t.str());
    }

    std::ostringstream wins, times, fig1, runs;
    wins << "N,q_percent,facilities,metric,nsga2_win_percent,moss_win_percent\n";
    times << "facilities,q,nsga2_s,moss_s\n";
    fig1 << "algorithm,facilities,q,obj1\n";
    runs << kResultsHeader << "\n";
    for (std::size_t n = 0; n < cells.size(); ++n) {
        const auto& c = cells[n];
        const auto dw = diversity_wins(c), sw = spacing_wins(c);
        wins << n + 1 << ',' << percent(c.q) << ',' << c.facilities << ",diversity," << format_real(100 * dw.nsga2)
             << ',' << format_real(100 * dw.moss) << "\n";
        wins << n + 1 << ',' << percent(c.q) << ',' << c.facilities << ",spacing," << format_real(100 * sw.nsga2)
             << ',' << format_real(100 * sw.moss) << "\n";
        double tn = 0.0, tm = 0.0;
        for (const auto& r : c.nsga2) tn += r.solution_time_s;
        for (const auto& r : c.moss) tm += r.solution_time_s;
        const auto reps = static_cast<double>(c.nsga2.size());
        times << c.facilities << ',' << format_real(c.q) << ',' << format_real(tn / reps) << ','
              << format_real(tm / reps) << "\n";
        fig1 << "nsga2," << c.facilities << ',' << format_real(c.q) << ',' << format_real(c.nsga2.front().best().obj1)
             << "\n";
        fig1 << "moss," << c.facilities << ',' << format_real(c.q) << ',' << format_real(c.moss.front().best().obj1)
             << "\n";
        for (const auto& r : c.nsga2) write_results_row(runs, r);
        for (const auto& r : c.moss) write_results_row(runs, r);
    }
    write_text(dir / "metric_wins.csv", wins.str());
    write_text(dir / "solution_times.csv", times.str());
    write_text(dir / "fig1_obj1_vs_q.csv", fig1.str());
    write_text(dir / "runs.csv", runs.str());
}

}  // namespace rlip
