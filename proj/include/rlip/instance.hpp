#pragma once

// Synthetic instance generation and the two-section CSV format:
//
//   # params,q=<real>,R=<int>,distance=squared_euclidean|euclidean
//   # customers
//   id,x,y,demand,penalty
//   ...
//   # sites
//   id,x,y,setup_cost,holding_cost,order_cost,unit_order_cost,capacity
//   ...

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rlip/model.hpp"

namespace rlip {

struct UniformRange {
    double low = 0.0;
    double high = 1.0;
};

/// Generation recipe. Demand and setup cost ranges stand in for the
/// population and home-value data of real networks; the remaining values
/// are the fixed experimental parameters.
struct InstanceRecipe {
    double square_side = 30.0;
    UniformRange demand{5.0, 150.0};
    UniformRange setup_cost{8000.0, 16000.0};
    UniformRange penalty{1000.0, 7000.0};
    UniformRange capacity{100.0, 1000.0};
    double holding_ratio = 1e-3;     // h_j = ratio * f_j
    double order_cost = 1000.0;      // b_j
    double unit_order_cost = 5.0;    // P_j
    double failure_probability = 0.1;
    std::size_t max_levels = 2;
    DistanceMetric metric = DistanceMetric::SquaredEuclidean;
    bool colocate_sites = true;      // candidate site j sits at customer j while j < |I|
};

inline ProblemInstance generate(std::size_t n_customers, std::size_t n_sites, std::uint64_t seed,
                                const InstanceRecipe& recipe = {})
{
    if (n_customers < 1 || n_sites < 1) throw std::invalid_argument("need at least one customer and one site");
    std::mt19937_64 rng(seed);
    auto uniform = [&](UniformRange r) { return std::uniform_real_distribution<double>(r.low, r.high)(rng); };
    auto coordinate = [&] { return std::uniform_real_distribution<double>(0.0, recipe.square_side)(rng); };

    std::vector<CustomerRecord> customers(n_customers);
    for (std::size_t i = 0; i < n_customers; ++i) {
        auto& c = customers[i];
        c.id = static_cast<std::int64_t>(i + 1);
        c.location = {coordinate(), coordinate()};
        c.demand = uniform(recipe.demand);
        c.penalty = uniform(recipe.penalty);
    }
    std::vector<SiteRecord> sites(n_sites);
    for (std::size_t j = 0; j < n_sites; ++j) {
        auto& s = sites[j];
        s.id = static_cast<std::int64_t>(j + 1);
        if (recipe.colocate_sites && j < n_customers)
            s.location = customers[j].location;
        else
            s.location = {coordinate(), coordinate()};
        s.setup_cost = uniform(recipe.setup_cost);
        s.holding_cost = recipe.holding_ratio * s.setup_cost;
        s.order_cost = recipe.order_cost;
        s.unit_order_cost = recipe.unit_order_cost;
        s.capacity = uniform(recipe.capacity);
    }
    const std::size_t levels = std::min(recipe.max_levels, n_sites);
    return ProblemInstance(std::move(customers), std::move(sites), recipe.failure_probability, levels, recipe.metric);
}

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what)
        , line_(line)
        , column_(column)
    {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

inline const char* to_string(DistanceMetric m)
{
    return m == DistanceMetric::SquaredEuclidean ? "squared_euclidean" : "euclidean";
}

inline DistanceMetric parse_metric(std::string_view s)
{
    if (s == "squared_euclidean") return DistanceMetric::SquaredEuclidean;
    if (s == "euclidean") return DistanceMetric::Euclidean;
    throw std::invalid_argument("unknown distance metric '" + std::string(s) + "'");
}

/// 17 significant digits, enough to read back the same double.
inline std::string format_real(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

inline void write_csv(const ProblemInstance& instance, std::ostream& os)
{
    os << "# params,q=" << format_real(instance.failure_probability()) << ",R=" << instance.max_levels()
       << ",distance=" << to_string(instance.metric()) << "\n";
    os << "# customers\nid,x,y,demand,penalty\n";
    for (const auto& c : instance.customers())
        os << c.id << ',' << format_real(c.location.x) << ',' << format_real(c.location.y) << ','
           << format_real(c.demand) << ',' << format_real(c.penalty) << "\n";
    os << "# sites\nid,x,y,setup_cost,holding_cost,order_cost,unit_order_cost,capacity\n";
    for (const auto& s : instance.sites())
        os << s.id << ',' << format_real(s.location.x) << ',' << format_real(s.location.y) << ','
           << format_real(s.setup_cost) << ',' << format_real(s.holding_cost) << ',' << format_real(s.order_cost)
           << ',' << format_real(s.unit_order_cost) << ',' << format_real(s.capacity) << "\n";
}

inline void save_csv(const ProblemInstance& instance, const std::string& path)
{
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_csv(instance, os);
}

namespace detail {

inline std::vector<std::string> split_csv(std::string_view line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.emplace_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline double parse_real(const std::string& field, std::size_t line, std::size_t column)
{
    double v = 0.0;
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc() || ptr != end || field.empty())
        throw ParseError(line, column, "expected a number, got '" + field + "'");
    return v;
}

inline std::int64_t parse_id(const std::string& field, std::size_t line, std::size_t column)
{
    std::int64_t v = 0;
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc() || ptr != end || field.empty())
        throw ParseError(line, column, "expected an integer id, got '" + field + "'");
    return v;
}

}  // namespace detail

inline ProblemInstance read_csv(std::istream& is)
{
    enum class Section { None, Customers, Sites } section = Section::None;
    std::vector<CustomerRecord> customers;
    std::vector<SiteRecord> sites;
    double q = -1.0;
    long long levels = -1;
    DistanceMetric metric = DistanceMetric::SquaredEuclidean;
    bool expect_header = false;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.empty()) continue;
        const auto fields = detail::split_csv(raw);
        if (raw.rfind("# params", 0) == 0) {
            for (std::size_t k = 1; k < fields.size(); ++k) {
                const auto eq = fields[k].find('=');
                if (eq == std::string::npos) throw ParseError(line_no, k + 1, "expected key=value");
                const std::string key = fields[k].substr(0, eq), value = fields[k].substr(eq + 1);
                if (key == "q") {
                    q = detail::parse_real(value, line_no, k + 1);
                    if (!(q >= 0.0 && q <= 1.0)) throw ParseError(line_no, k + 1, "q must lie in [0,1]");
                } else if (key == "R") {
                    levels = detail::parse_id(value, line_no, k + 1);
                    if (levels < 1) throw ParseError(line_no, k + 1, "R must be >= 1");
                } else if (key == "distance") {
                    try {
                        metric = parse_metric(value);
                    } catch (const std::invalid_argument& e) {
                        throw ParseError(line_no, k + 1, e.what());
                    }
                } else {
                    throw ParseError(line_no, k + 1, "unknown parameter '" + key + "'");
                }
            }
            continue;
        }
        if (raw == "# customers") {
            section = Section::Customers;
            expect_header = true;
            continue;
        }
        if (raw == "# sites") {
            section = Section::Sites;
            expect_header = true;
            continue;
        }
        if (raw[0] == '#') throw ParseError(line_no, 1, "unknown section '" + raw + "'");
        if (expect_header) {
            expect_header = false;
            if (fields[0] == "id") continue;
        }
        switch (section) {
        case Section::None:
            throw ParseError(line_no, 1, "data row outside a section");
        case Section::Customers: {
            if (fields.size() != 5) throw ParseError(line_no, fields.size(), "customer rows need 5 columns");
            CustomerRecord c;
            c.id = detail::parse_id(fields[0], line_no, 1);
            c.location = {detail::parse_real(fields[1], line_no, 2), detail::parse_real(fields[2], line_no, 3)};
            c.demand = detail::parse_real(fields[3], line_no, 4);
            if (c.demand < 0.0) throw ParseError(line_no, 4, "demand must be >= 0");
            c.penalty = detail::parse_real(fields[4], line_no, 5);
            if (c.penalty < 0.0) throw ParseError(line_no, 5, "penalty must be >= 0");
            customers.push_back(c);
            break;
        }
        case Section::Sites: {
            if (fields.size() != 8) throw ParseError(line_no, fields.size(), "site rows need 8 columns");
            SiteRecord s;
            s.id = detail::parse_id(fields[0], line_no, 1);
            s.location = {detail::parse_real(fields[1], line_no, 2), detail::parse_real(fields[2], line_no, 3)};
            double* targets[] = {&s.setup_cost, &s.holding_cost, &s.order_cost, &s.unit_order_cost, &s.capacity};
            for (std::size_t k = 0; k < 5; ++k) {
                *targets[k] = detail::parse_real(fields[3 + k], line_no, 4 + k);
                if (!(*targets[k] > 0.0)) throw ParseError(line_no, 4 + k, "site costs and capacity must be > 0");
            }
            sites.push_back(s);
            break;
        }
        }
    }
    if (q < 0.0 || levels < 0) throw ParseError(line_no, 1, "missing '# params' line with q and R");
    if (customers.empty()) throw ParseError(line_no, 1, "customer section is empty");
    if (sites.empty()) throw ParseError(line_no, 1, "site section is empty");
    if (static_cast<std::size_t>(levels) > sites.size())
        throw ParseError(line_no, 1, "R exceeds the number of sites");
    try {
        return ProblemInstance(std::move(customers), std::move(sites), q, static_cast<std::size_t>(levels), metric);
    } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, 1, e.what());
    }
}

inline ProblemInstance load_csv(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open instance file '" + path + "'");
    return read_csv(is);
}

}  // namespace rlip
