#include "spnls/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "spnls/csv.hpp"
#include "spnls/error.hpp"

namespace spnls::cli {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    if (trim(s).empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* want) {
    fail(ErrorKind::Config, "invalid value for '" + key + "': '" + value + "' (expected " + want + ")");
}

double to_real(const std::string& key, const std::string& s) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) bad_value(key, s, "a real number");
    return v;
}

long long to_integer(const std::string& key, const std::string& s) {
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) bad_value(key, s, "an integer");
    return v;
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + csv::num(v[i]);
    return out;
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text, const std::string& origin) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos || trim(line.substr(0, eq)).empty())
            fail(ErrorKind::Config, origin + ":" + std::to_string(no) + ": expected 'key = value'");
        c.values_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Config, "cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

void RunConfig::set(const std::string& key, const std::string& value) { values_[trim(key)] = trim(value); }

void RunConfig::set_override(const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos || trim(assignment.substr(0, eq)).empty())
        fail(ErrorKind::Config, "override must look like key=value: '" + assignment + "'");
    set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::string RunConfig::raw(const std::string& key) const { return values_.at(key); }

void RunConfig::record(const std::string& key, const std::string& value) { resolved_[key] = value; }

std::string RunConfig::text(const std::string& key, const std::string& def) {
    std::string v = has(key) ? raw(key) : def;
    record(key, v);
    return v;
}

double RunConfig::real(const std::string& key, double def) {
    double v = has(key) ? to_real(key, raw(key)) : def;
    record(key, csv::num(v));
    return v;
}

long long RunConfig::integer(const std::string& key, long long def) {
    long long v = has(key) ? to_integer(key, raw(key)) : def;
    record(key, csv::num(v));
    return v;
}

bool RunConfig::flag(const std::string& key, bool def) {
    bool v = def;
    if (has(key)) {
        std::string s = raw(key);
        if (s == "true" || s == "1" || s == "yes")
            v = true;
        else if (s == "false" || s == "0" || s == "no")
            v = false;
        else
            bad_value(key, s, "true or false");
    }
    record(key, v ? "true" : "false");
    return v;
}

std::vector<int> RunConfig::ints(const std::string& key, const std::vector<int>& def) {
    std::vector<int> v = def;
    if (has(key)) {
        v.clear();
        for (const auto& s : split_list(raw(key))) {
            long long x = to_integer(key, s);
            if (x < INT32_MIN || x > INT32_MAX) bad_value(key, s, "a 32-bit integer");
            v.push_back(static_cast<int>(x));
        }
    }
    record(key, join(v));
    return v;
}

std::vector<long long> RunConfig::longs(const std::string& key, const std::vector<long long>& def) {
    std::vector<long long> v = def;
    if (has(key)) {
        v.clear();
        for (const auto& s : split_list(raw(key))) v.push_back(to_integer(key, s));
    }
    record(key, join(v));
    return v;
}

std::vector<double> RunConfig::reals(const std::string& key, const std::vector<double>& def) {
    std::vector<double> v = def;
    if (has(key)) {
        v.clear();
        for (const auto& s : split_list(raw(key))) v.push_back(to_real(key, s));
    }
    record(key, join(v));
    return v;
}

GridSpec RunConfig::grid(const GridSpec& def) {
    GridSpec g;
    g.L1 = static_cast<int>(integer("L1", def.L1));
    g.n1 = static_cast<int>(integer("n1", def.n1));
    g.nper = static_cast<int>(integer("nper", def.nper));
    try {
        g.validate();
    } catch (const Error& e) {
        fail(ErrorKind::Config, std::string("invalid grid: ") + e.what());
    }
    return g;
}

solver::SolveConfig RunConfig::solve(double dt_default) {
    solver::SolveConfig c;
    c.dt = real("dt", dt_default);
    std::string scheme = text("scheme", "strang");
    if (scheme == "strang")
        c.scheme = solver::Scheme::Strang;
    else if (scheme == "picard")
        c.scheme = solver::Scheme::Picard;
    else
        bad_value("scheme", scheme, "strang or picard");
    c.tol = real("tol", c.tol);
    c.max_iter = static_cast<int>(integer("max_iter", c.max_iter));
    c.record_stride = static_cast<int>(integer("record_stride", c.record_stride));
    c.rho = real("rho", c.rho);
    c.resolution_tol = real("resolution_tol", c.resolution_tol);
    try {
        c.validate();
    } catch (const Error& e) {
        fail(ErrorKind::Config, std::string("invalid scheme parameters: ") + e.what());
    }
    return c;
}

std::vector<std::string> RunConfig::unused() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
        if (!resolved_.count(k)) out.push_back(k);
    return out;
}

std::string RunConfig::resolved() const {
    std::string out;
    for (const auto& [k, v] : resolved_) out += k + " = " + v + "\n";
    return out;
}

}  // namespace spnls::cli
