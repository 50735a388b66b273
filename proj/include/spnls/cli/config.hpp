#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "spnls/grid.hpp"
#include "spnls/solver.hpp"

namespace spnls::cli {

// Flat "key = value" configuration. Every lookup records the effective value, so
// resolved() reproduces the run exactly.
class RunConfig {
public:
    // '#' starts a comment; blank lines are ignored; later keys win.
    static RunConfig parse(const std::string& text, const std::string& origin = "<string>");
    static RunConfig load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    // "key=value"
    void set_override(const std::string& assignment);
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string text(const std::string& key, const std::string& def);
    double real(const std::string& key, double def);
    long long integer(const std::string& key, long long def);
    bool flag(const std::string& key, bool def);
    std::vector<int> ints(const std::string& key, const std::vector<int>& def);
    std::vector<long long> longs(const std::string& key, const std::vector<long long>& def);
    std::vector<double> reals(const std::string& key, const std::vector<double>& def);

    std::uint64_t seed() { return static_cast<std::uint64_t>(integer("seed", 0)); }
    GridSpec grid(const GridSpec& def = GridSpec{});
    solver::SolveConfig solve(double dt_default = 1e-3);

    // Keys present in the file or overrides that no lookup consumed.
    std::vector<std::string> unused() const;
    // Sorted "key = value" lines of every consumed key.
    std::string resolved() const;

private:
    std::string raw(const std::string& key) const;
    void record(const std::string& key, const std::string& value);

    std::map<std::string, std::string> values_;
    std::map<std::string, std::string> resolved_;
};

}  // namespace spnls::cli
