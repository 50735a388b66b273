#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "spnls/cli/config.hpp"
#include "spnls/cli/svg.hpp"
#include "spnls/csv.hpp"

namespace spnls::cli {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kBadConfig = 3, kNumericalAbort = 4 };

struct RunFlags {
    bool dry_run = false;
    bool plot = false;
};

class Context {
public:
    Context(std::string command, RunConfig cfg, RunFlags flags, std::ostream& out);

    RunConfig& config() { return cfg_; }
    const std::string& command() const { return command_; }
    bool dry_run() const { return flags_.dry_run; }
    std::ostream& out() { return out_; }

    // Rejects unconsumed keys, then either prints the plan (dry run, returns false)
    // or creates the run directory and writes config.resolved.
    bool begin(const std::vector<std::string>& plan);

    const std::string& dir() const { return dir_; }
    std::string path(const std::string& name) const;
    void write(const std::string& name, const std::string& text);
    void write(const std::string& name, const csv::Table& table);
    // Written only under --plot.
    void plot(const std::string& name, const PlotSpec& spec, const std::vector<Series>& series);
    // Diagnostic file for numerical aborts; creates the run directory if needed.
    void diagnostic(const std::string& text);

private:
    void make_dir();

    std::string command_;
    RunConfig cfg_;
    RunFlags flags_;
    std::ostream& out_;
    std::string dir_;
    std::string out_root_;
};

struct Command {
    std::string name;
    std::string summary;
    std::string schema;  // CSV files and columns, shown in --help
    std::function<void(Context&)> run;
};

const std::vector<Command>& commands();

// argv-style arguments including the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

// Nyquist/2 of the coarsest direction.
double half_nyquist(const GridSpec& spec);
// Rejects N that is not dyadic or exceeds half_nyquist(spec).
void check_scale(const GridSpec& spec, int N, const std::string& key);

void register_solver(std::vector<Command>& out);
void register_scans(std::vector<Command>& out);
void register_circle(std::vector<Command>& out);
void register_profiles(std::vector<Command>& out);

}  // namespace spnls::cli
