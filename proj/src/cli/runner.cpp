#include "spnls/cli/runner.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>

#include "spnls/error.hpp"
#include "spnls/parallel.hpp"

namespace fs = std::filesystem;

namespace spnls::cli {

namespace {

std::string timestamp() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
    return buf;
}

bool numerical(ErrorKind k) {
    return k == ErrorKind::Resolution || k == ErrorKind::NumericalAbort || k == ErrorKind::NonContraction;
}

}  // namespace

Context::Context(std::string command, RunConfig cfg, RunFlags flags, std::ostream& out)
    : command_(std::move(command)), cfg_(std::move(cfg)), flags_(flags), out_(out) {}

bool Context::begin(const std::vector<std::string>& plan) {
    out_root_ = cfg_.text("out", "runs");
    auto extra = cfg_.unused();
    if (!extra.empty()) {
        std::string list;
        for (const auto& k : extra) list += (list.empty() ? "" : ", ") + k;
        fail(ErrorKind::Config, "unknown key(s) for " + command_ + ": " + list);
    }
    if (flags_.dry_run) {
        out_ << "dry run: " << command_ << "\n";
        for (const auto& line : plan) out_ << "  " << line << "\n";
        out_ << "  threads: " << thread_count() << "\n";
        return false;
    }
    make_dir();
    write("config.resolved", "# spnls " + command_ + "\n" + cfg_.resolved());
    return true;
}

void Context::make_dir() {
    if (!dir_.empty()) return;
    fs::path base = out_root_.empty() ? cfg_.text("out", "runs") : out_root_;
    std::string stem = command_ + "-" + timestamp();
    fs::path p = base / stem;
    for (int i = 1; fs::exists(p); ++i) p = base / (stem + "-" + std::to_string(i));
    fs::create_directories(p);
    dir_ = p.string();
}

std::string Context::path(const std::string& name) const { return (fs::path(dir_) / name).string(); }

void Context::write(const std::string& name, const std::string& text) {
    if (flags_.dry_run) return;
    fs::create_directories(fs::path(path(name)).parent_path());
    csv::write_text(path(name), text);
}

void Context::write(const std::string& name, const csv::Table& table) { write(name, table.str()); }

void Context::plot(const std::string& name, const PlotSpec& spec, const std::vector<Series>& series) {
    if (flags_.plot) write(name, line_plot(spec, series));
}

void Context::diagnostic(const std::string& text) {
    make_dir();
    csv::write_text(path("diagnostic.txt"), text);
}

const std::vector<Command>& commands() {
    static const std::vector<Command> all = [] {
        std::vector<Command> v;
        register_solver(v);
        register_scans(v);
        register_circle(v);
        register_profiles(v);
        return v;
    }();
    return all;
}

double half_nyquist(const GridSpec& spec) {
    double line = spec.n1 / (2.0 * spec.L1), per = spec.nper / 2.0;
    return std::min(line, per) / 2.0;
}

void check_scale(const GridSpec& spec, int N, const std::string& key) {
    if (N < 1 || (N & (N - 1)) != 0) fail(ErrorKind::Config, key + " must hold powers of two, got " + std::to_string(N));
    if (N > half_nyquist(spec))
        fail(ErrorKind::Config, key + " = " + std::to_string(N) + " exceeds Nyquist/2 = " +
                                    std::to_string(half_nyquist(spec)) + " of the grid");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const auto& cmds = commands();
    CLI::App app{"Numerical experiments for the cubic NLS on R x T^3", "spnls"};
    app.require_subcommand(1, 1);
    std::string list;
    for (const auto& c : cmds) list += "  " + c.name + "\n";
    app.footer("Subcommands:\n" + list + "\nExit codes: 0 ok, 2 usage, 3 invalid config, 4 numerical abort.\n"
               "SPNLS_THREADS caps worker threads.");

    std::string config_path;
    RunFlags flags;
    std::string out_dir;
    std::vector<std::string> overrides;
    for (const auto& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.summary);
        sub->add_option("-c,--config", config_path, "flat key = value config file");
        sub->add_flag("--dry-run", flags.dry_run, "validate, print the plan, write nothing");
        sub->add_flag("--plot", flags.plot, "also write SVG plots");
        sub->add_option("--out", out_dir, "output root (key 'out', default runs)");
        sub->add_option("overrides", overrides, "key=value overrides");
        sub->footer("Outputs:\n" + c.schema);
    }

    if (args.size() >= 2 && !args[1].empty() && args[1][0] != '-' &&
        std::none_of(cmds.begin(), cmds.end(), [&](const Command& c) { return c.name == args[1]; })) {
        err << "spnls: unknown subcommand '" << args[1] << "'\n";
        return kUsage;
    }

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    const Command* cmd = nullptr;
    for (const auto& c : cmds)
        if (app.got_subcommand(c.name)) cmd = &c;

    std::unique_ptr<Context> ctx;
    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
        for (const auto& o : overrides) cfg.set_override(o);
        if (!out_dir.empty()) cfg.set("out", out_dir);
        ctx = std::make_unique<Context>(cmd->name, std::move(cfg), flags, out);
        cmd->run(*ctx);
        if (!ctx->dry_run()) out << "wrote " << ctx->dir() << "\n";
        return kOk;
    } catch (const Error& e) {
        if (numerical(e.kind()) && ctx) {
            std::string msg = std::string(e.what()) + "\n";
            if (!ctx->dry_run()) {
                ctx->diagnostic(msg);
                err << "spnls: numerical abort, see " << ctx->path("diagnostic.txt") << "\n";
            }
            err << "spnls: " << msg;
            return kNumericalAbort;
        }
        err << "spnls: " << e.what() << "\n";
        return kBadConfig;
    } catch (const std::exception& e) {
        err << "spnls: " << e.what() << "\n";
        return kFailure;
    }
}

int run(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr); }

}  // namespace spnls::cli
