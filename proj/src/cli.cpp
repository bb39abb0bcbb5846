#include "bohm1d/cli.hpp"

#include "bohm1d/barrier.hpp"
#include "bohm1d/constants.hpp"
#include "bohm1d/errors.hpp"
#include "bohm1d/relativity.hpp"
#include "bohm1d/trajectory.hpp"
#include "bohm1d/wavefield.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

namespace bohm1d::cli {

namespace {

using nlohmann::json;

// File problems get their own type so run_cli can map them to exit_io
// without catching unrelated runtime errors.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shortest exact decimal for a double; CSV files round-trip bit for bit.
std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Table {
    std::vector<std::string> cols;
    std::vector<std::vector<double>> rows;
};

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    out << content;
    out.flush();
    if (!out)
        throw IoError("write failed: " + path);
}

std::string table_to_csv(const Table& t) {
    std::string s;
    for (std::size_t i = 0; i < t.cols.size(); ++i) {
        if (i)
            s += ',';
        s += t.cols[i];
    }
    s += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                s += ',';
            s += num(row[i]);
        }
        s += '\n';
    }
    return s;
}

json table_to_json_rows(const Table& t) {
    json rows = json::array();
    for (const auto& row : t.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size(); ++i)
            obj[t.cols[i]] = row[i];
        rows.push_back(obj);
    }
    return rows;
}

// Writes the table as CSV or as a single JSON document. Any extra object
// goes into a .summary.json sidecar next to a CSV file, or inline under
// "summary" in the JSON form, so both formats carry the same information.
void write_table(const Table& t, const std::string& path, const std::string& format,
                 const json& extra, const char* extra_key) {
    if (format == "json") {
        json doc;
        doc["rows"] = table_to_json_rows(t);
        if (!extra.is_null())
            doc[extra_key] = extra;
        write_text_file(path, doc.dump(2) + "\n");
        return;
    }
    write_text_file(path, table_to_csv(t));
    if (!extra.is_null())
        write_text_file(path + ".summary.json", extra.dump(2) + "\n");
}

std::pair<double, double> parse_range(const std::string& s) {
    auto pos = s.find(':');
    if (pos == std::string::npos || pos == 0 || pos + 1 == s.size())
        throw std::invalid_argument("range must have the form LO:HI");
    std::size_t used = 0;
    std::string lo_str = s.substr(0, pos);
    std::string hi_str = s.substr(pos + 1);
    double lo = std::stod(lo_str, &used);
    if (used != lo_str.size())
        throw std::invalid_argument("range: cannot parse '" + lo_str + "'");
    double hi = std::stod(hi_str, &used);
    if (used != hi_str.size())
        throw std::invalid_argument("range: cannot parse '" + hi_str + "'");
    if (!(hi > lo))
        throw std::invalid_argument("range: HI must exceed LO");
    return {lo, hi};
}

// All parameters of one invocation. Subcommands read the subset they use.
struct RunConfig {
    double hbar = 1.0, m0 = 1.0, c = 1.0;
    double k = 1.0;
    double rho = 0.0;
    double phi = 0.0;
    double v0 = 0.0;  // single-point speed; 0 means not given
    double V0 = 0.0;  // barrier height; 0 means no barrier
    double a = 0.0;
    double x0 = std::numeric_limits<double>::quiet_NaN();  // NaN means auto
    double t_end = 0.0;  // 0 means pick from the field
    double tol = 1e-10;
    int grid = 0;  // 0 means subcommand default
    std::string range;
    std::string out;
    std::string format = "csv";
    std::string config_path;
    std::string mode = "massive";
    bool allow_thin = false;
};

// One registered flag: where CLI11 counted it, the config key, and how to
// pull a replacement value out of the config JSON.
struct Binding {
    CLI::Option* opt;
    std::string key;
    std::function<void(const json&)> apply;
};

class Flags {
  public:
    Flags(CLI::App* cmd, RunConfig& cfg) : cmd_(cmd), cfg_(cfg) {
        cmd->add_option("--config", cfg.config_path,
                        "JSON file with parameter values; explicit flags win");
    }

    CLI::Option* number(const std::string& flag, double& ref, const std::string& help) {
        auto* o = cmd_->add_option(flag, ref, help);
        bind(o, key_of(flag), [&ref](const json& v) { ref = v.get<double>(); });
        return o;
    }

    CLI::Option* integer(const std::string& flag, int& ref, const std::string& help) {
        auto* o = cmd_->add_option(flag, ref, help);
        bind(o, key_of(flag), [&ref](const json& v) { ref = v.get<int>(); });
        return o;
    }

    CLI::Option* text(const std::string& flag, std::string& ref, const std::string& help) {
        auto* o = cmd_->add_option(flag, ref, help);
        bind(o, key_of(flag), [&ref](const json& v) { ref = v.get<std::string>(); });
        return o;
    }

    CLI::Option* toggle(const std::string& flag, bool& ref, const std::string& help) {
        auto* o = cmd_->add_flag(flag, ref, help);
        bind(o, key_of(flag), [&ref](const json& v) { ref = v.get<bool>(); });
        return o;
    }

    void constants() {
        number("--hbar", cfg_.hbar, "reduced Planck constant");
        number("--m0", cfg_.m0, "particle rest mass");
        number("--c", cfg_.c, "speed limit of the relativistic correspondence");
    }

    void output(const std::string& default_out) {
        default_out_ = default_out;
        text("--out", cfg_.out, "output file path (default " + default_out + ")");
        text("--format", cfg_.format, "table format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    }

    // Config-file pass: fill in every flag the command line left untouched.
    void merge_config() {
        if (cfg_.config_path.empty())
            return;
        std::ifstream in(cfg_.config_path);
        if (!in)
            throw IoError("cannot read config file: " + cfg_.config_path);
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            throw std::invalid_argument("config file is not valid JSON: " + std::string(e.what()));
        }
        if (!doc.is_object())
            throw std::invalid_argument("config file must hold a JSON object");
        for (auto& [key, value] : doc.items()) {
            bool known = false;
            for (auto& b : binds_) {
                if (b.key != key)
                    continue;
                known = true;
                if (b.opt->count() == 0)
                    b.apply(value);
                break;
            }
            if (!known)
                std::cerr << "warning: config key '" << key << "' does not apply here\n";
        }
    }

    void finish() {
        if (cfg_.out.empty())
            cfg_.out = default_out_ + (cfg_.format == "json" ? ".json" : ".csv");
    }

  private:
    static std::string key_of(const std::string& flag) {
        std::string key = flag.substr(flag.find_first_not_of('-'));
        for (auto& ch : key)
            if (ch == '-')
                ch = '_';
        return key;
    }

    void bind(CLI::Option* o, const std::string& key, std::function<void(const json&)> apply) {
        binds_.push_back({o, key, std::move(apply)});
    }

    CLI::App* cmd_;
    RunConfig& cfg_;
    std::string default_out_;
    std::vector<Binding> binds_;
};

// Resolves --k / --v0 for subcommands that accept either: an explicit v0
// defines k through m0 v0 = hbar k.
double effective_k(const RunConfig& cfg) {
    if (cfg.v0 > 0.0)
        return cfg.m0 * cfg.v0 / cfg.hbar;
    return cfg.k;
}

int cmd_field(RunConfig& cfg) {
    PhysicalConstants pc(cfg.hbar, cfg.m0, cfg.c);
    double k = effective_k(cfg);
    SuperpositionState state(k, cfg.rho, cfg.phi);

    double period = std::numbers::pi / k;
    double lo = -period, hi = 0.0;
    if (!cfg.range.empty())
        std::tie(lo, hi) = parse_range(cfg.range);
    int n = cfg.grid > 0 ? cfg.grid : 1000;
    if (n < 2)
        throw std::invalid_argument("field: grid needs at least two points");

    Table t;
    t.cols = {"x", "v", "Q", "R"};
    t.rows.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
        double v = velocity_at(state, pc, x);
        double q = quantum_potential_at(state, pc, x);
        double r = amplitude_phase_at(state, pc, x).r;
        t.rows.push_back({x, v, q, r});
    }
    write_table(t, cfg.out, cfg.format, json(), "summary");
    std::cout << "wrote " << cfg.out << " (" << t.rows.size() << " rows)\n";
    return exit_ok;
}

int cmd_traj(RunConfig& cfg) {
    PhysicalConstants pc(cfg.hbar, cfg.m0, cfg.c);
    double k = effective_k(cfg);
    double period = std::numbers::pi / k;
    double v0 = pc.v0_of_k(k);
    double x0 = std::isnan(cfg.x0) ? -20.0 * period : cfg.x0;

    GuidingField field;
    double v_av_expect = 0.0;
    bool barrier_mode = cfg.V0 > 0.0;
    if (barrier_mode) {
        if (!(cfg.a > 0.0))
            throw std::invalid_argument("traj: barrier mode needs --a > 0");
        SquareBarrier b(cfg.V0, cfg.a);
        ScatteringSolution sol = solve_barrier(b, pc.energy_of_k(k), pc);
        field = make_field(sol, b, pc);
        double t_sq = std::norm(sol.t);
        v_av_expect = v0 * t_sq / (2.0 - t_sq);
        if (x0 >= b.x_left)
            throw std::invalid_argument("traj: x0 must start left of the barrier");
        if (cfg.t_end <= 0.0) {
            double distance = (b.x_left - x0) + b.a + period;
            cfg.t_end = 2.5 * distance / v_av_expect;
        }
    } else {
        SuperpositionState state(k, cfg.rho, cfg.phi);
        field = make_field(state, pc);
        if (state.degenerate()) {
            // Standing wave: the run exists to report the stall.
            if (cfg.t_end <= 0.0)
                cfg.t_end = 100.0 * period / v0;
        } else {
            v_av_expect = average_velocity(state.rho, v0);
            if (cfg.t_end <= 0.0)
                cfg.t_end = 1.05 * time_of_flight(state, pc, x0, x0 + 21.0 * period);
        }
    }

    IntegrateOptions opts;
    opts.char_length = period;
    opts.max_dx = period / 8.0;
    opts.v_ref = v_av_expect > 0.0 ? v_av_expect : 0.0;

    json diag;
    diag["method"] = "ode";
    int code = exit_ok;
    Table t;
    t.cols = {"t", "x", "v", "Q"};
    try {
        Trajectory traj = integrate(field, x0, cfg.t_end, cfg.tol, opts);
        for (const auto& s : traj.samples)
            t.rows.push_back({s.t, s.x, s.v, s.q});
        diag["accepted"] = traj.diag.accepted;
        diag["rejected"] = traj.diag.rejected;
        diag["max_local_error"] = traj.diag.max_local_error;
        diag["samples"] = traj.samples.size();
        double span = traj.samples.back().x - traj.samples.front().x;
        if (span >= period)
            diag["v_av_measured"] = measure_average_velocity(traj, k);
    } catch (const StallError& e) {
        diag["stall"] = {{"x", e.where()}, {"t", e.when()}};
        diag["error"] = e.what();
        code = exit_degenerate;
    } catch (const NodeError& e) {
        diag["node"] = {{"x", e.where()}};
        diag["error"] = e.what();
        code = exit_degenerate;
    }

    if (cfg.format == "json") {
        write_table(t, cfg.out, "json", diag, "diagnostics");
    } else {
        write_table(t, cfg.out, "csv", json(), "diagnostics");
        write_text_file(cfg.out + ".diag.json", diag.dump(2) + "\n");
    }
    std::cout << "wrote " << cfg.out << " (" << t.rows.size() << " rows)\n";
    return code;
}

int cmd_srcheck(RunConfig& cfg) {
    PhysicalConstants pc(cfg.hbar, cfg.m0, cfg.c);
    bool photon = cfg.mode == "photon";
    if (!photon && cfg.mode != "massive")
        throw std::invalid_argument("srcheck: mode must be 'massive' or 'photon'");

    // Range is in units of c; the massive correspondence starts at sqrt(2) c.
    double lo = photon ? 1.0 : std::numbers::sqrt2;
    double hi = 10.0;
    if (!cfg.range.empty())
        std::tie(lo, hi) = parse_range(cfg.range);
    int n = cfg.grid > 0 ? cfg.grid : 200;
    if (n < 1)
        throw std::invalid_argument("srcheck: grid needs at least one point");

    std::vector<double> speeds;
    if (cfg.v0 > 0.0) {
        speeds.push_back(cfg.v0);
    } else {
        for (int i = 0; i < n; ++i)
            speeds.push_back((n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1)) *
                             pc.c);
    }

    Table t;
    t.cols = photon ? std::vector<std::string>{"v0", "rho_sq", "T_sq", "v_av", "pass"}
                    : std::vector<std::string>{"v0",    "rho_sq", "T_sq", "v_av",
                                               "gamma", "m",      "E",    "pass"};
    long failures = 0;
    for (double v0 : speeds) {
        SRParticle p(pc.m0, pc.c, v0);
        if (photon) {
            double rho_sq = photon_reflection_sq(p);
            double v_av = emergent_velocity(p, ParticleKind::photon);
            bool pass = std::abs(v_av - pc.c) <= 1e-12 * pc.c;
            failures += pass ? 0 : 1;
            t.rows.push_back({v0, rho_sq, 1.0 - rho_sq, v_av, pass ? 1.0 : 0.0});
        } else {
            SRReport rep = sr_report(p);
            failures += rep.identities_pass ? 0 : 1;
            t.rows.push_back({rep.v0, rep.rho_sq, rep.t_sq, rep.v_av, rep.gamma, rep.m, rep.e,
                              rep.identities_pass ? 1.0 : 0.0});
        }
    }

    json summary;
    summary["mode"] = cfg.mode;
    summary["checked"] = t.rows.size();
    summary["failures"] = failures;
    write_table(t, cfg.out, cfg.format, summary, "summary");
    std::cout << "wrote " << cfg.out << " (" << t.rows.size() << " rows, " << failures
              << " failures)\n";
    return failures == 0 ? exit_ok : exit_check_failed;
}

int cmd_fig1(RunConfig& cfg) {
    PhysicalConstants pc(cfg.hbar, cfg.m0, cfg.c);
    double e0 = pc.rest_energy();

    double lo = 1.0, hi = 10.0;  // in units of the rest energy
    if (!cfg.range.empty())
        std::tie(lo, hi) = parse_range(cfg.range);
    int n = cfg.grid > 0 ? cfg.grid : 400;

    auto curve = transmission_curve(lo * e0, hi * e0, n, pc);
    Table t;
    t.cols = {"E_over_E0", "T_sq"};
    for (const auto& pt : curve)
        t.rows.push_back({pt.e_over_e0, pt.t_sq});

    double e_res = locate_resonance(pc, 1e-8 * e0);
    SRParticle at_res(pc.m0, pc.c, std::sqrt(2.0 * e_res / pc.m0));
    json summary;
    summary["resonance_E_over_E0"] = e_res / e0;
    summary["peak_T_sq"] = 1.0 - massive_reflection_sq(at_res);
    summary["search_tol_E_over_E0"] = 1e-8;

    write_table(t, cfg.out, cfg.format, summary, "summary");
    std::cout << "wrote " << cfg.out << " (" << t.rows.size() << " rows), resonance at E/E0 = "
              << num(e_res / e0) << "\n";
    return exit_ok;
}

int cmd_barrier_scan(RunConfig& cfg) {
    PhysicalConstants pc(cfg.hbar, cfg.m0, cfg.c);
    if (!(cfg.V0 > 0.0) || !(cfg.a > 0.0))
        throw std::invalid_argument("barrier-scan: needs --V0 > 0 and --a > 0");
    SquareBarrier b(cfg.V0, cfg.a);

    double lo = 0.05, hi = 0.2;  // incident speeds
    if (!cfg.range.empty())
        std::tie(lo, hi) = parse_range(cfg.range);
    int n = cfg.grid > 0 ? cfg.grid : 50;

    BarrierScan scan =
        thick_barrier_scaling(b, lo, hi, n, pc, cfg.allow_thin ? 0.0 : 5.0);

    Table t;
    t.cols = {"v0", "T_sq", "v_av"};
    for (const auto& row : scan.rows)
        t.rows.push_back({row.v0, row.t_sq, row.v_av});

    json summary;
    summary["slope"] = scan.slope;
    write_table(t, cfg.out, cfg.format, summary, "summary");
    std::cout << "wrote " << cfg.out << " (" << t.rows.size()
              << " rows), log-log slope = " << num(scan.slope) << "\n";
    return exit_ok;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Bohmian kinematics of one-dimensional scattering states"};
    app.require_subcommand(1);

    RunConfig cfg;

    auto* field = app.add_subcommand("field", "sample velocity, quantum potential and amplitude");
    Flags field_flags(field, cfg);
    auto* field_k = field_flags.number("--k", cfg.k, "incident wavenumber");
    field_flags.number("--v0", cfg.v0, "incident speed (alternative to --k)")
        ->excludes(field_k);
    field_flags.number("--rho", cfg.rho, "reflection amplitude modulus");
    field_flags.number("--phi", cfg.phi, "reflection phase");
    field_flags.constants();
    field_flags.integer("--grid", cfg.grid, "number of sample points (default 1000)");
    field_flags.text("--range", cfg.range, "sampling window LO:HI (default one period up to 0)");
    field_flags.output("field");

    auto* traj = app.add_subcommand("traj", "integrate a particle trajectory");
    Flags traj_flags(traj, cfg);
    auto* traj_k = traj_flags.number("--k", cfg.k, "incident wavenumber");
    traj_flags.number("--v0", cfg.v0, "incident speed (alternative to --k)")
        ->excludes(traj_k);
    traj_flags.number("--rho", cfg.rho, "reflection amplitude modulus");
    traj_flags.number("--phi", cfg.phi, "reflection phase");
    traj_flags.constants();
    traj_flags.number("--V0", cfg.V0, "barrier height; selects the barrier field");
    traj_flags.number("--a", cfg.a, "barrier width");
    traj_flags.number("--x0", cfg.x0, "start position (default 20 periods left of origin)");
    traj_flags.number("--t-end", cfg.t_end, "integration horizon (default spans 21 periods)");
    traj_flags.number("--tol", cfg.tol, "integrator relative error tolerance");
    traj_flags.output("traj");

    auto* srcheck = app.add_subcommand("srcheck", "verify the relativistic identities on a grid");
    Flags srcheck_flags(srcheck, cfg);
    srcheck_flags.constants();
    srcheck_flags.number("--v0", cfg.v0, "check a single speed instead of a grid");
    srcheck_flags.integer("--grid", cfg.grid, "number of grid points (default 200)");
    srcheck_flags.text("--range", cfg.range, "speed window LO:HI in units of c");
    srcheck_flags.text("--mode", cfg.mode, "correspondence: massive or photon")
        ->check(CLI::IsMember({"massive", "photon"}));
    srcheck_flags.output("srcheck");

    auto* fig1 = app.add_subcommand("fig1", "transmission versus energy with resonance summary");
    Flags fig1_flags(fig1, cfg);
    fig1_flags.constants();
    fig1_flags.integer("--grid", cfg.grid, "number of energy points (default 400)");
    fig1_flags.text("--range", cfg.range, "energy window LO:HI in units of the rest energy");
    fig1_flags.output("fig1");

    auto* scan = app.add_subcommand("barrier-scan", "tunnelling average-velocity scan");
    Flags scan_flags(scan, cfg);
    scan_flags.constants();
    scan_flags.number("--V0", cfg.V0, "barrier height");
    scan_flags.number("--a", cfg.a, "barrier width");
    scan_flags.integer("--grid", cfg.grid, "number of scan points (default 50)");
    scan_flags.text("--range", cfg.range, "incident speed window LO:HI (default 0.05:0.2)");
    scan_flags.toggle("--allow-thin", cfg.allow_thin, "waive the opacity requirement");
    scan_flags.output("barrier_scan");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (app.got_subcommand(field)) {
            field_flags.merge_config();
            field_flags.finish();
            return cmd_field(cfg);
        }
        if (app.got_subcommand(traj)) {
            traj_flags.merge_config();
            traj_flags.finish();
            return cmd_traj(cfg);
        }
        if (app.got_subcommand(srcheck)) {
            srcheck_flags.merge_config();
            srcheck_flags.finish();
            return cmd_srcheck(cfg);
        }
        if (app.got_subcommand(fig1)) {
            fig1_flags.merge_config();
            fig1_flags.finish();
            return cmd_fig1(cfg);
        }
        scan_flags.merge_config();
        scan_flags.finish();
        return cmd_barrier_scan(cfg);
    } catch (const DegeneracyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_degenerate;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("bohm1d");
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

} // namespace bohm1d::cli
