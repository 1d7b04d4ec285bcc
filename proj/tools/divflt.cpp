// Command-line front end: price, check, bench.

#include "divflt/bench.hpp"
#include "divflt/error.hpp"
#include "divflt/oracles.hpp"
#include "divflt/pricer.hpp"
#include "divflt/scenario.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace divflt;
using nlohmann::json;

enum Exit : int { ok = 0, validation = 2, engine = 3, io = 4, internal = 5 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Inputs {
    std::string scenario_path;
    std::optional<double> spot, rate, vol, strike, expiry, nsigma;
    std::optional<std::size_t> grid_n;
    std::string kind;
    std::vector<std::string> dividends;
    bool no_strike_adjust = false;
    std::string format = "text";
};

void add_inputs(CLI::App* cmd, Inputs& in)
{
    cmd->add_option("--scenario", in.scenario_path, "JSON scenario file");
    cmd->add_option("--spot", in.spot, "spot price S0");
    cmd->add_option("--rate", in.rate, "continuously compounded rate");
    cmd->add_option("--vol", in.vol, "volatility");
    cmd->add_option("--strike", in.strike, "strike K");
    cmd->add_option("--expiry", in.expiry, "expiry T in years");
    cmd->add_option("--kind", in.kind, "call or put")->check(CLI::IsMember({"call", "put"}));
    cmd->add_option("--dividend", in.dividends, "ex-dividend event t:D (repeatable)");
    cmd->add_option("--grid-n", in.grid_n, "grid size N (even)");
    cmd->add_option("--nsigma", in.nsigma, "grid half-width in standard deviations");
    cmd->add_flag("--no-strike-adjust", in.no_strike_adjust, "keep the strike fixed across ex-dates");
    cmd->add_option("--format", in.format, "text or structured")
        ->check(CLI::IsMember({"text", "structured"}));
}

std::string read_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw IoError("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Scenario load(const Inputs& in)
{
    Scenario s;
    if (!in.scenario_path.empty()) {
        s = parse_scenario(read_file(in.scenario_path));
    } else {
        for (auto [name, v] : {std::pair{"spot", in.spot}, {"vol", in.vol}, {"strike", in.strike},
                               {"expiry", in.expiry}})
            if (!v) throw Error(ErrorCode::configuration,
                                std::string("--") + name + " is required without --scenario");
        s.market.rate = 0.0;
    }
    if (in.spot) s.market.spot = *in.spot;
    if (in.rate) s.market.rate = *in.rate;
    if (in.vol) s.market.vol = *in.vol;
    if (in.strike) s.contract.strike = *in.strike;
    if (in.expiry) s.contract.expiry = *in.expiry;
    if (!in.kind.empty()) s.contract.kind = in.kind == "put" ? OptionKind::put : OptionKind::call;
    if (in.no_strike_adjust) s.contract.strike_adjusted = false;
    if (in.grid_n) s.grid.n = *in.grid_n;
    if (in.nsigma) s.grid.n_sigma = *in.nsigma;
    if (!in.dividends.empty()) {
        s.dividends.clear();
        for (const auto& d : in.dividends) {
            const auto colon = d.find(':');
            ScenarioDividend ev;
            try {
                if (colon == std::string::npos) throw std::invalid_argument(d);
                std::size_t used = 0;
                ev.ex_date = std::stod(d.substr(0, colon), &used);
                ev.amount = std::stod(d.substr(colon + 1), &used);
            } catch (const std::exception&) {
                throw Error(ErrorCode::configuration, "--dividend expects t:D, got '" + d + "'");
            }
            s.dividends.push_back(ev);
        }
    }
    validate(s);
    return s;
}

std::string fixed4(double v) { return fmt::format("{:.4f}", v); }

json diagnostics_json(const Diagnostics& d)
{
    return {{"lambda", d.lambda},        {"segment_lambdas", d.segment_lambdas},
            {"x_T", d.x_t},              {"n", d.n},
            {"n_sigma", d.n_sigma},      {"spacing", d.spacing},
            {"center", d.center},        {"segments", d.segments},
            {"closed_form_first_segment", d.closed_form_first_segment},
            {"pde_residual", d.pde_residual}, {"warnings", d.warnings}};
}

int cmd_price(const Inputs& in)
{
    const Scenario s = load(in);
    const PricingResult r = price(s.market, s.contract, schedule_of(s), s.grid);
    if (in.format == "structured") {
        json out = {{"premium", r.premium}, {"delta", r.delta}, {"gamma", r.gamma},
                    {"theta", r.theta}, {"diagnostics", diagnostics_json(r.diagnostics)}};
        std::cout << out.dump(2) << "\n";
        return ok;
    }
    const Diagnostics& d = r.diagnostics;
    std::cout << fmt::format("{:<10}{:>14}\n", "premium", fixed4(r.premium))
              << fmt::format("{:<10}{:>14}\n", "delta", fixed4(r.delta))
              << fmt::format("{:<10}{:>14}\n", "gamma", fixed4(r.gamma))
              << fmt::format("{:<10}{:>14}\n", "theta", fixed4(r.theta))
              << fmt::format("{:<10}{:>14}\n", "lambda", fixed4(d.lambda))
              << fmt::format("{:<10}{:>14}\n", "x_T", fixed4(d.x_t))
              << fmt::format("{:<10}{:>14}\n", "N", d.n)
              << fmt::format("{:<10}{:>14}\n", "n_sigma", fixed4(d.n_sigma))
              << fmt::format("{:<10}{:>14}\n", "segments", d.segments);
    for (const auto& w : d.warnings) std::cout << "warning: " << w << "\n";
    return ok;
}

int cmd_check(const Inputs& in, int points, double xi)
{
    const Scenario s = load(in);
    const DividendSchedule sched = schedule_of(s);
    const PricingResult r = price(s.market, s.contract, sched, s.grid);
    std::string oracle;
    double reference = 0.0;
    std::optional<std::string> warning;
    if (sched.events.empty()) {
        oracle = "closed_form";
        reference = black_scholes(s.market.spot, s.contract.strike, s.market.rate, s.market.vol,
                                  s.contract.expiry, s.contract.kind)
                        .premium;
    } else {
        oracle = "quadrature";
        const QuadratureResult q = quadrature_price(s.market, s.contract, sched, {points, xi, 0});
        reference = q.price;
        if (q.precision_warning)
            warning = fmt::format("oracle-precision warning: {} points and {} points differ by {:.3e}",
                                  points, 2 * points, std::abs(q.price - q.refined));
    }
    const AccuracyRecord acc = accuracy(r.premium, reference);
    const double diff = std::abs(r.premium - reference);
    if (in.format == "structured") {
        json out = {{"engine", r.premium}, {"oracle", oracle}, {"oracle_price", reference},
                    {"abs_diff", diff}};
        out["digits"] = acc.exact() ? json("exact") : json(*acc.digits);
        out["warnings"] = warning ? json::array({*warning}) : json::array();
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << fmt::format("{:<14}{:>14}\n", "engine", fixed4(r.premium))
                  << fmt::format("{:<14}{:>14}\n", oracle, fixed4(reference))
                  << fmt::format("{:<14}{:>14.3e}\n", "abs_diff", diff)
                  << fmt::format("{:<14}{:>14}\n", "digits",
                                 acc.exact() ? std::string("exact") : fixed4(*acc.digits));
    }
    if (warning) std::cerr << *warning << "\n";
    return ok;
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path.string());
    f << text;
    if (!f) throw IoError("write failed for " + path.string());
}

int cmd_bench(const std::string& which, const std::string& out_dir, int batches, int evals)
{
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
    const std::filesystem::path dir(out_dir);
    std::filesystem::path target;
    if (which == "table1") {
        target = dir / "table1.csv";
        write_file(target, to_csv(run_table1()));
    } else if (which == "table2") {
        target = dir / "table2.csv";
        write_file(target, to_csv(run_table2()));
    } else if (which == "baseline") {
        target = dir / "baseline.csv";
        write_file(target, to_csv(run_baseline()));
    } else {
        TimeAccuracyConfig cfg;
        cfg.batches = batches;
        cfg.evals_per_batch = evals;
        target = dir / "time_accuracy.csv";
        write_file(target, to_csv(run_time_accuracy(cfg)));
    }
    std::cout << "wrote " << target.string() << "\n";
    return ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Discrete-dividend option pricer on a fast Laplace transform grid"};
    app.footer(
        "Exit status:\n"
        "  0  success\n"
        "  2  validation error (bad arguments or scenario fields)\n"
        "  3  engine error (coverage, numerical integrity, degenerate payoff, reference validity)\n"
        "  4  I/O error (unreadable scenario, unwritable output)\n"
        "  5  unexpected internal error");
    app.require_subcommand(1);

    Inputs price_in, check_in;
    auto* price_cmd = app.add_subcommand("price", "price one contract");
    add_inputs(price_cmd, price_in);

    auto* check_cmd = app.add_subcommand("check", "compare the engine with an oracle");
    add_inputs(check_cmd, check_in);
    int quad_points = 500;
    double quad_xi = 6.5;
    check_cmd->add_option("--quad-points", quad_points, "quadrature nodes per sub-interval");
    check_cmd->add_option("--quad-xi", quad_xi, "quadrature truncation in standard deviations");

    auto* bench_cmd = app.add_subcommand("bench", "write benchmark CSV files");
    std::string which, out_dir = ".";
    int batches = 10, evals = 25;
    bench_cmd->add_option("which", which, "table1, table2, baseline or time-accuracy")
        ->required()
        ->check(CLI::IsMember({"table1", "table2", "baseline", "time-accuracy"}));
    bench_cmd->add_option("--out-dir", out_dir, "output directory");
    bench_cmd->add_option("--batches", batches, "timing batches");
    bench_cmd->add_option("--evals", evals, "evaluations per timing batch");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return validation;
    }

    try {
        if (price_cmd->parsed()) return cmd_price(price_in);
        if (check_cmd->parsed()) return cmd_check(check_in, quad_points, quad_xi);
        return cmd_bench(which, out_dir, batches, evals);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return is_validation_error(e.code()) ? validation : engine;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return io;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return internal;
    }
}
