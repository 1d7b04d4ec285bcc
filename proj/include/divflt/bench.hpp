#pragma once

#include "divflt/model.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace divflt {

struct TimingSample {
    double best_mean = 0.0;  // seconds per evaluation
    double stability = 0.0;  // min batch / max batch
};

/// best_mean = min(batch) / evals_per_batch, stability = min(batch) / max(batch).
TimingSample measure(const std::function<void()>& op, int batches = 10,
                     int evals_per_batch = 25);

struct AccuracyRecord {
    double price = 0.0;
    double reference = 0.0;
    std::optional<double> digits;  // empty when price == reference

    bool exact() const { return !digits.has_value(); }
};

/// digits = -log10 |price - reference|.
AccuracyRecord accuracy(double price, double reference);

// Market shared by the single- and multi-dividend experiments.
MarketState reference_market();

struct Table1Row {
    double t, dividend, strike, flt_price, quad_price, abs_diff;
};

struct Table2Row {
    int scenario_id;
    double strike, premium, delta, delta_bump, gamma, gamma_bump;
};

struct BaselineRow {
    double moneyness, flt_price, bs_price, abs_error, flt_delta, bs_delta, flt_gamma, bs_gamma;
};

struct TimeAccuracyRow {
    std::string case_id, pricer;
    double strike;
    std::size_t n_points;
    double seconds_per_eval, stability;
    AccuracyRecord accuracy;
};

/// Multi-dividend schedules: id 1 four payments, id 2 two payments.
DividendSchedule table2_schedule(int scenario_id);

std::vector<Table1Row> run_table1(std::size_t n = 1024, int quad_points = 500,
                                  double quad_xi = 6.5);
std::vector<Table2Row> run_table2(std::size_t n = 100, double h = 0.01);

struct BaselineConfig {
    std::size_t n = 1024;
    double vol = 0.01;
    double expiry = 5.0 / 252.0;
    double moneyness_lo = 0.9;
    double moneyness_hi = 1.1;
    int steps = 40;
};
std::vector<BaselineRow> run_baseline(const BaselineConfig& config = {});

struct TimeAccuracyConfig {
    std::vector<std::string> cases{"a", "b"};
    std::vector<double> strikes{70.0, 100.0, 130.0};
    std::vector<std::size_t> engine_sizes{64, 128, 256, 512, 1024, 2048, 4096};
    std::vector<int> quad_points{16, 32, 64, 128, 256};
    std::size_t reference_n = 65536;
    int reference_points = 8000;
    double reference_xi = 10.0;  // quadrature truncation for the reference only
    double quad_xi = 6.5;
    double reference_gate = 1e-8;
    int batches = 10;
    int evals_per_batch = 25;
};

/// Case "a" uses table2_schedule(1), case "b" table2_schedule(2). Throws a
/// reference-validity error when the two extreme-discretization references disagree.
std::vector<TimeAccuracyRow> run_time_accuracy(const TimeAccuracyConfig& config = {});

std::string to_csv(const std::vector<Table1Row>& rows);
std::string to_csv(const std::vector<Table2Row>& rows);
std::string to_csv(const std::vector<BaselineRow>& rows);
std::string to_csv(const std::vector<TimeAccuracyRow>& rows);

}  // namespace divflt
