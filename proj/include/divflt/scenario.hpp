#pragma once

#include "divflt/model.hpp"
#include "divflt/pricer.hpp"

#include <optional>
#include <string>
#include <vector>

namespace divflt {

// Either a collapsed amount or payment legs discounted to the ex-date on load.
struct ScenarioDividend {
    double ex_date = 0.0;
    std::optional<double> amount;
    std::vector<DividendLeg> legs;

    bool operator==(const ScenarioDividend&) const = default;
};

struct Scenario {
    MarketState market;
    OptionContract contract;
    std::vector<ScenarioDividend> dividends;
    GridConfig grid;

    bool operator==(const Scenario&) const = default;
};

/// Parses the JSON scenario format. Errors name the offending field.
Scenario parse_scenario(const std::string& text);

std::string serialize_scenario(const Scenario& scenario);

/// Checks every field; messages name the field, e.g. "market.vol".
void validate(const Scenario& scenario);

DividendSchedule schedule_of(const Scenario& scenario);

}  // namespace divflt
