#include "divflt/scenario.hpp"

#include "divflt/error.hpp"

#include <json.hpp>

#include <cmath>

namespace divflt {

namespace {

using nlohmann::json;

const json& child(const json& j, const char* key, const std::string& path)
{
    if (!j.is_object() || !j.contains(key))
        throw Error(ErrorCode::configuration, "missing field " + path + key);
    return j.at(key);
}

double number(const json& j, const char* key, const std::string& path)
{
    const json& v = child(j, key, path);
    if (!v.is_number()) throw Error(ErrorCode::configuration, path + key + " must be a number");
    return v.get<double>();
}

void require(bool ok, const std::string& field, const std::string& what)
{
    if (!ok) throw Error(ErrorCode::parameter, field + " " + what);
}

}  // namespace

Scenario parse_scenario(const std::string& text)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::configuration, std::string("malformed scenario: ") + e.what());
    }
    Scenario s;
    const json& m = child(root, "market", "");
    s.market.spot = number(m, "spot", "market.");
    s.market.rate = number(m, "rate", "market.");
    s.market.vol = number(m, "vol", "market.");

    const json& c = child(root, "contract", "");
    s.contract.strike = number(c, "strike", "contract.");
    s.contract.expiry = number(c, "expiry", "contract.");
    const json& kind = child(c, "kind", "contract.");
    if (kind == "call") s.contract.kind = OptionKind::call;
    else if (kind == "put") s.contract.kind = OptionKind::put;
    else throw Error(ErrorCode::configuration, "contract.kind must be \"call\" or \"put\"");
    if (c.contains("strike_adjusted")) {
        if (!c["strike_adjusted"].is_boolean())
            throw Error(ErrorCode::configuration, "contract.strike_adjusted must be a boolean");
        s.contract.strike_adjusted = c["strike_adjusted"].get<bool>();
    }

    if (root.contains("dividends")) {
        const json& divs = root["dividends"];
        if (!divs.is_array()) throw Error(ErrorCode::configuration, "dividends must be a list");
        for (std::size_t i = 0; i < divs.size(); ++i) {
            const std::string path = "dividends[" + std::to_string(i) + "].";
            ScenarioDividend d;
            d.ex_date = number(divs[i], "ex_date", path);
            const bool has_amount = divs[i].contains("amount");
            const bool has_legs = divs[i].contains("legs");
            if (has_amount == has_legs)
                throw Error(ErrorCode::configuration, path + "amount or " + path + "legs: exactly one is required");
            if (has_amount) d.amount = number(divs[i], "amount", path);
            if (has_legs) {
                const json& legs = divs[i]["legs"];
                if (!legs.is_array() || legs.empty())
                    throw Error(ErrorCode::configuration, path + "legs must be a non-empty list");
                for (std::size_t l = 0; l < legs.size(); ++l) {
                    const std::string lp = path + "legs[" + std::to_string(l) + "].";
                    d.legs.push_back({number(legs[l], "pay_date", lp), number(legs[l], "amount", lp)});
                }
            }
            s.dividends.push_back(d);
        }
    }

    if (root.contains("grid")) {
        const json& g = root["grid"];
        if (g.contains("n")) {
            const double n = number(g, "n", "grid.");
            if (!(n >= 0.0) || n != std::floor(n))
                throw Error(ErrorCode::configuration, "grid.n must be a non-negative integer");
            s.grid.n = static_cast<std::size_t>(n);
        }
        if (g.contains("n_sigma")) s.grid.n_sigma = number(g, "n_sigma", "grid.");
        if (g.contains("floor_eps")) s.grid.floor_eps = number(g, "floor_eps", "grid.");
    }
    validate(s);
    return s;
}

std::string serialize_scenario(const Scenario& s)
{
    json root;
    root["market"] = {{"spot", s.market.spot}, {"rate", s.market.rate}, {"vol", s.market.vol}};
    root["contract"] = {{"strike", s.contract.strike},
                        {"expiry", s.contract.expiry},
                        {"kind", s.contract.kind == OptionKind::call ? "call" : "put"},
                        {"strike_adjusted", s.contract.strike_adjusted}};
    json divs = json::array();
    for (const auto& d : s.dividends) {
        json e = {{"ex_date", d.ex_date}};
        if (d.amount) e["amount"] = *d.amount;
        else {
            json legs = json::array();
            for (const auto& l : d.legs) legs.push_back({{"pay_date", l.pay_date}, {"amount", l.amount}});
            e["legs"] = legs;
        }
        divs.push_back(e);
    }
    root["dividends"] = divs;
    json grid = {{"n", s.grid.n}, {"n_sigma", s.grid.n_sigma}};
    if (s.grid.floor_eps) grid["floor_eps"] = *s.grid.floor_eps;
    root["grid"] = grid;
    return root.dump(2) + "\n";
}

void validate(const Scenario& s)
{
    require(std::isfinite(s.market.spot) && s.market.spot > 0.0, "market.spot", "must be positive");
    require(std::isfinite(s.market.rate), "market.rate", "must be finite");
    require(std::isfinite(s.market.vol) && s.market.vol > 0.0, "market.vol", "must be positive");
    require(std::isfinite(s.contract.strike) && s.contract.strike > 0.0, "contract.strike",
            "must be positive");
    require(std::isfinite(s.contract.expiry) && s.contract.expiry > 0.0, "contract.expiry",
            "must be positive");
    require(s.grid.n >= 4 && s.grid.n % 2 == 0, "grid.n", "must be even and >= 4");
    require(std::isfinite(s.grid.n_sigma) && s.grid.n_sigma > 0.0, "grid.n_sigma",
            "must be positive");
    if (s.grid.floor_eps)
        require(std::isfinite(*s.grid.floor_eps) && *s.grid.floor_eps > 0.0, "grid.floor_eps",
                "must be positive");
    for (std::size_t i = 0; i < s.dividends.size(); ++i) {
        const auto& d = s.dividends[i];
        const std::string path = "dividends[" + std::to_string(i) + "]";
        if (d.amount)
            require(std::isfinite(*d.amount) && *d.amount > 0.0, path + ".amount",
                    "must be positive");
        for (const auto& l : d.legs) {
            require(std::isfinite(l.amount) && l.amount > 0.0, path + ".legs.amount",
                    "must be positive");
            if (l.pay_date < d.ex_date)
                throw Error(ErrorCode::schedule, path + ".legs.pay_date precedes ex_date");
        }
    }
    validate(schedule_of(s), s.contract.expiry);
}

DividendSchedule schedule_of(const Scenario& s)
{
    DividendSchedule sched;
    for (const auto& d : s.dividends)
        sched.events.push_back(
            {d.ex_date, d.amount ? *d.amount : pv_dividend(d.legs, d.ex_date, s.market.rate)});
    return sched;
}

}  // namespace divflt
