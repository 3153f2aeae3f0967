#pragma once

#include <string>

#include "json.hpp"

#include "betafam/chart.hpp"
#include "betafam/claims.hpp"

namespace betafam {

/* --- run configuration ------------------------------------------------------ *
 *
 * One declarative file drives every subcommand; command-line flags override
 * single fields but cannot express anything the file cannot, so any published
 * artifact is reproducible from a checked-in config alone. */

struct RunConfig {
    int lo = 0, hi = 200;
    Window window{-6, 18};
    int k = 2;
    ClaimGrid grid;
    std::string out = "out";
    ChartStyle style;
    /* optional data files; empty means the built-in defaults */
    std::string rules_file;
    std::string admissibility_file;
    std::string ledger_file;

    void validate() const {
        if (lo > hi)
            throw ConfigError("empty stem range [" + std::to_string(lo) + "," +
                              std::to_string(hi) + "]");
        if (window.lo > window.hi) throw ConfigError("empty Δ-window " + window.str());
        if (floor_mod(k, 3) == 0)
            throw ConfigError("k = " + std::to_string(k) +
                              " is divisible by 3: ψ^k − 1 has no equaliser kernel at the "
                              "prime 3, pick k coprime to 3 (the default is 2)");
        if (grid.param_hi < 0 || grid.stem_cap < 0)
            throw ConfigError("claim grid bounds must be nonnegative");
    }

    std::vector<DifferentialRule> rules() const {
        return rules_file.empty() ? default_tmf_rules() : load_rules(rules_file);
    }
    std::vector<AdmissibilityClause> admissibility() const {
        return admissibility_file.empty() ? default_admissibility()
                                          : parse_admissibility(read_file(admissibility_file));
    }
    VanishingLedger ledger() const {
        return ledger_file.empty() ? default_vanishing_ledger()
                                   : parse_vanishing_ledger(read_file(ledger_file));
    }

    /* the TMF run is one margin wider than the equaliser run it feeds */
    TmfConfig tmf() const {
        TmfConfig c;
        c.lo = lo;
        c.hi = hi;
        c.window = window;
        c.rules = rules();
        c.margin = j2().margin + 1;
        return c;
    }
    J2Config j2() const {
        J2Config c;
        c.lo = lo;
        c.hi = hi;
        c.window = window;
        c.k = k;
        c.rules = rules();
        return c;
    }
};

inline RunConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig c;
    try {
        if (j.contains("range")) {
            c.lo = j["range"].at(0).get<int>();
            c.hi = j["range"].at(1).get<int>();
        }
        if (j.contains("window")) {
            c.window.lo = j["window"].at(0).get<int>();
            c.window.hi = j["window"].at(1).get<int>();
        }
        c.k = j.value("k", c.k);
        if (j.contains("grid")) {
            c.grid.param_hi = j["grid"].value("param_hi", c.grid.param_hi);
            c.grid.stem_cap = j["grid"].value("stem_cap", c.grid.stem_cap);
        }
        c.out = j.value("out", c.out);
        if (j.contains("chart")) {
            const nlohmann::json& ch = j["chart"];
            c.style.cell = ch.value("cell", c.style.cell);
            c.style.pad = ch.value("pad", c.style.pad);
            c.style.max_f = ch.value("max_f", c.style.max_f);
            c.style.blue = ch.value("blue", c.style.blue);
            c.style.red = ch.value("red", c.style.red);
            c.style.yellow = ch.value("yellow", c.style.yellow);
        }
        c.rules_file = j.value("rules_file", c.rules_file);
        c.admissibility_file = j.value("admissibility_file", c.admissibility_file);
        c.ledger_file = j.value("ledger_file", c.ledger_file);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config field has the wrong shape: ") + e.what());
    }
    c.validate();
    return c;
}

inline RunConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

} // namespace betafam
