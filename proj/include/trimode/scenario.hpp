// scenario.hpp: JSON scenario loading and the batch pipelines behind the CLI.
//
// A scenario bundles a coupling config, a three-port initial state, a time
// schedule and a choice of measures.  Running one writes report.json plus
// sweep.csv; network scenarios are instantaneous and write network_report.json
// plus a one-row network.csv instead.  All floats in CSV files are printed
// with 17 significant digits so repeated runs are byte-identical.

#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "trimode/branch_state.hpp"
#include "trimode/charfun.hpp"
#include "trimode/entanglement.hpp"
#include "trimode/propagator.hpp"

namespace trimode {

struct SweepSchedule {
    double t_start = 0.0;
    double t_end = 0.0;
    int steps = 1;  // number of rows, endpoints included when steps > 1
};

struct SpecialSchedule {
    int n_max = 1;
};

struct Scenario {
    CouplingConfig config;
    std::array<ModeSpec, 3> initial;  // ports a, b, c

    // Exactly one schedule variant is set (none for network scenarios).
    std::optional<std::vector<double>> times;
    std::optional<SweepSchedule> sweep;
    std::optional<SpecialSchedule> special;

    std::set<std::string> measures;  // subset of kKnownMeasures
    bool oracle_enabled = false;
    std::optional<int> oracle_cutoff;
    std::optional<std::array<double, 3>> network;  // varphi1..3
    std::vector<PhasePoint> charfun_points;

    nlohmann::json raw;  // original document, embedded in reports
};

inline const std::set<std::string> kKnownMeasures{
    "entropies", "purities", "classify", "charfun_points", "oracle_check"};

// Parse and validate; throws ScenarioError naming the failing invariant.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

// Scheduled times in ascending order; the tag is "conversion" or "recurrence"
// for special schedules and empty otherwise.
std::vector<std::pair<double, std::string>> resolve_times(const Scenario& s);

struct RunOptions {
    std::string out_dir = ".";
    std::optional<int> cutoff_override;     // wins over the scenario's value
    std::optional<double> classify_tol;     // threshold on 1 - purity
    std::optional<double> fidelity_tol;     // max allowed 1 - oracle fidelity
    bool quiet = true;
};

struct RunResult {
    int exit_code = 0;  // 0 ok, 3 oracle certification failure
    std::string message;
};

// Evolves the initial state over the schedule and writes report.json and
// sweep.csv.  Dispatches to run_network when the scenario has a network block.
RunResult run_scenario(const Scenario& s, const RunOptions& opts = {});

// Oracle-only pass: writes oracle_report.json with per-time fidelity and
// truncation deficiency; exit 3 names the first offending time and cutoff.
RunResult run_oracle_check(const Scenario& s, const RunOptions& opts = {});

// Beam-splitter pipeline: writes network_report.json and network.csv.
RunResult run_network(const Scenario& s, const RunOptions& opts = {});

// Complex and state (de)serialization used by the report writers.
nlohmann::json complex_to_json(const Complex& z);
Complex complex_from_json(const nlohmann::json& j);
nlohmann::json state_to_json(const BranchState& state);
BranchState state_from_json(const nlohmann::json& j);

// "%.17g" rendering shared by every CSV writer.
std::string format_double(double v);

}  // namespace trimode
