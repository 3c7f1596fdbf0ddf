#include "trimode/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "trimode/fock.hpp"
#include "trimode/network.hpp"

namespace trimode {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw ScenarioError("scenario: " + what); }

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            fail(where + ": unknown key \"" + item.key() + "\"");
        }
    }
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) {
        fail(where + ": expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        fail(where + ": expected a finite number");
    }
    return x;
}

double opt_number(const json& obj, const char* key, double fallback, const std::string& where) {
    if (!obj.contains(key)) {
        return fallback;
    }
    return as_number(obj.at(key), where + "." + key);
}

double req_number(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) {
        fail(where + ": missing \"" + key + "\"");
    }
    return as_number(obj.at(key), where + "." + key);
}

int req_integer(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj.at(key).is_number_integer()) {
        fail(where + ": \"" + key + "\" must be an integer");
    }
    return obj.at(key).get<int>();
}

CouplingConfig parse_config(const json& j) {
    if (!j.is_object()) {
        fail("config: expected an object");
    }
    check_keys(j, "config",
               {"lambda", "kappa", "omega_a", "omega_b", "omega_c", "nu", "mu", "phi", "theta"});
    CouplingConfig c;
    c.lambda = req_number(j, "lambda", "config");
    c.kappa = req_number(j, "kappa", "config");
    c.omega_a = opt_number(j, "omega_a", 0.0, "config");
    c.omega_b = opt_number(j, "omega_b", 0.0, "config");
    c.omega_c = opt_number(j, "omega_c", 0.0, "config");
    c.nu = opt_number(j, "nu", 0.0, "config");
    c.mu = opt_number(j, "mu", 0.0, "config");
    c.phi = opt_number(j, "phi", 0.0, "config");
    c.theta = opt_number(j, "theta", 0.0, "config");
    c.validate();
    return c;
}

ModeSpec parse_mode(const json& j, const std::string& where) {
    if (!j.is_object() || j.size() != 1) {
        fail(where + ": expected exactly one of \"coherent\" or \"cat\"");
    }
    if (j.contains("coherent")) {
        const json& c = j.at("coherent");
        check_keys(c, where + ".coherent", {"re", "im"});
        return Complex(opt_number(c, "re", 0.0, where), opt_number(c, "im", 0.0, where));
    }
    if (j.contains("cat")) {
        const json& c = j.at("cat");
        check_keys(c, where + ".cat", {"alpha_re", "alpha_im", "Phi"});
        return CatSpec{Complex(opt_number(c, "alpha_re", 0.0, where),
                               opt_number(c, "alpha_im", 0.0, where)),
                       opt_number(c, "Phi", 0.0, where)};
    }
    fail(where + ": expected exactly one of \"coherent\" or \"cat\"");
}

Complex parse_point_component(const json& j, const std::string& where) {
    if (!j.is_object()) {
        fail(where + ": expected {re, im}");
    }
    check_keys(j, where, {"re", "im"});
    return Complex(opt_number(j, "re", 0.0, where), opt_number(j, "im", 0.0, where));
}

double total_mean_photons(const BranchState& state) {
    double total = 0.0;
    for (double n : mean_photons(state)) {
        total += n;
    }
    return total;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail("cannot open " + path.string() + " for writing");
    }
    out << text;
    if (!out) {
        fail("failed writing " + path.string());
    }
}

std::filesystem::path prepare_out_dir(const RunOptions& opts) {
    std::filesystem::path dir(opts.out_dir.empty() ? "." : opts.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        fail("cannot create output directory " + dir.string());
    }
    return dir;
}

json report_to_json(const EntanglementReport& report, const std::set<std::string>& measures) {
    json entry = json::object();
    if (measures.count("entropies")) {
        entry["entropies_bits"] = report.entropies_bits;
    }
    if (measures.count("purities")) {
        entry["purities"] = report.purities;
    }
    if (measures.count("classify")) {
        entry["class_label"] = report.class_label.str();
        json overlaps = json::object();
        for (const auto& [mode, value] : report.branch_overlaps) {
            overlaps[mode] = complex_to_json(value);
        }
        entry["branch_overlaps"] = overlaps;
    }
    return entry;
}

std::string sweep_header() {
    return "t,entropy_A_BC,entropy_B_AC,entropy_C_AB,purity_A,purity_B,purity_C,"
           "class_label,overlap_A_abs,oracle_fidelity";
}

std::string sweep_row(double t, const EntanglementReport& report,
                      const std::set<std::string>& measures, std::optional<double> fidelity) {
    const bool entropies = measures.count("entropies") != 0;
    const bool purities = measures.count("purities") != 0;
    const bool classify = measures.count("classify") != 0;
    std::vector<std::string> cells;
    cells.push_back(format_double(t));
    for (const char* cut : {"A|BC", "B|AC", "C|AB"}) {
        cells.push_back(entropies ? format_double(report.entropies_bits.at(cut)) : "");
    }
    for (const char* mode : {"A", "B", "C"}) {
        cells.push_back(purities ? format_double(report.purities.at(mode)) : "");
    }
    cells.push_back(classify ? report.class_label.str() : "");
    if (classify && report.branch_overlaps.count("A")) {
        cells.push_back(format_double(std::abs(report.branch_overlaps.at("A"))));
    } else {
        cells.push_back("");
    }
    cells.push_back(fidelity ? format_double(*fidelity) : "");
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) {
            row += ',';
        }
        row += cells[i];
    }
    return row;
}

struct OracleContext {
    FockCutoff cutoff;
    FockStateVector psi0;
    double deficiency_floor = 0.0;  // input expansion deficiency
};

OracleContext make_oracle_context(const BranchState& input, const Scenario& s,
                                  const RunOptions& opts) {
    int n_max = 0;
    if (opts.cutoff_override) {
        n_max = *opts.cutoff_override;
    } else if (s.oracle_cutoff) {
        n_max = *s.oracle_cutoff;
    } else {
        n_max = default_cutoff(total_mean_photons(input));
    }
    FockCutoff cutoff{n_max, std::nullopt};
    cutoff.validate();
    FockStateVector psi0 = branch_to_fock(input, cutoff);
    return {cutoff, std::move(psi0), 0.0};
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json complex_to_json(const Complex& z) {
    return json{{"re", z.real()}, {"im", z.imag()}};
}

Complex complex_from_json(const nlohmann::json& j) {
    return Complex(as_number(j.at("re"), "complex.re"), as_number(j.at("im"), "complex.im"));
}

nlohmann::json state_to_json(const BranchState& state) {
    json branches = json::array();
    for (const auto& branch : state.branches) {
        json amps = json::array();
        for (const auto& amp : branch.amps) {
            amps.push_back(complex_to_json(amp));
        }
        branches.push_back(json{{"coeff", complex_to_json(branch.coeff)}, {"amps", amps}});
    }
    return json{{"modes", state.modes},
                {"normalized", state.normalized},
                {"branches", branches}};
}

BranchState state_from_json(const nlohmann::json& j) {
    BranchState state;
    state.modes = j.at("modes").get<int>();
    state.normalized = j.at("normalized").get<bool>();
    for (const auto& branch_json : j.at("branches")) {
        Branch branch;
        branch.coeff = complex_from_json(branch_json.at("coeff"));
        for (const auto& amp : branch_json.at("amps")) {
            branch.amps.push_back(complex_from_json(amp));
        }
        if (static_cast<int>(branch.amps.size()) != state.modes) {
            fail("state: branch amplitude count does not match mode count");
        }
        state.branches.push_back(std::move(branch));
    }
    if (state.branches.empty()) {
        fail("state: no branches");
    }
    return state;
}

Scenario parse_scenario(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        fail("expected a JSON object");
    }
    check_keys(doc, "scenario",
               {"config", "initial", "schedule", "measures", "oracle", "network",
                "charfun_points"});
    Scenario s;
    s.raw = doc;

    if (doc.contains("network")) {
        const json& n = doc.at("network");
        if (!n.is_object()) {
            fail("network: expected an object");
        }
        check_keys(n, "network", {"varphi1", "varphi2", "varphi3"});
        s.network = std::array<double, 3>{req_number(n, "varphi1", "network"),
                                          req_number(n, "varphi2", "network"),
                                          req_number(n, "varphi3", "network")};
    }

    if (!doc.contains("initial") || !doc.at("initial").is_object()) {
        fail("initial: required object with ports \"a\", \"b\", \"c\"");
    }
    const json& initial = doc.at("initial");
    check_keys(initial, "initial", {"a", "b", "c"});
    static const std::array<const char*, 3> ports{"a", "b", "c"};
    for (std::size_t m = 0; m < 3; ++m) {
        if (!initial.contains(ports[m])) {
            fail(std::string("initial: missing port \"") + ports[m] + "\"");
        }
        s.initial[m] = parse_mode(initial.at(ports[m]), std::string("initial.") + ports[m]);
    }

    // Network scenarios are instantaneous: config and schedule are ignored.
    if (!s.network) {
        if (!doc.contains("config")) {
            fail("config: required");
        }
        s.config = parse_config(doc.at("config"));

        if (!doc.contains("schedule") || !doc.at("schedule").is_object()) {
            fail("schedule: required object");
        }
        const json& sched = doc.at("schedule");
        check_keys(sched, "schedule", {"times", "sweep", "special"});
        const int variants = static_cast<int>(sched.contains("times")) +
                             static_cast<int>(sched.contains("sweep")) +
                             static_cast<int>(sched.contains("special"));
        if (variants != 1) {
            fail("schedule: exactly one of \"times\", \"sweep\", \"special\"");
        }
        if (sched.contains("times")) {
            const json& times = sched.at("times");
            if (!times.is_array() || times.empty()) {
                fail("schedule.times: expected a non-empty array");
            }
            std::vector<double> list;
            for (const auto& t : times) {
                list.push_back(as_number(t, "schedule.times[]"));
            }
            s.times = std::move(list);
        } else if (sched.contains("sweep")) {
            const json& sweep = sched.at("sweep");
            check_keys(sweep, "schedule.sweep", {"t_start", "t_end", "steps"});
            SweepSchedule sw;
            sw.t_start = req_number(sweep, "t_start", "schedule.sweep");
            sw.t_end = req_number(sweep, "t_end", "schedule.sweep");
            sw.steps = req_integer(sweep, "steps", "schedule.sweep");
            if (sw.steps < 1) {
                fail("schedule.sweep: steps must be >= 1");
            }
            if (sw.t_end < sw.t_start) {
                fail("schedule.sweep: t_end must be >= t_start");
            }
            s.sweep = sw;
        } else {
            const json& special = sched.at("special");
            check_keys(special, "schedule.special", {"n_max"});
            SpecialSchedule sp;
            sp.n_max = req_integer(special, "n_max", "schedule.special");
            if (sp.n_max < 1) {
                fail("schedule.special: n_max must be >= 1");
            }
            s.special = sp;
        }
    }

    if (doc.contains("measures")) {
        const json& measures = doc.at("measures");
        if (!measures.is_array()) {
            fail("measures: expected an array of names");
        }
        for (const auto& m : measures) {
            if (!m.is_string() || !kKnownMeasures.count(m.get<std::string>())) {
                fail("measures: unknown measure " + m.dump());
            }
            s.measures.insert(m.get<std::string>());
        }
    } else {
        s.measures = {"entropies", "purities", "classify"};
    }

    if (doc.contains("oracle")) {
        const json& oracle = doc.at("oracle");
        if (!oracle.is_object()) {
            fail("oracle: expected an object");
        }
        check_keys(oracle, "oracle", {"enabled", "cutoff_override"});
        if (!oracle.contains("enabled") || !oracle.at("enabled").is_boolean()) {
            fail("oracle: \"enabled\" must be a boolean");
        }
        s.oracle_enabled = oracle.at("enabled").get<bool>();
        if (oracle.contains("cutoff_override") && !oracle.at("cutoff_override").is_null()) {
            if (!oracle.at("cutoff_override").is_number_integer()) {
                fail("oracle: \"cutoff_override\" must be an integer or null");
            }
            s.oracle_cutoff = oracle.at("cutoff_override").get<int>();
        }
    }

    if (doc.contains("charfun_points")) {
        const json& points = doc.at("charfun_points");
        if (!points.is_array()) {
            fail("charfun_points: expected an array");
        }
        for (const auto& p : points) {
            if (!p.is_object() || !p.contains("eta") || !p.contains("zeta") ||
                !p.contains("xi")) {
                fail("charfun_points[]: expected objects with \"eta\", \"zeta\", \"xi\"");
            }
            check_keys(p, "charfun_points[]", {"eta", "zeta", "xi"});
            PhasePoint point;
            point.eta = parse_point_component(p.at("eta"), "charfun_points[].eta");
            point.zeta = parse_point_component(p.at("zeta"), "charfun_points[].zeta");
            point.xi = parse_point_component(p.at("xi"), "charfun_points[].xi");
            point.validate();
            s.charfun_points.push_back(point);
        }
    }
    if (s.measures.count("charfun_points") && s.charfun_points.empty()) {
        fail("charfun_points measure requires a non-empty \"charfun_points\" list");
    }

    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail("cannot open " + path);
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(path + ": " + e.what());
    }
    return parse_scenario(doc);
}

std::vector<std::pair<double, std::string>> resolve_times(const Scenario& s) {
    std::vector<std::pair<double, std::string>> out;
    if (s.times) {
        for (double t : *s.times) {
            out.emplace_back(t, "");
        }
    } else if (s.sweep) {
        const auto& sw = *s.sweep;
        if (sw.steps == 1) {
            out.emplace_back(sw.t_start, "");
        } else {
            const double dt = (sw.t_end - sw.t_start) / (sw.steps - 1);
            for (int k = 0; k < sw.steps; ++k) {
                out.emplace_back(sw.t_start + k * dt, "");
            }
        }
    } else if (s.special) {
        const auto st = special_times(s.config, s.special->n_max);
        for (double t : st.conversion) {
            out.emplace_back(t, "conversion");
        }
        for (double t : st.recurrence) {
            out.emplace_back(t, "recurrence");
        }
        std::sort(out.begin(), out.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    } else {
        fail("no schedule to run");
    }
    return out;
}

RunResult run_scenario(const Scenario& s, const RunOptions& opts) {
    if (s.network) {
        return run_network(s, opts);
    }
    const double classify_tol = opts.classify_tol.value_or(1e-8);
    const double fidelity_tol = opts.fidelity_tol.value_or(1e-6);
    const bool oracle_on = s.oracle_enabled || s.measures.count("oracle_check") != 0;

    const auto schedule = resolve_times(s);
    const auto input =
        make_state(std::vector<ModeSpec>(s.initial.begin(), s.initial.end()));

    RunResult result;
    try {
        std::optional<OracleContext> oracle;
        if (oracle_on) {
            oracle = make_oracle_context(input, s, opts);
            oracle->deficiency_floor = oracle->psi0.deficiency();
        }

        json results = json::array();
        std::string csv = sweep_header() + "\n";
        for (const auto& [t, kind] : schedule) {
            const auto m = compute_coefficients(s.config, t);
            const auto evolved = evolve(input, m);
            const auto report = analyze(evolved, classify_tol);

            json entry = report_to_json(report, s.measures);
            entry["t"] = t;
            if (!kind.empty()) {
                entry["kind"] = kind;
            }
            entry["state"] = state_to_json(evolved);

            std::optional<double> fidelity;
            if (oracle) {
                const auto psi_t = evolve_fock(oracle->psi0, s.config, t);
                const auto expansion = branch_to_fock(evolved, oracle->cutoff);
                fidelity = fock_fidelity(expansion, psi_t);
                const double deficiency =
                    std::max(oracle->deficiency_floor, expansion.deficiency());
                entry["oracle"] = json{{"cutoff", oracle->cutoff.n_max},
                                       {"fidelity", *fidelity},
                                       {"deficiency", deficiency}};
                if ((1.0 - *fidelity > fidelity_tol || deficiency > 1e-8) &&
                    result.exit_code == 0) {
                    result.exit_code = 3;
                    result.message = "oracle certification failed at t=" + format_double(t) +
                                     " (cutoff " + std::to_string(oracle->cutoff.n_max) +
                                     "): fidelity=" + format_double(*fidelity) +
                                     ", deficiency=" + format_double(deficiency);
                }
            }
            if (s.measures.count("charfun_points")) {
                json samples = json::array();
                for (const auto& p : s.charfun_points) {
                    samples.push_back(json{{"eta", complex_to_json(p.eta)},
                                           {"zeta", complex_to_json(p.zeta)},
                                           {"xi", complex_to_json(p.xi)},
                                           {"chi_normal", complex_to_json(chi_normal(evolved, p))},
                                           {"chi_symmetric",
                                            complex_to_json(chi_symmetric(evolved, p))}});
                }
                entry["charfun"] = samples;
            }
            results.push_back(std::move(entry));
            csv += sweep_row(t, report, s.measures, fidelity) + "\n";
        }

        const auto dir = prepare_out_dir(opts);
        json report_doc{{"scenario", s.raw}, {"results", results}};
        write_text_file(dir / "report.json", report_doc.dump(2) + "\n");
        write_text_file(dir / "sweep.csv", csv);
        if (result.exit_code == 0) {
            result.message = "wrote " + (dir / "report.json").string() + " and " +
                             (dir / "sweep.csv").string();
        }
    } catch (const TruncationBreach& e) {
        return {3, e.what()};
    }
    return result;
}

RunResult run_oracle_check(const Scenario& s, const RunOptions& opts) {
    if (s.network) {
        fail("oracle-check does not apply to network scenarios");
    }
    if (!s.oracle_enabled && !s.measures.count("oracle_check")) {
        fail("oracle-check requires oracle.enabled or the oracle_check measure");
    }
    const double fidelity_tol = opts.fidelity_tol.value_or(1e-6);
    const auto schedule = resolve_times(s);
    const auto input =
        make_state(std::vector<ModeSpec>(s.initial.begin(), s.initial.end()));

    RunResult result;
    try {
        auto oracle = make_oracle_context(input, s, opts);
        oracle.deficiency_floor = oracle.psi0.deficiency();

        json results = json::array();
        for (const auto& [t, kind] : schedule) {
            const auto evolved = evolve(input, compute_coefficients(s.config, t));
            const auto psi_t = evolve_fock(oracle.psi0, s.config, t);
            const auto expansion = branch_to_fock(evolved, oracle.cutoff);
            const double fidelity = fock_fidelity(expansion, psi_t);
            const double deficiency = std::max(oracle.deficiency_floor, expansion.deficiency());
            const bool pass = 1.0 - fidelity <= fidelity_tol && deficiency <= 1e-8;
            results.push_back(json{{"t", t},
                                   {"cutoff", oracle.cutoff.n_max},
                                   {"fidelity", fidelity},
                                   {"deficiency", deficiency},
                                   {"pass", pass}});
            if (!pass && result.exit_code == 0) {
                result.exit_code = 3;
                result.message = "oracle certification failed at t=" + format_double(t) +
                                 " (cutoff " + std::to_string(oracle.cutoff.n_max) +
                                 "): fidelity=" + format_double(fidelity) +
                                 ", deficiency=" + format_double(deficiency);
            }
        }

        const auto dir = prepare_out_dir(opts);
        json doc{{"scenario", s.raw},
                 {"certified", result.exit_code == 0},
                 {"results", results}};
        write_text_file(dir / "oracle_report.json", doc.dump(2) + "\n");
        if (result.exit_code == 0) {
            result.message = "certified; wrote " + (dir / "oracle_report.json").string();
        }
    } catch (const TruncationBreach& e) {
        return {3, e.what()};
    }
    return result;
}

RunResult run_network(const Scenario& s, const RunOptions& opts) {
    if (!s.network) {
        fail("beamsplitter requires a \"network\" block");
    }
    const auto input = make_network_input(s.initial[0], s.initial[1], s.initial[2]);
    const std::array<BeamSplitterSpec, 3> specs{BeamSplitterSpec{(*s.network)[0]},
                                                BeamSplitterSpec{(*s.network)[1]},
                                                BeamSplitterSpec{(*s.network)[2]}};
    const auto output = apply_network(input, specs);
    const auto report = conversion_report(output);

    json overlaps = json::object();
    for (const auto& [port, value] : report.branch_overlaps) {
        overlaps[port] = complex_to_json(value);
    }
    json doc{{"scenario", s.raw},
             {"input_state", state_to_json(input)},
             {"output_state", state_to_json(output)},
             {"purities", report.purities},
             {"entropies_bits", report.entropies_bits},
             {"branch_overlaps", overlaps}};

    std::string csv = "varphi1,varphi2,varphi3,purity_a_o,purity_a_o_prime,entropy_b_o_c_o\n";
    csv += format_double((*s.network)[0]) + "," + format_double((*s.network)[1]) + "," +
           format_double((*s.network)[2]) + "," + format_double(report.purities.at("a_o")) +
           "," + format_double(report.purities.at("a_o_prime")) + ",";
    if (report.entropies_bits.count("b_o|c_o")) {
        csv += format_double(report.entropies_bits.at("b_o|c_o"));
    }
    csv += "\n";

    const auto dir = prepare_out_dir(opts);
    write_text_file(dir / "network_report.json", doc.dump(2) + "\n");
    write_text_file(dir / "network.csv", csv);
    return {0, "wrote " + (dir / "network_report.json").string() + " and " +
                   (dir / "network.csv").string()};
}

}  // namespace trimode
