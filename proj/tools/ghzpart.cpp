// ghzpart: command-line front end for the partitioned-GHZ sensing toolkit.
//
// Subcommands: qfi, optimize, sweep, dynamics, sequential, sss.
// Exit codes: 0 success, 2 validation failure, 3 verification mismatch.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "ghzpart/ghzpart.hpp"
#include "json.hpp"

namespace gp = ghzpart;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitVerifyMismatch = 3;

struct ValidationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// run configuration

struct RunConfig {
    std::string scenario = "state-prep";
    double F = 1.0, k = 1.0, p = 1.0, q = 1.0;
    double eta = 0.0, gamma = 0.0, omega = 0.0;
    double n = 0.0;
    double m = 1.0;
    std::vector<std::int64_t> sizes;
    double T = 1.0;
    double t_th = 0.0;  // 0 means unset
    double t = 0.0;
    double xi2 = 0.0;  // 0 means unset
    std::string out_path;
    std::string format = "text";
    bool verify = false;
    bool raw_units = false;
    std::string config_path;
    // sweep
    std::string variable;
    std::string range;  // start:stop:points
    std::string scale = "linear";
    std::string outputs = "qfi";
    // optimize / sequential / sss extras
    std::string what = "m";
    std::int64_t force_m = 0;
    std::string m_list;
};

gp::Scenario parse_scenario(const std::string& s) {
    if (s == "state-prep") return gp::Scenario::StatePrep;
    if (s == "loss1") return gp::Scenario::Loss1;
    if (s == "loss2") return gp::Scenario::Loss2;
    if (s == "dephasing") return gp::Scenario::Dephasing;
    if (s == "combined") return gp::Scenario::Combined;
    throw ValidationFailure("scenario: unknown value '" + s + "'");
}

gp::NoiseParams noise_params(const RunConfig& cfg) {
    try {
        gp::RateParams(cfg.eta, cfg.gamma, cfg.omega);  // range check only
        if (cfg.T <= 0.0) throw std::domain_error("T: must be > 0");
        if (cfg.t < 0.0) throw std::domain_error("t: must be >= 0");
        return gp::NoiseParams(cfg.F, cfg.k, cfg.p, cfg.q);
    } catch (const std::domain_error& e) {
        throw ValidationFailure(e.what());
    }
}

// ---------------------------------------------------------------------------
// tabular output: every command renders rows of named cells

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
    std::vector<std::string> meta;  // parameter echo, '#'-prefixed in CSV
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string cell_to_string(const Cell& c) {
    if (std::holds_alternative<double>(c)) return fmt_double(std::get<double>(c));
    if (std::holds_alternative<std::int64_t>(c))
        return std::to_string(std::get<std::int64_t>(c));
    return std::get<std::string>(c);
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

void write_csv(std::ostream& os, const Table& t) {
    for (const auto& m : t.meta) os << "# " << m << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << csv_quote(t.columns[i]);
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << csv_quote(cell_to_string(row[i]));
        os << "\n";
    }
}

void write_json(std::ostream& os, const Table& t) {
    json meta = json::object();
    for (const auto& m : t.meta) {
        const auto pos = m.find(": ");
        if (pos != std::string::npos)
            meta[m.substr(0, pos)] = m.substr(pos + 2);
        else
            meta["note"] = m;
    }
    json records = json::array();
    for (const auto& row : t.rows) {
        json rec = json::object();
        for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
            const Cell& c = row[i];
            if (std::holds_alternative<double>(c))
                rec[t.columns[i]] = std::get<double>(c);
            else if (std::holds_alternative<std::int64_t>(c))
                rec[t.columns[i]] = std::get<std::int64_t>(c);
            else
                rec[t.columns[i]] = std::get<std::string>(c);
        }
        records.push_back(std::move(rec));
    }
    json doc;
    doc["meta"] = std::move(meta);
    doc["records"] = std::move(records);
    os << doc.dump(2) << "\n";
}

void write_text(std::ostream& os, const Table& t) {
    for (const auto& m : t.meta) os << "# " << m << "\n";
    if (t.rows.size() == 1) {
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            os << t.columns[i] << " = " << cell_to_string(t.rows[0][i]) << "\n";
        return;
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? " " : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? " " : "") << cell_to_string(row[i]);
        os << "\n";
    }
}

void emit(const RunConfig& cfg, const Table& t) {
    std::ostringstream body;
    if (cfg.format == "csv")
        write_csv(body, t);
    else if (cfg.format == "json")
        write_json(body, t);
    else
        write_text(body, t);
    if (cfg.out_path.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream f(cfg.out_path, std::ios::binary);
        if (!f) throw ValidationFailure("output: cannot open '" + cfg.out_path + "'");
        f << body.str();
    }
}

std::vector<std::string> echo_params(const RunConfig& cfg, const std::string& command) {
    std::vector<std::string> meta;
    meta.push_back(std::string("ghzpart ") + gp::kVersion);
    meta.push_back("command: " + command);
    std::ostringstream ps;
    ps << "params: scenario=" << cfg.scenario << " F=" << fmt_double(cfg.F)
       << " k=" << fmt_double(cfg.k) << " p=" << fmt_double(cfg.p)
       << " q=" << fmt_double(cfg.q) << " eta=" << fmt_double(cfg.eta)
       << " gamma=" << fmt_double(cfg.gamma) << " omega=" << fmt_double(cfg.omega)
       << " n=" << fmt_double(cfg.n) << " m=" << fmt_double(cfg.m)
       << " T=" << fmt_double(cfg.T);
    if (cfg.t_th > 0.0) ps << " t_th=" << fmt_double(cfg.t_th);
    if (!cfg.sizes.empty()) {
        ps << " sizes=";
        for (std::size_t i = 0; i < cfg.sizes.size(); ++i)
            ps << (i ? "," : "") << cfg.sizes[i];
    }
    meta.push_back(ps.str());
    return meta;
}

// ---------------------------------------------------------------------------
// --config merging: JSON values fill options the command line left unset

void apply_config(CLI::App* sub, RunConfig& cfg) {
    if (cfg.config_path.empty()) return;
    std::ifstream f(cfg.config_path);
    if (!f) throw ValidationFailure("config: cannot open '" + cfg.config_path + "'");
    json doc;
    try {
        doc = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ValidationFailure(std::string("config: ") + e.what());
    }
    const auto unset = [&](const std::string& flag) {
        const CLI::Option* o = sub->get_option_no_throw(flag);
        return o != nullptr && o->count() == 0;
    };
    for (const auto& [key, value] : doc.items()) {
        static const std::map<std::string, std::string> kFlagOf{
            {"F", "-F"},         {"k", "-k"},       {"p", "-p"},
            {"q", "-q"},         {"eta", "--eta"},  {"gamma", "--gamma"},
            {"omega", "--omega"}, {"n", "-n"},      {"m", "-m"},
            {"T", "-T"},         {"t_th", "--t-th"}, {"t", "-t"},
            {"xi2", "--xi2"},    {"scenario", "--scenario"}, {"sizes", "--sizes"},
            {"format", "--format"}};
        const auto it = kFlagOf.find(key);
        if (it == kFlagOf.end())
            throw ValidationFailure("config: unknown key '" + key + "'");
        if (!unset(it->second)) continue;  // the explicit flag wins
        if (key == "F") cfg.F = value.get<double>();
        else if (key == "k") cfg.k = value.get<double>();
        else if (key == "p") cfg.p = value.get<double>();
        else if (key == "q") cfg.q = value.get<double>();
        else if (key == "eta") cfg.eta = value.get<double>();
        else if (key == "gamma") cfg.gamma = value.get<double>();
        else if (key == "omega") cfg.omega = value.get<double>();
        else if (key == "n") cfg.n = value.get<double>();
        else if (key == "m") cfg.m = value.get<double>();
        else if (key == "T") cfg.T = value.get<double>();
        else if (key == "t_th") cfg.t_th = value.get<double>();
        else if (key == "t") cfg.t = value.get<double>();
        else if (key == "xi2") cfg.xi2 = value.get<double>();
        else if (key == "scenario") cfg.scenario = value.get<std::string>();
        else if (key == "sizes") cfg.sizes = value.get<std::vector<std::int64_t>>();
        else if (key == "format") cfg.format = value.get<std::string>();
    }
}

void add_common_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("-F", cfg.F, "initialization fidelity");
    sub->add_option("-k", cfg.k, "entangling gate fidelity");
    sub->add_option("-p", cfg.p, "per-sensor survival probability");
    sub->add_option("-q", cfg.q, "per-sensor no-phase-flip probability");
    sub->add_option("--eta", cfg.eta, "loss rate");
    sub->add_option("--gamma", cfg.gamma, "dephasing rate");
    sub->add_option("--omega", cfg.omega, "precession frequency");
    sub->add_option("-n", cfg.n, "total sensor count");
    sub->add_option("-m", cfg.m, "partition count");
    sub->add_option("--sizes", cfg.sizes, "explicit sub-ensemble sizes")->delimiter(',');
    sub->add_option("-T", cfg.T, "total time budget");
    sub->add_option("--t-th", cfg.t_th, "per-cycle evolution time cap");
    sub->add_option("-t", cfg.t, "evolution time");
    sub->add_option("--xi2", cfg.xi2, "squeezing parameter override");
    sub->add_option("-o,--output", cfg.out_path, "output path (default stdout)");
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    sub->add_option("--config", cfg.config_path, "JSON config merged under explicit flags");
    sub->add_option("--scenario", cfg.scenario, "noise scenario")
        ->check(CLI::IsMember({"state-prep", "loss1", "loss2", "dephasing", "combined"}));
    sub->add_flag("--raw-units", cfg.raw_units, "emit raw times instead of rate-scaled");
}

void require_n(const RunConfig& cfg) {
    if (cfg.n < 1.0 && cfg.sizes.empty())
        throw ValidationFailure("n: must be >= 1");
}

// ---------------------------------------------------------------------------
// qfi

double oracle_qfi(gp::Scenario sc, const gp::NoiseParams& pr, int n) {
    gp::GhzSpectrum spec = gp::build_depolarized_ghz(pr.F, pr.k, n);
    double extra_log = 0.0;
    switch (sc) {
        case gp::Scenario::StatePrep: break;
        case gp::Scenario::Loss1: spec = gp::apply_loss_channel(spec, pr.p); break;
        case gp::Scenario::Loss2: extra_log = n * std::log(pr.p); break;
        case gp::Scenario::Dephasing: spec = gp::apply_dephasing_channel(spec, pr.q); break;
        case gp::Scenario::Combined:
            spec = gp::apply_dephasing_channel(spec, pr.q);
            extra_log = n * std::log(pr.p);
            break;
    }
    return gp::qfi_ghz_diagonal(spec).value * std::exp(extra_log);
}

int cmd_qfi(RunConfig& cfg) {
    require_n(cfg);
    const gp::Scenario sc = parse_scenario(cfg.scenario);
    const gp::NoiseParams pr = noise_params(cfg);
    gp::QfiValue v;
    if (!cfg.sizes.empty())
        v = gp::unequal_partition_qfi(sc, pr, cfg.sizes);
    else
        v = gp::qfi_partitioned_equal(sc, pr, cfg.n, cfg.m);

    Table t;
    t.meta = echo_params(cfg, "qfi");
    t.columns = {"scenario", "qfi", "log_qfi"};
    std::vector<Cell> row{std::string(gp::scenario_name(sc)), v.value, v.log_value};

    int rc = 0;
    if (cfg.verify) {
        std::vector<std::int64_t> sizes = cfg.sizes;
        if (sizes.empty()) {
            if (cfg.n != std::floor(cfg.n) || cfg.m != std::floor(cfg.m))
                throw ValidationFailure("verify: requires integer n and m");
            sizes = gp::Allocation::equal(static_cast<std::int64_t>(cfg.n),
                                          static_cast<std::int64_t>(cfg.m))
                        .sizes;
        }
        double oracle_total = 0.0;
        for (auto s : sizes) {
            if (s > 8) throw ValidationFailure("verify: requires sub-ensembles of <= 8 qubits");
            oracle_total += oracle_qfi(sc, pr, static_cast<int>(s));
        }
        const double rel = std::abs(oracle_total - v.value) /
                           std::max({std::abs(oracle_total), std::abs(v.value), 1e-300});
        t.columns.insert(t.columns.end(), {"oracle_qfi", "oracle_rel_dev"});
        row.emplace_back(oracle_total);
        row.emplace_back(rel);
        if (rel > 1e-9) rc = kExitVerifyMismatch;
    }
    t.rows.push_back(std::move(row));
    emit(cfg, t);
    return rc;
}

// ---------------------------------------------------------------------------
// optimize

int cmd_optimize(RunConfig& cfg) {
    const gp::Scenario sc = parse_scenario(cfg.scenario);
    const gp::NoiseParams pr = noise_params(cfg);
    Table t;
    t.meta = echo_params(cfg, "optimize");
    gp::OptimumReport rep;
    if (cfg.what == "m") {
        require_n(cfg);
        rep = gp::integer_optimum(sc, pr, cfg.n);
    } else if (cfg.what == "n") {
        double guess;
        gp::OptimumReport probe;
        try {
            guess = sc == gp::Scenario::Loss1
                        ? gp::opt_implicit_loss1(gp::OptVariable::N, pr, cfg.m)
                        : gp::opt_n_closed(sc, pr, cfg.m);
        } catch (const gp::UnboundedError&) {
            t.columns = {"what", "closed_form", "note"};
            t.rows.push_back({std::string("n"), std::string("unbounded"),
                              std::string("all error parameters are 1; QFI grows with n")});
            emit(cfg, t);
            return 0;
        }
        const auto lo = static_cast<std::int64_t>(std::max(1.0, std::floor(guess / 4.0)));
        const auto hi = static_cast<std::int64_t>(std::ceil(guess * 4.0)) + 1;
        rep = gp::integer_optimum_n(sc, pr, cfg.m, lo, hi);
    } else {
        throw ValidationFailure("what: must be 'n' or 'm'");
    }
    t.columns = {"what", "closed_form", "integer_optimum", "qfi_at_optimum",
                 "neighbor_below", "neighbor_above"};
    if (rep.unbounded) {
        t.columns = {"what", "closed_form", "integer_optimum", "qfi_at_optimum", "note"};
        t.rows.push_back({cfg.what, std::string("unbounded"), rep.integer_optimum,
                          rep.qfi_at_integer.value,
                          std::string("all error parameters are 1")});
    } else {
        t.rows.push_back({cfg.what, rep.closed_form, rep.integer_optimum,
                          rep.qfi_at_integer.value, rep.neighbor_below, rep.neighbor_above});
    }
    emit(cfg, t);
    return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct Grid {
    std::vector<double> points;
};

Grid parse_grid(const RunConfig& cfg) {
    double start = 0.0, stop = 0.0;
    int points = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(cfg.range);
    if (!(is >> start >> c1 >> stop >> c2 >> points) || c1 != ':' || c2 != ':')
        throw ValidationFailure("range: expected start:stop:points");
    if (points < 2) throw ValidationFailure("range: points must be >= 2");
    if (!(start < stop)) throw ValidationFailure("range: start must be < stop");
    Grid g;
    if (cfg.scale == "log") {
        if (start <= 0.0) throw ValidationFailure("range: log scale requires start > 0");
        const double ls = std::log(start), le = std::log(stop);
        for (int i = 0; i < points; ++i)
            g.points.push_back(std::exp(ls + (le - ls) * i / (points - 1)));
    } else if (cfg.scale == "linear") {
        for (int i = 0; i < points; ++i)
            g.points.push_back(start + (stop - start) * i / (points - 1));
    } else {
        throw ValidationFailure("scale: must be 'linear' or 'log'");
    }
    return g;
}

int cmd_sweep(RunConfig& cfg) {
    static const std::vector<std::string> kVariables{"n", "m", "k", "F",
                                                     "p", "q", "t", "phi"};
    if (std::find(kVariables.begin(), kVariables.end(), cfg.variable) == kVariables.end())
        throw ValidationFailure("variable: must be one of n,m,k,F,p,q,t,phi");
    const Grid grid = parse_grid(cfg);
    std::vector<std::string> outputs;
    {
        std::istringstream is(cfg.outputs);
        std::string item;
        while (std::getline(is, item, ',')) outputs.push_back(item);
    }
    if (outputs.empty()) throw ValidationFailure("outputs: none requested");
    const gp::Scenario sc = parse_scenario(cfg.scenario);

    const double rate = 2.0 * cfg.gamma + cfg.eta;
    double xi2 = cfg.xi2;
    const bool needs_xi2 =
        std::find(outputs.begin(), outputs.end(), "scaled_cross_time") != outputs.end();
    if (needs_xi2 && xi2 <= 0.0) {
        if (cfg.variable == "n" || cfg.n < 3)
            throw ValidationFailure("xi2: required for scaled_cross_time sweeps");
        xi2 = gp::minimize_xi_s(static_cast<std::int64_t>(cfg.n)).xi2;
    }

    Table t;
    t.meta = echo_params(cfg, "sweep");
    t.meta.push_back("variable: " + cfg.variable + " scale: " + cfg.scale);
    t.columns.push_back(cfg.variable == "t" && !cfg.raw_units ? "rate_t" : cfg.variable);
    for (const auto& o : outputs) t.columns.push_back(o);

    for (double x : grid.points) {
        RunConfig pt = cfg;
        if (cfg.variable == "n") pt.n = x;
        else if (cfg.variable == "m") pt.m = x;
        else if (cfg.variable == "k") pt.k = x;
        else if (cfg.variable == "F") pt.F = x;
        else if (cfg.variable == "p") pt.p = x;
        else if (cfg.variable == "q") pt.q = x;
        else if (cfg.variable == "t") pt.t = x;
        else pt.t = x;  // phi rides in t's slot for evaluation below

        std::vector<Cell> row;
        row.emplace_back(cfg.variable == "t" && !cfg.raw_units ? rate * x : x);
        const gp::NoiseParams pr = noise_params(pt);
        for (const auto& o : outputs) {
            if (o == "qfi" || o == "qcrb" || o == "log_qfi") {
                require_n(pt);
                const gp::QfiValue v = gp::qfi_partitioned_equal(sc, pr, pt.n, pt.m);
                row.emplace_back(o == "qfi" ? v.value
                                            : o == "qcrb" ? std::exp(-v.log_value)
                                                          : v.log_value);
            } else if (o == "ratio_exact" || o == "ratio_approx" || o == "ratio_high_loss") {
                const gp::LossRatio r =
                    gp::loss_detection_ratio(pt.F, pt.k, pt.p, pt.n, pt.m);
                row.emplace_back(o == "ratio_exact" ? r.exact
                                                    : o == "ratio_approx" ? r.approx
                                                                          : r.approx_high);
            } else if (o == "qfi_t" || o == "qfi_per_time") {
                gp::DynamicsScenario dyn{pr, gp::RateParams(pt.eta, pt.gamma),
                                         gp::Allocation::equal(
                                             static_cast<std::int64_t>(pt.n),
                                             static_cast<std::int64_t>(pt.m)),
                                         sc != gp::Scenario::Loss1};
                const double tt = pt.t;
                if (o == "qfi_t") {
                    const double v = gp::qfi_t(dyn, tt).value;
                    row.emplace_back(cfg.raw_units ? v : v * rate * rate);
                } else {
                    const double v = gp::qfi_per_time(dyn, tt);
                    row.emplace_back(cfg.raw_units ? v : v * rate);
                }
            } else if (o == "xi2") {
                row.emplace_back(
                    gp::xi_s_squared(static_cast<std::int64_t>(pt.n), pt.t));
            } else if (o == "scaled_cross_time") {
                row.emplace_back(gp::crossing_time(pr, pt.n, pt.m, pt.gamma, pt.eta, xi2));
            } else if (o == "m_star_int" || o == "m_star_closed" || o == "qfi_at_m_star") {
                const gp::OptimumReport rep = gp::integer_optimum(sc, pr, pt.n);
                if (o == "m_star_int")
                    row.emplace_back(rep.integer_optimum);
                else if (o == "m_star_closed")
                    row.emplace_back(rep.closed_form);
                else
                    row.emplace_back(rep.qfi_at_integer.value);
            } else if (o == "grad_m" || o == "grad_n") {
                const auto [dm, dn] = gp::gradient_field(pr, pt.n, pt.m, sc);
                row.emplace_back(o == "grad_m" ? dm : dn);
            } else if (o == "n_star_loss1" || o == "m_star_loss1") {
                row.emplace_back(o == "n_star_loss1"
                                     ? gp::opt_implicit_loss1(gp::OptVariable::N, pr, pt.m)
                                     : gp::opt_implicit_loss1(gp::OptVariable::M, pr, pt.n));
            } else if (o == "n_star_loss2" || o == "m_star_loss2") {
                row.emplace_back(o == "n_star_loss2"
                                     ? gp::opt_n_closed(gp::Scenario::Loss2, pr, pt.m)
                                     : gp::opt_m_closed(gp::Scenario::Loss2, pr, pt.n));
            } else {
                throw ValidationFailure("outputs: unknown quantity '" + o + "'");
            }
        }
        t.rows.push_back(std::move(row));
    }
    if (cfg.format == "text") cfg.format = "csv";  // sweeps are data products
    emit(cfg, t);
    return 0;
}

// ---------------------------------------------------------------------------
// dynamics

int cmd_dynamics(RunConfig& cfg) {
    require_n(cfg);
    const gp::Scenario sc = parse_scenario(cfg.scenario);
    const gp::NoiseParams pr = noise_params(cfg);
    if (sc == gp::Scenario::StatePrep)
        throw ValidationFailure("scenario: dynamics needs loss1, loss2, dephasing or combined");
    gp::DynamicsScenario dyn{pr, gp::RateParams(cfg.eta, cfg.gamma),
                             gp::Allocation::equal(static_cast<std::int64_t>(cfg.n),
                                                   static_cast<std::int64_t>(cfg.m)),
                             sc != gp::Scenario::Loss1};
    Table t;
    t.meta = echo_params(cfg, "dynamics");
    const double rate = 2.0 * cfg.gamma + cfg.eta;
    if (rate <= 0.0) {
        t.columns = {"note"};
        t.rows.push_back({std::string("unbounded: both rates are 0, QFI grows as t^2")});
        emit(cfg, t);
        return 0;
    }
    double closed = std::numeric_limits<double>::quiet_NaN();
    try {
        closed = gp::peak_time_closed(dyn);
    } catch (const std::domain_error&) {
    }
    const double numeric = gp::peak_time_numeric(dyn);
    const double peak = gp::qfi_t(dyn, numeric).value;
    const double tilde = cfg.m / (cfg.n * rate);
    const double slope = gp::short_time_slope(pr, cfg.n, cfg.m, cfg.gamma, cfg.eta);
    t.columns = {"peak_time_closed", "peak_time_numeric", "peak_qfi",
                 "per_time_optimum", "short_time_slope"};
    if (cfg.raw_units)
        t.rows.push_back({closed, numeric, peak, tilde, slope});
    else
        t.rows.push_back({closed * rate, numeric * rate, peak * rate * rate, tilde * rate,
                          slope});
    emit(cfg, t);
    return 0;
}

// ---------------------------------------------------------------------------
// sequential

int cmd_sequential(RunConfig& cfg) {
    require_n(cfg);
    const gp::NoiseParams pr = noise_params(cfg);
    const gp::SequentialBudget budget =
        cfg.t_th > 0.0 ? gp::SequentialBudget(cfg.T, cfg.t_th) : gp::SequentialBudget(cfg.T);
    Table t;
    t.meta = echo_params(cfg, "sequential");
    gp::SequentialPlan plan;
    try {
        plan = cfg.force_m > 0
                   ? gp::sequential_plan_fixed_m(pr, cfg.n, cfg.gamma, cfg.eta, budget,
                                                 cfg.force_m)
                   : gp::sequential_plan(pr, cfg.n, cfg.gamma, cfg.eta, budget);
    } catch (const gp::UnboundedError&) {
        t.columns = {"note"};
        t.rows.push_back({std::string("unbounded: both rates are 0")});
        emit(cfg, t);
        return 0;
    }
    t.columns = {"m", "t", "info", "cycles", "m_star_closed"};
    t.rows.push_back({plan.m, plan.t, plan.info, plan.cycles, plan.m_star_closed});
    emit(cfg, t);
    return 0;
}

// ---------------------------------------------------------------------------
// sss: squeezing minimum, and `sss compare` for the crossing-time verdicts

int cmd_sss(RunConfig& cfg, bool compare) {
    require_n(cfg);
    const auto n = static_cast<std::int64_t>(cfg.n);
    Table t;
    if (!compare) {
        const gp::SqueezingState st = gp::minimize_xi_s(n);
        t.meta = echo_params(cfg, "sss");
        t.columns = {"n", "phi_star", "xi2_min"};
        t.rows.push_back({st.n, st.phi, st.xi2});
        emit(cfg, t);
        return 0;
    }
    const gp::NoiseParams pr = noise_params(cfg);
    double xi2 = cfg.xi2;
    if (xi2 <= 0.0) xi2 = gp::minimize_xi_s(n).xi2;
    std::vector<std::int64_t> ms;
    {
        std::istringstream is(cfg.m_list.empty() ? std::string("1") : cfg.m_list);
        std::string item;
        while (std::getline(is, item, ',')) ms.push_back(std::stoll(item));
    }
    t.meta = echo_params(cfg, "sss compare");
    t.meta.push_back("xi2: " + fmt_double(xi2));
    t.columns = {"m", "scaled_cross_time", "ghz_advantage"};
    for (auto m : ms) {
        const double x = gp::crossing_time(pr, cfg.n, static_cast<double>(m), cfg.gamma,
                                           cfg.eta, xi2);
        t.rows.push_back({m, x, std::string(x >= 1.0 ? "yes" : "no")});
    }
    emit(cfg, t);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"partitioned-GHZ phase-estimation toolkit"};
    app.require_subcommand(1);
    RunConfig cfg;

    CLI::App* s_qfi = app.add_subcommand("qfi", "evaluate a static QFI");
    add_common_options(s_qfi, cfg);
    s_qfi->add_flag("--verify", cfg.verify, "cross-check against the exact oracle (n <= 8)");

    CLI::App* s_opt = app.add_subcommand("optimize", "closed-form and integer optima");
    add_common_options(s_opt, cfg);
    s_opt->add_option("--what", cfg.what, "optimize 'n' or 'm'")
        ->check(CLI::IsMember({"n", "m"}));

    CLI::App* s_sweep = app.add_subcommand("sweep", "grid sweep emitting CSV/JSON");
    add_common_options(s_sweep, cfg);
    s_sweep->add_option("--variable", cfg.variable, "swept variable")->required();
    s_sweep->add_option("--range", cfg.range, "start:stop:points")->required();
    s_sweep->add_option("--scale", cfg.scale, "linear|log");
    s_sweep->add_option("--outputs", cfg.outputs, "comma list of quantities");

    CLI::App* s_dyn = app.add_subcommand("dynamics", "peak times and short-time behavior");
    add_common_options(s_dyn, cfg);

    CLI::App* s_seq = app.add_subcommand("sequential", "plan the sequential scheme");
    add_common_options(s_seq, cfg);
    s_seq->add_option("--force-m", cfg.force_m, "impose the partition count");

    CLI::App* s_sss = app.add_subcommand("sss", "one-axis-twisting squeezing minimum");
    add_common_options(s_sss, cfg);
    CLI::App* s_cmp = s_sss->add_subcommand("compare", "crossing-time verdict per m");
    add_common_options(s_cmp, cfg);
    s_cmp->add_option("--m-list", cfg.m_list, "partition counts, comma separated");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitValidation : 0;
    }

    try {
        if (*s_qfi) {
            apply_config(s_qfi, cfg);
            return cmd_qfi(cfg);
        }
        if (*s_opt) {
            apply_config(s_opt, cfg);
            return cmd_optimize(cfg);
        }
        if (*s_sweep) {
            apply_config(s_sweep, cfg);
            return cmd_sweep(cfg);
        }
        if (*s_dyn) {
            apply_config(s_dyn, cfg);
            return cmd_dynamics(cfg);
        }
        if (*s_seq) {
            apply_config(s_seq, cfg);
            return cmd_sequential(cfg);
        }
        if (*s_sss) {
            const bool compare = s_cmp->parsed();
            apply_config(compare ? s_cmp : s_sss, cfg);
            return cmd_sss(cfg, compare);
        }
    } catch (const ValidationFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
