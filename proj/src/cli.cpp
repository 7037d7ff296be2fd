#include "spinchan/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

#include "spinchan/chain.hpp"
#include "spinchan/errors.hpp"
#include "spinchan/protocols.hpp"
#include "spinchan/rng.hpp"
#include "spinchan/simulator.hpp"
#include "spinchan/sweep.hpp"

namespace spinchan {
namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

int execute(const std::vector<std::string>& argv, const std::string& physical_out);

// ---------------------------------------------------------------------------

void push_flag(std::vector<std::string>& args, const std::string& name, const std::string& value) {
    args.push_back(name);
    args.push_back(value);
}

void emit_file(const Manifest& man, const std::string& header_row,
               const std::vector<std::string>& rows, const std::string& physical_out) {
    std::ostringstream body;
    man.write(body);
    body << header_row << "\n";
    for (const auto& r : rows) body << r << "\n";
    const std::string& target = physical_out.empty() ? man.out : physical_out;
    if (target == "-") {
        std::cout << body.str();
        return;
    }
    std::ofstream f(target, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + target + "'");
    f << body.str();
}

struct ChainFlags {
    std::string chain = "heisenberg";
    int n_spins = 0;  // 0 = unset, resolved per model
    double j = 0.25;
    double delta = 0.0;

    ChainSpec resolve(int default_heisenberg_n) {
        ChainSpec spec;
        if (chain == "xy-pair") {
            spec.model = ChainModel::XyzPair;
            if (n_spins == 0) n_spins = 2;
        } else if (chain == "heisenberg") {
            spec.model = ChainModel::HeisenbergOpen;
            if (n_spins == 0) n_spins = default_heisenberg_n;
        } else {
            throw CLI::ValidationError("--chain", "must be xy-pair or heisenberg");
        }
        spec.n_spins = n_spins;
        spec.j_coupling = j;
        spec.delta = delta;
        validate(spec);
        return spec;
    }

    void record(std::vector<std::string>& args) const {
        push_flag(args, "--chain", chain);
        push_flag(args, "--n", std::to_string(n_spins));
        push_flag(args, "--j", format_number(j));
        push_flag(args, "--delta", format_number(delta));
    }
};

void add_chain_flags(CLI::App* cmd, ChainFlags& f, const char* default_chain) {
    f.chain = default_chain;
    cmd->add_option("--chain", f.chain, "chain model: xy-pair or heisenberg");
    cmd->add_option("--n", f.n_spins, "number of spins");
    cmd->add_option("--j", f.j, "exchange coupling J (default 0.25)");
    cmd->add_option("--delta", f.delta, "zz coupling (xy-pair only)");
}

std::string missing_cell() { return ""; }

// ---------------------------------------------------------------------------
// amplitudes: |gamma_1N(t)|^2 and |gamma_NN(t)|^2 on a time grid

struct AmplitudesOpts {
    ChainFlags chain;
    std::string t_grid = "0:20:0.05";
    std::string out = "-";
    std::string timestamp;
};

void run_amplitudes(AmplitudesOpts& o, const std::string& physical_out) {
    const ChainSpec spec = o.chain.resolve(8);
    const auto grid = parse_grid(o.t_grid);
    const AmplitudeTable table = diagonalize(spec);

    Manifest man;
    man.command = "amplitudes";
    o.chain.record(man.args);
    push_flag(man.args, "--t", o.t_grid);
    push_flag(man.args, "--timestamp", o.timestamp);
    push_flag(man.args, "--out", o.out);
    man.timestamp = o.timestamp;
    man.out = o.out;

    std::vector<std::string> rows;
    rows.reserve(grid.size());
    const int n = table.size();
    for (const double t : grid) {
        rows.push_back(format_number(t) + "," + format_number(std::norm(table.amplitude(1, n, t))) +
                       "," + format_number(std::norm(table.amplitude(n, n, t))));
    }
    emit_file(man, "t,g1N_abs2,gNN_abs2", rows, physical_out);
}

// ---------------------------------------------------------------------------
// fig2: plain-scheme rates on the two-spin channel, with intermediate swaps,
// plus the two-spin encoding and the entanglement-assisted reference

struct Fig2Opts {
    double j = 0.25;
    double delta = 0.0;
    std::string tau_grid = "0.02:6.4:0.02";
    std::string n_swaps = "0,1,2";
    bool include_qe = true;
    bool include_two_spin = true;
    std::string out = "-";
    std::string timestamp;
};

void run_fig2(Fig2Opts& o, const std::string& physical_out) {
    ChainSpec spec{2, ChainModel::XyzPair, o.j, o.delta};
    validate(spec);
    const AmplitudeTable table = diagonalize(spec);
    const auto grid = parse_grid(o.tau_grid);
    std::vector<int> swap_counts;
    for (const auto& item : split(o.n_swaps, ',')) swap_counts.push_back(std::stoi(item));

    Manifest man;
    man.command = "fig2";
    push_flag(man.args, "--j", format_number(o.j));
    push_flag(man.args, "--delta", format_number(o.delta));
    push_flag(man.args, "--tau", o.tau_grid);
    push_flag(man.args, "--n-swaps", o.n_swaps);
    man.args.push_back(o.include_qe ? "--qe" : "--no-qe");
    man.args.push_back(o.include_two_spin ? "--two-spin" : "--no-two-spin");
    push_flag(man.args, "--timestamp", o.timestamp);
    push_flag(man.args, "--out", o.out);
    man.timestamp = o.timestamp;
    man.out = o.out;

    std::string header = "tau";
    for (const int n : swap_counts) header += ",plain_n" + std::to_string(n);
    if (o.include_two_spin) header += ",two_spin";
    if (o.include_qe) header += ",r_E";

    std::vector<std::string> rows;
    rows.reserve(grid.size());
    for (const double tau : grid) {
        std::string row = format_number(tau);
        for (const int n : swap_counts) row += "," + format_number(plain_rate(table, tau, n));
        if (o.include_two_spin)
            row += "," + format_number(multi_excitation_rate(table, tau, 1, 2).rate);
        if (o.include_qe) row += "," + format_number(entanglement_assisted_rate(table, tau));
        rows.push_back(row);
    }
    emit_file(man, header, rows, physical_out);
}

// ---------------------------------------------------------------------------
// fig3: multi-excitation encodings vs the standard encoding

struct Fig3Opts {
    double j = 0.25;
    double delta = 0.0;
    std::string tau_grid = "0.02:6.4:0.02";
    std::string encodings = "1:2,2:3,3:4";
    std::string out = "-";
    std::string timestamp;
};

void run_fig3(Fig3Opts& o, const std::string& physical_out) {
    ChainSpec spec{2, ChainModel::XyzPair, o.j, o.delta};
    validate(spec);
    const AmplitudeTable table = diagonalize(spec);
    const auto grid = parse_grid(o.tau_grid);

    std::vector<std::pair<int, int>> encodings;
    for (const auto& item : split(o.encodings, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 2)
            throw CLI::ValidationError("--encoding", "expects E:M pairs like 2:3");
        encodings.emplace_back(std::stoi(parts[0]), std::stoi(parts[1]));
    }

    Manifest man;
    man.command = "fig3";
    push_flag(man.args, "--j", format_number(o.j));
    push_flag(man.args, "--delta", format_number(o.delta));
    push_flag(man.args, "--tau", o.tau_grid);
    push_flag(man.args, "--encoding", o.encodings);
    push_flag(man.args, "--timestamp", o.timestamp);
    push_flag(man.args, "--out", o.out);
    man.timestamp = o.timestamp;
    man.out = o.out;

    std::string header = "tau,standard";
    for (const auto& [e, m] : encodings)
        header += ",enc_" + std::to_string(e) + "_" + std::to_string(m);

    std::vector<std::string> rows;
    rows.reserve(grid.size());
    for (const double tau : grid) {
        std::string row = format_number(tau) + "," + format_number(plain_rate(table, tau, 0));
        for (const auto& [e, m] : encodings)
            row += "," + format_number(multi_excitation_rate(table, tau, e, m).rate);
        rows.push_back(row);
    }
    emit_file(man, header, rows, physical_out);
}

// ---------------------------------------------------------------------------
// fig4: dual-rail rate vs tau; unconverged points become empty cells

struct Fig4Opts {
    ChainFlags chain;
    std::string tau_grid = "1:20:0.1";
    long k_max = 100000;
    std::string feedback = "classical";
    std::string out = "-";
    std::string timestamp;
};

Feedback parse_feedback(const std::string& name) {
    if (name == "classical") return Feedback::Classical;
    if (name == "quantum") return Feedback::Quantum;
    throw CLI::ValidationError("--feedback", "must be classical or quantum");
}

void run_fig4(Fig4Opts& o, const std::string& physical_out) {
    const ChainSpec spec = o.chain.resolve(8);
    const AmplitudeTable table = diagonalize(spec);
    const auto grid = parse_grid(o.tau_grid);
    const Feedback fb = parse_feedback(o.feedback);

    Manifest man;
    man.command = "fig4";
    o.chain.record(man.args);
    push_flag(man.args, "--tau", o.tau_grid);
    push_flag(man.args, "--kmax", std::to_string(o.k_max));
    push_flag(man.args, "--feedback", o.feedback);
    push_flag(man.args, "--timestamp", o.timestamp);
    push_flag(man.args, "--out", o.out);
    man.timestamp = o.timestamp;
    man.out = o.out;

    RateCurve curve;
    curve.chain = spec;
    curve.config.protocol = Protocol::DualRail;
    curve.config.k_max = o.k_max;
    curve.config.feedback = fb;
    std::vector<double> masses;
    int unconverged = 0;
    for (const double tau : grid) {
        const auto dist = dual_rail_success_distribution(table, tau, o.k_max);
        curve.tau_grid.push_back(tau);
        masses.push_back(dist.captured_mass);
        if (dist.captured_mass >= 0.999) {
            const double r = 1.0 / dist.expected_time();
            curve.rates.push_back(fb == Feedback::Quantum ? 0.5 * r : r);
        } else {
            curve.rates.push_back(std::numeric_limits<double>::quiet_NaN());
            ++unconverged;
        }
    }

    std::vector<std::string> rows;
    rows.reserve(grid.size());
    for (size_t i = 0; i < curve.tau_grid.size(); ++i) {
        const std::string rate_cell =
            std::isnan(curve.rates[i]) ? missing_cell() : format_number(curve.rates[i]);
        rows.push_back(format_number(curve.tau_grid[i]) + "," + rate_cell + "," +
                       format_number(masses[i]));
    }
    if (unconverged > 0)
        man.warnings.push_back(std::to_string(unconverged) +
                               " grid points below the 0.999 mass gate at kmax=" +
                               std::to_string(o.k_max) + "; emitted as empty cells");
    emit_file(man, "tau,rate,captured_mass", rows, physical_out);
}

// ---------------------------------------------------------------------------
// fig5: Monte Carlo instantaneous-rate traces

struct Fig5Opts {
    ChainFlags chain;
    double tau = 8.5;
    long k_max = 100000;
    std::string feedback = "classical,quantum";
    double duration = 1e6;
    std::uint64_t seed = 1;
    std::string out = "-";
    std::string timestamp;
};

void run_fig5(Fig5Opts& o, const std::string& physical_out) {
    const ChainSpec spec = o.chain.resolve(8);
    const AmplitudeTable table = diagonalize(spec);

    Manifest man;
    man.command = "fig5";
    o.chain.record(man.args);
    push_flag(man.args, "--tau", format_number(o.tau));
    push_flag(man.args, "--kmax", std::to_string(o.k_max));
    push_flag(man.args, "--feedback", o.feedback);
    push_flag(man.args, "--duration", format_number(o.duration));
    push_flag(man.args, "--seed", std::to_string(o.seed));
    push_flag(man.args, "--timestamp", o.timestamp);
    push_flag(man.args, "--out", o.out);
    man.seed = o.seed;
    man.timestamp = o.timestamp;
    man.out = o.out;

    std::vector<std::string> rows;
    for (const auto& mode_name : split(o.feedback, ',')) {
        const Feedback fb = parse_feedback(mode_name);
        const double analytic = dual_rail_rate(table, o.tau, o.k_max, fb);
        const McTrace trace = simulate_dual_rail(table, o.tau, o.k_max, fb, o.duration, o.seed);
        for (size_t i = 0; i < trace.event_times.size(); ++i) {
            const double t = trace.event_times[i];
            rows.push_back(mode_name + "," + format_number(t / o.tau) + "," +
                           format_number(trace.qubits_delivered[i] / t) + "," +
                           format_number(analytic));
        }
    }
    emit_file(man, "feedback,t_over_tau,rate_instantaneous,rate_analytic", rows, physical_out);
}

// ---------------------------------------------------------------------------
// fig6: tilted-measurement dual-rail rates, mean and standard error per epsilon

struct Fig6Opts {
    ChainFlags chain;
    std::string tau_grid = "1:40:0.5";
    std::string epsilons = "0,0.01,0.02,0.04";
    long k_max = 5000;
    int realizations = 8;
    std::uint64_t seed = 1;
    std::string out = "-";
    std::string timestamp;
};

std::string trim_number_label(double x) {
    std::string s = std::to_string(x);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

void run_fig6(Fig6Opts& o, const std::string& physical_out) {
    const ChainSpec spec = o.chain.resolve(8);
    const AmplitudeTable table = diagonalize(spec);
    const auto grid = parse_grid(o.tau_grid);
    const auto eps_list = parse_grid(o.epsilons);

    Manifest man;
    man.command = "fig6";
    o.chain.record(man.args);
    push_flag(man.args, "--tau", o.tau_grid);
    push_flag(man.args, "--epsilon", o.epsilons);
    push_flag(man.args, "--kmax", std::to_string(o.k_max));
    push_flag(man.args, "--realizations", std::to_string(o.realizations));
    push_flag(man.args, "--seed", std::to_string(o.seed));
    push_flag(man.args, "--timestamp", o.timestamp);
    push_flag(man.args, "--out", o.out);
    man.seed = o.seed;
    man.timestamp = o.timestamp;
    man.out = o.out;

    std::string header = "tau";
    for (const double eps : eps_list) {
        const std::string label = trim_number_label(eps);
        header += ",mean_eps" + label + ",stderr_eps" + label;
    }

    int failed_points = 0;
    long skipped_realizations = 0;
    std::vector<std::string> rows;
    rows.reserve(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        std::string row = format_number(grid[i]);
        for (size_t e = 0; e < eps_list.size(); ++e) {
            // independent stream per grid point so evaluation order is free
            const std::uint64_t point_seed =
                SplitRng(o.seed, i * eps_list.size() + e).next_u64();
            const int reps = eps_list[e] == 0.0 ? 1 : o.realizations;
            try {
                const TiltedRateEstimate est = dual_rail_tilted_rate(
                    table, grid[i], eps_list[e], o.k_max, reps, point_seed);
                skipped_realizations += est.unconverged;
                row += "," + format_number(est.mean) + "," + format_number(est.std_error);
            } catch (const UnconvergedSeriesError&) {
                row += "," + missing_cell() + "," + missing_cell();
                ++failed_points;
            }
        }
        rows.push_back(row);
    }
    if (failed_points > 0)
        man.warnings.push_back(std::to_string(failed_points) +
                               " (tau, epsilon) points had no converged realization");
    if (skipped_realizations > 0)
        man.warnings.push_back(std::to_string(skipped_realizations) +
                               " individual realizations failed the mass gate and were excluded");
    emit_file(man, header, rows, physical_out);
}

// ---------------------------------------------------------------------------
// plot: standalone gnuplot script with the data embedded as datablocks

struct PlotOpts {
    std::string data_file;
    std::string style = "lines";
    std::string out = "-";
    std::string timestamp;
};

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> cells;  // raw, "" = missing
};

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    CsvTable table;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split(line, ',');
        if (table.columns.empty()) {
            table.columns = std::move(fields);
            continue;
        }
        if (fields.size() != table.columns.size())
            throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(table.columns.size()) + " fields, found " +
                                     std::to_string(fields.size()));
        table.cells.push_back(std::move(fields));
    }
    if (table.columns.empty())
        throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                 ": no header row found");
    return table;
}

bool parses_as_number(const std::string& s, double* value = nullptr) {
    if (s.empty()) return false;
    try {
        size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) return false;
        if (value) *value = v;
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

void run_plot(PlotOpts& o, const std::string& physical_out) {
    const CsvTable table = read_csv(o.data_file);
    const size_t n_cols = table.columns.size();

    // numeric column: every non-empty cell parses as a number
    std::vector<bool> numeric(n_cols, true);
    for (const auto& row : table.cells)
        for (size_t c = 0; c < n_cols; ++c)
            if (!row[c].empty() && !parses_as_number(row[c])) numeric[c] = false;

    int x_col = -1;
    for (size_t c = 0; c < n_cols; ++c)
        if (numeric[c]) {
            x_col = static_cast<int>(c);
            break;
        }
    if (x_col < 0) throw std::runtime_error(o.data_file + ": no numeric column to plot against");

    // group rows by the tuple of tag-column values (e.g. the feedback mode)
    std::map<std::string, std::vector<const std::vector<std::string>*>> groups;
    for (const auto& row : table.cells) {
        std::string key;
        for (size_t c = 0; c < n_cols; ++c)
            if (!numeric[c]) key += (key.empty() ? "" : "/") + row[c];
        groups[key].push_back(&row);
    }

    Manifest man;
    man.command = "plot";
    man.args.push_back(o.data_file);
    push_flag(man.args, "--style", o.style);
    push_flag(man.args, "--timestamp", o.timestamp);
    push_flag(man.args, "--out", o.out);
    man.timestamp = o.timestamp;
    man.out = o.out;

    std::string with;
    if (o.style == "lines" || o.style == "loglog") with = "lines";
    else if (o.style == "steps") with = "steps";
    else if (o.style == "points") with = "points";
    else throw CLI::ValidationError("--style", "must be lines, steps, points or loglog");

    std::ostringstream script;
    script << "set key outside right\n";
    script << "set xlabel '" << table.columns[x_col] << "'\n";
    if (o.style == "loglog") script << "set logscale xy\n";

    std::vector<std::string> plot_items;
    int block_id = 0;
    for (const auto& [key, rows] : groups) {
        for (size_t c = 0; c < n_cols; ++c) {
            if (!numeric[c] || static_cast<int>(c) == x_col) continue;
            std::ostringstream block;
            int points = 0;
            for (const auto* row : rows) {
                double x = 0.0;
                double y = 0.0;
                if (!parses_as_number((*row)[x_col], &x)) continue;
                if (!parses_as_number((*row)[c], &y)) continue;  // missing cell
                block << format_number(x) << ' ' << format_number(y) << "\n";
                ++points;
            }
            if (points == 0) continue;
            const std::string name = "$series" + std::to_string(block_id++);
            script << name << " << EOD\n" << block.str() << "EOD\n";
            std::string title = table.columns[c];
            if (!key.empty()) title += " (" + key + ")";
            plot_items.push_back(name + " using 1:2 with " + with + " title '" + title + "'");
        }
    }
    if (plot_items.empty())
        throw std::runtime_error(o.data_file + ": no plottable series found");
    script << "plot ";
    for (size_t i = 0; i < plot_items.size(); ++i)
        script << (i ? ", \\\n     " : "") << plot_items[i];
    script << "\n";

    std::ostringstream body;
    man.write(body);
    body << script.str();
    const std::string& target = physical_out.empty() ? man.out : physical_out;
    if (target == "-") {
        std::cout << body.str();
    } else {
        std::ofstream f(target, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write '" + target + "'");
        f << body.str();
    }
}

// ---------------------------------------------------------------------------

int execute(const std::vector<std::string>& argv, const std::string& physical_out) {
    CLI::App app{"transfer amplitudes, capacities and transmission rates for "
                 "unmodulated spin-chain channels"};
    app.require_subcommand(1);
    const std::string default_timestamp = utc_timestamp_now();

    AmplitudesOpts amp;
    amp.timestamp = default_timestamp;
    auto* c_amp = app.add_subcommand("amplitudes", "site-to-site transfer probabilities");
    add_chain_flags(c_amp, amp.chain, "heisenberg");
    c_amp->add_option("--t", amp.t_grid, "time grid a:b:step");
    c_amp->add_option("--timestamp", amp.timestamp);
    c_amp->add_option("--out", amp.out, "output CSV path (- for stdout)");

    Fig2Opts f2;
    f2.timestamp = default_timestamp;
    auto* c_f2 = app.add_subcommand("fig2", "two-spin channel rates vs tau");
    c_f2->add_option("--j", f2.j);
    c_f2->add_option("--delta", f2.delta);
    c_f2->add_option("--tau", f2.tau_grid, "tau grid a:b:step");
    c_f2->add_option("--n-swaps", f2.n_swaps, "comma list of intermediate swap counts");
    c_f2->add_flag("--qe,!--no-qe", f2.include_qe, "include the entanglement-assisted curve");
    c_f2->add_flag("--two-spin,!--no-two-spin", f2.include_two_spin,
                   "include the two-spin encoding curve");
    c_f2->add_option("--timestamp", f2.timestamp);
    c_f2->add_option("--out", f2.out);

    Fig3Opts f3;
    f3.timestamp = default_timestamp;
    auto* c_f3 = app.add_subcommand("fig3", "multi-excitation encoding rates vs tau");
    c_f3->add_option("--j", f3.j);
    c_f3->add_option("--delta", f3.delta);
    c_f3->add_option("--tau", f3.tau_grid);
    c_f3->add_option("--encoding", f3.encodings, "comma list of E:M encodings");
    c_f3->add_option("--timestamp", f3.timestamp);
    c_f3->add_option("--out", f3.out);

    Fig4Opts f4;
    f4.timestamp = default_timestamp;
    auto* c_f4 = app.add_subcommand("fig4", "dual-rail rate vs tau");
    add_chain_flags(c_f4, f4.chain, "heisenberg");
    c_f4->add_option("--tau", f4.tau_grid);
    c_f4->add_option("--kmax", f4.k_max, "series truncation");
    c_f4->add_option("--feedback", f4.feedback, "classical or quantum");
    c_f4->add_option("--timestamp", f4.timestamp);
    c_f4->add_option("--out", f4.out);

    Fig5Opts f5;
    f5.timestamp = default_timestamp;
    auto* c_f5 = app.add_subcommand("fig5", "Monte Carlo instantaneous dual-rail rates");
    add_chain_flags(c_f5, f5.chain, "heisenberg");
    c_f5->add_option("--tau", f5.tau);
    c_f5->add_option("--kmax", f5.k_max);
    c_f5->add_option("--feedback", f5.feedback, "comma list: classical,quantum");
    c_f5->add_option("--duration", f5.duration, "simulated time span");
    c_f5->add_option("--seed", f5.seed);
    c_f5->add_option("--timestamp", f5.timestamp);
    c_f5->add_option("--out", f5.out);

    Fig6Opts f6;
    f6.timestamp = default_timestamp;
    auto* c_f6 = app.add_subcommand("fig6", "dual-rail rates under tilted measurement times");
    add_chain_flags(c_f6, f6.chain, "heisenberg");
    c_f6->add_option("--tau", f6.tau_grid);
    c_f6->add_option("--epsilon", f6.epsilons, "comma list of tilt half-widths");
    c_f6->add_option("--kmax", f6.k_max);
    c_f6->add_option("--realizations", f6.realizations);
    c_f6->add_option("--seed", f6.seed);
    c_f6->add_option("--timestamp", f6.timestamp);
    c_f6->add_option("--out", f6.out);

    PlotOpts plot;
    plot.timestamp = default_timestamp;
    auto* c_plot = app.add_subcommand("plot", "emit a gnuplot script for a data file");
    c_plot->add_option("file", plot.data_file, "CSV produced by this tool")->required();
    c_plot->add_option("--style", plot.style, "lines, steps, points or loglog");
    c_plot->add_option("--timestamp", plot.timestamp);
    c_plot->add_option("--out", plot.out, "script path (- for stdout)");

    std::string rerun_file;
    std::string rerun_out;
    auto* c_rerun = app.add_subcommand("rerun", "re-execute the manifest of a data file");
    c_rerun->add_option("file", rerun_file)->required();
    c_rerun->add_option("--out", rerun_out, "physical path for the regenerated file")->required();

    std::vector<const char*> cargv;
    cargv.push_back(kToolName);
    for (const auto& a : argv) cargv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (c_amp->parsed()) run_amplitudes(amp, physical_out);
        else if (c_f2->parsed()) run_fig2(f2, physical_out);
        else if (c_f3->parsed()) run_fig3(f3, physical_out);
        else if (c_f4->parsed()) run_fig4(f4, physical_out);
        else if (c_f5->parsed()) run_fig5(f5, physical_out);
        else if (c_f6->parsed()) run_fig6(f6, physical_out);
        else if (c_plot->parsed()) run_plot(plot, physical_out);
        else if (c_rerun->parsed()) {
            const Manifest recorded = Manifest::parse_file(rerun_file);
            std::vector<std::string> replay{recorded.command};
            replay.insert(replay.end(), recorded.args.begin(), recorded.args.end());
            return execute(replay, rerun_out);
        }
    } catch (const UnconvergedSeriesError& e) {
        std::cerr << kToolName << ": " << e.what() << "\n";
        return kExitNumerical;
    } catch (const NumericalError& e) {
        std::cerr << kToolName << ": " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << kToolName << ": " << e.what() << "\n";
        return kExitUsage;
    }
    return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) { return execute(args, ""); }

}  // namespace spinchan
