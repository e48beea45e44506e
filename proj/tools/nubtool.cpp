// Command-line front end: strategy evaluation, unbiasedness
// verification, bound tables, and the numerical searches, with
// deterministic seeded output in human or machine (JSON) form.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "nub/basis.hpp"
#include "nub/qrac.hpp"
#include "nub/search.hpp"
#include "nub/serialization.hpp"
#include "nub/unbiased.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitInput = 2;

std::string fmt(double v) {
    std::ostringstream oss;
    oss << std::setprecision(6) << v;
    return oss.str();
}

std::string fmt4(double v) {
    // half-away-from-zero at the 4th decimal (prints 17/32 as 0.5313)
    std::ostringstream oss;
    oss << std::fixed << std::setprecision(4) << std::round(v * 1e4) / 1e4;
    return oss.str();
}

void emit(const ordered_json& doc, bool machine, const std::string& human) {
    if (machine) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << human;
    }
}

std::string subset_to_string(const std::vector<int>& v) {
    std::string out = "{";
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += std::to_string(v[i]);
        if (i + 1 < v.size()) out += ",";
    }
    return out + "}";
}

int cmd_table(bool machine) {
    const auto rows = nub::asp_summary_table();
    ordered_json doc;
    doc["command"] = "table";
    doc["rows"] = ordered_json::array();
    std::ostringstream human;
    human << "  d  n  classical     MUB      nUB\n";
    bool any_flag = false;
    for (const auto& row : rows) {
        ordered_json jrow;
        jrow["d"] = row.d;
        jrow["n"] = row.n;
        jrow["classical"] = {{"rational", row.classical.str()},
                             {"decimal", row.classical.value()}};
        if (row.mub_asp) {
            jrow["mub"] = *row.mub_asp;
        } else {
            jrow["mub"] = nullptr;
        }
        jrow["mub_flagged"] = row.mub_flagged;
        jrow["nub_bound"] = row.nub_bound;
        doc["rows"].push_back(std::move(jrow));

        human << "  " << row.d << "  " << row.n << "  " << fmt4(row.classical.value());
        if (row.mub_asp) {
            human << "     " << fmt4(*row.mub_asp) << (row.mub_flagged ? "*" : " ");
        } else {
            human << "     ------" << (row.mub_flagged ? "*" : " ");
        }
        human << "  " << fmt4(row.nub_bound) << "\n";
        any_flag |= row.mub_flagged;
    }
    if (any_flag) {
        human << "  * MUB value for the built-in family; inequivalent families in this\n"
                 "    dimension can perform differently.\n";
    }
    emit(doc, machine, human.str());
    return kExitOk;
}

int cmd_verify(const std::string& input, int k, double tol, bool machine) {
    const nub::BasisSet set = nub::load_basis_set(input);
    const int use_k = (k == 0) ? set.n() : k;
    const nub::KubReport report = nub::kub_check(set, use_k, tol);
    ordered_json doc;
    doc["command"] = "verify";
    doc["input"] = input;
    doc["n"] = set.n();
    doc["d"] = set.dim();
    doc["k"] = use_k;
    doc["tol"] = tol;
    doc["target"] = report.target;
    doc["ok"] = report.ok;
    doc["worst"] = {{"deviation", report.worst.deviation},
                    {"subset", report.worst.subset},
                    {"assignment", report.worst.assignment}};
    if (use_k == 2) doc["worst_mub_style"] = report.worst_mub_style;
    ordered_json per_subset = ordered_json::array();
    for (std::size_t i = 0; i < report.subsets.size(); ++i) {
        per_subset.push_back(
            {{"subset", report.subsets[i]}, {"max_deviation", report.per_subset_max[i]}});
    }
    doc["per_subset"] = std::move(per_subset);

    std::ostringstream human;
    human << (report.ok ? "PASS" : "FAIL") << ": " << use_k << "UB check on " << input << " (n="
          << set.n() << ", d=" << set.dim() << ", target " << fmt(report.target) << ")\n"
          << "  worst deviation " << fmt(report.worst.deviation) << " at subset "
          << subset_to_string(report.worst.subset) << ", assignment "
          << subset_to_string(report.worst.assignment) << ", tol " << fmt(tol) << "\n";
    emit(doc, machine, human.str());
    return report.ok ? kExitOk : kExitVerdict;
}

int cmd_asp(const std::string& input, bool machine) {
    const nub::BasisSet set = nub::load_basis_set(input);
    nub::AspReport report =
        nub::make_asp_report(set.n(), set.dim(), nub::asp_quantum(set), input);
    ordered_json doc;
    doc["command"] = "asp";
    doc.update(nub::asp_report_to_json(report), false);

    std::ostringstream human;
    human << "n=" << report.n << " d=" << report.d << "\n"
          << "  classical  " << report.classical.str() << " = " << fmt(report.classical.value())
          << "\n"
          << "  quantum    " << fmt(*report.quantum) << "\n"
          << "  nUB bound  " << fmt(report.nub_bound)
          << (report.d_below_n ? "  (d < n: bound optimality not established)" : "") << "\n";
    emit(doc, machine, human.str());
    return kExitOk;
}

int cmd_bounds(int n, int d, bool machine) {
    const nub::Rational classical = nub::asp_classical(n, d);
    const nub::QracBound bound = nub::nub_bound_info(n, d);

    ordered_json doc;
    doc["command"] = "bounds";
    doc["n"] = n;
    doc["d"] = d;
    doc["classical"] = {{"rational", classical.str()}, {"decimal", classical.value()}};
    doc["nub_bound"] = bound.value;
    doc["d_below_n"] = bound.d_below_n;
    doc["poly_residual"] = bound.poly_residual;

    std::ostringstream human;
    human << "n=" << n << " d=" << d << "\n"
          << "  classical  " << classical.str() << " = " << fmt(classical.value()) << "\n"
          << "  nUB bound  " << fmt(bound.value) << "  (|P(root)| = " << fmt(bound.poly_residual)
          << ")\n";
    if (bound.d_below_n) human << "  note: d < n, bound optimality not established\n";

    // closed-form cross-checks where the polynomial is solvable
    if (n == 2) {
        const double closed = 0.5 * (1.0 + 1.0 / std::sqrt(static_cast<double>(d)));
        doc["closed_form"] = closed;
        doc["closed_form_residual"] = std::abs(bound.value - closed);
        human << "  closed form " << fmt(closed) << ", agreement "
              << fmt(std::abs(bound.value - closed)) << "\n";
    } else if (n == 3) {
        const double closed = nub::nub_bound3_closed_form(d);
        doc["closed_form"] = closed;
        doc["closed_form_residual"] = std::abs(bound.value - closed);
        human << "  closed form " << fmt(closed) << ", agreement "
              << fmt(std::abs(bound.value - closed)) << "\n";
    } else if (n == 4) {
        const double companion = nub::greatest_root_companion(4, d) / 4.0;
        doc["companion_root"] = companion;
        doc["companion_residual"] = std::abs(bound.value - companion);
        human << "  companion root " << fmt(companion) << ", agreement "
              << fmt(std::abs(bound.value - companion)) << "\n";
    }
    emit(doc, machine, human.str());
    return kExitOk;
}

int cmd_seesaw(int n, int d, std::uint64_t seed, int iters, double tol,
               const std::string& out, bool machine) {
    nub::SeesawOptions opts;
    if (iters > 0) opts.max_iters = iters;
    if (tol > 0) opts.tol = tol;
    const nub::SeesawResult result = nub::seesaw_optimize(n, d, seed, opts);
    const double bound = nub::nub_bound(n, d);

    ordered_json doc;
    doc["command"] = "seesaw";
    doc["n"] = n;
    doc["d"] = d;
    doc["seed"] = seed;
    doc["asp"] = result.asp;
    doc["iterations"] = result.iterations;
    doc["nub_bound"] = bound;
    doc["trajectory"] = result.trajectory;
    bool pairwise_mub = true;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            pairwise_mub &= nub::mub_check(result.bases.basis(a), result.bases.basis(b), 1e-2).ok;
        }
    }
    doc["final_bases_pairwise_mub_1e-2"] = pairwise_mub;
    if (!out.empty()) {
        nub::save_basis_set(out, result.bases);
        doc["saved"] = out;
    }

    std::ostringstream human;
    human << "see-saw n=" << n << " d=" << d << " seed=" << seed << "\n"
          << "  ASP        " << fmt(result.asp) << " after " << result.iterations
          << " iterations\n"
          << "  nUB bound  " << fmt(bound) << "\n"
          << "  final bases pairwise MUB at 1e-2: " << (pairwise_mub ? "yes" : "no") << "\n";
    if (!out.empty()) human << "  saved to " << out << "\n";
    emit(doc, machine, human.str());
    return kExitOk;
}

int cmd_search(int n, int d, std::uint64_t seed, int restarts, int iters,
               const std::string& out, bool machine) {
    const nub::SearchResult result = nub::nub_descent_search(n, d, seed, restarts,
                                                             iters > 0 ? iters : 400);
    ordered_json doc;
    doc["command"] = "search";
    doc["n"] = n;
    doc["d"] = d;
    doc["seed"] = seed;
    doc["restarts_requested"] = restarts;
    doc["restarts_run"] = result.restarts;
    doc["best_residual"] = result.residual;
    doc["restart_residuals"] = result.restart_residuals;
    if (!out.empty()) {
        nub::save_basis_set(out, result.best);
        doc["saved"] = out;
    }

    std::ostringstream human;
    human << "residual descent n=" << n << " d=" << d << " seed=" << seed << "\n"
          << "  best residual " << fmt(result.residual) << " over " << result.restarts
          << " restart(s)\n"
          << "  (a nonzero floor is evidence, not a nonexistence certificate)\n";
    if (!out.empty()) human << "  saved to " << out << "\n";
    emit(doc, machine, human.str());
    return kExitOk;
}

int cmd_haar_test(int n, int d, long samples, std::uint64_t seed, bool machine) {
    const nub::MonteCarloEstimate est = nub::haar_expectation_test(n, d, samples, seed);
    const double dev = std::abs(est.mean - est.target);
    const bool within = dev <= 3.0 * est.stderr_;
    ordered_json doc = nub::monte_carlo_to_json(est);
    doc["command"] = "haar-test";
    doc["n"] = n;
    doc["d"] = d;
    doc["within_3_stderr"] = within;

    std::ostringstream human;
    human << "haar expectation n=" << n << " d=" << d << " samples=" << samples << " seed="
          << seed << "\n"
          << "  mean   " << fmt(est.mean) << " +- " << fmt(est.stderr_) << " (target "
          << fmt(est.target) << ")\n"
          << "  imag   " << fmt(est.imag_mean) << " +- " << fmt(est.imag_stderr) << "\n"
          << "  verdict: " << (within ? "within" : "OUTSIDE") << " 3 standard errors\n";
    emit(doc, machine, human.str());
    return within ? kExitOk : kExitVerdict;
}

int cmd_uncertainty(const std::string& input, bool natural_log, bool machine) {
    const nub::BasisSet set = nub::load_basis_set(input);
    if (set.n() != 2) {
        throw nub::ParseError("uncertainty: expected exactly 2 bases, file has " +
                              std::to_string(set.n()));
    }
    const auto base = natural_log ? nub::LogBase::Natural : nub::LogBase::Two;
    const double bound = nub::maassen_uffink_bound(set.basis(0), set.basis(1), base);
    const nub::Matrix overlaps = nub::overlap_matrix(set.basis(0), set.basis(1));
    const double c = std::pow(overlaps.cwiseAbs().maxCoeff(), 2.0);

    ordered_json doc;
    doc["command"] = "uncertainty";
    doc["input"] = input;
    doc["d"] = set.dim();
    doc["c"] = c;
    doc["bound"] = bound;
    doc["log_base"] = natural_log ? "e" : "2";

    std::ostringstream human;
    human << "entropic uncertainty bound for " << input << " (d=" << set.dim() << ")\n"
          << "  c = max |<a_i|b_j>|^2 = " << fmt(c) << "\n"
          << "  H_a + H_b >= " << fmt(bound) << " " << (natural_log ? "nats" : "bits") << "\n";
    emit(doc, machine, human.str());
    return kExitOk;
}

int cmd_scan(const std::string& input, int k, bool machine) {
    std::vector<std::pair<std::string, nub::BasisSet>> sets;
    const fs::path path(input);
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.path().extension() == ".json") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            for (auto& [label, set] : nub::load_basis_set_list(file)) {
                sets.emplace_back(std::move(label), std::move(set));
            }
        }
        if (sets.empty()) throw nub::ParseError("scan: no .json files in " + input);
    } else {
        sets = nub::load_basis_set_list(path);
    }
    const nub::ScanReport report = nub::scan_candidates(sets, k);

    ordered_json doc;
    doc["command"] = "scan";
    doc["input"] = input;
    doc["n"] = report.n;
    doc["d"] = report.d;
    doc["k"] = report.k;
    doc["entries"] = ordered_json::array();
    for (const auto& entry : report.entries) {
        doc["entries"].push_back({{"label", entry.label},
                                  {"residual", entry.residual},
                                  {"kub_ok", entry.kub_ok},
                                  {"kub_deviation", entry.kub_deviation}});
    }
    doc["best"] = report.entries[static_cast<std::size_t>(report.best_index)].label;
    doc["min_residual"] = report.min_residual;

    std::ostringstream human;
    human << "scan of " << report.entries.size() << " set(s), n=" << report.n
          << " d=" << report.d << " k=" << report.k << "\n";
    for (const auto& entry : report.entries) {
        human << "  " << entry.label << ": residual " << fmt(entry.residual) << ", " << report.k
              << "UB " << (entry.kub_ok ? "pass" : "fail") << " (dev "
              << fmt(entry.kub_deviation) << ")\n";
    }
    human << "  best: " << report.entries[static_cast<std::size_t>(report.best_index)].label
          << " with residual " << fmt(report.min_residual) << "\n";
    emit(doc, machine, human.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("NUB_ENUM_BUDGET")) {
        try {
            nub::set_enumeration_limit(std::stod(env));
        } catch (const std::exception&) {
            std::cerr << "error: NUB_ENUM_BUDGET must be a positive number\n";
            return kExitInput;
        }
    }

    CLI::App app{"QRAC strategy evaluation and n-fold unbiasedness toolkit"};
    app.require_subcommand(1);
    std::string format = "human";
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"human", "machine"}))
        ->capture_default_str();

    std::string input;
    std::string out;
    int n = 0, d = 0, k = 0, iters = 0, restarts = 1;
    long samples = 10000;
    std::uint64_t seed = 0;
    double tol = 1e-10;
    bool natural_log = false;

    CLI::App* table = app.add_subcommand("table", "classical/MUB/nUB summary rows");

    CLI::App* verify = app.add_subcommand("verify", "check the kUB condition on a basis-set file");
    verify->add_option("--input", input, "basis-set file")->required();
    verify->add_option("--k", k, "subset size (default: n)");
    verify->add_option("--tol", tol, "uniformity tolerance")->capture_default_str();

    CLI::App* asp = app.add_subcommand("asp", "quantum ASP of a basis-set file");
    asp->add_option("--input", input, "basis-set file")->required();

    CLI::App* bounds = app.add_subcommand("bounds", "classical value and nUB bound for (n, d)");
    bounds->add_option("--n", n, "number of inputs")->required()->check(CLI::Range(2, 64));
    bounds->add_option("--d", d, "dimension")->required()->check(CLI::PositiveNumber);

    CLI::App* seesaw = app.add_subcommand("seesaw", "alternating ASP maximization");
    seesaw->add_option("--n", n)->required()->check(CLI::PositiveNumber);
    seesaw->add_option("--d", d)->required()->check(CLI::PositiveNumber);
    seesaw->add_option("--seed", seed)->required();
    seesaw->add_option("--iters", iters, "max iterations");
    seesaw->add_option("--tol", tol, "stop when the ASP gain falls below this");
    seesaw->add_option("--out", out, "write the final basis set here");

    CLI::App* search = app.add_subcommand("search", "nUB residual descent with restarts");
    search->add_option("--n", n)->required()->check(CLI::PositiveNumber);
    search->add_option("--d", d)->required()->check(CLI::PositiveNumber);
    search->add_option("--seed", seed)->required();
    search->add_option("--restarts", restarts)->required()->check(CLI::PositiveNumber);
    search->add_option("--iters", iters, "max descent iterations per restart");
    search->add_option("--out", out, "write the best basis set here");

    CLI::App* haar = app.add_subcommand("haar-test", "Monte Carlo cycle-sum expectation");
    haar->add_option("--n", n)->required()->check(CLI::PositiveNumber);
    haar->add_option("--d", d)->required()->check(CLI::PositiveNumber);
    haar->add_option("--samples", samples)->required()->check(CLI::Range(2L, 100000000L));
    haar->add_option("--seed", seed)->required();

    CLI::App* uncertainty =
        app.add_subcommand("uncertainty", "entropic uncertainty bound of a 2-basis file");
    uncertainty->add_option("--input", input, "basis-set file with exactly 2 bases")->required();
    uncertainty->add_flag("--natural-log", natural_log, "report nats instead of bits");

    CLI::App* scan = app.add_subcommand("scan", "batch residual/kUB verdicts over files");
    scan->add_option("--input", input, "basis-set file or directory of .json files")->required();
    scan->add_option("--k", k, "subset size")->required()->check(CLI::Range(2, 64));

    // let --format appear after the subcommand name as well
    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    const bool machine = format == "machine";
    try {
        if (table->parsed()) return cmd_table(machine);
        if (verify->parsed()) return cmd_verify(input, k, tol, machine);
        if (asp->parsed()) return cmd_asp(input, machine);
        if (bounds->parsed()) return cmd_bounds(n, d, machine);
        if (seesaw->parsed()) return cmd_seesaw(n, d, seed, iters, tol, out, machine);
        if (search->parsed()) return cmd_search(n, d, seed, restarts, iters, out, machine);
        if (haar->parsed()) return cmd_haar_test(n, d, samples, seed, machine);
        if (uncertainty->parsed()) return cmd_uncertainty(input, natural_log, machine);
        if (scan->parsed()) return cmd_scan(input, k, machine);
    } catch (const nub::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const nub::ValidationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const nub::BudgetExceeded& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
