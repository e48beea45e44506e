#include "nub/serialization.hpp"

#include <fstream>
#include <sstream>

namespace nub {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json basis_set_to_json(const BasisSet& s) {
    ordered_json doc;
    doc["d"] = s.dim();
    doc["n"] = s.n();
    ordered_json bases = ordered_json::array();
    for (const Basis& b : s.bases()) {
        ordered_json columns = ordered_json::array();
        for (int j = 0; j < s.dim(); ++j) {
            ordered_json column = ordered_json::array();
            for (int k = 0; k < s.dim(); ++k) {
                const Complex entry = b.matrix()(k, j);
                column.push_back({entry.real(), entry.imag()});
            }
            columns.push_back(std::move(column));
        }
        bases.push_back(std::move(columns));
    }
    doc["bases"] = std::move(bases);
    return doc;
}

namespace {

[[noreturn]] void fail(const std::string& context, const std::string& what) {
    throw ParseError(context.empty() ? what : context + ": " + what);
}

}  // namespace

BasisSet basis_set_from_json(const json& doc, double tol) {
    if (!doc.is_object()) fail("", "document root must be an object");
    for (const char* field : {"d", "n", "bases"}) {
        if (!doc.contains(field)) fail("", std::string("missing field '") + field + "'");
    }
    if (!doc["d"].is_number_integer() || !doc["n"].is_number_integer()) {
        fail("", "fields 'd' and 'n' must be integers");
    }
    const int d = doc["d"].get<int>();
    const int n = doc["n"].get<int>();
    if (d < 1 || n < 1) fail("", "fields 'd' and 'n' must be positive");
    const json& bases = doc["bases"];
    if (!bases.is_array() || static_cast<int>(bases.size()) != n) {
        fail("field 'bases'", "expected an array of " + std::to_string(n) + " matrices");
    }

    std::vector<Matrix> mats;
    mats.reserve(static_cast<std::size_t>(n));
    for (int y = 0; y < n; ++y) {
        const json& columns = bases[static_cast<std::size_t>(y)];
        std::ostringstream ctx;
        ctx << "bases[" << y << "]";
        if (!columns.is_array() || static_cast<int>(columns.size()) != d) {
            fail(ctx.str(), "expected " + std::to_string(d) + " column vectors");
        }
        Matrix m(d, d);
        for (int j = 0; j < d; ++j) {
            const json& column = columns[static_cast<std::size_t>(j)];
            if (!column.is_array() || static_cast<int>(column.size()) != d) {
                std::ostringstream cctx;
                cctx << ctx.str() << "[" << j << "]";
                fail(cctx.str(), "expected " + std::to_string(d) + " entries");
            }
            for (int k = 0; k < d; ++k) {
                const json& entry = column[static_cast<std::size_t>(k)];
                if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
                    !entry[1].is_number()) {
                    std::ostringstream ectx;
                    ectx << ctx.str() << "[" << j << "][" << k << "]";
                    fail(ectx.str(), "expected a [re, im] pair of numbers");
                }
                m(k, j) = Complex(entry[0].get<double>(), entry[1].get<double>());
            }
        }
        mats.push_back(std::move(m));
    }
    return BasisSet::from_matrices(mats, tol);
}

void save_basis_set(const std::filesystem::path& path, const BasisSet& s) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << basis_set_to_json(s).dump(2) << "\n";
}

namespace {

json parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open: " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(path.string(), e.what());
    }
}

}  // namespace

BasisSet load_basis_set(const std::filesystem::path& path, double tol) {
    const json doc = parse_file(path);
    try {
        return basis_set_from_json(doc, tol);
    } catch (const ParseError& e) {
        fail(path.string(), e.what());
    }
}

std::vector<std::pair<std::string, BasisSet>> load_basis_set_list(
    const std::filesystem::path& path, double tol) {
    const json doc = parse_file(path);
    const std::string name = path.filename().string();
    std::vector<std::pair<std::string, BasisSet>> sets;
    try {
        if (doc.is_array()) {
            for (std::size_t i = 0; i < doc.size(); ++i) {
                sets.emplace_back(name + "[" + std::to_string(i) + "]",
                                  basis_set_from_json(doc[i], tol));
            }
            if (sets.empty()) fail(name, "document list is empty");
        } else {
            sets.emplace_back(name, basis_set_from_json(doc, tol));
        }
    } catch (const ParseError& e) {
        fail(path.string(), e.what());
    }
    return sets;
}

ordered_json asp_report_to_json(const AspReport& report) {
    ordered_json doc;
    doc["n"] = report.n;
    doc["d"] = report.d;
    doc["classical"] = {{"rational", report.classical.str()},
                        {"decimal", report.classical.value()}};
    if (report.quantum) {
        doc["quantum"] = *report.quantum;
    } else {
        doc["quantum"] = nullptr;
    }
    doc["nub_bound"] = report.nub_bound;
    doc["d_below_n"] = report.d_below_n;
    doc["tol"] = report.tol;
    if (report.seed) {
        doc["seed"] = *report.seed;
    } else {
        doc["seed"] = nullptr;
    }
    doc["provenance"] = report.provenance;
    return doc;
}

ordered_json monte_carlo_to_json(const MonteCarloEstimate& estimate) {
    ordered_json doc;
    doc["mean"] = estimate.mean;
    doc["stderr"] = estimate.stderr_;
    doc["imag_mean"] = estimate.imag_mean;
    doc["imag_stderr"] = estimate.imag_stderr;
    doc["samples"] = estimate.samples;
    doc["target"] = estimate.target;
    doc["seed"] = estimate.seed;
    return doc;
}

}  // namespace nub
