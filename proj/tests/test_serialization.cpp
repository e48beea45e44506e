#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nub/serialization.hpp"
#include "nub/unbiased.hpp"

using namespace nub;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("nub_test_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE_BEGIN("serialization");

TEST_CASE("round trip preserves the matrices") {
    TempDir tmp;
    const BasisSet original = random_basis_set(3, 4, 2024);
    const fs::path file = tmp.path / "set.json";
    save_basis_set(file, original);
    const BasisSet loaded = load_basis_set(file);
    REQUIRE(loaded.n() == 3);
    REQUIRE(loaded.dim() == 4);
    for (int y = 0; y < 3; ++y) {
        CHECK((loaded.basis(y).matrix() - original.basis(y).matrix()).cwiseAbs().maxCoeff() <=
              1e-15);
    }
    CHECK(std::abs(nub_residual(loaded) - nub_residual(original)) <= 1e-12);
}

TEST_CASE("column-major semantics: bases[y][j][k] is component k of vector j") {
    // hand-built document with a distinguishable entry
    nlohmann::json doc;
    doc["d"] = 2;
    doc["n"] = 1;
    // vector 0 = e_1, vector 1 = e_0 (a column swap of the identity)
    doc["bases"] = {{{{0.0, 0.0}, {1.0, 0.0}}, {{1.0, 0.0}, {0.0, 0.0}}}};
    const BasisSet set = basis_set_from_json(doc);
    CHECK(set.basis(0).matrix()(1, 0) == Complex(1.0, 0.0));
    CHECK(set.basis(0).matrix()(0, 1) == Complex(1.0, 0.0));
    CHECK(set.basis(0).matrix()(0, 0) == Complex(0.0, 0.0));
}

TEST_CASE("malformed documents fail with diagnostics") {
    TempDir tmp;

    SUBCASE("truncated file") {
        const fs::path file = tmp.path / "truncated.json";
        std::ofstream(file) << "{\"d\": 2, \"n\": 3, \"bases\": [[";
        CHECK_THROWS_AS(load_basis_set(file), ParseError);
    }

    SUBCASE("missing field") {
        CHECK_THROWS_WITH_AS(basis_set_from_json(nlohmann::json{{"d", 2}, {"n", 1}}),
                             doctest::Contains("bases"), ParseError);
    }

    SUBCASE("wrong counts") {
        nlohmann::json doc = {{"d", 2}, {"n", 2}, {"bases", nlohmann::json::array()}};
        CHECK_THROWS_AS(basis_set_from_json(doc), ParseError);
    }

    SUBCASE("entry not a pair") {
        nlohmann::json doc;
        doc["d"] = 1;
        doc["n"] = 1;
        doc["bases"] = {{{{1.0}}}};
        CHECK_THROWS_WITH_AS(basis_set_from_json(doc), doctest::Contains("[re, im]"),
                             ParseError);
    }

    SUBCASE("valid JSON failing orthonormality raises ValidationError") {
        nlohmann::json doc;
        doc["d"] = 2;
        doc["n"] = 1;
        doc["bases"] = {{{{1.0, 0.0}, {0.0, 0.0}}, {{1.0, 0.0}, {0.0, 0.0}}}};
        CHECK_THROWS_AS(basis_set_from_json(doc), ValidationError);
    }

    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_basis_set(tmp.path / "absent.json"), ParseError);
    }
}

TEST_CASE("a scan file may hold one document or a list") {
    TempDir tmp;
    const fs::path single = tmp.path / "single.json";
    save_basis_set(single, qubit_mub_triplet());
    auto one = load_basis_set_list(single);
    REQUIRE(one.size() == 1);
    CHECK(one[0].first == "single.json");

    const fs::path list = tmp.path / "list.json";
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    arr.push_back(basis_set_to_json(qubit_mub_triplet()));
    arr.push_back(basis_set_to_json(random_basis_set(3, 2, 7)));
    std::ofstream(list) << arr.dump();
    auto many = load_basis_set_list(list);
    REQUIRE(many.size() == 2);
    CHECK(many[0].first == "list.json[0]");
    CHECK(many[1].first == "list.json[1]");
    CHECK(many[0].second.n() == 3);

    std::ofstream(tmp.path / "empty.json") << "[]";
    CHECK_THROWS_AS(load_basis_set_list(tmp.path / "empty.json"), ParseError);
}

TEST_CASE("asp report serialization carries exact rationals") {
    AspReport report = make_asp_report(3, 3);
    report.provenance = "unit-test";
    const nlohmann::ordered_json doc = asp_report_to_json(report);
    CHECK(doc["classical"]["rational"] == "17/27");
    CHECK(doc["classical"]["decimal"].get<double>() == doctest::Approx(17.0 / 27.0));
    CHECK(doc["quantum"].is_null());
    CHECK(doc["nub_bound"].get<double>() == doctest::Approx(0.6989).epsilon(2e-4));
    CHECK(doc["provenance"] == "unit-test");
}

TEST_CASE("saved documents are byte-stable") {
    TempDir tmp;
    const BasisSet set = random_basis_set(2, 3, 31337);
    const fs::path a = tmp.path / "a.json";
    const fs::path b = tmp.path / "b.json";
    save_basis_set(a, set);
    save_basis_set(b, set);
    std::ifstream fa(a), fb(b);
    const std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    const std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(sa.find("\"d\"") != std::string::npos);
}

TEST_SUITE_END();
