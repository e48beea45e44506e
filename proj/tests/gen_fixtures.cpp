// Writes the basis-set files used by the CLI interface tests.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "nub/basis.hpp"
#include "nub/serialization.hpp"

namespace fs = std::filesystem;
using namespace nub;

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: gen_fixtures <output-dir>\n";
        return 1;
    }
    const fs::path dir(argv[1]);
    fs::create_directories(dir);
    fs::create_directories(dir / "scan");

    save_basis_set(dir / "qubit_triplet.json", qubit_mub_triplet());

    const BasisSet wh = make_wh_mub_set(3);
    save_basis_set(dir / "d3_canonical.json",
                   BasisSet({wh.basis(0), wh.basis(1), wh.basis(2)}));

    save_basis_set(dir / "pair_d3.json", BasisSet({make_computational(3), make_fourier(3)}));
    save_basis_set(dir / "pair_d4.json", BasisSet({make_computational(4), make_fourier(4)}));

    std::ofstream(dir / "truncated.json") << "{\"d\": 2, \"n\": 3, \"bases\": [[";

    // orthonormality violation: duplicated column
    std::ofstream(dir / "not_orthonormal.json")
        << R"({"d": 2, "n": 1, "bases": [[[[1.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]]})";

    save_basis_set(dir / "scan" / "triplet.json", qubit_mub_triplet());
    save_basis_set(dir / "scan" / "random_a.json", random_basis_set(3, 2, 11));
    save_basis_set(dir / "scan" / "random_b.json", random_basis_set(3, 2, 12));

    std::cout << "fixtures written to " << dir.string() << "\n";
    return 0;
}
