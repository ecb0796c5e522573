// Writes a three-class, two-marker CSV shaped like a diagnostic biomarker study
// (222 AD, 122 CN, 539 LMCI rows). Values are synthetic; no real data is involved.
#include "ujel/csv_io.hpp"
#include "ujel/rng.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

namespace {

struct Row {
    std::string group;
    double ab;
    double ptau;
};

double standard_normal(ujel::RandomStream& rng) {
    const double u = rng.uniform();
    const double v = rng.uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_synthetic_biomarkers OUT.csv\n";
        return 2;
    }
    struct Spec {
        const char* label;
        std::size_t n;
        double ab_shift;
        double ptau_shift;
    };
    // Severity order CN < LMCI < AD on both markers; the first marker separates the classes more.
    const Spec specs[] = {{"AD", 222, 2.4, 0.8}, {"CN", 122, 0.0, 0.0}, {"LMCI", 539, 1.2, 0.4}};
    constexpr double rho = 0.5;

    ujel::RandomStream rng(20240917, 0);
    std::vector<Row> rows;
    for (const auto& s : specs) {
        for (std::size_t i = 0; i < s.n; ++i) {
            const double z1 = standard_normal(rng);
            const double z2 = rho * z1 + std::sqrt(1.0 - rho * rho) * standard_normal(rng);
            rows.push_back({s.label, std::round(1e4 * std::exp(0.25 * (z1 + s.ab_shift))) / 1e4,
                            std::round(1e3 * (20.0 + 6.0 * (z2 + s.ptau_shift))) / 1e3});
        }
    }
    // Interleave the classes, then move the first AD, CN and LMCI rows to the front so the
    // order of first appearance is AD, CN, LMCI.
    for (std::size_t i = rows.size() - 1; i > 0; --i) {
        std::swap(rows[i], rows[static_cast<std::size_t>(rng.below(i + 1))]);
    }
    for (std::size_t p = 0; p < 3; ++p) {
        for (std::size_t j = p; j < rows.size(); ++j) {
            if (rows[j].group == specs[p].label) {
                std::swap(rows[p], rows[j]);
                break;
            }
        }
    }

    std::ofstream out(argv[1]);
    out << "group,ab,ptau\n";
    for (const auto& r : rows) {
        out << r.group << ',' << ujel::format_double(r.ab) << ',' << ujel::format_double(r.ptau) << '\n';
    }
    return out ? 0 : 1;
}
