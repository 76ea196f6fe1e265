#include "twinbounds/tables.hpp"

#include "twinbounds/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace twinbounds {

JointFrequencies JointFrequencies::from_joint(double p_e0_d0, double p_e0_d1, double p_e1_d0,
                                              double p_e1_d1) {
    for (double p : {p_e0_d0, p_e0_d1, p_e1_d0, p_e1_d1}) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw Error(ErrorKind::InvalidInput, "joint frequency outside [0,1]");
        }
    }
    const double sum = p_e0_d0 + p_e0_d1 + p_e1_d0 + p_e1_d1;
    if (std::abs(sum - 1.0) > 1e-12) {
        throw Error(ErrorKind::InvalidInput, "joint frequencies must sum to 1");
    }
    JointFrequencies f;
    f.p_e0_d0 = p_e0_d0;
    f.p_e0_d1 = p_e0_d1;
    f.p_e1_d0 = p_e1_d0;
    f.p_e1_d1 = p_e1_d1;
    f.p_e1 = p_e1_d0 + p_e1_d1;
    f.p_d1 = p_e0_d1 + p_e1_d1;
    return f;
}

JointFrequencies table_to_frequencies(const ContingencyTable& table) {
    const std::uint64_t n = table.total();
    if (n == 0) {
        throw Error(ErrorKind::ZeroTotal, "contingency table has zero total");
    }
    const std::array<std::pair<const char*, std::uint64_t>, 4> margins{{
        {"e=0", table.n_e0_d0 + table.n_e0_d1},
        {"e=1", table.n_e1_d0 + table.n_e1_d1},
        {"d=0", table.n_e0_d0 + table.n_e1_d0},
        {"d=1", table.n_e0_d1 + table.n_e1_d1},
    }};
    for (const auto& [name, count] : margins) {
        if (count == 0) {
            throw Error(ErrorKind::MarginDegenerate,
                        std::string("empty margin ") + name + " in contingency table");
        }
    }
    const double total = static_cast<double>(n);
    JointFrequencies f;
    f.p_e0_d0 = static_cast<double>(table.n_e0_d0) / total;
    f.p_e0_d1 = static_cast<double>(table.n_e0_d1) / total;
    f.p_e1_d0 = static_cast<double>(table.n_e1_d0) / total;
    f.p_e1_d1 = static_cast<double>(table.n_e1_d1) / total;
    // Margins from integer sums so they are the correctly rounded ratios.
    f.p_e1 = static_cast<double>(table.n_e1_d0 + table.n_e1_d1) / total;
    f.p_d1 = static_cast<double>(table.n_e0_d1 + table.n_e1_d1) / total;
    return f;
}

double relative_risk(const JointFrequencies& freqs) {
    const double p_e0 = 1.0 - freqs.p_e1;
    if (!(freqs.p_e1 > 0.0) || !(p_e0 > 0.0)) {
        throw Error(ErrorKind::MarginDegenerate, "relative risk needs both exposure margins > 0");
    }
    if (!(freqs.p_e0_d1 > 0.0)) {
        throw Error(ErrorKind::MarginDegenerate, "relative risk undefined: P(d=1|e=0) is zero");
    }
    return (freqs.p_e1_d1 / freqs.p_e1) / (freqs.p_e0_d1 / p_e0);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        const auto first = field.find_first_not_of(" \t\r");
        const auto last = field.find_last_not_of(" \t\r");
        out.push_back(first == std::string::npos ? std::string{}
                                                 : field.substr(first, last - first + 1));
    }
    return out;
}

}  // namespace

ContingencyTable parse_table_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string header_line;
    std::string data_line;
    while (std::getline(in, header_line) && header_line.find_first_not_of(" \t\r") == std::string::npos) {
    }
    while (std::getline(in, data_line) && data_line.find_first_not_of(" \t\r") == std::string::npos) {
    }
    const auto header = split_csv_line(header_line);
    const auto values = split_csv_line(data_line);
    if (header.size() != 4 || values.size() != 4) {
        throw Error(ErrorKind::Schema, "table CSV needs header e0_d0,e0_d1,e1_d0,e1_d1 and one row");
    }
    ContingencyTable table;
    std::array<bool, 4> seen{};
    for (std::size_t i = 0; i < 4; ++i) {
        std::uint64_t value = 0;
        const auto& v = values[i];
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
        if (ec != std::errc{} || ptr != v.data() + v.size()) {
            throw Error(ErrorKind::Schema, "table CSV column " + header[i] + ": not a count");
        }
        std::size_t slot = 4;
        if (header[i] == "e0_d0") { table.n_e0_d0 = value; slot = 0; }
        else if (header[i] == "e0_d1") { table.n_e0_d1 = value; slot = 1; }
        else if (header[i] == "e1_d0") { table.n_e1_d0 = value; slot = 2; }
        else if (header[i] == "e1_d1") { table.n_e1_d1 = value; slot = 3; }
        if (slot == 4 || seen[slot]) {
            throw Error(ErrorKind::Schema, "table CSV: unexpected or repeated column '" + header[i] + "'");
        }
        seen[slot] = true;
    }
    return table;
}

}  // namespace twinbounds
