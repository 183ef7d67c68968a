#include "dcode/prescription.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dcode {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

bool parse_number(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    const char* begin = t.data();
    const char* end = begin + t.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

} // namespace

PrescriptionDataset load_prescription_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset: " + path.string());

    PrescriptionDataset ds;
    std::string line;
    std::size_t line_no = 0;
    std::ptrdiff_t f_col = -1;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto cols = split_csv_line(line);
        if (header.empty()) {
            header = cols;
            for (std::size_t c = 0; c < header.size(); ++c) {
                if (header[c] == "f") {
                    f_col = static_cast<std::ptrdiff_t>(c);
                } else {
                    ds.features.push_back(header[c]);
                }
            }
            if (f_col < 0) {
                throw std::runtime_error(path.string() + ": header lacks objective column 'f'");
            }
            continue;
        }
        if (cols.size() != header.size()) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected " + std::to_string(header.size()) + " columns");
        }
        std::vector<std::string> row;
        double f_value = 0.0;
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (static_cast<std::ptrdiff_t>(c) == f_col) {
                if (!parse_number(cols[c], f_value)) {
                    throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                             ": objective cell is not numeric");
                }
            } else {
                row.push_back(cols[c]);
            }
        }
        ds.cells.push_back(std::move(row));
        ds.objective.push_back(f_value);
    }
    if (header.empty()) throw std::runtime_error(path.string() + ": empty dataset");
    return ds;
}

Constraint parse_constraint(const std::string& text) {
    static const std::pair<const char*, Constraint::Op> ops[] = {
        {"<=", Constraint::Op::le}, {">=", Constraint::Op::ge}, {"==", Constraint::Op::eq},
        {"<", Constraint::Op::lt},  {">", Constraint::Op::gt},
    };
    for (const auto& [token, op] : ops) {
        const auto pos = text.find(token);
        if (pos == std::string::npos || pos == 0) continue;
        Constraint c;
        c.feature = trim(text.substr(0, pos));
        c.op = op;
        const std::string rhs = trim(text.substr(pos + std::string(token).size()));
        if (c.feature.empty() || rhs.empty()) break;
        if (parse_number(rhs, c.number)) {
            c.numeric = true;
        } else if (op == Constraint::Op::eq) {
            c.numeric = false;
            c.text = rhs;
        } else {
            throw std::invalid_argument("constraint '" + text +
                                        "': ordered comparison needs a numeric value");
        }
        return c;
    }
    throw std::invalid_argument("constraint '" + text +
                                "': expected <feature><op><value> with op in {<=,>=,==,<,>}");
}

bool satisfies(const PrescriptionDataset& ds, std::size_t row, const Constraint& c) {
    const auto it = std::find(ds.features.begin(), ds.features.end(), c.feature);
    if (it == ds.features.end()) {
        throw std::invalid_argument("constraint references unknown feature '" + c.feature + "'");
    }
    const auto col = static_cast<std::size_t>(it - ds.features.begin());
    const std::string& cell = ds.cells[row][col];
    if (!c.numeric) return cell == c.text;
    double v = 0.0;
    if (!parse_number(cell, v)) {
        if (c.op == Constraint::Op::eq) return false; // categorical cell never equals a number
        throw std::invalid_argument("constraint on '" + c.feature +
                                    "' compares a non-numeric cell numerically");
    }
    switch (c.op) {
        case Constraint::Op::le: return v <= c.number;
        case Constraint::Op::ge: return v >= c.number;
        case Constraint::Op::lt: return v < c.number;
        case Constraint::Op::gt: return v > c.number;
        case Constraint::Op::eq: return v == c.number;
    }
    return false;
}

PrescribeResult olp_prescribe(const PrescriptionDataset& ds,
                              const std::vector<Constraint>& constraints) {
    PrescribeResult best;
    for (std::size_t r = 0; r < ds.size(); ++r) {
        bool ok = true;
        for (const Constraint& c : constraints) {
            if (!satisfies(ds, r, c)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        if (!best.feasible || ds.objective[r] < best.objective) {
            best.feasible = true;
            best.index = r;
            best.objective = ds.objective[r];
        }
    }
    return best;
}

} // namespace dcode
