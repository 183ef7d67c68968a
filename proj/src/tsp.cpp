#include "dcode/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dcode/rng.hpp"

namespace dcode {

namespace {

constexpr std::size_t kMinCities = 3;

// TSPLIB nint(): nearest integer, halves away from zero for positive input.
double euc2d(double x1, double y1, double x2, double y2) {
    const double dx = x1 - x2;
    const double dy = y1 - y2;
    return std::floor(std::sqrt(dx * dx + dy * dy) + 0.5);
}

std::vector<double> matrix_from_coords(const std::vector<double>& xs,
                                       const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = euc2d(xs[i], ys[i], xs[j], ys[j]);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    return dist;
}

void check_size(std::size_t n) {
    if (n < kMinCities) {
        throw std::invalid_argument("instance needs at least 3 cities, got " +
                                    std::to_string(n));
    }
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

// Splits "KEY : value" / "KEY: value" header lines.
bool split_header(const std::string& line, std::string& key, std::string& value) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) return false;
    key = trim(line.substr(0, colon));
    value = trim(line.substr(colon + 1));
    return true;
}

} // namespace

TsplibParseError::TsplibParseError(const std::string& msg, int line)
    : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_number(line) {}

TspInstance make_euclidean_instance(std::string name, std::vector<double> xs,
                                    std::vector<double> ys) {
    if (xs.size() != ys.size()) {
        throw std::invalid_argument("coordinate arrays differ in length");
    }
    check_size(xs.size());
    TspInstance inst;
    inst.name = std::move(name);
    inst.n = xs.size();
    inst.dist = matrix_from_coords(xs, ys);
    inst.xs = std::move(xs);
    inst.ys = std::move(ys);
    return inst;
}

TspInstance make_matrix_instance(std::string name, std::size_t n, std::vector<double> matrix) {
    check_size(n);
    if (matrix.size() != n * n) {
        throw std::invalid_argument("matrix size does not match dimension " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (matrix[i * n + i] != 0.0) {
            throw std::invalid_argument("distance matrix has nonzero diagonal at " +
                                        std::to_string(i));
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double d = matrix[i * n + j];
            if (!(d >= 0.0) || !std::isfinite(d)) {
                throw std::invalid_argument("negative or non-finite distance at (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
            }
            if (matrix[i * n + j] != matrix[j * n + i]) {
                throw std::invalid_argument("distance matrix not symmetric at (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
    TspInstance inst;
    inst.name = std::move(name);
    inst.n = n;
    inst.dist = std::move(matrix);
    return inst;
}

TspInstance make_random_euclidean_instance(std::string name, std::size_t n, double side,
                                           SeededRng& rng) {
    check_size(n);
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = rng.next_range(0.0, side);
        ys[i] = rng.next_range(0.0, side);
    }
    return make_euclidean_instance(std::move(name), std::move(xs), std::move(ys));
}

TspInstance load_tsplib(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        throw std::runtime_error("cannot open TSPLIB file: " + path);
    }

    std::string name;
    std::size_t dimension = 0;
    enum class Weights { unset, euc_2d, explicit_matrix } weights = Weights::unset;
    std::string weight_format;
    std::vector<double> xs, ys;
    std::vector<double> matrix;
    bool saw_coords = false, saw_matrix = false;

    std::string line;
    int line_no = 0;
    auto next_line = [&](std::string& out) {
        if (!std::getline(in, out)) return false;
        ++line_no;
        return true;
    };

    while (next_line(line)) {
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t == "EOF") break;

        if (t == "NODE_COORD_SECTION") {
            if (dimension == 0) throw TsplibParseError("NODE_COORD_SECTION before DIMENSION", line_no);
            xs.resize(dimension);
            ys.resize(dimension);
            for (std::size_t i = 0; i < dimension; ++i) {
                if (!next_line(line)) throw TsplibParseError("unexpected end of coordinates", line_no);
                std::istringstream ls(line);
                long id = 0;
                double x = 0, y = 0;
                if (!(ls >> id >> x >> y)) throw TsplibParseError("malformed coordinate line", line_no);
                if (id < 1 || static_cast<std::size_t>(id) > dimension) {
                    throw TsplibParseError("node id out of range: " + std::to_string(id), line_no);
                }
                xs[static_cast<std::size_t>(id) - 1] = x;
                ys[static_cast<std::size_t>(id) - 1] = y;
            }
            saw_coords = true;
            continue;
        }
        if (t == "EDGE_WEIGHT_SECTION") {
            if (dimension == 0) throw TsplibParseError("EDGE_WEIGHT_SECTION before DIMENSION", line_no);
            matrix.reserve(dimension * dimension);
            while (matrix.size() < dimension * dimension) {
                if (!next_line(line)) throw TsplibParseError("unexpected end of edge weights", line_no);
                std::istringstream ls(line);
                double w;
                while (ls >> w) matrix.push_back(w);
            }
            if (matrix.size() != dimension * dimension) {
                throw TsplibParseError("edge weight count mismatch", line_no);
            }
            saw_matrix = true;
            continue;
        }

        std::string key, value;
        if (!split_header(t, key, value)) {
            throw TsplibParseError("unrecognized line: " + t, line_no);
        }
        if (key == "NAME") {
            name = value;
        } else if (key == "TYPE") {
            if (value != "TSP") {
                throw TsplibParseError("unsupported TYPE '" + value + "' (only TSP)", line_no);
            }
        } else if (key == "DIMENSION") {
            long d = 0;
            std::istringstream(value) >> d;
            if (d < static_cast<long>(kMinCities)) {
                throw TsplibParseError("DIMENSION must be at least 3, got " + value, line_no);
            }
            dimension = static_cast<std::size_t>(d);
        } else if (key == "EDGE_WEIGHT_TYPE") {
            if (value == "EUC_2D") {
                weights = Weights::euc_2d;
            } else if (value == "EXPLICIT") {
                weights = Weights::explicit_matrix;
            } else {
                throw TsplibParseError("unsupported EDGE_WEIGHT_TYPE '" + value + "'", line_no);
            }
        } else if (key == "EDGE_WEIGHT_FORMAT") {
            weight_format = value;
        } else if (key == "COMMENT" || key == "DISPLAY_DATA_TYPE") {
            // ignored
        } else {
            throw TsplibParseError("unrecognized keyword '" + key + "'", line_no);
        }
    }

    if (dimension == 0) throw TsplibParseError("missing DIMENSION", line_no);
    if (weights == Weights::unset) throw TsplibParseError("missing EDGE_WEIGHT_TYPE", line_no);

    if (weights == Weights::euc_2d) {
        if (!saw_coords) throw TsplibParseError("missing NODE_COORD_SECTION", line_no);
        TspInstance inst = make_euclidean_instance(name.empty() ? path : name, std::move(xs),
                                                   std::move(ys));
        return inst;
    }
    if (!weight_format.empty() && weight_format != "FULL_MATRIX") {
        throw TsplibParseError("unsupported EDGE_WEIGHT_FORMAT '" + weight_format + "'", line_no);
    }
    if (!saw_matrix) throw TsplibParseError("missing EDGE_WEIGHT_SECTION", line_no);
    return make_matrix_instance(name.empty() ? path : name, dimension, std::move(matrix));
}

TspInstance load_tsplib(const std::string& path, const std::string& best_known_csv) {
    TspInstance inst = load_tsplib(path);
    const auto table = load_best_known(best_known_csv);
    if (auto it = table.find(inst.name); it != table.end()) {
        inst.best_known = it->second;
    }
    return inst;
}

std::unordered_map<std::string, double> load_best_known(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in.is_open()) {
        throw std::runtime_error("cannot open best-known file: " + csv_path);
    }
    std::unordered_map<std::string, double> table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto comma = t.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error(csv_path + " line " + std::to_string(line_no) +
                                     ": expected 'name,cost'");
        }
        const std::string key = trim(t.substr(0, comma));
        if (key == "name") continue; // optional header
        double cost = 0;
        std::istringstream vs(t.substr(comma + 1));
        if (!(vs >> cost)) {
            throw std::runtime_error(csv_path + " line " + std::to_string(line_no) +
                                     ": malformed cost");
        }
        table[key] = cost;
    }
    return table;
}

double tour_cost(const TspInstance& instance, std::span<const int> order) {
    const std::size_t n = instance.n;
    if (order.size() != n) {
        throw std::invalid_argument("tour length " + std::to_string(order.size()) +
                                    " does not match instance size " + std::to_string(n));
    }
    std::vector<bool> seen(n, false);
    for (int city : order) {
        if (city < 0 || static_cast<std::size_t>(city) >= n || seen[static_cast<std::size_t>(city)]) {
            throw std::invalid_argument("tour is not a permutation of 0.." + std::to_string(n - 1));
        }
        seen[static_cast<std::size_t>(city)] = true;
    }
    double total = 0.0;
    int prev = order[n - 1];
    for (int city : order) {
        total += instance.distance(static_cast<std::size_t>(prev), static_cast<std::size_t>(city));
        prev = city;
    }
    return total;
}

Tour nearest_neighbor_tour(const TspInstance& instance, int start) {
    const std::size_t n = instance.n;
    if (start < 0 || static_cast<std::size_t>(start) >= n) {
        throw std::invalid_argument("start city out of range");
    }
    std::vector<bool> visited(n, false);
    Tour tour;
    tour.order.reserve(n);
    int current = start;
    tour.order.push_back(current);
    visited[static_cast<std::size_t>(current)] = true;
    for (std::size_t step = 1; step < n; ++step) {
        int next = -1;
        double best = std::numeric_limits<double>::max();
        for (std::size_t c = 0; c < n; ++c) {
            if (visited[c]) continue;
            const double d = instance.distance(static_cast<std::size_t>(current), c);
            if (d < best) {
                best = d;
                next = static_cast<int>(c);
            }
        }
        tour.order.push_back(next);
        visited[static_cast<std::size_t>(next)] = true;
        current = next;
    }
    tour.cost = tour_cost(instance, tour.order);
    return tour;
}

std::vector<std::vector<int>> nearest_neighbor_lists(const TspInstance& instance, std::size_t k) {
    const std::size_t n = instance.n;
    k = std::min(k, n - 1);
    std::vector<std::vector<int>> lists(n);
    std::vector<int> others(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::iota(others.begin(), others.end(), 0);
        std::stable_sort(others.begin(), others.end(), [&](int a, int b) {
            return instance.distance(i, static_cast<std::size_t>(a)) <
                   instance.distance(i, static_cast<std::size_t>(b));
        });
        auto& list = lists[i];
        list.reserve(k);
        for (int c : others) {
            if (static_cast<std::size_t>(c) == i) continue;
            list.push_back(c);
            if (list.size() == k) break;
        }
    }
    return lists;
}

} // namespace dcode
