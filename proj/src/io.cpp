#include "dqlab/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dqlab {

namespace {

std::string format_round_trip(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

double parse_double(std::string_view field, const std::filesystem::path& path) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr == begin)
        throw std::invalid_argument(path.string() + ": malformed numeric field '" +
                                    std::string(field) + "'");
    return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open for reading: " + path.string());
    return in;
}

} // namespace

void write_scenario_csv(const std::filesystem::path& path, const ScenarioMatrix& scenarios) {
    std::ofstream out = open_output(path);
    const bool with_prob = !scenarios.has_uniform_probabilities();
    for (std::size_t i = 0; i < scenarios.assets(); ++i) {
        if (i > 0) out << ',';
        out << scenarios.labels()[i];
    }
    if (with_prob) out << ",prob";
    out << '\n';
    for (std::size_t j = 0; j < scenarios.scenarios(); ++j) {
        const auto row = scenarios.row(j);
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out << ',';
            out << format_round_trip(row[i]);
        }
        if (with_prob) out << ',' << format_round_trip(scenarios.probability(j));
        out << '\n';
    }
}

ScenarioMatrix read_scenario_csv(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument(path.string() + ": empty scenario file");
    auto header = split_csv_line(line);
    if (header.empty())
        throw std::invalid_argument(path.string() + ": missing header row");
    const bool with_prob = header.back() == "prob";
    const std::size_t n_assets = header.size() - (with_prob ? 1 : 0);
    if (n_assets == 0)
        throw std::invalid_argument(path.string() + ": no asset columns");

    std::vector<double> values;
    std::vector<double> probs;
    std::size_t n_rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != n_assets + (with_prob ? 1 : 0))
            throw std::invalid_argument(path.string() + ": row with wrong field count");
        for (std::size_t i = 0; i < n_assets; ++i)
            values.push_back(parse_double(fields[i], path));
        if (with_prob) probs.push_back(parse_double(fields.back(), path));
        ++n_rows;
    }
    if (n_rows == 0) throw std::invalid_argument(path.string() + ": no scenario rows");

    ScenarioMatrix out(n_rows, n_assets);
    for (std::size_t j = 0; j < n_rows; ++j)
        for (std::size_t i = 0; i < n_assets; ++i) out.at(j, i) = values[j * n_assets + i];
    header.resize(n_assets);
    out.set_labels(std::move(header));
    if (with_prob) out.set_probabilities(std::move(probs));
    return out;
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out = open_output(path);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_round_trip(m.at(i, j));
        }
        out << '\n';
    }
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_double(f, path));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument(path.string() + ": empty matrix file");
    const std::size_t n = rows.size();
    Matrix m(n, rows.front().size());
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != m.cols())
            throw std::invalid_argument(path.string() + ": ragged matrix rows");
        for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

void write_spectral_json(const std::filesystem::path& path, const SpectralMeasure& psi) {
    nlohmann::json doc;
    doc["gamma"] = psi.tail_index();
    doc["atoms"] = nlohmann::json::array();
    for (const auto& atom : psi.atoms()) {
        nlohmann::json entry;
        entry["s"] = atom.direction;
        entry["p"] = atom.weight;
        doc["atoms"].push_back(std::move(entry));
    }
    std::ofstream out = open_output(path);
    out << doc.dump(2) << '\n';
}

SpectralMeasure read_spectral_json(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(path.string() + ": invalid JSON: " + e.what());
    }
    if (!doc.contains("gamma") || !doc.contains("atoms"))
        throw std::invalid_argument(path.string() + ": spectral JSON needs gamma and atoms");
    std::vector<SpectralAtom> atoms;
    for (const auto& entry : doc["atoms"]) {
        SpectralAtom atom;
        atom.direction = entry.at("s").get<std::vector<double>>();
        atom.weight = entry.at("p").get<double>();
        atoms.push_back(std::move(atom));
    }
    return SpectralMeasure(std::move(atoms), doc["gamma"].get<double>());
}

} // namespace dqlab
