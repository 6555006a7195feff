#include "jst/csv.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace jst::csv {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt(int x) { return std::to_string(x); }

Writer::Writer(const std::filesystem::path& path, const std::string& header) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out_.open(path);
    if (!out_) throw std::runtime_error("cannot open for writing: " + path.string());
    out_ << header << '\n';
}

void Writer::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

static std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::vector<std::vector<std::string>> read(const std::filesystem::path& path,
                                           const std::string& expected_header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header)
        throw std::runtime_error("bad header in " + path.string() + ": expected `" +
                                 expected_header + "`, got `" + line + "`");
    const std::size_t n_cols = split(expected_header).size();
    std::vector<std::vector<std::string>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != n_cols)
            throw std::runtime_error("malformed row at " + path.string() + ":" +
                                     std::to_string(line_no));
        rows.push_back(std::move(cells));
    }
    return rows;
}

double parse_double(const std::string& cell, const std::string& context) {
    try {
        std::size_t pos = 0;
        double v = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("malformed number `" + cell + "` in " + context);
    }
}

int parse_int(const std::string& cell, const std::string& context) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("malformed integer `" + cell + "` in " + context);
    }
}

}  // namespace jst::csv
