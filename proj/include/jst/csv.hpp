#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace jst::csv {

/// Shortest round-trippable decimal form; identical inputs give identical
/// bytes, which is what the determinism contract of the CLI rests on.
std::string fmt(double x);
std::string fmt(int x);

class Writer {
public:
    Writer(const std::filesystem::path& path, const std::string& header);
    void row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
};

/// Whole-file reader; verifies the header and the column count of every row.
/// Malformed rows are hard errors.
std::vector<std::vector<std::string>> read(const std::filesystem::path& path,
                                           const std::string& expected_header);

double parse_double(const std::string& cell, const std::string& context);
int parse_int(const std::string& cell, const std::string& context);

}  // namespace jst::csv
