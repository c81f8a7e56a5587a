#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "mgd/errors.hpp"

namespace mgd {

// Minimal CSV plumbing. All files are UTF-8, comma separated, header row
// required, decimal point. Doubles are written with %.17g so a written file
// reads back bit-identical.

std::string format_double(double v);

std::vector<std::string> split_csv_line(const std::string& line);

double parse_double(const std::string& field, const std::string& context);
long parse_long(const std::string& field, const std::string& context);

/// Whole-file reader that strips blank lines. Throws DatasetError if the
/// file cannot be opened.
std::vector<std::vector<std::string>> read_csv(const std::string& path);

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);

    void row(const std::vector<std::string>& fields);
    void raw_line(const std::string& line);

private:
    std::ofstream out_;
    std::string path_;
};

/// FNV-1a over the file bytes, as a 16-digit hex string. Used for manifests.
std::string file_hash_hex(const std::string& path);

}  // namespace mgd
