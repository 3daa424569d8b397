#pragma once

#include <string>
#include <vector>

#include "qle/sampled.hpp"

namespace qle {

// CSV with '#'-prefixed comment/header lines; columns are column-major.
struct CsvTable {
    std::vector<std::string> comments;  // without the leading '#'
    std::vector<std::vector<double>> columns;

    size_t rows() const { return columns.empty() ? 0 : columns[0].size(); }
};

CsvTable read_csv(const std::string& file);
void write_csv(const std::string& file, const CsvTable& table);

// Two-column (x, y) ingestion with strict monotonicity checks; used for
// tabulated impedance and drive-force inputs.
SampledFunction read_xy_csv(const std::string& file);
void write_xy_csv(const std::string& file, const SampledFunction& fn,
                  const std::string& header);

// SHA-256 of a file's bytes, lowercase hex.
std::string sha256_file(const std::string& file);
std::string sha256_string(const std::string& data);

}  // namespace qle
