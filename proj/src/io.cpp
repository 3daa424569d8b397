#include "qle/io.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <fstream>
#include <sstream>

#include "qle/errors.hpp"

namespace qle {

CsvTable read_csv(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw Error("read_csv: cannot open " + file);
    CsvTable table;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            table.comments.push_back(line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1));
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                size_t pos = 0;
                row.push_back(std::stod(cell, &pos));
                while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
                if (pos != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw ValidationError("read_csv: " + file + ":" +
                                      std::to_string(lineno) +
                                      ": not a number: '" + cell + "'");
            }
        }
        if (table.columns.empty()) {
            table.columns.resize(row.size());
        } else if (row.size() != table.columns.size()) {
            throw ValidationError("read_csv: " + file + ":" +
                                  std::to_string(lineno) + ": expected " +
                                  std::to_string(table.columns.size()) +
                                  " columns, got " + std::to_string(row.size()));
        }
        for (size_t c = 0; c < row.size(); ++c) table.columns[c].push_back(row[c]);
    }
    return table;
}

void write_csv(const std::string& file, const CsvTable& table) {
    std::ofstream out(file);
    if (!out) throw Error("write_csv: cannot open " + file);
    out.precision(17);
    for (const auto& c : table.comments) out << "# " << c << '\n';
    for (size_t r = 0; r < table.rows(); ++r) {
        for (size_t c = 0; c < table.columns.size(); ++c) {
            if (c) out << ',';
            out << table.columns[c][r];
        }
        out << '\n';
    }
    if (!out) throw Error("write_csv: write failed for " + file);
}

SampledFunction read_xy_csv(const std::string& file) {
    CsvTable table = read_csv(file);
    if (table.columns.size() != 2)
        throw ValidationError("read_xy_csv: " + file + ": expected 2 columns, got " +
                              std::to_string(table.columns.size()));
    if (table.rows() < 2)
        throw ValidationError("read_xy_csv: " + file + ": need >= 2 rows");
    SampledFunction fn;
    fn.x = table.columns[0];
    fn.y = table.columns[1];
    for (size_t i = 1; i < fn.x.size(); ++i)
        if (fn.x[i] <= fn.x[i - 1])
            throw ValidationError("read_xy_csv: " + file +
                                  ": x column must be strictly increasing");
    if (!table.comments.empty()) fn.meta["columns"] = table.comments.front();
    return fn;
}

void write_xy_csv(const std::string& file, const SampledFunction& fn,
                  const std::string& header) {
    CsvTable table;
    if (!header.empty()) table.comments.push_back(header);
    table.columns = {fn.x, fn.y};
    write_csv(file, table);
}

namespace {

std::string sha256_bytes(const unsigned char* data, size_t len) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int dlen = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, data, len) != 1 ||
        EVP_DigestFinal_ex(ctx, digest, &dlen) != 1) {
        EVP_MD_CTX_free(ctx);
        throw Error("sha256: digest failure");
    }
    EVP_MD_CTX_free(ctx);
    static const char hex[] = "0123456789abcdef";
    std::string out(2 * dlen, '0');
    for (unsigned int i = 0; i < dlen; ++i) {
        out[2 * i] = hex[digest[i] >> 4];
        out[2 * i + 1] = hex[digest[i] & 0xF];
    }
    return out;
}

}  // namespace

std::string sha256_string(const std::string& data) {
    return sha256_bytes(reinterpret_cast<const unsigned char*>(data.data()),
                        data.size());
}

std::string sha256_file(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("sha256_file: cannot open " + file);
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_string(buf.str());
}

}  // namespace qle
