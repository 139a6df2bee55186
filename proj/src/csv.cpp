#include "cclab/csv.hpp"

#include <cmath>
#include <cstdio>

#include "cclab/errors.hpp"

namespace cclab {

std::string format_full(double x) {
    char buf[40];
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string format_round4(double x) {
    char buf[40];
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::snprintf(buf, sizeof(buf), "%.4f", x);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), out_(path), columns_(header.size()) {
    if (!out_) throw InvalidArgument("CsvWriter: cannot open " + path);
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw InvalidArgument("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

}  // namespace cclab
