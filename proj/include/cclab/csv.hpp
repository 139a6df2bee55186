#ifndef CCLAB_CSV_HPP
#define CCLAB_CSV_HPP

#include <fstream>
#include <string>
#include <vector>

namespace cclab {

// Full-precision round-trippable formatting for CSV cells.
std::string format_full(double x);
// 4-decimal rounding for the human-readable report.
std::string format_round4(double x);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ofstream out_;
    std::size_t columns_;
};

}  // namespace cclab

#endif
