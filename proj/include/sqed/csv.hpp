#pragma once

// Numeric CSV with a single header line. Values are written with %.17g so
// identical inputs give byte-identical files.

#include <filesystem>
#include <string>
#include <vector>

namespace sqed {

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<double>& values);

private:
    std::FILE* file_ = nullptr;
    std::size_t columns_ = 0;
    std::filesystem::path path_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of a header column; throws std::out_of_range if absent.
    std::size_t column(const std::string& name) const;
    std::vector<double> values(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

std::string format_double(double v);

}  // namespace sqed
