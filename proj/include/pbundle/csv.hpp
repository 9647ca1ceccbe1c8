// csv.hpp: deterministic table output
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pbundle {

// Shortest decimal that round-trips to the same double; "nan", "inf", "-inf".
std::string format_double(double x);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    void add_numeric_row(const std::vector<double>& values);

    const std::vector<std::string>& header() const noexcept { return header_; }
    const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

    void write(std::ostream& os) const;
    void write_file(const std::string& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace pbundle
