#pragma once

// Deterministic CSV emission for time series: RFC-4180 quoting, "." decimal
// separator, doubles rendered with the shortest representation that round
// trips (std::to_chars).  Bodies contain no timestamps or other run-varying
// data, so two runs of the same computation produce byte-identical files.

#include <string>
#include <vector>

namespace varq::csv {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

// RFC-4180 field quoting: wrap in double quotes when the field contains a
// comma, a double quote, CR or LF; embedded quotes are doubled.
std::string quote_field(const std::string& field);

class Table {
  public:
    explicit Table(std::vector<std::string> columns);

    std::size_t column_count() const { return columns_.size(); }
    std::size_t row_count() const { return rows_.size(); }

    // Throws std::invalid_argument when the value count does not match the
    // column count.
    void add_row(const std::vector<double>& values);
    void add_row(const std::vector<std::string>& fields);

    // Header line plus one line per row, LF line endings, trailing newline.
    std::string body() const;

    // Throws std::runtime_error naming the path on I/O failure.
    void write(const std::string& path) const;

  private:
    std::vector<std::string> columns_;
    std::vector<std::string> rows_;  // rendered lines without the newline
};

}  // namespace varq::csv
