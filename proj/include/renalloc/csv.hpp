#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace renalloc {

// Numbers rendered with 12 significant digits, '.' decimal separator.
std::string format_number(double value);

// One CSV document: a header, data rows, and any '#' comment lines in
// the order they appeared. Line endings are always LF.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> comments;
};

class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(const std::vector<std::string>& names);
    void row(const std::vector<std::string>& cells);
    void comment(const std::string& text);  // emitted as "# text"

  private:
    void line(const std::vector<std::string>& cells);
    std::ostream& out_;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

}  // namespace renalloc
