#include "uip/csv.hpp"

#include <cstdio>
#include <ostream>

namespace uip {

std::string sci(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17e", x == 0.0 ? 0.0 : x);  // no "-0"
    return buf;
}

void write_csv(std::ostream& os, const CsvTable& table) {
    auto line = [&os](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << cells[i];
        }
        os << '\n';
    };
    line(table.header);
    for (const auto& r : table.rows) line(r);
}

}  // namespace uip
