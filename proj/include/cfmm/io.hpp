#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cfmm/allocation.hpp"
#include "cfmm/belief.hpp"

namespace cfmm {

/// Numeric CSV: optional `#` comment lines, one header line, then rows of numbers.
struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;   // throws malformed_input when absent
    std::vector<double> values(const std::string& name) const;
};

CsvTable read_csv(std::istream& in, const std::string& source);
CsvTable read_csv_file(const std::string& path);

/// Writes columns with 17 significant digits.
void write_csv(std::ostream& out, const std::vector<std::string>& comments, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// `p,L,Y,X` rows for an allocation and the reserve curve it implies.
void write_allocation_csv(std::ostream& out, const Allocation& alloc, const std::vector<std::string>& comments);

/// Reads `p,L[,Y,X]`; the p column must be a log-uniform grid.
Allocation read_allocation_csv(const std::string& path, double p0);

using KeyValues = std::map<std::string, std::string>;

/// `key=value` lines, `#` comments ignored.
KeyValues read_key_values(const std::string& path);
void write_key_values(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& entries);

std::string format_double(double v);

/// Belief config: JSON object with a `kind` discriminator, or a CSV table whose header
/// is `p_x,p_y,psi` (two-dimensional) or `p,h` (ratio density).
BeliefSpec load_belief(const std::string& path);
BeliefSpec parse_belief_json(const std::string& text, const std::string& base_dir);

std::shared_ptr<const Table2d> table2d_from_csv(const CsvTable& csv, const std::string& source);
RatioDensity ratio_from_csv(const CsvTable& csv);

void write_table2d_csv(std::ostream& out, const Table2d& table, const std::vector<std::string>& comments);

}  // namespace cfmm
