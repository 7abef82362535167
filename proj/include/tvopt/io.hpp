#ifndef TVOPT_IO_HPP
#define TVOPT_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "tvopt/control_grid.hpp"
#include "tvopt/matrix.hpp"

namespace tvopt {

/// Column file payload: first column the cell left edge, remaining columns
/// real values, one row per cell. Files carry a single header line.
struct SamplesFile {
  double horizon = 0.0;
  RowMatrix values;
};

/// Parses a whitespace-separated column file. A non-numeric first line is
/// treated as the header; '#' lines and blank lines are skipped. Cell width
/// is inferred from the time column (uniform spacing enforced).
SamplesFile read_samples_file(const std::string& path);

/// Reads a control file and maps each row onto the alphabet.
/// With no explicit horizon, it is inferred from the row spacing (needs at
/// least two rows).
ControlGrid read_control_file(const std::string& path, AlphabetPtr alphabet,
                              std::optional<double> horizon = {});

void write_control_file(const std::string& path, const ControlGrid& u);

/// One integer alphabet value per row.
AlphabetPtr read_alphabet_file(const std::string& path);

/// Two-column file (header, then rows); generic helper for step plots,
/// gradients and state series.
void write_column_file(const std::string& path, const std::string& header,
                       const std::vector<double>& first, const std::vector<double>& second);

}  // namespace tvopt

#endif  // TVOPT_IO_HPP
