#ifndef MATREL_CSV_HPP
#define MATREL_CSV_HPP

/**
 * @file csv.hpp
 * @brief Deterministic CSV output: comma separated, '.' decimal, header
 *        line, scientific notation with 9 significant digits. Identical
 *        inputs produce byte-identical files.
 */

#include <optional>
#include <string>
#include <vector>

#include "matrel/types.hpp"

namespace matrel {

/// One worth-plotting column; values.size() must match the x column.
struct CsvColumn {
    std::string name;
    std::vector<double> values;
};

/// Column with gaps (missing entries written as empty fields).
struct CsvOptionalColumn {
    std::string name;
    std::vector<std::optional<double>> values;
};

std::string format_value(double v);

void write_csv(const std::string& path, const std::string& x_name,
               const std::vector<double>& x, const std::vector<CsvColumn>& columns);

void write_csv_optional(const std::string& path, const std::string& x_name,
                        const std::vector<double>& x,
                        const std::vector<CsvOptionalColumn>& columns);

/// Columns: t_s, fraction[, R_over_a].
void write_release_curve(const std::string& path, const ReleaseCurve& curve);

/// Columns: t_s, R_over_a (front table consumed by the particle simulation).
void write_front_table(const std::string& path, const ReleaseCurve& curve);

/// Columns: t_s, N_expected[, dN_dt].
void write_response_curve(const std::string& path, const ResponseCurve& curve);

} // namespace matrel

#endif
