#include "matrel/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace matrel {

std::string format_value(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.8e", v);  // 9 significant digits
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);  // binary: identical bytes everywhere
    if (!out)
        throw std::runtime_error("csv: cannot open for writing: " + path);
    return out;
}

} // namespace

void write_csv(const std::string& path, const std::string& x_name,
               const std::vector<double>& x, const std::vector<CsvColumn>& columns)
{
    for (const auto& col : columns)
        if (col.values.size() != x.size())
            throw std::invalid_argument("csv: column '" + col.name + "' length mismatch");

    std::ofstream out = open_out(path);
    out << x_name;
    for (const auto& col : columns)
        out << ',' << col.name;
    out << '\n';
    for (std::size_t i = 0; i < x.size(); ++i) {
        out << format_value(x[i]);
        for (const auto& col : columns)
            out << ',' << format_value(col.values[i]);
        out << '\n';
    }
}

void write_csv_optional(const std::string& path, const std::string& x_name,
                        const std::vector<double>& x,
                        const std::vector<CsvOptionalColumn>& columns)
{
    for (const auto& col : columns)
        if (col.values.size() != x.size())
            throw std::invalid_argument("csv: column '" + col.name + "' length mismatch");

    std::ofstream out = open_out(path);
    out << x_name;
    for (const auto& col : columns)
        out << ',' << col.name;
    out << '\n';
    for (std::size_t i = 0; i < x.size(); ++i) {
        out << format_value(x[i]);
        for (const auto& col : columns) {
            out << ',';
            if (col.values[i])
                out << format_value(*col.values[i]);
        }
        out << '\n';
    }
}

void write_release_curve(const std::string& path, const ReleaseCurve& curve)
{
    std::vector<CsvColumn> cols{{"fraction", curve.fraction}};
    if (curve.has_front())
        cols.push_back({"R_over_a", curve.front});
    write_csv(path, "t_s", curve.grid.points, cols);
}

void write_front_table(const std::string& path, const ReleaseCurve& curve)
{
    if (!curve.has_front())
        throw std::invalid_argument("csv: release curve carries no front column");
    write_csv(path, "t_s", curve.grid.points, {{"R_over_a", curve.front}});
}

void write_response_curve(const std::string& path, const ResponseCurve& curve)
{
    std::vector<CsvColumn> cols{{"N_expected", curve.absorbed}};
    if (curve.has_rate())
        cols.push_back({"dN_dt", curve.rate});
    write_csv(path, "t_s", curve.grid.points, cols);
}

} // namespace matrel
