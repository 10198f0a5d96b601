#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tracenorm {

/// monostate prints as an empty CSV field and JSON null.
using ReportCell = std::variant<std::monostate, std::string, std::int64_t, double>;

/// Table of per-level (or per-parameter) results with a fixed column set.
class StudyReport {
 public:
  StudyReport(std::string experiment, std::vector<std::string> columns);

  const std::string& experiment() const noexcept { return experiment_; }
  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }

  void add_row(std::vector<ReportCell> row);
  const std::vector<ReportCell>& row(std::size_t i) const { return rows_.at(i); }
  const ReportCell& at(std::size_t row, std::string_view column) const;
  /// NaN for empty cells.
  double number(std::size_t row, std::string_view column) const;
  std::vector<double> column_values(std::string_view column) const;

  /// Header plus one line per row; doubles printed with %.10g.
  void write_csv(std::ostream& os) const;
  std::string to_json() const;

 private:
  std::size_t column_index(std::string_view column) const;

  std::string experiment_;
  std::vector<std::string> columns_;
  std::vector<std::vector<ReportCell>> rows_;
};

std::string format_double(double v);

/// Least-squares slope of log(err) against log(h) (convergence rate).
double fitted_rate(const std::vector<double>& h, const std::vector<double>& err);
/// Least-squares slope of y against x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tracenorm
