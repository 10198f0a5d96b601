#include "tracenorm/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"
#include "tracenorm/error.hpp"

namespace tracenorm {

StudyReport::StudyReport(std::string experiment, std::vector<std::string> columns)
    : experiment_(std::move(experiment)), columns_(std::move(columns)) {}

void StudyReport::add_row(std::vector<ReportCell> row) {
  if (row.size() != columns_.size()) throw DimensionError("StudyReport: row has wrong number of cells");
  rows_.push_back(std::move(row));
}

std::size_t StudyReport::column_index(std::string_view column) const {
  for (std::size_t k = 0; k < columns_.size(); ++k)
    if (columns_[k] == column) return k;
  throw Error("StudyReport: no column '" + std::string(column) + "'");
}

const ReportCell& StudyReport::at(std::size_t row, std::string_view column) const {
  return rows_.at(row)[column_index(column)];
}

double StudyReport::number(std::size_t row, std::string_view column) const {
  const ReportCell& c = at(row, column);
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  if (std::holds_alternative<std::monostate>(c)) return std::nan("");
  throw Error("StudyReport: column '" + std::string(column) + "' is not numeric");
}

std::vector<double> StudyReport::column_values(std::string_view column) const {
  std::vector<double> out;
  for (std::size_t r = 0; r < rows_.size(); ++r) out.push_back(number(r, column));
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void StudyReport::write_csv(std::ostream& os) const {
  for (std::size_t k = 0; k < columns_.size(); ++k) os << (k ? "," : "") << columns_[k];
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) os << ',';
      std::visit(
          [&os](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
              os << format_double(v);
            else if constexpr (std::is_same_v<T, std::monostate>)
              return;
            else
              os << v;
          },
          row[k]);
    }
    os << '\n';
  }
}

std::string StudyReport::to_json() const {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : rows_) {
    nlohmann::ordered_json r;
    for (std::size_t k = 0; k < row.size(); ++k)
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>)
              r[columns_[k]] = nullptr;
            else if constexpr (std::is_same_v<T, double>)
              r[columns_[k]] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(format_double(v));
            else
              r[columns_[k]] = v;
          },
          row[k]);
    rows.push_back(std::move(r));
  }
  nlohmann::ordered_json j;
  j["experiment"] = experiment_;
  j["columns"] = columns_;
  j["rows"] = std::move(rows);
  return j.dump(2);
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DimensionError("fitted_slope: need two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

double fitted_rate(const std::vector<double>& h, const std::vector<double>& err) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < h.size(); ++i) {
    lx.push_back(std::log(h[i]));
    ly.push_back(std::log(err[i]));
  }
  return fitted_slope(lx, ly);
}

}  // namespace tracenorm
