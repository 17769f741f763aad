#ifndef DIGAPPROX_PANEL_HPP
#define DIGAPPROX_PANEL_HPP

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "digapprox/errors.hpp"

namespace digapprox {

enum class PanelKind { real_valued, finite_alphabet };

/// m processes observed over n time steps, stored process-major.
class TimeSeriesPanel {
 public:
  TimeSeriesPanel() = default;

  TimeSeriesPanel(std::size_t m, std::size_t n, std::vector<double> data,
                  PanelKind kind = PanelKind::real_valued, int alphabet_size = 0)
      : m_(m), n_(n), kind_(kind), alphabet_size_(alphabet_size), data_(std::move(data)) {
    if (m_ == 0) throw ValidationError("panel needs at least one process");
    if (n_ < 2) throw ValidationError("panel needs n >= 2 time steps");
    if (data_.size() != m_ * n_) throw ValidationError("panel data size is not m*n");
    if (kind_ == PanelKind::finite_alphabet) {
      if (alphabet_size_ < 1) throw ValidationError("finite-alphabet panel needs |X| >= 1");
      for (double v : data_) {
        if (v < 0 || v >= alphabet_size_ || v != std::floor(v)) {
          throw ValidationError("finite-alphabet entry outside [0, |X|)");
        }
      }
    } else {
      for (double v : data_) {
        if (!std::isfinite(v)) throw ValidationError("non-finite panel entry");
      }
    }
  }

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  PanelKind kind() const { return kind_; }
  int alphabet_size() const { return alphabet_size_; }

  double operator()(std::size_t process, std::size_t t) const { return data_[process * n_ + t]; }

  std::span<const double> series(std::size_t process) const {
    return {data_.data() + process * n_, n_};
  }

  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const TimeSeriesPanel&, const TimeSeriesPanel&) = default;

 private:
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  PanelKind kind_ = PanelKind::real_valued;
  int alphabet_size_ = 0;
  std::vector<double> data_;
};

/// Reinterprets a real-valued panel holding small non-negative integers.
/// The alphabet defaults to max entry + 1.
inline TimeSeriesPanel to_finite_alphabet(const TimeSeriesPanel& panel,
                                          std::optional<int> alphabet_size = std::nullopt) {
  double max_value = 0;
  for (double v : panel.data()) max_value = std::max(max_value, v);
  const int size = alphabet_size.value_or(static_cast<int>(max_value) + 1);
  return TimeSeriesPanel(panel.m(), panel.n(), panel.data(), PanelKind::finite_alphabet, size);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

inline std::optional<double> parse_double(std::string text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) return std::nullopt;
  const auto last = text.find_last_not_of(" \t\r");
  text = text.substr(first, last - first + 1);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

}  // namespace detail

/// Reads one row per time step and one column per process. A first row
/// that does not parse as numbers is taken as a header.
inline TimeSeriesPanel read_panel_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = detail::split_csv_line(line);
    std::vector<double> values;
    values.reserve(fields.size());
    bool ok = true;
    for (const auto& f : fields) {
      const auto v = detail::parse_double(f);
      if (!v) {
        ok = false;
        break;
      }
      values.push_back(*v);
    }
    if (!ok) {
      if (rows.empty() && columns == 0) {
        columns = fields.size();  // header
        continue;
      }
      throw IoError("malformed CSV: row " + std::to_string(line_no) + " has a non-numeric field");
    }
    if (columns == 0) columns = values.size();
    if (values.size() != columns) {
      throw IoError("malformed CSV: row " + std::to_string(line_no) + " has " +
                    std::to_string(values.size()) + " fields, expected " +
                    std::to_string(columns));
    }
    rows.push_back(std::move(values));
  }
  if (rows.size() < 2) throw IoError("CSV panel needs at least two data rows");
  const std::size_t n = rows.size();
  std::vector<double> data(columns * n);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t p = 0; p < columns; ++p) data[p * n + t] = rows[t][p];
  }
  return TimeSeriesPanel(columns, n, std::move(data));
}

inline TimeSeriesPanel read_panel_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open panel file " + path.string());
  return read_panel_csv(in);
}

inline void write_panel_csv(std::ostream& out, const TimeSeriesPanel& panel, bool header = true) {
  if (header) {
    for (std::size_t p = 0; p < panel.m(); ++p) out << (p ? "," : "") << 'X' << p + 1;
    out << '\n';
  }
  out << std::setprecision(17);
  for (std::size_t t = 0; t < panel.n(); ++t) {
    for (std::size_t p = 0; p < panel.m(); ++p) out << (p ? "," : "") << panel(p, t);
    out << '\n';
  }
}

}  // namespace digapprox

#endif  // DIGAPPROX_PANEL_HPP
