#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <vector>

namespace vil {

enum class Verdict { holds, violated, monitored };

std::string to_string(Verdict v);

/// One row of a diagnostics report. `check` is the stable check id, `params`
/// a "k=v;k=v" string. `monitored` rows never fail a run.
struct ReportRow {
  std::string check;
  std::string params;
  double measured = 0.0;
  double reference = std::numeric_limits<double>::quiet_NaN();
  Verdict verdict = Verdict::monitored;
  double tolerance = std::numeric_limits<double>::quiet_NaN();
};

class DiagnosticsReport {
 public:
  void add(ReportRow row) { rows_.push_back(std::move(row)); }
  void add(const std::string& check, const std::string& params, double measured, double reference,
           Verdict verdict, double tolerance = std::numeric_limits<double>::quiet_NaN()) {
    rows_.push_back({check, params, measured, reference, verdict, tolerance});
  }
  void merge(const DiagnosticsReport& other) {
    rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
  }

  const std::vector<ReportRow>& rows() const { return rows_; }
  std::size_t violated_count() const;
  bool clean() const { return violated_count() == 0; }

  /// Deterministic order: sorted by check id, then params.
  void sort();

  void write_csv(const std::filesystem::path& path) const;
  void write_summary_json(const std::filesystem::path& path) const;

 private:
  std::vector<ReportRow> rows_;
};

/// Shortest round-trip decimal representation of a double, locale-independent.
std::string format_double(double v);

}  // namespace vil
