#include "vil/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

namespace vil {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "holds";
    case Verdict::violated:
      return "violated";
    case Verdict::monitored:
      return "monitored";
  }
  return "monitored";
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::size_t DiagnosticsReport::violated_count() const {
  std::size_t c = 0;
  for (const auto& r : rows_)
    if (r.verdict == Verdict::violated) ++c;
  return c;
}

void DiagnosticsReport::sort() {
  std::stable_sort(rows_.begin(), rows_.end(), [](const ReportRow& a, const ReportRow& b) {
    if (a.check != b.check) return a.check < b.check;
    return a.params < b.params;
  });
}

void DiagnosticsReport::write_csv(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::trunc);
  os << "# matrix norm convention: max absolute entry; asymptotic claims are "
        "monitored trends at desk scale, not assertions\n";
  os << "check,params,measured,reference,verdict,tolerance\n";
  for (const auto& r : rows_) {
    os << r.check << ',' << r.params << ',' << format_double(r.measured) << ','
       << format_double(r.reference) << ',' << to_string(r.verdict) << ','
       << format_double(r.tolerance) << '\n';
  }
}

void DiagnosticsReport::write_summary_json(const std::filesystem::path& path) const {
  // Hand-rolled emission keeps key order fixed without pulling json into this TU.
  std::map<std::string, std::array<std::size_t, 3>> per_check;
  for (const auto& r : rows_) {
    auto& c = per_check[r.check];
    c[static_cast<int>(r.verdict)]++;
  }
  std::ofstream os(path, std::ios::trunc);
  os << "{\n  \"matrix_norm_convention\": \"max absolute entry\",\n";
  os << "  \"asymptotic_note\": \"asymptotic claims monitored at desk scale\",\n";
  os << "  \"violated_total\": " << violated_count() << ",\n  \"checks\": {\n";
  bool first = true;
  for (const auto& [name, c] : per_check) {
    if (!first) os << ",\n";
    first = false;
    os << "    \"" << name << "\": {\"holds\": " << c[0] << ", \"violated\": " << c[1]
       << ", \"monitored\": " << c[2] << "}";
  }
  os << "\n  }\n}\n";
}

}  // namespace vil
