#include "tikreg/report.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "tikreg/error.hpp"
#include "tikreg/matrix_io.hpp"

namespace tikreg {
namespace {

constexpr std::string_view kCsvHeader = "noise_level,method,mean_rel_err,std_rel_err,runs,excluded";

std::string scientific(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string percent(double level) {
  std::ostringstream s;
  s << level * 100.0 << '%';
  return s.str();
}

template <class T>
T parse_field(std::string_view text, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad field '" +
                                    std::string(text) + "'");
  }
  return value;
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "md" || name == "markdown") return ReportFormat::Markdown;
  fail(ErrorCode::InvalidArgument, "unknown format '" + std::string(name) + "'");
}

void write_csv(std::ostream& out, const ExperimentReport& report) {
  out << kCsvHeader << '\n';
  for (const ReportCell& c : report.cells) {
    out << format_double(c.level) << ',' << c.method << ',' << format_double(c.mean) << ','
        << format_double(c.std_dev) << ',' << c.runs << ',' << c.excluded << '\n';
  }
}

void write_markdown(std::ostream& out, const ExperimentReport& report) {
  out << "| Noise level |";
  for (const std::string& m : report.methods) out << ' ' << m << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < report.methods.size(); ++i) out << "---|";
  out << '\n';
  for (std::size_t li = 0; li < report.levels.size(); ++li) {
    out << "| " << percent(report.levels[li]) << " |";
    for (std::size_t mi = 0; mi < report.methods.size(); ++mi) {
      out << ' ' << scientific(report.cell(li, mi).mean) << " |";
    }
    out << '\n';
  }
}

void emit_report(std::ostream& out, const ExperimentReport& report, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    write_csv(out, report);
  } else {
    write_markdown(out, report);
  }
}

std::string emit_report(const ExperimentReport& report, ReportFormat format) {
  std::ostringstream out;
  emit_report(out, report, format);
  return out.str();
}

std::vector<CsvRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    fail(ErrorCode::ParseError, "missing or unexpected CSV header");
  }
  std::vector<CsvRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      fields.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    fields.push_back(rest);
    if (fields.size() != 6) {
      fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 6 fields");
    }
    rows.push_back(CsvRow{parse_field<double>(fields[0], line_no), std::string(fields[1]),
                          parse_field<double>(fields[2], line_no),
                          parse_field<double>(fields[3], line_no),
                          parse_field<std::size_t>(fields[4], line_no),
                          parse_field<std::size_t>(fields[5], line_no)});
  }
  return rows;
}

}  // namespace tikreg
