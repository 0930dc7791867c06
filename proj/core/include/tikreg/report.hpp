#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tikreg/experiment.hpp"

namespace tikreg {

enum class ReportFormat { Csv, Markdown };

ReportFormat parse_report_format(std::string_view name);

void write_csv(std::ostream& out, const ExperimentReport& report);
void write_markdown(std::ostream& out, const ExperimentReport& report);
void emit_report(std::ostream& out, const ExperimentReport& report, ReportFormat format);
std::string emit_report(const ExperimentReport& report, ReportFormat format);

struct CsvRow {
  double level = 0.0;
  std::string method;
  double mean = 0.0;
  double std_dev = 0.0;
  std::size_t runs = 0;
  std::size_t excluded = 0;
};

std::vector<CsvRow> parse_csv(std::istream& in);

}  // namespace tikreg
