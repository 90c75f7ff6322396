#include "lid/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <vector>

namespace lid {

namespace {

[[noreturn]] void io_error(const std::string& message) {
  throw std::runtime_error(message);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) io_error("cannot open output file: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) io_error("cannot open input file: " + path);
  return in;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

// Reads lines, dropping a trailing '\r' and skipping blank lines.
bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

std::int64_t parse_int(std::string_view text, const char* what) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    io_error(std::string("invalid integer in ") + what + ": '" + std::string(text) + "'");
  }
  return value;
}

constexpr const char* kReportHeader =
    "family,d,k,estimator,run,mean,std,min,q1,median,q3,max,whisker_lo,"
    "whisker_hi,n_box_outliers,n_degenerate,n_clamped";

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) io_error("format_double: conversion failed");
  return std::string(buffer, ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    io_error("invalid decimal value: '" + std::string(text) + "'");
  }
  return value;
}

void write_pointset_csv(std::ostream& out, const PointSet& points, bool header) {
  if (header) {
    for (Index j = 0; j < points.dim(); ++j) {
      if (j > 0) out << ',';
      out << 'x' << j;
    }
    out << '\n';
  }
  for (Index i = 0; i < points.size(); ++i) {
    for (Index j = 0; j < points.dim(); ++j) {
      if (j > 0) out << ',';
      out << format_double(points.coords(i, j));
    }
    out << '\n';
  }
}

void write_pointset_csv(const std::string& path, const PointSet& points, bool header) {
  auto out = open_out(path);
  write_pointset_csv(out, points, header);
}

PointSet read_pointset_csv(std::istream& in, bool header, Metric metric,
                           std::string label) {
  std::string line;
  std::size_t line_no = 0;
  if (header) {
    if (!next_line(in, line)) io_error("dataset CSV: missing header row");
    ++line_no;
  }

  std::vector<std::vector<double>> rows;
  Index dim = -1;
  while (next_line(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (dim < 0) {
      dim = static_cast<Index>(fields.size());
    } else if (static_cast<Index>(fields.size()) != dim) {
      io_error("dataset CSV: line " + std::to_string(line_no) + " has " +
               std::to_string(fields.size()) + " fields, expected " +
               std::to_string(dim));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto f : fields) row.push_back(parse_double(f));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) io_error("dataset CSV: no data rows");

  PointMatrix coords(static_cast<Index>(rows.size()), dim);
  for (Index i = 0; i < coords.rows(); ++i) {
    for (Index j = 0; j < dim; ++j) {
      coords(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return make_point_set(std::move(coords), metric, std::move(label));
}

PointSet read_pointset_csv(const std::string& path, bool header, Metric metric,
                           std::string label) {
  auto in = open_in(path);
  return read_pointset_csv(in, header, metric, std::move(label));
}

std::string_view status_token(EstimateStatus status) {
  switch (status) {
    case EstimateStatus::Ok: return "ok";
    case EstimateStatus::DegenerateZeroSum: return "degenerate";
    case EstimateStatus::Clamped: return "clamped";
  }
  return "?";
}

void write_estimates_csv(std::ostream& out, const EstimateBatch& batch) {
  out << "point_id,estimator,k,estimate,status,clamped_pairs\n";
  for (std::size_t i = 0; i < batch.point_ids.size(); ++i) {
    const Estimate& e = batch.estimates[i];
    out << batch.point_ids[i] << ',' << method_token(batch.method) << ','
        << batch.k << ',';
    if (e.usable()) out << format_double(e.value);
    out << ',' << status_token(e.status) << ',' << e.clamped_pairs << '\n';
  }
}

void write_estimates_csv(const std::string& path, const EstimateBatch& batch) {
  auto out = open_out(path);
  write_estimates_csv(out, batch);
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  out << kReportHeader << '\n';
  for (const ReportRow& row : report.rows) {
    out << row.family << ',' << row.d << ',' << row.k << ',' << row.estimator << ',';
    if (row.run == kAggregateRun) {
      out << "ALL";
    } else {
      out << row.run;
    }
    const double stats[] = {row.mean, row.stddev, row.min, row.q1, row.median,
                            row.q3, row.max, row.whisker_lo, row.whisker_hi};
    for (double s : stats) {
      out << ',';
      if (!row.all_degenerate) out << format_double(s);
    }
    out << ',' << row.n_box_outliers << ',' << row.n_degenerate << ','
        << row.n_clamped << '\n';
  }
}

void write_report_csv(const std::string& path, const ExperimentReport& report) {
  auto out = open_out(path);
  write_report_csv(out, report);
}

ExperimentReport read_report_csv(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) io_error("report CSV: empty file");
  if (line != kReportHeader) {
    const auto expected = split_fields(kReportHeader);
    const auto got = split_fields(line);
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i >= got.size() || got[i] != expected[i]) {
        io_error("report CSV: schema mismatch, expected column '" +
                 std::string(expected[i]) + "' at position " + std::to_string(i + 1));
      }
    }
    io_error("report CSV: schema mismatch, unexpected extra columns");
  }

  ExperimentReport report;
  std::size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    const auto f = split_fields(line);
    if (f.size() != 17) {
      io_error("report CSV: line " + std::to_string(line_no) + " has " +
               std::to_string(f.size()) + " fields, expected 17");
    }
    ReportRow row;
    row.family = std::string(f[0]);
    row.d = static_cast<int>(parse_int(f[1], "column 'd'"));
    row.k = static_cast<int>(parse_int(f[2], "column 'k'"));
    row.estimator = std::string(f[3]);
    row.run = f[4] == "ALL" ? kAggregateRun
                            : static_cast<int>(parse_int(f[4], "column 'run'"));
    row.all_degenerate = f[5].empty();
    double* stats[] = {&row.mean, &row.stddev, &row.min, &row.q1, &row.median,
                       &row.q3, &row.max, &row.whisker_lo, &row.whisker_hi};
    for (std::size_t i = 0; i < 9; ++i) {
      if (row.all_degenerate) {
        if (!f[5 + i].empty()) {
          io_error("report CSV: line " + std::to_string(line_no) +
                   " mixes empty and non-empty moment fields");
        }
        *stats[i] = std::numeric_limits<double>::quiet_NaN();
      } else {
        *stats[i] = parse_double(f[5 + i]);
      }
    }
    row.n_box_outliers = parse_int(f[14], "column 'n_box_outliers'");
    row.n_degenerate = parse_int(f[15], "column 'n_degenerate'");
    row.n_clamped = parse_int(f[16], "column 'n_clamped'");
    report.rows.push_back(std::move(row));
  }
  return report;
}

ExperimentReport read_report_csv(const std::string& path) {
  auto in = open_in(path);
  return read_report_csv(in);
}

}  // namespace lid
