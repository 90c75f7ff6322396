#pragma once

#include <iosfwd>
#include <string>

#include "lid/estimators.hpp"
#include "lid/geometry.hpp"
#include "lid/harness.hpp"

namespace lid {

// Shortest round-trip decimal form ('.' separator, locale-independent).
std::string format_double(double value);
double parse_double(std::string_view text);  // throws on trailing garbage

// Dataset CSV: one point per row, comma-separated decimal fields, optional
// single header row (x0,x1,...).
void write_pointset_csv(std::ostream& out, const PointSet& points, bool header);
void write_pointset_csv(const std::string& path, const PointSet& points, bool header);
PointSet read_pointset_csv(std::istream& in, bool header,
                           Metric metric = Metric::Euclidean,
                           std::string label = {});
PointSet read_pointset_csv(const std::string& path, bool header,
                           Metric metric = Metric::Euclidean,
                           std::string label = {});

std::string_view status_token(EstimateStatus status);

// Estimate CSV: point_id,estimator,k,estimate,status,clamped_pairs; the
// estimate field is empty on degenerate rows.
void write_estimates_csv(std::ostream& out, const EstimateBatch& batch);
void write_estimates_csv(const std::string& path, const EstimateBatch& batch);

// Report CSV: family,d,k,estimator,run,mean,std,min,q1,median,q3,max,
// whisker_lo,whisker_hi,n_box_outliers,n_degenerate,n_clamped with run=ALL
// on aggregate rows and empty moment fields on all-degenerate rows.
void write_report_csv(std::ostream& out, const ExperimentReport& report);
void write_report_csv(const std::string& path, const ExperimentReport& report);
ExperimentReport read_report_csv(std::istream& in);
ExperimentReport read_report_csv(const std::string& path);

}  // namespace lid
