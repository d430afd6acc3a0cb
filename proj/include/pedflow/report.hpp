#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "pedflow/aggregate.hpp"

namespace pedflow {

/// Round to 6 significant digits; every numeric report field goes through this.
double round_sig6(double v);
/// "%.6g", or an empty string for an unset value.
std::string format_sig6(std::optional<double> v);

/// Header: id,rho,t_in,t_out,omega,psi,omega_straight,xi_x,xi_y,var_x,var_y,gamma,lambda,pi,flags
void write_pedestrian_csv(std::span<const PedestrianMetrics> metrics, std::ostream& out);

/// Flat JSON object; unset values are null.
std::string aggregate_json(const AggregateReport& report, int indent = 2);
/// key,value rows.
void write_aggregate_csv(const AggregateReport& report, std::ostream& out);

std::string analysis_json(const Analysis& analysis, int indent = 2);

std::string comparison_json(const DesignComparison& comparison, int indent = 2);
/// field,before,after,delta rows followed by a verdict row.
void write_comparison_csv(const DesignComparison& comparison, std::ostream& out);

}  // namespace pedflow
