#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "substatic/convergence.hpp"
#include "substatic/curvature.hpp"
#include "substatic/fields.hpp"
#include "substatic/identities.hpp"

namespace substatic::report {

using nlohmann::json;

/// %.17g; "nan", "inf", "-inf" for non-finite values.
std::string fmt(double x);

/// Non-finite doubles become strings so they survive a JSON round trip.
json number(double x);

json to_json(const ConditionResult& r);
json to_json(const ConditionReport& r);
json to_json(const HorizonData& h);
json to_json(const CDetails& c);
json to_json(const HorizonPositivity& h);
json to_json(const Diagnostics& d);
json to_json(const IdentityReport& r);
json to_json(const RadialPrimitives& p);
json to_json(const FemPrimitives& p);
json to_json(const ConvergenceReport& r);

/// Every double is written with 17 significant digits.
std::string dump(const json& j);

/// identity, resolution, lhs, rhs, residual_abs, residual_rel, tolerance, passed,
/// then one column per term key (union over the reports, first-seen order).
std::string identities_csv(const std::vector<IdentityReport>& reports);

/// One row per (identity, resolution) followed by the extrapolated rows.
std::string sweep_csv(const ConvergenceReport& r);

struct FieldRow {
  double coord = 0.0;
  double rho = 0.0;
  FieldSample closed;
  double div_numeric = 0.0;
};

std::string field_csv(const std::vector<FieldRow>& rows);

void write_file(const std::string& path, const std::string& content);

}  // namespace substatic::report
