#include "substatic/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "substatic/errors.hpp"

namespace substatic::report {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json number(double x) { return std::isfinite(x) ? json(x) : json(fmt(x)); }

namespace {

const char* kind_name(Problem::Kind k) { return k == Problem::Kind::radial ? "radial" : "fem"; }

const char* inner_name(RadialDomain::Inner i) {
  switch (i) {
    case RadialDomain::Inner::horizon: return "horizon";
    case RadialDomain::Inner::radius: return "radius";
    case RadialDomain::Inner::center: return "center";
  }
  return "?";
}

const char* shape_name(DomainShape::Kind k) {
  switch (k) {
    case DomainShape::Kind::disk: return "disk";
    case DomainShape::Kind::ellipse: return "ellipse";
    case DomainShape::Kind::square: return "square";
    case DomainShape::Kind::polygon: return "polygon";
  }
  return "?";
}

// nlohmann prints the shortest round-trip form; re-emit numbers with %.17g.
void emit(std::ostringstream& os, const json& j, int depth) {
  const std::string pad(2 * (depth + 1), ' '), end_pad(2 * depth, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) { os << "{}"; return; }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json(it.key()).dump() << ": ";
        emit(os, it.value(), depth + 1);
      }
      os << "\n" << end_pad << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) { os << "[]"; return; }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        emit(os, j[i], depth + 1);
      }
      os << "\n" << end_pad << "]";
      return;
    }
    case json::value_t::number_float:
      os << fmt(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::string dump(const json& j) {
  std::ostringstream os;
  emit(os, j, 0);
  os << "\n";
  return os.str();
}

json to_json(const ConditionResult& r) {
  json j = {{"ok", r.ok}, {"witness_coord", number(r.witness_coord)}, {"witness_value", number(r.witness_value)}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json to_json(const ConditionReport& r) {
  return {{"H0", to_json(r.h0)},
          {"H1", to_json(r.h1)},
          {"H1_prime", to_json(r.h1prime)},
          {"H2", to_json(r.h2)},
          {"H3", to_json(r.h3)},
          {"H4", to_json(r.h4)},
          {"substatic", r.substatic_ok},
          {"min_q", number(r.min_q)},
          {"min_q_coord", number(r.min_q_coord)},
          {"max_abs_q", number(r.max_abs_q)},
          {"implication_ok", r.implication_ok},
          {"grid_size", r.grid_size}};
}

json to_json(const HorizonData& h) {
  return {{"location", number(h.location)},
          {"h", number(h.h)},
          {"surface_gravity", number(h.surface_gravity)},
          {"integrand_limit", number(h.integrand_limit)},
          {"integrand_limit_oracle", number(h.integrand_limit_oracle)},
          {"oracle_rel_diff", number(h.oracle_rel_diff)}};
}

json to_json(const CDetails& c) {
  return {{"c", number(c.c)},
          {"c_closed", number(c.c_closed)},
          {"literal_quotient", number(c.literal)},
          {"literal_closed", number(c.literal_closed)},
          {"literal_oracle", number(c.literal_oracle)},
          {"ratio_vs_closed", number(c.ratio_vs_closed)}};
}

json to_json(const HorizonPositivity& h) {
  return {{"value", number(h.value)},
          {"positive", h.positive},
          {"minus_ricci_normal", number(h.minus_ricci_normal)},
          {"static_rel_diff", number(h.static_rel_diff)}};
}

json to_json(const Diagnostics& d) {
  return {{"min_interior_u", number(d.min_interior_u)},
          {"min_u_location", number(d.min_u_location)},
          {"max_boundary_normal_derivative", number(d.max_boundary_normal_derivative)},
          {"positivity_ok", d.positivity_ok},
          {"hopf_ok", d.hopf_ok},
          {"under_resolved", d.under_resolved},
          {"warnings", d.warnings}};
}

json to_json(const IdentityReport& r) {
  json terms = json::object();
  for (const auto& [k, v] : r.terms) terms[k] = number(v);
  json nonneg = json::object();
  for (const auto& [k, ok] : r.nonnegative) nonneg[k] = ok;
  json j = {{"identity", r.name},
            {"resolution", r.resolution},
            {"lhs", number(r.lhs)},
            {"rhs", number(r.rhs)},
            {"residual_abs", number(r.residual_abs)},
            {"residual_rel", number(r.residual_rel)},
            {"tolerance", number(r.tolerance)},
            {"residual_ok", r.residual_ok},
            {"terms", terms},
            {"nonnegative", nonneg},
            {"umbilical", r.umbilical},
            {"passed", r.passed()}};
  if (r.has_inequality) j["inequality_ok"] = r.inequality_ok;
  return j;
}

json to_json(const RadialPrimitives& p) {
  return {{"n", p.n},
          {"horizon", p.horizon},
          {"c", number(p.c)},
          {"horizon_flux", number(p.horizon_flux)},
          {"horizon_limit", number(p.horizon_limit)},
          {"f_outer", number(p.f_outer)},
          {"area_outer", number(p.area_outer)},
          {"H_outer", number(p.H_outer)},
          {"vol_f", number(p.vol_f)},
          {"flux", number(p.flux)},
          {"bulk_traceless", number(p.bulk_traceless)},
          {"bulk_q", number(p.bulk_q)},
          {"nodes", p.nodes}};
}

json to_json(const FemPrimitives& p) {
  return {{"area", number(p.area)},
          {"perimeter", number(p.perimeter)},
          {"bulk_traceless", number(p.bulk_traceless)},
          {"int_g", number(p.int_g)},
          {"int_g2", number(p.int_g2)},
          {"int_g2H", number(p.int_g2H)},
          {"int_invH", number(p.int_invH)},
          {"int_hk_deficit", number(p.int_hk_deficit)},
          {"l2_g2", number(p.l2_g2)},
          {"triangles", p.triangles}};
}

json to_json(const ConvergenceReport& r) {
  json problem = {{"kind", kind_name(r.problem.kind)}};
  if (r.problem.kind == Problem::Kind::radial) {
    problem["family"] = to_string(r.problem.model.family);
    problem["n"] = r.problem.model.dimension;
    problem["inner"] = inner_name(r.problem.domain.inner);
    problem["inner_coord"] = number(r.problem.domain.inner_coord);
    problem["outer_coord"] = number(r.problem.domain.outer_coord);
    problem["c_used"] = number(r.c_used);
  } else {
    problem["shape"] = shape_name(r.problem.shape.kind);
    problem["a"] = number(r.problem.shape.a);
    problem["b"] = number(r.problem.shape.b);
  }
  json levels = json::array();
  for (const auto& lv : r.levels) {
    json ids = json::array();
    for (const auto& id : lv.identities) ids.push_back(to_json(id));
    json l = {{"resolution", lv.resolution}, {"flux", number(lv.flux)}, {"hopf", to_json(lv.hopf)}, {"identities", ids}};
    if (r.problem.kind == Problem::Kind::fem) {
      l["energy"] = number(lv.energy);
      l["primitives"] = to_json(lv.fem);
    } else {
      l["primitives"] = to_json(lv.radial);
    }
    levels.push_back(l);
  }
  json ext = json::array();
  for (const auto& id : r.extrapolated) ext.push_back(to_json(id));
  json orders = json::object();
  for (const auto& [k, v] : r.residual_orders) orders[k] = number(v);
  json j = {{"problem", problem},
            {"levels", levels},
            {"flux_order", number(r.flux_order)},
            {"flux_extrapolated", number(r.flux_extrapolated)},
            {"extrapolated", ext},
            {"residual_orders", orders},
            {"warnings", r.warnings}};
  if (r.problem.kind == Problem::Kind::fem) j["energy_monotone"] = r.energy_monotone;
  return j;
}

std::string identities_csv(const std::vector<IdentityReport>& reports) {
  std::vector<std::string> keys;
  for (const auto& r : reports) {
    for (const auto& [k, v] : r.terms) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
  }
  std::ostringstream os;
  os << "identity,resolution,lhs,rhs,residual_abs,residual_rel,tolerance,passed";
  for (const auto& k : keys) os << "," << csv_cell(k);
  os << "\n";
  for (const auto& r : reports) {
    os << csv_cell(r.name) << "," << csv_cell(r.resolution) << "," << fmt(r.lhs) << "," << fmt(r.rhs) << ","
       << fmt(r.residual_abs) << "," << fmt(r.residual_rel) << "," << fmt(r.tolerance) << ","
       << (r.passed() ? "true" : "false");
    for (const auto& k : keys) {
      os << ",";
      for (const auto& [tk, v] : r.terms) {
        if (tk == k) {
          os << fmt(v);
          break;
        }
      }
    }
    os << "\n";
  }
  return os.str();
}

std::string sweep_csv(const ConvergenceReport& r) {
  std::ostringstream os;
  os << "identity,resolution,spacing,lhs,rhs,residual_abs,residual_rel,residual_order,flux,passed\n";
  const bool radial = r.problem.kind == Problem::Kind::radial;
  auto spacing = [&](int res) { return radial ? 1.0 / (res - 1) : 1.0 / res; };
  if (r.levels.empty()) return os.str();
  const std::size_t nid = r.levels.front().identities.size();
  for (std::size_t i = 0; i < nid; ++i) {
    for (std::size_t l = 0; l < r.levels.size(); ++l) {
      const auto& lv = r.levels[l];
      const auto& id = lv.identities[i];
      std::string order;
      if (l > 0) {
        const double prev = r.levels[l - 1].identities[i].residual_abs;
        const double ratio = spacing(r.levels[l - 1].resolution) / spacing(lv.resolution);
        // both levels at roundoff: the scheme is exact here, no order to observe
        const bool noise = r.levels[l - 1].identities[i].residual_rel <= 1e-12 && id.residual_rel <= 1e-12;
        order = (!noise && prev > 0.0 && id.residual_abs > 0.0)
                    ? fmt(std::log(prev / id.residual_abs) / std::log(ratio))
                    : "inf";
      }
      os << csv_cell(id.name) << "," << lv.resolution << "," << fmt(spacing(lv.resolution)) << "," << fmt(id.lhs)
         << "," << fmt(id.rhs) << "," << fmt(id.residual_abs) << "," << fmt(id.residual_rel) << "," << order << ","
         << fmt(lv.flux) << "," << (id.passed() ? "true" : "false") << "\n";
    }
  }
  for (const auto& id : r.extrapolated) {
    os << csv_cell(id.name) << ",extrapolated,0," << fmt(id.lhs) << "," << fmt(id.rhs) << "," << fmt(id.residual_abs)
       << "," << fmt(id.residual_rel) << ",," << fmt(r.flux_extrapolated) << "," << (id.passed() ? "true" : "false")
       << "\n";
  }
  return os.str();
}

std::string field_csv(const std::vector<FieldRow>& rows) {
  std::ostringstream os;
  os << "coord,rho,X,X1,X2,X3,X4,X5,X6,div_closed,div_numeric,traceless_term,q_term\n";
  for (const auto& r : rows) {
    os << fmt(r.coord) << "," << fmt(r.rho) << "," << fmt(r.closed.X);
    for (double t : r.closed.terms) os << "," << fmt(t);
    os << "," << fmt(r.closed.div_closed) << "," << fmt(r.div_numeric) << "," << fmt(r.closed.traceless_term) << ","
       << fmt(r.closed.q_term) << "\n";
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(ErrorCode::io, "write failed for '" + path + "'");
}

}  // namespace substatic::report
