#include "substatic/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "substatic/errors.hpp"

namespace substatic {

namespace {

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(v);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Parser {
  std::string source;
  int line = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::config_parse, source + ":" + std::to_string(line) + ": " + msg);
  }

  double number(const std::string& key, const std::string& v) const {
    double x = 0.0;
    const char* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end) fail("'" + key + "' expects a number, got '" + v + "'");
    return x;
  }

  int integer(const std::string& key, const std::string& v) const {
    int x = 0;
    const char* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end) fail("'" + key + "' expects an integer, got '" + v + "'");
    return x;
  }
};

}  // namespace

const std::vector<std::string>& identity_registry() {
  static const std::vector<std::string> names = {"main_integral_identity", "alexandrov", "heintze_karcher",
                                                 "volume_balance", "magnanini_poggesi"};
  return names;
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  RunConfig cfg;
  cfg.source = source;
  Parser ps{source, 0};
  std::string section;
  std::set<std::string> seen;
  std::string raw;
  bool c_given = false;
  int shape_line = 0;
  std::string shape_name;

  while (std::getline(in, raw)) {
    ++ps.line;
    const auto hash = raw.find('#');
    std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') ps.fail("unterminated section header");
      section = lower(trim(text.substr(1, text.size() - 2)));
      if (section != "model" && section != "problem" && section != "run") ps.fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) ps.fail("expected 'key = value'");
    if (section.empty()) ps.fail("key outside of a section");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) ps.fail("empty key");
    if (value.empty()) ps.fail("empty value for '" + key + "'");
    if (!seen.insert(section + "." + key).second) ps.fail("duplicate key '" + key + "' in [" + section + "]");

    ModelSpec& m = cfg.problem.model;
    if (section == "model") {
      if (key == "family") {
        try {
          m.family = family_from_string(lower(value));
        } catch (const Error&) {
          ps.fail("unknown family '" + value + "'");
        }
        if (m.family == Family::custom_profile) ps.fail("custom_profile needs a programmatic jet callback");
      } else if (key == "n") {
        m.dimension = ps.integer(key, value);
      } else if (key == "m") {
        m.mass = ps.number(key, value);
      } else if (key == "q") {
        m.charge = ps.number(key, value);
      } else if (key == "K") {
        m.ambient_curvature = ps.number(key, value);
      } else if (key == "c") {
        m.cross_section_constant = ps.number(key, value);
      } else {
        ps.fail("unknown key '" + key + "' in [model]");
      }
    } else if (section == "problem") {
      Problem& p = cfg.problem;
      if (key == "kind") {
        const std::string k = lower(value);
        if (k == "radial") p.kind = Problem::Kind::radial;
        else if (k == "fem") p.kind = Problem::Kind::fem;
        else ps.fail("kind must be 'radial' or 'fem'");
      } else if (key == "inner") {
        const std::string k = lower(value);
        if (k == "center") {
          p.domain.inner = RadialDomain::Inner::center;
        } else if (k == "horizon") {
          p.domain.inner = RadialDomain::Inner::horizon;
        } else {
          p.domain.inner = RadialDomain::Inner::radius;
          p.domain.inner_coord = ps.number(key, value);
        }
      } else if (key == "outer") {
        p.domain.outer_coord = ps.number(key, value);
      } else if (key == "c_inner") {
        if (lower(value) == "auto") {
          p.auto_c = true;
        } else {
          p.auto_c = false;
          p.c_inner = ps.number(key, value);
        }
        c_given = true;
      } else if (key == "shape") {
        shape_name = lower(value);
        shape_line = ps.line;
        if (shape_name == "disk") p.shape.kind = DomainShape::Kind::disk;
        else if (shape_name == "ellipse") p.shape.kind = DomainShape::Kind::ellipse;
        else if (shape_name == "square") p.shape.kind = DomainShape::Kind::square;
        else ps.fail("shape must be disk, ellipse or square");
      } else if (key == "a") {
        p.shape.a = ps.number(key, value);
      } else if (key == "b") {
        p.shape.b = ps.number(key, value);
      } else {
        ps.fail("unknown key '" + key + "' in [problem]");
      }
    } else {
      if (key == "resolutions" || key == "nodes") {
        if (key == "nodes" && seen.count("run.resolutions")) ps.fail("'nodes' and 'resolutions' are exclusive");
        if (key == "resolutions" && seen.count("run.nodes")) ps.fail("'nodes' and 'resolutions' are exclusive");
        cfg.resolutions.clear();
        for (const auto& item : split_list(value)) {
          const int r = ps.integer(key, item);
          if (r <= 0) ps.fail("resolutions must be positive");
          cfg.resolutions.push_back(r);
        }
        if (!std::is_sorted(cfg.resolutions.begin(), cfg.resolutions.end()) ||
            std::adjacent_find(cfg.resolutions.begin(), cfg.resolutions.end()) != cfg.resolutions.end()) {
          ps.fail("resolutions must be strictly increasing");
        }
      } else if (key == "identities") {
        cfg.identities.clear();
        if (lower(value) == "all") continue;
        for (const auto& item : split_list(value)) {
          const auto& reg = identity_registry();
          if (std::find(reg.begin(), reg.end(), item) == reg.end()) ps.fail("unknown identity '" + item + "'");
          cfg.identities.push_back(item);
        }
      } else if (key == "tol") {
        const double t = ps.number(key, value);
        if (!(t > 0.0)) ps.fail("tol must be positive");
        cfg.tolerance = t;
      } else if (key == "out") {
        cfg.out_dir = value;
      } else if (key == "brendle_grid") {
        cfg.brendle_grid = ps.integer(key, value);
        if (cfg.brendle_grid < 16) ps.fail("brendle_grid must be at least 16");
      } else if (key == "field_points") {
        cfg.field_points = ps.integer(key, value);
        if (cfg.field_points < 0) ps.fail("field_points must be nonnegative");
      } else {
        ps.fail("unknown key '" + key + "' in [run]");
      }
    }
  }

  ps.line = std::max(ps.line, 1);
  if (cfg.resolutions.empty()) ps.fail("[run] needs 'resolutions' or 'nodes'");
  Problem& p = cfg.problem;
  if (p.kind == Problem::Kind::fem) {
    ps.line = std::max(shape_line, 1);
    if (shape_name.empty()) ps.fail("fem problems need a 'shape'");
    if (!(p.shape.a > 0.0)) ps.fail("shape needs a > 0");
    if (p.shape.kind == DomainShape::Kind::ellipse && !(p.shape.b > 0.0)) ps.fail("ellipse needs b > 0");
    if (p.shape.kind == DomainShape::Kind::disk) p.shape.b = p.shape.a;
  } else if (c_given && p.domain.inner != RadialDomain::Inner::horizon) {
    ps.fail("'c_inner' only applies to inner = horizon");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read config '" + path + "'");
  return parse_config(in, path);
}

}  // namespace substatic
