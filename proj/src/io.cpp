#include "tcsim/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tcsim/errors.hpp"

namespace tcsim {
namespace {

const char* kind_name(PathKind k) {
  return k == PathKind::PiecewiseConstant ? "piecewise-constant" : "piecewise-linear";
}

PathKind kind_from_name(std::string_view s) {
  if (s == "piecewise-constant") return PathKind::PiecewiseConstant;
  if (s == "piecewise-linear") return PathKind::PiecewiseLinear;
  throw StructuralError("unknown path kind '" + std::string(s) + "'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_double(double v) {
  char best[40];
  std::snprintf(best, sizeof best, "%.17g", v);
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v && std::char_traits<char>::length(buf) <
                         std::char_traits<char>::length(best))
      std::memcpy(best, buf, sizeof buf);
  }
  return best;
}

std::string path_to_csv(const GridPath& p) {
  std::string out = "t,value,kind\n";
  const char* k = kind_name(p.kind());
  for (std::size_t i = 0; i < p.size(); ++i) {
    out += format_double(p.times()[i]);
    out += ',';
    out += format_double(p.values()[i]);
    out += ',';
    out += k;
    out += '\n';
  }
  return out;
}

GridPath path_from_csv(std::string_view csv) {
  std::vector<double> ts, vs;
  PathKind kind = PathKind::PiecewiseConstant;
  bool saw_kind = false;
  std::size_t pos = 0;
  bool header = true;
  while (pos < csv.size()) {
    auto eol = csv.find('\n', pos);
    if (eol == std::string_view::npos) eol = csv.size();
    std::string_view line = trim(csv.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("t,", 0) == 0) continue;  // header row
    }
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos)
      throw StructuralError("path_from_csv: expected t,value,kind rows");
    ts.push_back(std::stod(std::string(line.substr(0, c1))));
    vs.push_back(std::stod(std::string(line.substr(c1 + 1, c2 - c1 - 1))));
    kind = kind_from_name(trim(line.substr(c2 + 1)));
    saw_kind = true;
  }
  if (!saw_kind) throw StructuralError("path_from_csv: empty input");
  return GridPath(std::move(ts), std::move(vs), kind);
}

std::string path_to_json(const GridPath& p) {
  nlohmann::json j;
  j["times"] = p.times();
  j["values"] = p.values();
  j["kind"] = kind_name(p.kind());
  return j.dump();
}

GridPath path_from_json(std::string_view json) {
  const auto j = nlohmann::json::parse(json);
  return GridPath(j.at("times").get<std::vector<double>>(),
                  j.at("values").get<std::vector<double>>(),
                  kind_from_name(j.at("kind").get<std::string>()));
}

std::string breakdown_to_json(const BoundBreakdown& b) {
  nlohmann::json j;
  for (const auto& [k, v] : b.inputs) j["inputs"][k] = v;
  j["terms"] = nlohmann::json::array();
  for (const auto& [k, v] : b.terms) j["terms"].push_back({{"label", k}, {"value", v}});
  j["notes"] = b.notes;
  j["total"] = b.total;
  return j.dump();
}

std::string breakdown_to_csv(const BoundBreakdown& b) {
  std::string head, row;
  for (const auto& [k, v] : b.inputs) {
    head += k;
    head += ',';
    row += format_double(v);
    row += ',';
  }
  for (const auto& [k, v] : b.terms) {
    head += k;
    head += ',';
    row += format_double(v);
    row += ',';
  }
  head += "total\n";
  row += format_double(b.total);
  row += '\n';
  return head + row;
}

KvConfig parse_kv_text(std::string_view text) {
  KvConfig cfg;
  std::size_t pos = 0;
  int lineno = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string val(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    cfg[key] = val;
    if (eol == text.size()) break;
  }
  return cfg;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace tcsim
