#pragma once

#include <map>
#include <string>
#include <string_view>

#include "tcsim/bounds.hpp"
#include "tcsim/grid_path.hpp"

namespace tcsim {

inline constexpr const char* kVersion = "tcsim 0.1.0";

// Shortest exact decimal form of a double (17 significant digits, trimmed),
// so serialized values round-trip bit-exactly.
std::string format_double(double v);

// CSV with columns t,value,kind; one row per breakpoint.
std::string path_to_csv(const GridPath& p);
GridPath path_from_csv(std::string_view csv);

// JSON record {"times": [...], "values": [...], "kind": "..."}.
std::string path_to_json(const GridPath& p);
GridPath path_from_json(std::string_view json);

std::string breakdown_to_json(const BoundBreakdown& b);
std::string breakdown_to_csv(const BoundBreakdown& b);

// Flat key=value configuration text ('#' starts a comment).
using KvConfig = std::map<std::string, std::string>;
KvConfig parse_kv_text(std::string_view text);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace tcsim
