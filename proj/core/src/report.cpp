#include "statsub/report.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "statsub/errors.hpp"

namespace statsub {

namespace {

using json = nlohmann::ordered_json;

std::string prettify(const std::string& key) {
  std::string out = key;
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

std::string scalar_text(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "-";
  return j.dump();
}

bool is_scalar(const json& j) {
  return j.is_primitive();
}

bool is_table(const json& j) {
  if (!j.is_array() || j.empty()) return false;
  for (const json& e : j)
    if (!e.is_object()) return false;
  return true;
}

void heading(std::ostream& os, int level, const std::string& text) {
  os << '\n' << std::string(static_cast<std::size_t>(std::min(level, 6)), '#') << ' ' << text
     << "\n\n";
}

void render_table(std::ostream& os, const json& rows) {
  std::vector<std::string> columns;
  for (const json& row : rows)
    for (const auto& [key, value] : row.items()) {
      (void)value;
      if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
    }
  os << '|';
  for (const std::string& c : columns) os << ' ' << prettify(c) << " |";
  os << "\n|";
  for (std::size_t i = 0; i < columns.size(); ++i) os << " --- |";
  os << '\n';
  for (const json& row : rows) {
    os << '|';
    for (const std::string& c : columns) {
      if (row.contains(c)) {
        const json& cell = row[c];
        os << ' ' << (is_scalar(cell) ? scalar_text(cell) : cell.dump()) << " |";
      } else {
        os << "  |";
      }
    }
    os << '\n';
  }
}

void render_section(std::ostream& os, const std::string& key, const json& value, int level);

void render_object_body(std::ostream& os, const json& obj, int level) {
  // Scalars first as a bullet list, then nested sections in document order.
  for (const auto& [key, value] : obj.items())
    if (is_scalar(value)) os << "- " << prettify(key) << ": " << scalar_text(value) << '\n';
  for (const auto& [key, value] : obj.items()) {
    if (is_scalar(value)) continue;
    if (value.is_array() && !is_table(value)) {
      os << "- " << prettify(key) << ": " << value.dump() << '\n';
      continue;
    }
    render_section(os, key, value, level + 1);
  }
}

void render_section(std::ostream& os, const std::string& key, const json& value, int level) {
  heading(os, level, prettify(key));
  if (value.is_object()) {
    render_object_body(os, value, level);
  } else if (is_table(value)) {
    render_table(os, value);
  } else if (value.is_array()) {
    for (const json& e : value)
      os << "- " << (is_scalar(e) ? scalar_text(e) : e.dump()) << '\n';
  } else {
    os << scalar_text(value) << '\n';
  }
}

std::string to_markdown(const json& doc) {
  std::ostringstream os;
  std::string title = "Analysis report";
  if (doc.contains("name") && doc["name"].is_string() && !doc["name"].get<std::string>().empty())
    title += ": " + doc["name"].get<std::string>();
  os << "# " << title << '\n';
  for (const auto& [key, value] : doc.items()) {
    if (key == "name") continue;
    if (is_scalar(value)) {
      os << "- " << prettify(key) << ": " << scalar_text(value) << '\n';
      continue;
    }
    render_section(os, key, value, 2);
  }
  return os.str();
}

}  // namespace

std::string render_report(const Report& report, ReportFormat format) {
  if (format == ReportFormat::Json) return report.json_text;
  json doc;
  try {
    doc = json::parse(report.json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("report document is not valid JSON: ") + e.what());
  }
  return to_markdown(doc);
}

}  // namespace statsub
