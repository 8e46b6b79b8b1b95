#pragma once

#include <string>

namespace statsub {

// A finished analysis document.  The canonical form is the JSON text (schema
// version 1); the markdown rendering is derived from it section by section so
// the two formats always carry the same content.
struct Report {
  std::string json_text;
};

enum class ReportFormat { Json, Markdown };

// Json returns the stored text verbatim (it is already the canonical
// serialization, so repeated renders are byte-identical); Markdown renders
// headings, bullet lists and tables from the same document.
std::string render_report(const Report& report, ReportFormat format);

}  // namespace statsub
