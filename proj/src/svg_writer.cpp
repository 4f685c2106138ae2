#include "svg_writer.h"

#include <cmath>
#include <cstdio>

namespace practice::svg {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

Document::Document(double width, double height, Attributes extra) {
  out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  Attributes root = {{"xmlns", "http://www.w3.org/2000/svg"},
                     {"version", "1.1"},
                     {"width", num(width)},
                     {"height", num(height)},
                     {"viewBox", "0.00 0.00 " + num(width) + " " + num(height)}};
  root.insert(root.end(), extra.begin(), extra.end());
  open("svg", root);
  out_ += " <style>text{font-family:sans-serif;font-size:10px;fill:#333333}</style>\n";
}

void Document::writeAttrs(const Attributes& attrs) {
  for (const auto& [k, v] : attrs) {
    out_ += ' ';
    out_ += k;
    out_ += "=\"";
    out_ += escape(v);
    out_ += '"';
  }
}

void Document::element(std::string_view name, const Attributes& attrs) {
  out_ += std::string(stack_.size(), ' ');
  out_ += '<';
  out_ += name;
  writeAttrs(attrs);
  out_ += "/>\n";
}

void Document::text(double x, double y, std::string_view content, Attributes attrs) {
  out_ += std::string(stack_.size(), ' ');
  out_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\"";
  writeAttrs(attrs);
  out_ += '>';
  out_ += escape(content);
  out_ += "</text>\n";
}

void Document::open(std::string_view name, const Attributes& attrs) {
  out_ += std::string(stack_.size(), ' ');
  out_ += '<';
  out_ += name;
  writeAttrs(attrs);
  out_ += ">\n";
  stack_.emplace_back(name);
}

void Document::close() {
  std::string name = std::move(stack_.back());
  stack_.pop_back();
  out_ += std::string(stack_.size(), ' ');
  out_ += "</" + name + ">\n";
}

std::string Document::finish() {
  while (!stack_.empty()) close();
  return std::move(out_);
}

}  // namespace practice::svg
