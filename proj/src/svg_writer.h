#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace practice::svg {

using Attributes = std::vector<std::pair<std::string, std::string>>;

/// Two fixed decimals; never emits "-0.00".
std::string num(double v);
std::string escape(std::string_view text);

class Document {
 public:
  Document(double width, double height, Attributes extra = {});

  void element(std::string_view name, const Attributes& attrs);
  void text(double x, double y, std::string_view content, Attributes attrs = {});
  void open(std::string_view name, const Attributes& attrs);
  void close();

  /// Closes every open element, including the root, and returns the bytes.
  std::string finish();

 private:
  void writeAttrs(const Attributes& attrs);
  std::string out_;
  std::vector<std::string> stack_;
};

}  // namespace practice::svg
