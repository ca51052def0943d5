#pragma once

#include "vls/raycast/geometry.hpp"

#include <boost/property_tree/ptree.hpp>

#include <filesystem>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vls::xml {

using Tree = boost::property_tree::ptree;

/// A parsed XML file. Kept alive by every Element that refers to it.
struct Document {
  std::filesystem::path path;
  Tree tree;
};

class Element;

/// Throws IoError when the file is missing and ParseError on malformed XML.
std::shared_ptr<const Document> loadDocument(const std::filesystem::path& path);

/// View of one element. Errors mention the file, the element and the attribute.
class Element {
public:
  Element(std::shared_ptr<const Document> doc, const Tree* node, std::string name);

  const std::string& name() const { return name_; }
  const std::filesystem::path& file() const { return doc_->path; }
  /// `<name id="...">` in file, for messages.
  std::string describe() const;

  std::optional<std::string> attr(std::string_view key) const;
  std::string requireAttr(std::string_view key) const;
  std::optional<double> optNumber(std::string_view key) const;
  double number(std::string_view key, double fallback) const;
  double requireNumber(std::string_view key) const;
  std::optional<long long> optInteger(std::string_view key) const;
  long long integer(std::string_view key, long long fallback) const;
  std::optional<bool> optBoolean(std::string_view key) const;
  bool boolean(std::string_view key, bool fallback) const;
  /// Three whitespace-separated numbers, e.g. `origin="0 0 10"`.
  std::optional<Vec3> optVec3(std::string_view key) const;

  std::vector<Element> children(std::string_view tag) const;
  std::optional<Element> child(std::string_view tag) const;
  /// Logs a warning for every child element whose tag is not listed.
  void warnUnknownChildren(std::initializer_list<std::string_view> known) const;
  /// Logs a warning for every attribute whose name is not listed.
  void warnUnknownAttributes(std::initializer_list<std::string_view> known) const;

  [[noreturn]] void fail(const std::string& what) const;

private:
  std::shared_ptr<const Document> doc_;
  const Tree* node_;
  std::string name_;
};

/// Top-level elements with the given tag, looking inside an optional `<document>` wrapper.
std::vector<Element> topLevel(const std::shared_ptr<const Document>& doc, std::string_view tag);

/// A `file#id` reference split into its resolved path and id; a bare `#id` or an
/// empty file part refers to `from` itself.
struct Reference {
  std::filesystem::path file;
  std::string id;
};
Reference parseReference(const std::string& text, const std::filesystem::path& from);

/// Resolves `relative` against the directory of `from`.
std::filesystem::path resolvePath(const std::string& relative, const std::filesystem::path& from);

/// Finds the top-level `<tag id="id">` in the referenced file; an empty id accepts a sole element.
Element resolveReference(const Reference& ref, std::string_view tag, const Element& referrer, std::string_view attribute);

}  // namespace vls::xml
