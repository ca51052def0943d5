#include "vls/common/xml.hpp"

#include "vls/common/error.hpp"
#include "vls/common/text.hpp"

#include <boost/property_tree/xml_parser.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>

namespace vls::xml {

namespace pt = boost::property_tree;

std::shared_ptr<const Document> loadDocument(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("file not found: " + path.string());
  auto doc = std::make_shared<Document>();
  doc->path = path;
  try {
    pt::read_xml(path.string(), doc->tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(path.string(), e.line(), e.message());
  }
  return doc;
}

Element::Element(std::shared_ptr<const Document> doc, const Tree* node, std::string name)
    : doc_(std::move(doc)), node_(node), name_(std::move(name)) {}

std::string Element::describe() const {
  std::string s = "<" + name_;
  if (auto id = attr("id")) s += " id=\"" + *id + "\"";
  return s + "> in " + doc_->path.string();
}

void Element::fail(const std::string& what) const { throw ConfigError(describe() + ": " + what); }

std::optional<std::string> Element::attr(std::string_view key) const {
  const auto attrs = node_->get_child_optional("<xmlattr>");
  if (!attrs) return std::nullopt;
  const auto v = attrs->get_optional<std::string>(pt::ptree::path_type(std::string(key), '\0'));
  if (!v) return std::nullopt;
  return *v;
}

std::string Element::requireAttr(std::string_view key) const {
  auto v = attr(key);
  if (!v) fail("missing attribute '" + std::string(key) + "'");
  return *v;
}

std::optional<double> Element::optNumber(std::string_view key) const {
  const auto v = attr(key);
  if (!v) return std::nullopt;
  const auto tok = splitWhitespace(*v);
  std::optional<double> d;
  if (tok.size() == 1) d = parseDouble(tok[0]);
  if (!d) fail("attribute '" + std::string(key) + "' is not a number: '" + *v + "'");
  return d;
}

double Element::number(std::string_view key, double fallback) const { return optNumber(key).value_or(fallback); }

double Element::requireNumber(std::string_view key) const {
  const auto d = optNumber(key);
  if (!d) fail("missing attribute '" + std::string(key) + "'");
  return *d;
}

std::optional<long long> Element::optInteger(std::string_view key) const {
  const auto v = attr(key);
  if (!v) return std::nullopt;
  const auto tok = splitWhitespace(*v);
  std::optional<long long> i;
  if (tok.size() == 1) i = parseInt(tok[0]);
  if (!i) fail("attribute '" + std::string(key) + "' is not an integer: '" + *v + "'");
  return i;
}

long long Element::integer(std::string_view key, long long fallback) const { return optInteger(key).value_or(fallback); }

std::optional<bool> Element::optBoolean(std::string_view key) const {
  const auto v = attr(key);
  if (!v) return std::nullopt;
  if (*v == "true" || *v == "1") return true;
  if (*v == "false" || *v == "0") return false;
  fail("attribute '" + std::string(key) + "' is not a boolean: '" + *v + "'");
}

bool Element::boolean(std::string_view key, bool fallback) const { return optBoolean(key).value_or(fallback); }

std::optional<Vec3> Element::optVec3(std::string_view key) const {
  const auto v = attr(key);
  if (!v) return std::nullopt;
  const auto tok = splitWhitespace(*v);
  if (tok.size() != 3) fail("attribute '" + std::string(key) + "' needs three numbers: '" + *v + "'");
  Vec3 out;
  for (int a = 0; a < 3; ++a) {
    const auto d = parseDouble(tok[a]);
    if (!d) fail("attribute '" + std::string(key) + "' is not numeric: '" + *v + "'");
    out[a] = *d;
  }
  return out;
}

std::vector<Element> Element::children(std::string_view tag) const {
  std::vector<Element> out;
  for (const auto& kv : *node_) {
    if (kv.first == tag) out.emplace_back(doc_, &kv.second, kv.first);
  }
  return out;
}

std::optional<Element> Element::child(std::string_view tag) const {
  auto all = children(tag);
  if (all.empty()) return std::nullopt;
  if (all.size() > 1) spdlog::warn("{}: more than one <{}>, using the first", describe(), tag);
  return all.front();
}

void Element::warnUnknownChildren(std::initializer_list<std::string_view> known) const {
  for (const auto& kv : *node_) {
    if (kv.first == "<xmlattr>" || kv.first == "<xmlcomment>") continue;
    if (std::find(known.begin(), known.end(), kv.first) == known.end()) {
      spdlog::warn("{}: ignoring unknown element <{}>", describe(), kv.first);
    }
  }
}

void Element::warnUnknownAttributes(std::initializer_list<std::string_view> known) const {
  const auto attrs = node_->get_child_optional("<xmlattr>");
  if (!attrs) return;
  for (const auto& kv : *attrs) {
    if (std::find(known.begin(), known.end(), kv.first) == known.end()) {
      spdlog::warn("{}: ignoring unknown attribute '{}'", describe(), kv.first);
    }
  }
}

std::vector<Element> topLevel(const std::shared_ptr<const Document>& doc, std::string_view tag) {
  std::vector<Element> out;
  const Tree* root = &doc->tree;
  if (const auto wrapped = doc->tree.get_child_optional("document")) root = &*wrapped;
  for (const auto& kv : *root) {
    if (kv.first == tag) out.emplace_back(doc, &kv.second, kv.first);
  }
  return out;
}

std::filesystem::path resolvePath(const std::string& relative, const std::filesystem::path& from) {
  std::filesystem::path p(relative);
  if (p.is_absolute()) return p;
  return from.parent_path() / p;
}

Reference parseReference(const std::string& text, const std::filesystem::path& from) {
  Reference ref;
  const auto hash = text.find('#');
  const std::string filePart = text.substr(0, hash);
  if (hash != std::string::npos) ref.id = text.substr(hash + 1);
  ref.file = filePart.empty() ? from : resolvePath(filePart, from);
  return ref;
}

Element resolveReference(const Reference& ref, std::string_view tag, const Element& referrer, std::string_view attribute) {
  if (!std::filesystem::exists(ref.file)) {
    throw ConfigError(referrer.file().string() + ": attribute '" + std::string(attribute) + "' of <" + referrer.name() +
                      "> refers to missing file " + ref.file.string());
  }
  const auto doc = loadDocument(ref.file);
  const auto candidates = topLevel(doc, tag);
  if (ref.id.empty()) {
    if (candidates.size() == 1) return candidates.front();
    throw ConfigError(referrer.file().string() + ": attribute '" + std::string(attribute) + "' must name an id, " +
                      ref.file.string() + " holds " + std::to_string(candidates.size()) + " <" + std::string(tag) + "> elements");
  }
  for (const auto& c : candidates) {
    if (c.attr("id") == ref.id) return c;
  }
  throw ConfigError(referrer.file().string() + ": attribute '" + std::string(attribute) + "' refers to unknown <" +
                    std::string(tag) + " id=\"" + ref.id + "\"> in " + ref.file.string());
}

}  // namespace vls::xml
