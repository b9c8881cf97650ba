#pragma once

#include <string>
#include <vector>

#include "vcforge/errors.hpp"

namespace vcforge {

// Minimal strict XML subset used by the corpus interchange format:
// elements, attributes, comments, an optional declaration, and the five
// named entities (&lt; &gt; &amp; &quot; &apos;) plus numeric character
// references on input. Elements carry no mixed content; non-whitespace
// character data is an error. Attribute order is preserved.

struct XmlNode {
  std::string tag;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<XmlNode> children;
  SourceLoc loc;

  const std::string* attr(const std::string& name) const;
  // Attribute that must exist; throws SchemaError otherwise.
  const std::string& required_attr(const std::string& name) const;
};

XmlNode parse_xml(const std::string& text);  // throws ParseError

// Deterministic two-space-indented serialization; attribute values are
// escaped with the named entities.
std::string write_xml(const XmlNode& root);

}  // namespace vcforge
