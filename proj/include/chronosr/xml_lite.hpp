#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chronosr/error.hpp"

namespace chronosr {

struct XmlNode;

/// A parsed element: name, attributes in document order, and mixed-content
/// children (text segments interleaved with child elements).
struct XmlElement {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<XmlNode> children;

  /// First attribute with the given name, or nullptr.
  const std::string* attribute(std::string_view attr_name) const;
  /// Concatenated text of all descendants.
  std::string inner_text() const;
  /// Depth-first search for the first descendant element with this name
  /// (the element itself included); nullptr when absent.
  const XmlElement* find(std::string_view element_name) const;
};

struct XmlNode {
  bool is_text = false;
  std::string text;     // set when is_text
  XmlElement element;   // set otherwise
};

/// Minimal non-validating parser for the XML subset TimeML uses: elements,
/// attributes, character data, CDATA, comments, processing instructions and
/// a DOCTYPE prolog, with the five predefined entities plus numeric
/// references. Throws ParseError (with byte offset) on malformed input.
XmlElement xml_parse(std::string_view text);

}  // namespace chronosr
