#include "chronosr/xml_lite.hpp"

#include <cctype>

namespace chronosr {

const std::string* XmlElement::attribute(std::string_view attr_name) const {
  for (const auto& [name, value] : attributes) {
    if (name == attr_name) return &value;
  }
  return nullptr;
}

std::string XmlElement::inner_text() const {
  std::string out;
  for (const XmlNode& child : children) {
    if (child.is_text)
      out += child.text;
    else
      out += child.element.inner_text();
  }
  return out;
}

const XmlElement* XmlElement::find(std::string_view element_name) const {
  if (name == element_name) return this;
  for (const XmlNode& child : children) {
    if (child.is_text) continue;
    if (const XmlElement* hit = child.element.find(element_name)) return hit;
  }
  return nullptr;
}

namespace {

struct XmlCursor {
  std::string_view text;
  std::size_t pos = 0;

  bool done() const { return pos >= text.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos + ahead < text.size() ? text[pos + ahead] : '\0';
  }
  bool starts_with(std::string_view word) const {
    return text.substr(pos, word.size()) == word;
  }
  bool try_consume(std::string_view word) {
    if (starts_with(word)) {
      pos += word.size();
      return true;
    }
    return false;
  }
  void skip_whitespace() {
    while (!done() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos); }
};

bool is_name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' ||
         c == '-' || c == '.';
}

std::string read_name(XmlCursor& c) {
  if (!is_name_start(c.peek())) c.fail("expected XML name");
  std::string name;
  while (is_name_char(c.peek())) name += c.text[c.pos++];
  return name;
}

void append_entity(XmlCursor& c, std::string& out) {
  // Called just past '&'.
  const std::size_t semi = c.text.find(';', c.pos);
  if (semi == std::string_view::npos || semi - c.pos > 8) c.fail("unterminated entity");
  const std::string_view body = c.text.substr(c.pos, semi - c.pos);
  if (body == "amp") out += '&';
  else if (body == "lt") out += '<';
  else if (body == "gt") out += '>';
  else if (body == "quot") out += '"';
  else if (body == "apos") out += '\'';
  else if (!body.empty() && body[0] == '#') {
    long code = 0;
    try {
      code = (body.size() > 1 && (body[1] == 'x' || body[1] == 'X'))
                 ? std::stol(std::string(body.substr(2)), nullptr, 16)
                 : std::stol(std::string(body.substr(1)), nullptr, 10);
    } catch (const std::exception&) {
      c.fail("bad numeric character reference");
    }
    // UTF-8 encode.
    if (code < 0 || code > 0x10FFFF) c.fail("character reference out of range");
    if (code < 0x80) {
      out += static_cast<char>(code);
    } else if (code < 0x800) {
      out += static_cast<char>(0xC0 | (code >> 6));
      out += static_cast<char>(0x80 | (code & 0x3F));
    } else if (code < 0x10000) {
      out += static_cast<char>(0xE0 | (code >> 12));
      out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (code & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (code >> 18));
      out += static_cast<char>(0x80 | ((code >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (code & 0x3F));
    }
  } else {
    c.fail("unknown entity '&" + std::string(body) + ";'");
  }
  c.pos = semi + 1;
}

std::string read_attribute_value(XmlCursor& c) {
  const char quote = c.peek();
  if (quote != '"' && quote != '\'') c.fail("expected quoted attribute value");
  ++c.pos;
  std::string value;
  while (!c.done() && c.peek() != quote) {
    if (c.peek() == '&') {
      ++c.pos;
      append_entity(c, value);
    } else {
      value += c.text[c.pos++];
    }
  }
  if (c.done()) c.fail("unterminated attribute value");
  ++c.pos;
  return value;
}

// Skips comments, processing instructions and DOCTYPE. Returns false when
// nothing was skipped.
bool skip_misc(XmlCursor& c) {
  if (c.try_consume("<!--")) {
    const std::size_t end = c.text.find("-->", c.pos);
    if (end == std::string_view::npos) c.fail("unterminated comment");
    c.pos = end + 3;
    return true;
  }
  if (c.try_consume("<?")) {
    const std::size_t end = c.text.find("?>", c.pos);
    if (end == std::string_view::npos) c.fail("unterminated processing instruction");
    c.pos = end + 2;
    return true;
  }
  if (c.starts_with("<!DOCTYPE") || c.starts_with("<!doctype")) {
    // Tolerated without an internal subset.
    const std::size_t end = c.text.find('>', c.pos);
    if (end == std::string_view::npos) c.fail("unterminated DOCTYPE");
    c.pos = end + 1;
    return true;
  }
  return false;
}

XmlElement parse_element(XmlCursor& c);

void parse_content(XmlCursor& c, XmlElement& parent) {
  std::string text;
  auto flush_text = [&]() {
    if (!text.empty()) {
      XmlNode node;
      node.is_text = true;
      node.text = std::move(text);
      parent.children.push_back(std::move(node));
      text.clear();
    }
  };

  while (true) {
    if (c.done()) c.fail("unexpected end inside element <" + parent.name + ">");
    if (c.peek() == '<') {
      if (c.starts_with("</")) {
        flush_text();
        c.pos += 2;
        const std::string name = read_name(c);
        if (name != parent.name)
          c.fail("mismatched closing tag </" + name + "> for <" + parent.name + ">");
        c.skip_whitespace();
        if (!c.try_consume(">")) c.fail("expected '>' in closing tag");
        return;
      }
      if (c.try_consume("<![CDATA[")) {
        const std::size_t end = c.text.find("]]>", c.pos);
        if (end == std::string_view::npos) c.fail("unterminated CDATA section");
        text.append(c.text.substr(c.pos, end - c.pos));
        c.pos = end + 3;
        continue;
      }
      if (skip_misc(c)) continue;
      flush_text();
      XmlNode node;
      node.element = parse_element(c);
      parent.children.push_back(std::move(node));
      continue;
    }
    if (c.peek() == '&') {
      ++c.pos;
      append_entity(c, text);
      continue;
    }
    text += c.text[c.pos++];
  }
}

XmlElement parse_element(XmlCursor& c) {
  if (!c.try_consume("<")) c.fail("expected '<'");
  XmlElement element;
  element.name = read_name(c);
  while (true) {
    c.skip_whitespace();
    if (c.try_consume("/>")) return element;
    if (c.try_consume(">")) break;
    const std::string attr = read_name(c);
    c.skip_whitespace();
    if (!c.try_consume("=")) c.fail("expected '=' after attribute name");
    c.skip_whitespace();
    element.attributes.emplace_back(attr, read_attribute_value(c));
  }
  parse_content(c, element);
  return element;
}

}  // namespace

XmlElement xml_parse(std::string_view text) {
  XmlCursor c{text};
  c.try_consume("\xEF\xBB\xBF");  // BOM
  while (true) {
    c.skip_whitespace();
    if (c.done()) c.fail("no root element");
    if (!skip_misc(c)) break;
  }
  XmlElement root = parse_element(c);
  while (!c.done()) {
    c.skip_whitespace();
    if (c.done()) break;
    if (!skip_misc(c)) c.fail("content after root element");
  }
  return root;
}

}  // namespace chronosr
