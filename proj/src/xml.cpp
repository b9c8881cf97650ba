#include "vcforge/xml.hpp"

#include <cctype>

namespace vcforge {

const std::string* XmlNode::attr(const std::string& name) const {
  for (const auto& [k, v] : attrs)
    if (k == name) return &v;
  return nullptr;
}

const std::string& XmlNode::required_attr(const std::string& name) const {
  const std::string* v = attr(name);
  if (!v)
    throw SchemaError(loc, "<" + tag + "> is missing required attribute '" + name + "'");
  return *v;
}

namespace {

struct XmlParser {
  const std::string& src;
  size_t pos = 0;
  size_t line = 1, col = 1;

  explicit XmlParser(const std::string& s) : src(s) {}

  SourceLoc loc() const { return {line, col}; }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(loc(), msg); }

  bool eof() const { return pos >= src.size(); }
  char peek() const { return src[pos]; }

  char advance() {
    char c = src[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  bool consume(const std::string& s) {
    if (src.compare(pos, s.size(), s) != 0) return false;
    for (size_t i = 0; i < s.size(); ++i) advance();
    return true;
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  void skip_misc() {  // whitespace, comments, processing instructions
    for (;;) {
      skip_ws();
      if (consume("<!--")) {
        while (!eof() && !consume("-->")) advance();
        continue;
      }
      if (src.compare(pos, 2, "<?") == 0) {
        while (!eof() && !consume("?>")) advance();
        continue;
      }
      break;
    }
  }

  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
           c == '.' || c == ':';
  }

  std::string name() {
    if (eof() || !(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_'))
      fail("expected name");
    std::string out;
    while (!eof() && name_char(peek())) out += advance();
    return out;
  }

  std::string entity() {
    // called after '&'
    std::string ent;
    while (!eof() && peek() != ';') {
      ent += advance();
      if (ent.size() > 10) fail("unterminated entity reference");
    }
    if (eof()) fail("unterminated entity reference");
    advance();  // ';'
    if (ent == "lt") return "<";
    if (ent == "gt") return ">";
    if (ent == "amp") return "&";
    if (ent == "quot") return "\"";
    if (ent == "apos") return "'";
    if (!ent.empty() && ent[0] == '#') {
      unsigned long code = 0;
      try {
        code = (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                   ? std::stoul(ent.substr(2), nullptr, 16)
                   : std::stoul(ent.substr(1), nullptr, 10);
      } catch (...) {
        fail("bad character reference &" + ent + ";");
      }
      // encode as UTF-8
      std::string out;
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
      return out;
    }
    fail("unknown entity &" + ent + ";");
  }

  std::string attr_value() {
    if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
    char quote = advance();
    std::string out;
    while (!eof() && peek() != quote) {
      if (peek() == '<') fail("'<' in attribute value");
      if (peek() == '&') {
        advance();
        out += entity();
      } else {
        out += advance();
      }
    }
    if (eof()) fail("unterminated attribute value");
    advance();
    return out;
  }

  XmlNode element() {
    SourceLoc start = loc();
    if (!consume("<")) fail("expected element");
    XmlNode node;
    node.loc = start;
    node.tag = name();
    for (;;) {
      skip_ws();
      if (eof()) fail("unterminated element <" + node.tag + ">");
      if (consume("/>")) return node;
      if (consume(">")) break;
      std::string key = name();
      for (const auto& [k, v] : node.attrs)
        if (k == key) fail("duplicate attribute '" + key + "'");
      skip_ws();
      if (!consume("=")) fail("expected '=' after attribute name");
      skip_ws();
      node.attrs.emplace_back(key, attr_value());
    }
    // children
    for (;;) {
      skip_misc();
      if (eof()) fail("unterminated element <" + node.tag + ">");
      if (consume("</")) {
        std::string close = name();
        if (close != node.tag)
          fail("mismatched close tag </" + close + "> for <" + node.tag + ">");
        skip_ws();
        if (!consume(">")) fail("malformed close tag");
        return node;
      }
      if (peek() == '<') {
        node.children.push_back(element());
        continue;
      }
      fail("character data is not allowed inside <" + node.tag + ">");
    }
  }

  XmlNode parse() {
    skip_misc();
    if (eof()) fail("empty document");
    XmlNode root = element();
    skip_misc();
    if (!eof()) fail("trailing content after root element");
    return root;
  }
};

void escape_attr_into(const std::string& s, std::string& out) {
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
}

void write_node(const XmlNode& n, std::string& out, int depth) {
  out.append(static_cast<size_t>(depth) * 2, ' ');
  out += '<';
  out += n.tag;
  for (const auto& [k, v] : n.attrs) {
    out += ' ';
    out += k;
    out += "=\"";
    escape_attr_into(v, out);
    out += '"';
  }
  if (n.children.empty()) {
    out += "/>\n";
    return;
  }
  out += ">\n";
  for (const auto& c : n.children) write_node(c, out, depth + 1);
  out.append(static_cast<size_t>(depth) * 2, ' ');
  out += "</";
  out += n.tag;
  out += ">\n";
}

}  // namespace

XmlNode parse_xml(const std::string& text) {
  XmlParser p(text);
  return p.parse();
}

std::string write_xml(const XmlNode& root) {
  std::string out;
  write_node(root, out, 0);
  return out;
}

}  // namespace vcforge
