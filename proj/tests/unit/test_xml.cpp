#include <doctest.h>

#include "vcforge/xml.hpp"

using namespace vcforge;

TEST_CASE("attributes, nesting, and self-closing elements") {
  auto root = parse_xml(R"(<?xml version="1.0"?>
<corpus>
  <theory name="T">
    <import name="U"/>
    <goal name="g"><const name="true"/></goal>
  </theory>
</corpus>)");
  CHECK(root.tag == "corpus");
  REQUIRE(root.children.size() == 1);
  const auto& th = root.children[0];
  CHECK(th.tag == "theory");
  CHECK(th.required_attr("name") == "T");
  REQUIRE(th.children.size() == 2);
  CHECK(th.children[0].tag == "import");
  CHECK(th.children[1].children[0].required_attr("name") == "true");
  CHECK(th.loc.line == 3);
}

TEST_CASE("named entities and numeric references decode in attribute values") {
  auto root = parse_xml(R"(<str value="a &lt; b &amp;&amp; c &gt; d &quot;&apos; &#65;&#x41;"/>)");
  CHECK(root.required_attr("value") == "a < b && c > d \"' AA");
}

TEST_CASE("numeric references produce UTF-8") {
  auto root = parse_xml(R"(<str value="&#955;&#x2200;"/>)");
  CHECK(root.required_attr("value") == "\xce\xbb\xe2\x88\x80");
}

TEST_CASE("comments are skipped anywhere whitespace is allowed") {
  auto root = parse_xml("<a><!-- one --><b/><!-- two\nlines --></a>");
  REQUIRE(root.children.size() == 1);
  CHECK(root.children[0].tag == "b");
}

TEST_CASE("writer escapes attribute values with named entities") {
  XmlNode n;
  n.tag = "str";
  n.attrs.emplace_back("value", "x < \"y\" & 'z' >");
  std::string out = write_xml(n);
  CHECK(out.find("&lt;") != std::string::npos);
  CHECK(out.find("&quot;") != std::string::npos);
  CHECK(out.find("&amp;") != std::string::npos);
  CHECK(out.find("&apos;") != std::string::npos);
  CHECK(out.find("&gt;") != std::string::npos);
  auto back = parse_xml(out);
  CHECK(back.required_attr("value") == "x < \"y\" & 'z' >");
}

TEST_CASE("write then parse preserves the tree exactly") {
  XmlNode root;
  root.tag = "corpus";
  XmlNode th;
  th.tag = "theory";
  th.attrs.emplace_back("name", "A.B");
  XmlNode g;
  g.tag = "str";
  g.attrs.emplace_back("value", "tab\there & <angle>");
  th.children.push_back(g);
  root.children.push_back(th);

  auto round = parse_xml(write_xml(root));
  REQUIRE(round.children.size() == 1);
  CHECK(round.children[0].required_attr("name") == "A.B");
  CHECK(round.children[0].children[0].required_attr("value") == "tab\there & <angle>");
}

TEST_CASE("malformed documents raise ParseError with a location") {
  CHECK_THROWS_AS(parse_xml(""), ParseError);
  CHECK_THROWS_AS(parse_xml("<a><b></a>"), ParseError);           // tag mismatch
  CHECK_THROWS_AS(parse_xml("<a>stray text</a>"), ParseError);    // character data
  CHECK_THROWS_AS(parse_xml("<a></a><b/>"), ParseError);          // trailing element
  CHECK_THROWS_AS(parse_xml("<a x=\"1\" x=\"2\"/>"), ParseError);  // duplicate attr
  CHECK_THROWS_AS(parse_xml("<a value=\"&unknown;\"/>"), ParseError);
  CHECK_THROWS_AS(parse_xml("<a"), ParseError);

  try {
    parse_xml("<a>\n  <b x='1'></c>\n</a>");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.where().line == 2);
  }
}

TEST_CASE("missing required attribute raises SchemaError") {
  auto root = parse_xml("<var/>");
  CHECK(root.attr("name") == nullptr);
  CHECK_THROWS_AS(root.required_attr("name"), SchemaError);
}
