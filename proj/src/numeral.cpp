#include "vcforge/numeral.hpp"

#include <cctype>
#include <stdexcept>

namespace vcforge {

Numeral Numeral::parse(const std::string& text) {
  size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    neg = text[i] == '-';
    ++i;
  }
  if (i >= text.size()) throw std::invalid_argument("empty numeral");
  for (size_t j = i; j < text.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(text[j])))
      throw std::invalid_argument("bad numeral: " + text);
  while (i + 1 < text.size() && text[i] == '0') ++i;  // strip leading zeros
  std::string digits = text.substr(i);
  Numeral n;
  if (digits == "0")
    n.text_ = "0";
  else
    n.text_ = neg ? "-" + digits : digits;
  return n;
}

bool Numeral::operator<(const Numeral& o) const {
  bool an = negative(), bn = o.negative();
  if (an != bn) return an;
  std::string a = an ? text_.substr(1) : text_;
  std::string b = bn ? o.text_.substr(1) : o.text_;
  bool mag_less =
      a.size() != b.size() ? a.size() < b.size() : a < b;  // same-width lexicographic
  if (a == b) return false;
  return an ? !mag_less : mag_less;
}

}  // namespace vcforge
