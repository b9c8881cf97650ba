#pragma once

#include <string>

namespace vcforge {

// Arbitrary-precision integer value carried by numeric literals. The
// pipeline never does arithmetic on these (constant-ness tests are
// syntactic), so the canonical decimal text is the value: optional '-',
// no leading zeros, "0" has no sign.
class Numeral {
public:
  Numeral() : text_("0") {}
  explicit Numeral(long long v) : text_(std::to_string(v)) {}

  // Parses and normalizes decimal text; throws std::invalid_argument on
  // anything that is not an optionally signed decimal integer.
  static Numeral parse(const std::string& text);

  const std::string& str() const { return text_; }
  bool negative() const { return !text_.empty() && text_[0] == '-'; }
  bool is_zero() const { return text_ == "0"; }

  bool operator==(const Numeral& o) const { return text_ == o.text_; }
  bool operator!=(const Numeral& o) const { return text_ != o.text_; }
  bool operator<(const Numeral& o) const;  // numeric order

private:
  std::string text_;
};

}  // namespace vcforge
