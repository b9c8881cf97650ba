#include "vcforge/complicate.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>

#include "vcforge/errors.hpp"

namespace vcforge {

namespace {

// The scan is lexical: a tiny Why3-shaped tokenizer (nested comments,
// string literals, words, punctuation) plus delimiter balance. Annotation
// recognition then works on the token stream, so nothing inside a comment
// or string can start or end a span.

struct Tok {
  enum Kind { Word, Punct };
  Kind kind;
  std::string text;
  size_t start = 0;
  size_t end = 0;
  size_t depth = 0;      // ()[]{} nesting at the token
  bool in_spec = false;  // inside a contract clause block
  size_t line = 0;
  bool first_on_line = false;
};

bool word_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

const std::set<std::string>& contract_keywords() {
  static const std::set<std::string> kws = {"requires", "ensures", "invariant",
                                            "variant",  "raises",  "returns",
                                            "reads",    "writes",  "diverges"};
  return kws;
}

// Keywords that begin a new top-level declaration and therefore terminate a
// lemma's formula. `let` and `end` can also occur inside formulas; they only
// count when they open a line at delimiter depth zero, which is how
// declarations sit in practice.
const std::set<std::string>& decl_keywords() {
  static const std::set<std::string> kws = {
      "lemma",     "axiom",  "goal",   "function", "predicate", "inductive",
      "type",      "constant", "val",  "let",      "use",       "clone",
      "module",    "theory", "end",    "exception", "meta",     "scope",
      "import",    "export"};
  return kws;
}

std::vector<Tok> lex(const std::string& src) {
  std::vector<Tok> out;
  std::vector<std::pair<char, size_t>> stack;  // open delimiter, offset
  size_t i = 0;
  size_t line = 0;
  size_t last_tok_line = 0;
  bool any_tok = false;

  auto push = [&](Tok::Kind kind, size_t start, size_t end) {
    Tok t;
    t.kind = kind;
    t.text = src.substr(start, end - start);
    t.start = start;
    t.end = end;
    t.depth = stack.size();
    t.line = line;
    t.first_on_line = !any_tok || line > last_tok_line;
    any_tok = true;
    last_tok_line = line;
    out.push_back(std::move(t));
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '(' && i + 1 < src.size() && src[i + 1] == '*') {
      size_t open = i;
      size_t depth = 1;
      i += 2;
      while (i < src.size() && depth > 0) {
        if (src[i] == '(' && i + 1 < src.size() && src[i + 1] == '*') {
          ++depth;
          i += 2;
        } else if (src[i] == '*' && i + 1 < src.size() && src[i + 1] == ')') {
          --depth;
          i += 2;
        } else {
          if (src[i] == '\n') ++line;
          ++i;
        }
      }
      if (depth > 0) throw LexError(open, "unterminated comment");
      continue;
    }
    if (c == '"') {
      size_t open = i;
      ++i;
      while (i < src.size() && src[i] != '"') {
        if (src[i] == '\\') {
          if (i + 1 >= src.size()) throw LexError(open, "unterminated string");
          i += 2;
        } else {
          if (src[i] == '\n') ++line;
          ++i;
        }
      }
      if (i >= src.size()) throw LexError(open, "unterminated string");
      ++i;
      continue;
    }
    if (word_start(c)) {
      size_t start = i;
      while (i < src.size() && word_char(src[i])) ++i;
      push(Tok::Word, start, i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = i;
      while (i < src.size() && (word_char(src[i]) || src[i] == '.')) ++i;
      push(Tok::Word, start, i);
      continue;
    }
    if (c == '(' || c == '[' || c == '{') {
      push(Tok::Punct, i, i + 1);
      stack.emplace_back(c, i);
      ++i;
      continue;
    }
    if (c == ')' || c == ']' || c == '}') {
      char want = c == ')' ? '(' : c == ']' ? '[' : '{';
      if (stack.empty() || stack.back().first != want)
        throw LexError(i, std::string("unbalanced '") + c + "'");
      stack.pop_back();
      push(Tok::Punct, i, i + 1);
      out.back().depth = stack.size();  // closer sits at its opener's depth
      ++i;
      continue;
    }
    push(Tok::Punct, i, i + 1);
    ++i;
  }
  if (!stack.empty())
    throw LexError(stack.back().second,
                   std::string("unclosed '") + stack.back().first + "'");

  // Contract clauses: the brace group directly after a contract keyword is
  // a specification, and so is anything nested within it.
  std::vector<bool> spec_stack;
  for (size_t j = 0; j < out.size(); ++j) {
    bool inside = !spec_stack.empty() && spec_stack.back();
    out[j].in_spec = inside;
    const std::string& t = out[j].text;
    if (out[j].kind == Tok::Punct && (t == "(" || t == "[" || t == "{")) {
      bool spec = inside;
      if (t == "{" && j > 0 && out[j - 1].kind == Tok::Word &&
          contract_keywords().count(out[j - 1].text))
        spec = true;
      spec_stack.push_back(spec);
      out[j].in_spec = inside || spec;
    } else if (out[j].kind == Tok::Punct && (t == ")" || t == "]" || t == "}")) {
      spec_stack.pop_back();
    }
  }
  return out;
}

size_t line_start(const std::string& src, size_t pos) {
  while (pos > 0 && src[pos - 1] != '\n') --pos;
  return pos;
}

bool ws_only(const std::string& src, size_t from, size_t to) {
  for (size_t i = from; i < to; ++i)
    if (src[i] != ' ' && src[i] != '\t' && src[i] != '\r') return false;
  return true;
}

// When the annotation is the only content of its line(s), grow the span to
// cover the indentation and the trailing newline so the erased unit takes
// its whole line along.
void claim_whole_lines(const std::string& src, SourceSpan& span) {
  size_t ls = line_start(src, span.start_byte);
  if (!ws_only(src, ls, span.start_byte)) return;
  size_t k = span.end_byte;
  while (k < src.size() && (src[k] == ' ' || src[k] == '\t' || src[k] == '\r')) ++k;
  if (k < src.size() && src[k] != '\n') return;
  if (k < src.size()) ++k;  // the newline
  span.start_byte = ls;
  span.end_byte = k;
}

}  // namespace

const char* annotation_kind_name(AnnotationKind kind) {
  switch (kind) {
    case AnnotationKind::Assert: return "assert";
    case AnnotationKind::LemmaDecl: return "lemma";
    case AnnotationKind::LemmaApplication: return "apply";
  }
  return "assert";
}

std::optional<AnnotationKind> annotation_kind_from_name(const std::string& name) {
  if (name == "assert") return AnnotationKind::Assert;
  if (name == "lemma") return AnnotationKind::LemmaDecl;
  if (name == "apply") return AnnotationKind::LemmaApplication;
  return std::nullopt;
}

std::vector<SourceSpan> find_annotations(const std::string& src) {
  std::vector<Tok> toks = lex(src);
  std::vector<SourceSpan> spans;
  size_t claimed = 0;  // byte offset up to which the source is spoken for

  auto emit = [&](size_t start, size_t end, AnnotationKind kind) {
    SourceSpan s{start, end, kind};
    claim_whole_lines(src, s);
    spans.push_back(s);
    claimed = s.end_byte;
  };

  for (size_t j = 0; j < toks.size(); ++j) {
    const Tok& t = toks[j];
    if (t.start < claimed || t.kind != Tok::Word) continue;

    if (t.text == "assert" && !t.in_spec) {
      if (j + 1 >= toks.size() || toks[j + 1].text != "{") continue;
      size_t k = j + 1;
      size_t depth = 0;
      for (; k < toks.size(); ++k) {
        if (toks[k].text == "{") ++depth;
        if (toks[k].text == "}" && --depth == 0) break;
      }
      if (k >= toks.size()) continue;
      size_t end = toks[k].end;
      if (k + 1 < toks.size() && toks[k + 1].text == ";") end = toks[++k].end;
      emit(t.start, end, AnnotationKind::Assert);
      continue;
    }

    if (t.text == "lemma" && t.depth == 0) {
      if (j + 2 >= toks.size() || toks[j + 1].kind != Tok::Word ||
          toks[j + 2].text != ":")
        continue;
      size_t k = j + 3;
      size_t end = toks[j + 2].end;
      for (; k < toks.size(); ++k) {
        const Tok& u = toks[k];
        if (u.kind == Tok::Word && u.depth == 0 && u.first_on_line &&
            decl_keywords().count(u.text))
          break;
        end = u.end;
      }
      if (end == toks[j + 2].end) continue;  // no formula to erase
      emit(t.start, end, AnnotationKind::LemmaDecl);
      continue;
    }

    if (t.text == "apply" && !t.in_spec) {
      if (j + 1 >= toks.size() || toks[j + 1].kind != Tok::Word) continue;
      size_t k = j + 1;
      size_t end = 0;
      for (; k < toks.size(); ++k) {
        const Tok& u = toks[k];
        if (u.text == ";" && u.depth == t.depth) {
          end = u.end;
          break;
        }
        if (u.kind == Tok::Word && u.depth == 0 && u.first_on_line &&
            decl_keywords().count(u.text))
          break;
      }
      if (end == 0) end = toks[k - 1].end;  // hint ran to a boundary, no ';'
      emit(t.start, end, AnnotationKind::LemmaApplication);
      continue;
    }
  }
  return spans;
}

std::string erase(const std::string& src, const std::vector<SourceSpan>& spans,
                  const EraseOptions& opts) {
  std::vector<SourceSpan> sorted = spans;
  std::sort(sorted.begin(), sorted.end(),
            [](const SourceSpan& a, const SourceSpan& b) {
              return a.start_byte < b.start_byte;
            });
  size_t prev_end = 0;
  for (const auto& s : sorted) {
    if (s.end_byte < s.start_byte || s.end_byte > src.size())
      throw SpanMismatch("span [" + std::to_string(s.start_byte) + ", " +
                         std::to_string(s.end_byte) + ") leaves the source");
    if (s.start_byte < prev_end)
      throw SpanMismatch("span at byte " + std::to_string(s.start_byte) +
                         " overlaps the previous one");
    prev_end = s.end_byte;
  }

  if (opts.splice_only) {
    std::string out;
    size_t i = 0;
    for (const auto& s : sorted) {
      out.append(src, i, s.start_byte - i);
      i = s.end_byte;
    }
    out.append(src, i, src.size() - i);
    return out;
  }

  // Line-aware splice: a line whose non-whitespace content was entirely
  // erased disappears, everything else is kept byte for byte.
  std::string out;
  std::string line;
  bool touched = false;
  size_t si = 0;
  auto flush = [&](bool with_newline) {
    bool drop = touched && ws_only(line, 0, line.size());
    if (!drop) {
      out += line;
      if (with_newline) out += '\n';
    }
    line.clear();
    touched = false;
  };
  for (size_t i = 0; i < src.size(); ++i) {
    while (si < sorted.size() && sorted[si].end_byte <= i) ++si;
    bool covered = si < sorted.size() && sorted[si].start_byte <= i;
    if (covered) {
      touched = true;
      // A newline consumed together with a whole covered line still ends a
      // line; only a span that started mid-line keeps joining lines.
      if (src[i] == '\n' && line.empty()) touched = false;
      continue;
    }
    if (src[i] == '\n')
      flush(true);
    else
      line += src[i];
  }
  if (!line.empty() || touched) flush(false);
  return out;
}

}  // namespace vcforge
