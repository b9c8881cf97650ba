#pragma once

#include <optional>
#include <string>
#include <vector>

namespace vcforge {

// Proof-simplifying annotations in Why3-style surface source. Each kind can
// be erased without affecting what the generated conditions claim; erasing
// them removes the hints that make the conditions easy.
enum class AnnotationKind {
  Assert,            // statement-position `assert { formula }[;]`
  LemmaDecl,         // top-level `lemma name : formula`
  LemmaApplication,  // `apply name [with terms];` hint (pattern is
                     // best-effort; the construct has no single fixed shape)
};

const char* annotation_kind_name(AnnotationKind kind);  // "assert"/"lemma"/"apply"
std::optional<AnnotationKind> annotation_kind_from_name(const std::string& name);

// Byte range [start_byte, end_byte) of one annotation. Spans cover the
// whole balanced syntactic unit plus a trailing `;` where present; when the
// annotation is the only content of its line(s) the span also swallows the
// indentation and trailing newline, so erasing it removes whole lines.
struct SourceSpan {
  size_t start_byte = 0;
  size_t end_byte = 0;
  AnnotationKind kind = AnnotationKind::Assert;
};

// Scans Why3-style source for annotation spans, skipping comments (nested
// (* *)) and string literals. Asserts inside contract clauses (requires,
// ensures, invariant, ...) are specifications, not hints, and are never
// reported. Throws LexError on unbalanced delimiters or unterminated
// comments/strings.
std::vector<SourceSpan> find_annotations(const std::string& src);

struct EraseOptions {
  // Plain byte splice: keep remnants of partially-erased lines exactly as
  // the splice leaves them instead of collapsing whitespace-only leftovers.
  bool splice_only = false;
};

// Removes the span bytes from src. Every byte outside the spans is kept,
// except that a line reduced to pure whitespace by the erasure is dropped
// entirely (unless splice_only). Throws SpanMismatch when spans overlap or
// leave the source bounds.
std::string erase(const std::string& src, const std::vector<SourceSpan>& spans,
                  const EraseOptions& opts = {});

}  // namespace vcforge
