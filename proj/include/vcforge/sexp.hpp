#pragma once

#include <string>

#include "vcforge/term.hpp"

namespace vcforge {

// Debug S-expression surface for terms. Grammar (whitespace separated):
//
//   term := (var IDENT) | (const IDENT) | (app term term)
//         | (abs IDENT ty term) | (let IDENT term term)
//         | (case term branch+) | (tuple term term+)
//         | (num INTEGER) | (str STRING)
//   branch := (pattern term)
//   pattern := (pvar IDENT) | (pwild) | (pcon IDENT pattern*)
//            | (ptuple pattern pattern+) | (pas IDENT pattern)
//   ty := (tyvar IDENT) | (tycon IDENT ty*) | (tyarrow ty ty)
//       | (tytuple ty ty+)
//
// IDENT is dot-qualified [A-Za-z_][A-Za-z0-9_']* segments. STRING is
// double-quoted with escapes \" \\ \n \t \r. print/parse round-trip
// exactly (structural equality).

std::string term_to_sexp(const TermPtr& t);
TermPtr term_from_sexp(const std::string& text);  // throws ParseError

std::string ty_to_sexp(const TyPtr& t);
std::string pattern_to_sexp(const PatternPtr& p);

}  // namespace vcforge
