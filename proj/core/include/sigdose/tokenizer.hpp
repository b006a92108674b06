#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sigdose {

enum class TokenKind { Word, Number, Punct };

/// A token over the original text. `start`/`end` are byte offsets into the
/// input; `text` is the lowercased covered substring and `key` is what the
/// lexicon is queried with ("tablet(s)" has key "tablet", "one(1)" has key
/// "one").
struct Token {
  std::string text;
  std::string key;
  std::size_t start = 0;
  std::size_t end = 0;
  TokenKind kind = TokenKind::Word;
};

/// Splits on whitespace and punctuation. Keeps numeric composites such as
/// "1-2", "1/2", "0.25" and "(1.5)" in one token, as well as parenthesized
/// restatements glued to a word ("one(1)") and dotted abbreviations ("p.o.").
/// Letter/digit boundaries split ("50mg" -> "50", "mg"; "q4h" -> "q", "4", "h").
std::vector<Token> tokenize(std::string_view text);

std::string to_lower(std::string_view text);

}  // namespace sigdose
