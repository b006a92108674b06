#include "sigdose/tokenizer.hpp"

#include <cctype>

namespace sigdose {

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// Bytes >= 0x80 belong to multi-byte UTF-8 sequences; treat them as word
// characters so offsets never split a code point.
bool is_word_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) != 0 || u >= 0x80;
}

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  char at(std::size_t i) const { return i < text_.size() ? text_[i] : '\0'; }

  // digits, optional ",ddd" groups, optional ".digits"; also ".5"
  std::size_t number_end(std::size_t i) const {
    std::size_t j = i;
    while (is_digit(at(j))) ++j;
    while (j > i && at(j) == ',' && is_digit(at(j + 1)) && is_digit(at(j + 2)) &&
           is_digit(at(j + 3)) && !is_digit(at(j + 4))) {
      j += 4;
    }
    if (at(j) == '.' && is_digit(at(j + 1))) {
      ++j;
      while (is_digit(at(j))) ++j;
    }
    return j;
  }

  bool starts_number(std::size_t i) const {
    return is_digit(at(i)) || (at(i) == '.' && is_digit(at(i + 1)));
  }

  // "(" number ")" starting at i; returns end offset or i when absent.
  std::size_t paren_number_end(std::size_t i) const {
    if (at(i) != '(' || !starts_number(i + 1)) return i;
    std::size_t j = number_end(i + 1);
    return at(j) == ')' ? j + 1 : i;
  }

 private:
  std::string_view text_;
};

}  // namespace

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  Scanner s(text);
  std::size_t i = 0;
  const std::size_t n = text.size();

  auto emit = [&](std::size_t start, std::size_t end, std::size_t key_end, TokenKind kind) {
    Token t;
    t.text = to_lower(text.substr(start, end - start));
    t.key = to_lower(text.substr(start, key_end - start));
    t.start = start;
    t.end = end;
    t.kind = kind;
    tokens.push_back(std::move(t));
  };

  while (i < n) {
    char c = text[i];
    if (is_space(c)) {
      ++i;
      continue;
    }

    if (s.starts_number(i)) {
      std::size_t j = s.number_end(i);
      // numeric composites: 1-2, 1/2, 1/2-1
      while ((s.at(j) == '-' || s.at(j) == '/') && s.starts_number(j + 1)) {
        j = s.number_end(j + 1);
      }
      emit(i, j, j, TokenKind::Number);
      i = j;
      continue;
    }

    if (c == '(') {
      std::size_t j = s.paren_number_end(i);
      if (j != i) {
        emit(i, j, j, TokenKind::Number);
        i = j;
        continue;
      }
    }

    if (is_word_char(c)) {
      std::size_t j = i;
      std::size_t segment_start = i;
      while (is_word_char(s.at(j)) || (s.at(j) == '\'' && is_word_char(s.at(j + 1)) && j > i)) ++j;
      // dotted abbreviations made of single letters: p.o., b.i.d., a.m.
      bool dotted = false;
      while (j - segment_start == 1 && s.at(j) == '.' && is_word_char(s.at(j + 1))) {
        segment_start = j + 1;
        j = segment_start;
        while (is_word_char(s.at(j))) ++j;
        dotted = true;
      }
      if (dotted && s.at(j) == '.') ++j;

      std::size_t key_end = j;
      if (text.substr(j, 3) == "(s)") {
        j += 3;
      } else if (text.substr(j, 4) == "(es)") {
        j += 4;
      } else {
        std::size_t k = s.paren_number_end(j);
        if (k != j) j = k;
      }
      emit(i, j, key_end, TokenKind::Word);
      i = j;
      continue;
    }

    emit(i, i + 1, i + 1, TokenKind::Punct);
    ++i;
  }
  return tokens;
}

}  // namespace sigdose
