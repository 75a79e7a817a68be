#include "namevo/text.hpp"

#include <algorithm>
#include <cctype>

namespace namevo {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Decodes one codepoint starting at i; advances i past it.
char32_t decode_one(std::string_view s, std::size_t& i) {
  const auto byte = [&](std::size_t k) -> unsigned {
    return static_cast<unsigned char>(s[k]);
  };
  unsigned b0 = byte(i);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  auto cont = [&](std::size_t k) {
    return k < s.size() && (byte(k) & 0xC0) == 0x80;
  };
  if ((b0 & 0xE0) == 0xC0 && cont(i + 1)) {
    char32_t cp = ((b0 & 0x1F) << 6) | (byte(i + 1) & 0x3F);
    i += 2;
    return cp < 0x80 ? kReplacement : cp;
  }
  if ((b0 & 0xF0) == 0xE0 && cont(i + 1) && cont(i + 2)) {
    char32_t cp = ((b0 & 0x0F) << 12) | ((byte(i + 1) & 0x3F) << 6) | (byte(i + 2) & 0x3F);
    i += 3;
    return cp < 0x800 ? kReplacement : cp;
  }
  if ((b0 & 0xF8) == 0xF0 && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
    char32_t cp = ((b0 & 0x07) << 18) | ((byte(i + 1) & 0x3F) << 12) |
                  ((byte(i + 2) & 0x3F) << 6) | (byte(i + 3) & 0x3F);
    i += 4;
    return (cp < 0x10000 || cp > 0x10FFFF) ? kReplacement : cp;
  }
  ++i;
  return kReplacement;
}

}  // namespace

std::vector<char32_t> decode_utf8(std::string_view text) {
  std::vector<char32_t> cps;
  cps.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) cps.push_back(decode_one(text, i));
  return cps;
}

void decode_utf8_with_offsets(std::string_view text, std::vector<char32_t>& cps,
                              std::vector<std::size_t>& offsets) {
  cps.clear();
  offsets.clear();
  std::size_t i = 0;
  while (i < text.size()) {
    offsets.push_back(i);
    cps.push_back(decode_one(text, i));
  }
  offsets.push_back(text.size());
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(const std::vector<char32_t>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) append_utf8(out, cp);
  return out;
}

char32_t fold_case(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  if (cp < 0x80) return cp;
  // Latin-1 supplement (except the multiplication sign).
  if ((cp >= 0x00C0 && cp <= 0x00D6) || (cp >= 0x00D8 && cp <= 0x00DE)) return cp + 0x20;
  // Latin Extended-A: upper/lower pairs alternate.
  if (cp >= 0x0100 && cp <= 0x0137) {
    if (cp == 0x0130) return U'i';  // dotted capital I
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if (cp >= 0x0139 && cp <= 0x0148) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x014A && cp <= 0x0177) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp == 0x0178) return 0x00FF;  // Y with diaeresis
  if (cp >= 0x0179 && cp <= 0x017E) return (cp % 2 == 1) ? cp + 1 : cp;
  // Greek.
  if (cp == 0x0386) return 0x03AC;
  if (cp >= 0x0388 && cp <= 0x038A) return cp + 0x25;
  if (cp == 0x038C) return 0x03CC;
  if (cp == 0x038E || cp == 0x038F) return cp + 0x3F;
  if (cp >= 0x0391 && cp <= 0x03A1) return cp + 0x20;
  if (cp >= 0x03A3 && cp <= 0x03AB) return cp + 0x20;
  // Cyrillic.
  if (cp >= 0x0400 && cp <= 0x040F) return cp + 0x50;
  if (cp >= 0x0410 && cp <= 0x042F) return cp + 0x20;
  return cp;
}

bool is_upper(char32_t cp) { return fold_case(cp) != cp; }

bool is_ascii_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= U'0' && cp <= U'9') || (cp >= U'A' && cp <= U'Z') ||
           (cp >= U'a' && cp <= U'z');
  }
  if (cp == 0x00D7 || cp == 0x00F7) return false;
  if (cp >= 0x00C0 && cp <= 0x024F) return true;   // Latin supplements
  if (cp >= 0x0370 && cp <= 0x03FF) return true;   // Greek
  if (cp >= 0x0400 && cp <= 0x052F) return true;   // Cyrillic
  if (cp >= 0x0530 && cp <= 0x058F) return true;   // Armenian
  if (cp >= 0x05D0 && cp <= 0x05EA) return true;   // Hebrew letters
  if (cp >= 0x0620 && cp <= 0x064A) return true;   // Arabic letters
  if (cp >= 0x3040 && cp <= 0x30FF) return true;   // Kana
  if (cp >= 0x4E00 && cp <= 0x9FFF) return true;   // CJK
  if (cp >= 0xAC00 && cp <= 0xD7AF) return true;   // Hangul
  return false;
}

bool is_space(char32_t cp) {
  switch (cp) {
    case U' ':
    case U'\t':
    case U'\n':
    case U'\r':
    case U'\f':
    case U'\v':
    case 0x00A0:
    case 0x202F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_opening_quote(char32_t cp) {
  switch (cp) {
    case U'"':
    case U'\'':
    case 0x2018:  // left single quote
    case 0x201C:  // left double quote
    case 0x00AB:  // «
    case 0x2039:  // ‹
      return true;
    default:
      return false;
  }
}

std::string trim(std::string_view s) {
  // ASCII whitespace only; normalize_whitespace handles Unicode spaces.
  auto is_ws = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  std::size_t b = 0, e = s.size();
  while (b < e && is_ws(s[b])) ++b;
  while (e > b && is_ws(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string normalize_whitespace(std::string_view s) {
  std::vector<char32_t> cps = decode_utf8(s);
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  bool seen_content = false;
  for (char32_t cp : cps) {
    if (is_space(cp)) {
      pending_space = seen_content;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    seen_content = true;
    append_utf8(out, cp);
  }
  return out;
}

std::string fold(std::string_view s) {
  std::vector<char32_t> cps = decode_utf8(s);
  for (char32_t& cp : cps) cp = fold_case(cp);
  return encode_utf8(cps);
}

bool iequals(std::string_view a, std::string_view b) { return fold(a) == fold(b); }

bool starts_with_upper(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = 0;
  char32_t cp = decode_one(s, i);
  return is_upper(cp);
}

bool contains_ascii_digit(std::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

std::vector<std::string> split_any(std::string_view s, std::string_view seps) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || seps.find(s[i]) != std::string_view::npos) {
      parts.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

std::optional<int> first_number_3_4(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] >= '0' && s[i] <= '9') {
      std::size_t j = i;
      while (j < s.size() && s[j] >= '0' && s[j] <= '9') ++j;
      std::size_t len = j - i;
      if (len == 3 || len == 4) {
        int value = 0;
        for (std::size_t k = i; k < j; ++k) value = value * 10 + (s[k] - '0');
        return value;
      }
      i = j;
    } else {
      ++i;
    }
  }
  return std::nullopt;
}

bool contains_standalone_number(std::string_view s, std::string_view digits) {
  if (digits.empty()) return false;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] >= '0' && s[i] <= '9') {
      std::size_t j = i;
      while (j < s.size() && s[j] >= '0' && s[j] <= '9') ++j;
      if (s.substr(i, j - i) == digits) return true;
      i = j;
    } else {
      ++i;
    }
  }
  return false;
}

std::string remove_year_runs(std::string_view s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] >= '0' && s[i] <= '9') {
      std::size_t j = i;
      while (j < s.size() && s[j] >= '0' && s[j] <= '9') ++j;
      std::size_t len = j - i;
      if (len != 3 && len != 4) out.append(s.substr(i, len));
      i = j;
    } else {
      out.push_back(s[i]);
      ++i;
    }
  }
  return out;
}

std::string percent_encode_filename(std::string_view s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    unsigned char b = static_cast<unsigned char>(c);
    bool safe = (b >= 'A' && b <= 'Z') || (b >= 'a' && b <= 'z') ||
                (b >= '0' && b <= '9') || b == '_' || b == '-' || b == '.' ||
                b == '(' || b == ')' || b == ',';
    if (safe && !(b == '.' && out.empty())) {
      out.push_back(c);
    } else {
      out.push_back('%');
      out.push_back(hex[b >> 4]);
      out.push_back(hex[b & 0xF]);
    }
  }
  return out;
}

bool starts_with_icase(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i]))) {
      return false;
    }
  }
  return true;
}

}  // namespace namevo
