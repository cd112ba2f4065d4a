// Copyright 2026 The Hostility Detection Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace hostility {

// Text that has been through clean_text. Only clean_text constructs one.
class CleanText {
 public:
  const std::string& value() const { return value_; }
  bool operator==(const CleanText&) const = default;

 private:
  explicit CleanText(std::string v) : value_(std::move(v)) {}
  std::string value_;
  friend CleanText clean_text(std::string_view text);
};

namespace textprep {

inline constexpr char32_t kDanda = U'।';

inline std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  const auto len = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(p, i, len, c);
    out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
  }
  return out;
}

inline std::string encode_utf8(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size() * 3);
  for (char32_t c : cps) {
    uint8_t buf[4];
    int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, static_cast<UChar32>(c));
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

inline bool is_space(char32_t c) {
  return u_isUWhiteSpace(static_cast<UChar32>(c)) != 0;
}

// Letter, mark or number in any script. Marks are included because
// Devanagari vowel signs and the virama are combining marks.
inline bool is_alnum(char32_t c) {
  const auto mask = U_GET_GC_MASK(static_cast<UChar32>(c));
  return (mask & (U_GC_L_MASK | U_GC_M_MASK | U_GC_N_MASK)) != 0;
}

inline bool is_ascii_alnum(char32_t c) {
  return (c >= U'0' && c <= U'9') || (c >= U'a' && c <= U'z') ||
         (c >= U'A' && c <= U'Z');
}

// Emoji, emoticon-pictographs, flags (regional indicators) and the emoji
// joiners/modifiers/tags. ASCII is excluded: digits, '#' and '*' carry the
// Emoji property only as keycap bases.
inline bool is_emoji(char32_t c) {
  if (c < 0x80) return false;
  const auto cp = static_cast<UChar32>(c);
  return u_hasBinaryProperty(cp, UCHAR_EMOJI) ||
         u_hasBinaryProperty(cp, UCHAR_EMOJI_PRESENTATION) ||
         u_hasBinaryProperty(cp, UCHAR_EXTENDED_PICTOGRAPHIC) ||
         u_hasBinaryProperty(cp, UCHAR_EMOJI_COMPONENT) ||
         u_hasBinaryProperty(cp, UCHAR_EMOJI_MODIFIER) ||
         u_hasBinaryProperty(cp, UCHAR_REGIONAL_INDICATOR);
}

inline bool is_kept_punct(char32_t c) {
  return c == kDanda || c == U'.' || c == U'?';
}

inline char32_t ascii_lower(char32_t c) {
  return (c >= U'A' && c <= U'Z') ? c + (U'a' - U'A') : c;
}

// Length of the URL prefix (http://, https://, www.) starting at `i`, or 0.
// A prefix only counts at a word start: the preceding character must not be
// an ASCII letter or digit.
inline std::size_t url_prefix_at(std::u32string_view s, std::size_t i) {
  if (i > 0 && is_ascii_alnum(s[i - 1])) return 0;
  for (std::u32string_view prefix : {U"https://", U"http://", U"www."}) {
    if (s.size() - i < prefix.size()) continue;
    bool match = true;
    for (std::size_t k = 0; k < prefix.size() && match; ++k)
      match = ascii_lower(s[i + k]) == prefix[k];
    if (match) return prefix.size();
  }
  return 0;
}

inline bool is_handle_char(char32_t c) { return c == U'_' || is_alnum(c); }

// Step 1: every URL (maximal non-whitespace run from a URL prefix) -> "http".
inline std::u32string replace_urls(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (url_prefix_at(s, i) > 0) {
      while (i < s.size() && !is_space(s[i])) ++i;
      out += U"http";
    } else {
      out += s[i++];
    }
  }
  return out;
}

// Step 2: "@handle" and "#tag" -> a single space.
inline std::u32string blank_mentions_and_hashtags(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if ((s[i] == U'@' || s[i] == U'#') && i + 1 < s.size() &&
        is_handle_char(s[i + 1])) {
      ++i;
      while (i < s.size() && is_handle_char(s[i])) ++i;
      out += U' ';
    } else {
      out += s[i++];
    }
  }
  return out;
}

// Step 3.
inline std::u32string strip_emoji(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (char32_t c : s)
    if (!is_emoji(c)) out += c;
  return out;
}

// Step 4: keep letters/marks/numbers, whitespace, danda, '.', '?'.
inline std::u32string filter_charset(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (char32_t c : s)
    if (is_alnum(c) || is_space(c) || is_kept_punct(c)) out += c;
  return out;
}

// Step 5.
inline std::u32string collapse_whitespace(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char32_t c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += U' ';
    pending_space = false;
    out += c;
  }
  return out;
}

inline std::u32string clean_pass(std::u32string_view s) {
  return collapse_whitespace(
      filter_charset(strip_emoji(blank_mentions_and_hashtags(replace_urls(s)))));
}

}  // namespace textprep

// Runs the five-step cleaning pipeline (URLs, mentions/hashtags, emoji,
// charset, whitespace) until the output stops changing. Deleting characters
// in steps 3-4 can expose a new "www." prefix ("w!ww.x"); re-running the
// pipeline catches those, so the result is a fixed point. At most three
// passes are ever needed: after the first pass no ':', '/', '@' or '#' remain.
inline CleanText clean_text(std::string_view text) {
  std::u32string current = textprep::decode_utf8(text);
  for (int pass = 0; pass < 8; ++pass) {
    std::u32string next = textprep::clean_pass(current);
    if (next == current) break;
    current = std::move(next);
  }
  return CleanText(textprep::encode_utf8(current));
}

}  // namespace hostility
