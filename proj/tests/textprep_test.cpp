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

#include <gtest/gtest.h>

#include "fuzz_text.hpp"
#include "hostility/textprep.hpp"

namespace hostility {
namespace {

std::string clean(std::string_view s) { return clean_text(s).value(); }

TEST(CleanText, UrlBecomesHttp) {
  EXPECT_EQ(clean("देखो https://bit.ly/abc"), "देखो http");
  EXPECT_EQ(clean("www.example.com पर देखें"), "http पर देखें");
  EXPECT_EQ(clean("(HTTPS://x.y/z)"), "http");
}

TEST(CleanText, Empty) { EXPECT_EQ(clean(""), ""); }

TEST(CleanText, MentionsAndHashtagsBecomeSpace) {
  EXPECT_EQ(clean("@user भारत महान है! #proud"), "भारत महान है");
  EXPECT_EQ(clean("नमस्ते@राम जी"), "नमस्ते जी");
  EXPECT_EQ(clean("a#b"), "a");
}

TEST(CleanText, KeptPunctuationUnchanged) {
  EXPECT_EQ(clean("क्या यह सच है? हाँ।"), "क्या यह सच है? हाँ।");
  EXPECT_EQ(clean("बस. ठीक, है!"), "बस. ठीक है");
}

TEST(CleanText, EmojiAndFlagsStripped) {
  EXPECT_EQ(clean("जय 🇮🇳 हिंद 👍🏽❤️"), "जय हिंद");
  EXPECT_EQ(clean("keycap 1️⃣ done"), "keycap 1 done");
}

TEST(CleanText, UrlReplacementPrecedesCharsetFilter) {
  // Filtering first would leave "httpsa.bc".
  EXPECT_EQ(clean("see https://a.b/c"), "see http");
  EXPECT_EQ(textprep::filter_charset(U"https://a.b/c"), U"httpsa.bc");
}

TEST(CleanText, UrlExposedByDeletionIsStillReplaced) {
  EXPECT_EQ(clean("w!ww.site.in जानकारी"), "http जानकारी");
  EXPECT_EQ(clean("awww.nice"), "awww.nice");
}

TEST(CleanText, WhitespaceCollapsedAndTrimmed) {
  EXPECT_EQ(clean("  एक\t\tदो\n तीन  "), "एक दो तीन");
}

TEST(CleanText, InvalidUtf8IsDropped) {
  EXPECT_EQ(clean(std::string("ab\xff\xfe" "cd")), "abcd");
}

TEST(CleanText, NeverDeletesLettersOrDigits) {
  std::u32string all;
  for (char32_t c = 0x905; c <= 0x939; ++c) all += c;  // Devanagari letters
  for (char32_t c = U'a'; c <= U'z'; ++c) all += c;
  for (char32_t c = U'A'; c <= U'Z'; ++c) all += c;
  for (char32_t c = U'0'; c <= U'9'; ++c) all += c;
  for (char32_t c = 0x966; c <= 0x96f; ++c) all += c;  // Devanagari digits
  const std::string s = textprep::encode_utf8(all);
  EXPECT_EQ(clean(s), s);
}

TEST(CleanText, FuzzIdempotentAndClean) {
  Rng rng(2024);
  for (int i = 0; i < 20000; ++i) {
    const std::string input = fuzz::random_text(rng);
    const std::string once = clean(input);
    ASSERT_EQ(clean(once), once) << "input: " << input;
    std::string why;
    ASSERT_TRUE(fuzz::satisfies_clean_invariants(once, &why)) << why << " in '" << once << "'";
  }
}

}  // namespace
}  // namespace hostility
