#include <gtest/gtest.h>

#include <sstream>

#include "lexicon.hpp"
#include "variants.hpp"
#include "vpoem/error.hpp"
#include "vpoem/syllable.hpp"
#include "vpoem/utf8.hpp"

using namespace vpoem;
using testsupport::lexicon;
using testsupport::Mark;

namespace {

ToneMark to_mark(Mark m) {
  switch (m) {
    case Mark::ngang: return ToneMark::ngang;
    case Mark::huyen: return ToneMark::huyen;
    case Mark::sac: return ToneMark::sac;
    case Mark::hoi: return ToneMark::hoi;
    case Mark::nga: return ToneMark::nga;
    case Mark::nang: return ToneMark::nang;
    case Mark::none: break;
  }
  return ToneMark::none;
}

}  // namespace

TEST(Normalize, StripsCaseAndPunctuation) { EXPECT_EQ(normalize("Ta,"), "ta"); }

TEST(Normalize, PlacementStylesAgree) { EXPECT_EQ(normalize("hòa"), normalize("hoà")); }

TEST(Normalize, ComposesCombiningMarks) {
  EXPECT_EQ(normalize("ghe\xCC\x81t"), "ghét");
  EXPECT_EQ(normalize("ghét"), "ghét");
}

TEST(Normalize, EmptyAfterStrippingThrows) {
  EXPECT_THROW(normalize("..."), EmptyToken);
  EXPECT_THROW(analyze(" , "), EmptyToken);
}

TEST(Normalize, UppercaseVietnamese) {
  EXPECT_EQ(normalize("ĐƯỜNG"), "đường");
  EXPECT_EQ(normalize("Người"), "người");
}

TEST(Analyze, Ta) {
  const Syllable s = analyze("ta");
  EXPECT_EQ(s.onset, "t");
  EXPECT_EQ(s.tone, ToneMark::ngang);
  EXPECT_EQ(s.tone_class, ToneClass::even);
  EXPECT_EQ(s.pitch_register, Register::high);
  EXPECT_EQ(s.rhyme_key, "a");
}

TEST(Analyze, Menh) {
  const Syllable s = analyze("mệnh");
  EXPECT_EQ(s.onset, "m");
  EXPECT_EQ(s.tone, ToneMark::nang);
  EXPECT_EQ(s.tone_class, ToneClass::uneven);
  EXPECT_EQ(s.rhyme_key, "ênh");
}

TEST(Analyze, Nguoi) {
  const Syllable s = analyze("người");
  EXPECT_EQ(s.onset, "ng");
  EXPECT_EQ(s.tone, ToneMark::huyen);
  EXPECT_EQ(s.tone_class, ToneClass::even);
  EXPECT_EQ(s.pitch_register, Register::low);
  EXPECT_EQ(s.rhyme_key, "ươi");
}

TEST(Analyze, QuAndGiOnsets) {
  EXPECT_EQ(analyze("qua").onset, "qu");
  EXPECT_EQ(analyze("qua").rhyme_key, "a");
  EXPECT_EQ(analyze("gia").rhyme_key, "a");
  EXPECT_EQ(analyze("gì").onset, "g");
  EXPECT_EQ(analyze("gì").rhyme_key, "i");
}

TEST(Analyze, OnsetPolicyCanKeepQuAndGiInTheRhyme) {
  const OnsetPolicy plain{false, false};
  EXPECT_EQ(analyze("qua", plain).onset, "q");
  EXPECT_EQ(analyze("qua", plain).rhyme_key, "ua");
  EXPECT_EQ(analyze("gia", plain).onset, "g");
  EXPECT_EQ(analyze("gia", plain).rhyme_key, "ia");
}

TEST(Analyze, VowellessTokens) {
  for (const char* token : {"x", "2023", "brr"}) {
    const Syllable s = analyze(token);
    EXPECT_EQ(s.tone, ToneMark::none) << token;
    EXPECT_EQ(s.tone_class, ToneClass::undefined) << token;
    EXPECT_EQ(s.rhyme_key, "") << token;
    EXPECT_FALSE(s.well_formed()) << token;
  }
}

TEST(Analyze, TwoToneMarksAreMalformed) {
  EXPECT_FALSE(analyze("ta\xCC\x81\xCC\x80").well_formed());
}

TEST(Analyze, AgreesWithAnnotatedLexicon) {
  for (const auto& e : lexicon()) {
    const Syllable s = analyze(e.word);
    EXPECT_EQ(s.tone, to_mark(e.mark)) << e.word;
    if (e.malformed()) {
      EXPECT_EQ(s.tone_class, ToneClass::undefined) << e.word;
      EXPECT_EQ(s.rhyme_key, "") << e.word;
      continue;
    }
    EXPECT_EQ(s.normalized, e.word);
    EXPECT_EQ(s.onset, e.onset) << e.word;
    EXPECT_EQ(s.rhyme_key, e.rhyme_key) << e.word;
    EXPECT_EQ(s.tone_class, e.even() ? ToneClass::even : ToneClass::uneven) << e.word;
    const Register reg = e.pitch() > 0 ? Register::high : e.pitch() < 0 ? Register::low
                                                                        : Register::not_applicable;
    EXPECT_EQ(s.pitch_register, reg) << e.word;
  }
}

TEST(Analyze, RetoneReconstructsNormalized) {
  for (const auto& e : lexicon()) {
    if (e.malformed()) continue;
    const Syllable s = analyze(e.word);
    EXPECT_EQ(s.onset + retone(s.rhyme_key, s.tone), s.normalized) << e.word;
  }
}

TEST(Analyze, DecomposedSpellingsAnalyzeIdentically) {
  for (const auto& e : lexicon()) {
    const std::string nfd = testsupport::to_nfd(e.word);
    EXPECT_EQ(analyze(nfd), analyze(e.word)) << e.word;
  }
}

TEST(Analyze, PlacementInvariance) {
  EXPECT_EQ(analyze("hòa"), analyze("hoà"));
  EXPECT_EQ(analyze("thủy"), analyze("thuỷ"));
  for (const auto& e : lexicon()) {
    if (e.malformed()) continue;
    const std::size_t onset_chars = utf8::decode(e.onset).size();
    for (const auto& variant : testsupport::placement_variants(e.word, onset_chars)) {
      EXPECT_EQ(analyze(variant), analyze(e.word)) << e.word << " vs " << variant;
    }
  }
}

TEST(Analyze, RhymeKeyHasNoToneMark) {
  for (const auto& e : lexicon()) {
    if (e.malformed()) continue;
    const std::string key = analyze(e.word).rhyme_key;
    EXPECT_EQ(retone(key, ToneMark::ngang), key) << e.word;
  }
}

TEST(Analyze, ToneClassPartition) {
  for (ToneMark t : {ToneMark::ngang, ToneMark::huyen, ToneMark::sac, ToneMark::hoi, ToneMark::nga,
                     ToneMark::nang, ToneMark::none}) {
    const bool even = t == ToneMark::ngang || t == ToneMark::huyen;
    EXPECT_EQ(tone_class_of(t) == ToneClass::even, even);
    EXPECT_EQ(register_of(t) != Register::not_applicable, even);
  }
}

TEST(Rhymes, Examples) {
  EXPECT_TRUE(rhymes(analyze("ta"), analyze("là")));
  EXPECT_FALSE(rhymes(analyze("ta"), analyze("nhau")));
  EXPECT_TRUE(rhymes(analyze("thương"), analyze("đường")));
  EXPECT_FALSE(rhymes(analyze("x"), analyze("x")));
}

TEST(Rhymes, ReflexiveSymmetricTransitiveOnLexicon) {
  const auto& lex = lexicon();
  std::vector<Syllable> syl;
  for (const auto& e : lex) {
    if (!e.malformed()) syl.push_back(analyze(e.word));
  }
  for (const auto& a : syl) {
    EXPECT_TRUE(rhymes(a, a)) << a.normalized;
    for (const auto& b : syl) {
      EXPECT_EQ(rhymes(a, b), rhymes(b, a));
      if (!rhymes(a, b)) continue;
      for (const auto& c : syl) {
        if (rhymes(b, c)) EXPECT_TRUE(rhymes(a, c)) << a.normalized << b.normalized << c.normalized;
      }
    }
  }
}

TEST(Rhymes, NearRhymeTableWidensMatches) {
  std::istringstream file("# near rhymes\nau âu\nong ông\n");
  const NearRhymeTable table = NearRhymeTable::parse(file);
  EXPECT_FALSE(rhymes(analyze("dâu"), analyze("đau")));
  EXPECT_TRUE(rhymes(analyze("dâu"), analyze("đau"), &table));
  EXPECT_TRUE(rhymes(analyze("lòng"), analyze("hồng"), &table));
  EXPECT_FALSE(rhymes(analyze("lòng"), analyze("ta"), &table));
  EXPECT_FALSE(rhymes(analyze("x"), analyze("x"), &table));
}

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize_line("Trăm năm trong cõi người ta").size(), 6u);
  EXPECT_TRUE(tokenize_line("").empty());
  EXPECT_EQ(tokenize_line("Chữ tài, chữ mệnh khéo là ghét nhau").size(), 8u);
  EXPECT_EQ(tokenize_line("  ta  -  là ... ").size(), 2u);
}

TEST(Tokenize, KeepsRawSpelling) {
  const auto line = tokenize_line("Ta, là");
  ASSERT_EQ(line.size(), 2u);
  EXPECT_EQ(line[0].raw, "Ta,");
  EXPECT_EQ(line[0].normalized, "ta");
}
