#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "vpoem/error.hpp"
#include "vpoem/genre_rules.hpp"

using namespace vpoem;

namespace {

constexpr GenreLabel kKnown[] = {GenreLabel::luc_bat, GenreLabel::chu_4, GenreLabel::chu_5,
                                 GenreLabel::chu_7, GenreLabel::chu_8};

std::vector<WordPos> positions(const RhymeGroup& g) { return g.positions; }

}  // namespace

TEST(GenreRules, LucBatAlternatesSixEight) {
  EXPECT_EQ(expected_length(GenreLabel::luc_bat, 0), 6);
  EXPECT_EQ(expected_length(GenreLabel::luc_bat, 1), 8);
  EXPECT_EQ(expected_length(GenreLabel::luc_bat, 2), 6);
  EXPECT_EQ(expected_length(GenreLabel::luc_bat, 3), 8);
}

TEST(GenreRules, ChuGenresHaveConstantLength) {
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(expected_length(GenreLabel::chu_7, i), 7);
    EXPECT_EQ(expected_length(GenreLabel::chu_5, i), 5);
  }
  EXPECT_EQ(expected_length(GenreLabel::chu_5, 7), 5);
}

TEST(GenreRules, UnknownGenreThrows) {
  EXPECT_THROW(spec_for(GenreLabel::unknown), UnknownGenre);
  EXPECT_THROW(expected_length(GenreLabel::unknown, 0), UnknownGenre);
  EXPECT_THROW(rhyme_groups(GenreLabel::unknown, 2), UnknownGenre);
}

TEST(GenreRules, LucBatLinePatterns) {
  const GenreSpec& s = spec_for(GenreLabel::luc_bat);
  const std::vector<TonePosition> six = {
      {2, ToneClass::even}, {4, ToneClass::uneven}, {6, ToneClass::even}};
  const std::vector<TonePosition> eight = {
      {2, ToneClass::even}, {4, ToneClass::uneven}, {6, ToneClass::even}, {8, ToneClass::even}};
  EXPECT_EQ(s.patterns[0].positions, six);
  EXPECT_EQ(s.patterns[0].denominator(), 3);
  EXPECT_FALSE(s.patterns[0].accent_pair.has_value());
  EXPECT_EQ(s.patterns[1].positions, eight);
  EXPECT_EQ(s.patterns[1].accent_pair, std::make_pair(6, 8));
  EXPECT_EQ(s.patterns[1].denominator(), 5);
  EXPECT_TRUE(s.invertible);
}

TEST(GenreRules, ChuPatterns) {
  for (GenreLabel g : {GenreLabel::chu_7, GenreLabel::chu_8}) {
    EXPECT_EQ(spec_for(g).patterns[0].denominator(), 3);
    EXPECT_FALSE(spec_for(g).invertible);
  }
  for (GenreLabel g : {GenreLabel::chu_4, GenreLabel::chu_5}) {
    EXPECT_EQ(spec_for(g).patterns[0].denominator(), 1);
  }
}

TEST(GenreRules, DenominatorCountsEveryCheck) {
  for (GenreLabel g : kKnown) {
    for (const auto& p : spec_for(g).patterns) {
      EXPECT_EQ(p.denominator(),
                static_cast<int>(p.positions.size() + p.relations.size()) + (p.accent_pair ? 1 : 0));
    }
  }
}

TEST(RhymeGroups, LucBatCouplet) {
  const auto groups = rhyme_groups(GenreLabel::luc_bat, 2);
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].t, 2);
  EXPECT_EQ(positions(groups[0]), (std::vector<WordPos>{{0, 6}, {1, 6}}));
}

TEST(RhymeGroups, LucBatFourAndSixLines) {
  auto groups = rhyme_groups(GenreLabel::luc_bat, 4);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].t, 2);
  EXPECT_EQ(groups[1].t, 3);
  EXPECT_EQ(positions(groups[1]), (std::vector<WordPos>{{1, 8}, {2, 6}, {3, 6}}));

  groups = rhyme_groups(GenreLabel::luc_bat, 6);
  ASSERT_EQ(groups.size(), 3u);
  EXPECT_EQ(groups[2].t, 3);
}

TEST(RhymeGroups, OddLineCountTruncatesLastGroup) {
  const auto groups = rhyme_groups(GenreLabel::luc_bat, 3);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[1].t, 2);
  EXPECT_EQ(positions(groups[1]), (std::vector<WordPos>{{1, 8}, {2, 6}}));
  EXPECT_EQ(rhyme_groups(GenreLabel::chu_7, 1)[0].t, 1);
}

TEST(RhymeGroups, LucBatTotals) {
  for (std::size_t k = 1; k <= 10; ++k) {
    const auto groups = rhyme_groups(GenreLabel::luc_bat, 2 * k);
    EXPECT_EQ(groups.size(), k);
    int total = 0;
    for (const auto& g : groups) total += g.t;
    EXPECT_EQ(total, static_cast<int>(2 + 3 * (k - 1)));
  }
}

TEST(RhymeGroups, ChuFinalWordPairs) {
  const auto groups = rhyme_groups(GenreLabel::chu_5, 4);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(positions(groups[1]), (std::vector<WordPos>{{2, 5}, {3, 5}}));
  EXPECT_EQ(groups[1].t, 2);
}

TEST(RhymeGroups, CoordinatesFitExpectedLengths) {
  for (GenreLabel g : kKnown) {
    for (std::size_t n = 1; n <= 13; ++n) {
      for (const auto& group : rhyme_groups(g, n)) {
        for (const auto& pos : group.positions) {
          EXPECT_LT(pos.line, n);
          EXPECT_GE(pos.word, 1);
          EXPECT_LE(pos.word, expected_length(g, pos.line));
        }
      }
    }
  }
}

TEST(GenreNames, ParseAcceptsLabelsAndDisplayNames) {
  EXPECT_EQ(parse_genre("luc_bat"), GenreLabel::luc_bat);
  EXPECT_EQ(parse_genre("luc bat"), GenreLabel::luc_bat);
  EXPECT_EQ(parse_genre("Lục Bát"), GenreLabel::luc_bat);
  EXPECT_EQ(parse_genre("7 chữ"), GenreLabel::chu_7);
  EXPECT_EQ(parse_genre("chu-8"), GenreLabel::chu_8);
  EXPECT_EQ(parse_genre("unknown"), GenreLabel::unknown);
  EXPECT_FALSE(parse_genre("sonnet").has_value());
  for (GenreLabel g : kKnown) {
    EXPECT_EQ(parse_genre(to_string(g)), g);
    EXPECT_EQ(parse_genre(display_name(g, GenreNaming::vietnamese)), g);
  }
}

TEST(RuleBook, OverridesOneGenre) {
  const RuleBook book = RuleBook::parse(R"({"luc_bat": {"invertible": false}})");
  EXPECT_FALSE(book.spec_for(GenreLabel::luc_bat).invertible);
  EXPECT_EQ(book.spec_for(GenreLabel::chu_7), spec_for(GenreLabel::chu_7));
}

TEST(RuleBook, OverridePatternsAndRhyme) {
  const RuleBook book = RuleBook::parse(R"({
    "chu_7": {
      "patterns": [{"positions": [[2, "even"], [4, "uneven"]]},
                   {"relations": [[2, 4, "differ"]]}],
      "rhyme": {"later_pairs": [[-1, 7], [0, 7], [1, 7]]}
    }})");
  const GenreSpec& s = book.spec_for(GenreLabel::chu_7);
  EXPECT_EQ(s.patterns[0].positions.size(), 2u);
  EXPECT_EQ(s.patterns[1].relations.size(), 1u);
  EXPECT_EQ(book.rhyme_groups(GenreLabel::chu_7, 4)[1].t, 3);
}

TEST(RuleBook, RejectsBadTables) {
  EXPECT_THROW(RuleBook::parse("[1, 2]"), InvalidConfig);
  EXPECT_THROW(RuleBook::parse("{not json"), InvalidConfig);
  EXPECT_THROW(RuleBook::parse(R"({"haiku": {}})"), UnknownGenre);
  EXPECT_THROW(RuleBook::parse(R"({"chu_5": {"patterns": [{"positions": [[9, "even"]]}, {}]}})"),
               InvalidConfig);
  EXPECT_THROW(RuleBook::parse(R"({"chu_5": {"patterns": [{"positions": [[2, "loud"]]}, {}]}})"),
               InvalidConfig);
  EXPECT_THROW(RuleBook::parse(R"({"chu_5": {"rhyme": {"first_pair": []}}})"), InvalidConfig);
  EXPECT_THROW(RuleBook::parse(R"({"chu_5": {"lengths": [0, 5]}})"), InvalidConfig);
}

TEST(RuleBook, ShippedDefaultsMatchBuiltIn) {
  const RuleBook shipped = RuleBook::load(std::string(VPOEM_SOURCE_DIR) + "/data/genre_rules_default.json");
  for (GenreLabel g : kKnown) EXPECT_EQ(shipped.spec_for(g), spec_for(g)) << to_string(g);
}

TEST(RuleBook, MissingFile) {
  EXPECT_THROW(RuleBook::load("/nonexistent/rules.json"), FileNotFound);
}
