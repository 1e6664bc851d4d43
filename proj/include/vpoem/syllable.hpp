#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vpoem {

/// The six Vietnamese tone marks. `none` marks tokens that are not
/// well-formed syllables (no vowel, foreign spelling, conflicting marks).
enum class ToneMark { ngang, huyen, sac, hoi, nga, nang, none };

/// bằng (even) / trắc (uneven).
enum class ToneClass { even, uneven, undefined };

/// Pitch register of even tones: ngang is high, huyền is low.
enum class Register { high, low, not_applicable };

constexpr ToneClass tone_class_of(ToneMark tone) noexcept {
  switch (tone) {
    case ToneMark::ngang:
    case ToneMark::huyen:
      return ToneClass::even;
    case ToneMark::none:
      return ToneClass::undefined;
    default:
      return ToneClass::uneven;
  }
}

constexpr Register register_of(ToneMark tone) noexcept {
  switch (tone) {
    case ToneMark::ngang:
      return Register::high;
    case ToneMark::huyen:
      return Register::low;
    default:
      return Register::not_applicable;
  }
}

std::string_view to_string(ToneMark tone) noexcept;
std::string_view to_string(ToneClass cls) noexcept;
std::string_view to_string(Register reg) noexcept;

/// One orthographic word split into onset, rhyme key and tone.
struct Syllable {
  std::string raw;         // token as it appeared in the input
  std::string normalized;  // lowercase, precomposed, canonical tone placement
  std::string onset;
  std::string rhyme_key;   // nucleus + coda with the tone mark removed
  ToneMark tone = ToneMark::none;
  ToneClass tone_class = ToneClass::undefined;
  Register pitch_register = Register::not_applicable;

  bool well_formed() const noexcept { return tone != ToneMark::none; }

  // Equality compares the analysis, not the source spelling in `raw`.
  bool operator==(const Syllable& other) const noexcept {
    return normalized == other.normalized && onset == other.onset &&
           rhyme_key == other.rhyme_key && tone == other.tone &&
           tone_class == other.tone_class && pitch_register == other.pitch_register;
  }
};

/// Whether "qu" and "gi" count as onsets (so "qua" and "gia" have rhyme key "a").
struct OnsetPolicy {
  bool qu_is_onset = true;
  bool gi_is_onset = true;
};

/// Strips surrounding punctuation and whitespace without any other change.
std::string strip_punctuation(std::string_view token);

/// Lowercased, precomposed, canonically toned form of a token.
/// Throws EmptyToken when nothing but punctuation remains.
std::string normalize(std::string_view token, const OnsetPolicy& policy = {});

/// Throws EmptyToken when nothing but punctuation remains.
Syllable analyze(std::string_view token, const OnsetPolicy& policy = {});

/// Places `tone` on the canonical vowel of a de-toned rhyme key
/// (traditional placement: "oa" + huyền -> "òa").
std::string retone(std::string_view rhyme_key, ToneMark tone);

/// Whitespace split; punctuation-only tokens are dropped.
std::vector<Syllable> tokenize_line(std::string_view line, const OnsetPolicy& policy = {});

/// Optional "vần thông" table: rhyme keys on the same line of the file are
/// treated as rhyming with each other.
class NearRhymeTable {
 public:
  NearRhymeTable() = default;

  static NearRhymeTable parse(std::istream& in);
  static NearRhymeTable load(const std::filesystem::path& path);

  void add_class(const std::vector<std::string>& members);
  bool same_class(std::string_view a, std::string_view b) const;
  bool empty() const noexcept { return classes_of_.empty(); }

 private:
  std::unordered_map<std::string, std::vector<int>> classes_of_;
  int next_class_ = 0;
};

/// Exact rhyme-key equality, widened by `near` when given.
/// Malformed syllables never rhyme.
bool rhymes(const Syllable& a, const Syllable& b, const NearRhymeTable* near = nullptr);

}  // namespace vpoem
