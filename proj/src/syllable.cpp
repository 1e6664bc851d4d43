#include "vpoem/syllable.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <sstream>

#include "vpoem/error.hpp"
#include "vpoem/utf8.hpp"

namespace vpoem {

namespace {

// A letter after decomposition: lowercase base (with breve, circumflex or
// horn kept) and the tone mark carried on it. `ngang` means unmarked.
struct Letter {
  char32_t base;
  ToneMark tone;
};

// Column order of the tables below: ngang, sắc, huyền, hỏi, ngã, nặng.
constexpr std::array<ToneMark, 6> kColumnTone = {ToneMark::ngang, ToneMark::sac,   ToneMark::huyen,
                                                 ToneMark::hoi,   ToneMark::nga,   ToneMark::nang};

constexpr std::array<std::u32string_view, 12> kLowerForms = {
    U"aáàảãạ", U"ăắằẳẵặ", U"âấầẩẫậ", U"eéèẻẽẹ", U"êếềểễệ", U"iíìỉĩị",
    U"oóòỏõọ", U"ôốồổỗộ", U"ơớờởỡợ", U"uúùủũụ", U"ưứừửữự", U"yýỳỷỹỵ"};

constexpr std::array<std::u32string_view, 12> kUpperForms = {
    U"AÁÀẢÃẠ", U"ĂẮẰẲẴẶ", U"ÂẤẦẨẪẬ", U"EÉÈẺẼẸ", U"ÊẾỀỂỄỆ", U"IÍÌỈĨỊ",
    U"OÓÒỎÕỌ", U"ÔỐỒỔỖỘ", U"ƠỚỜỞỠỢ", U"UÚÙỦŨỤ", U"ƯỨỪỬỮỰ", U"YÝỲỶỸỴ"};

struct Tables {
  std::unordered_map<char32_t, Letter> decompose;
  // lowercase base -> precomposed form per ToneMark (indexed by enum value)
  std::unordered_map<char32_t, std::array<char32_t, 6>> compose;

  Tables() {
    for (std::size_t row = 0; row < kLowerForms.size(); ++row) {
      const char32_t base = kLowerForms[row][0];
      std::array<char32_t, 6> forms{};
      for (std::size_t col = 0; col < 6; ++col) {
        const ToneMark tone = kColumnTone[col];
        forms[static_cast<std::size_t>(tone)] = kLowerForms[row][col];
        decompose[kLowerForms[row][col]] = {base, tone};
        decompose[kUpperForms[row][col]] = {base, tone};
      }
      compose[base] = forms;
    }
    decompose[U'đ'] = {U'đ', ToneMark::ngang};
    decompose[U'Đ'] = {U'đ', ToneMark::ngang};
    decompose[U'Ð'] = {U'đ', ToneMark::ngang};  // eth, a common stand-in for Đ
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

bool is_vowel(char32_t c) {
  switch (c) {
    case U'a': case U'ă': case U'â': case U'e': case U'ê': case U'i':
    case U'o': case U'ô': case U'ơ': case U'u': case U'ư': case U'y':
      return true;
    default:
      return false;
  }
}

bool has_quality_mark(char32_t c) {
  switch (c) {
    case U'ă': case U'â': case U'ê': case U'ô': case U'ơ': case U'ư':
      return true;
    default:
      return false;
  }
}

std::optional<ToneMark> combining_tone(char32_t cp) {
  switch (cp) {
    case 0x0300:
    case 0x0340:
      return ToneMark::huyen;
    case 0x0301:
    case 0x0341:
      return ToneMark::sac;
    case 0x0303:
      return ToneMark::nga;
    case 0x0309:
      return ToneMark::hoi;
    case 0x0323:
      return ToneMark::nang;
    default:
      return std::nullopt;
  }
}

// Applies a combining breve/circumflex/horn; returns 0 if not applicable.
char32_t apply_quality(char32_t base, char32_t mark) {
  switch (mark) {
    case 0x0302:
      if (base == U'a') return U'â';
      if (base == U'e') return U'ê';
      if (base == U'o') return U'ô';
      return 0;
    case 0x0306:
      return base == U'a' ? U'ă' : 0;
    case 0x031B:
      if (base == U'o') return U'ơ';
      if (base == U'u') return U'ư';
      return 0;
    default:
      return 0;
  }
}

bool is_combining(char32_t cp) { return cp >= 0x0300 && cp <= 0x036F; }

struct Decomposed {
  std::vector<Letter> letters;
  bool clean = true;  // false on stray or conflicting combining marks
};

Decomposed decompose_letters(std::u32string_view text) {
  const auto& t = tables();
  Decomposed out;
  out.letters.reserve(text.size());
  for (char32_t cp : text) {
    if (is_combining(cp)) {
      if (out.letters.empty()) {
        out.clean = false;
        continue;
      }
      Letter& last = out.letters.back();
      if (const auto tone = combining_tone(cp)) {
        if (!is_vowel(last.base) || last.tone != ToneMark::ngang) {
          out.clean = false;
        } else {
          last.tone = *tone;
        }
      } else if (const char32_t q = apply_quality(last.base, cp)) {
        last.base = q;
      } else {
        out.clean = false;
      }
      continue;
    }
    if (const auto it = t.decompose.find(cp); it != t.decompose.end()) {
      out.letters.push_back(it->second);
    } else if (cp >= U'A' && cp <= U'Z') {
      out.letters.push_back({cp - U'A' + U'a', ToneMark::ngang});
    } else {
      out.letters.push_back({cp, ToneMark::ngang});
    }
  }
  return out;
}

char32_t compose_letter(const Letter& l) {
  if (l.tone == ToneMark::ngang || l.tone == ToneMark::none) return l.base;
  const auto& compose = tables().compose;
  const auto it = compose.find(l.base);
  if (it == compose.end()) return l.base;
  return it->second[static_cast<std::size_t>(l.tone)];
}

// Onset table, longest entries first.
constexpr std::array<std::u32string_view, 28> kOnsets = {
    U"ngh", U"ng", U"gh", U"gi", U"kh", U"th", U"tr", U"ch", U"ph", U"nh",
    U"qu",  U"b",  U"c",  U"d",  U"đ",  U"g",  U"h",  U"k",  U"l",  U"m",
    U"n",   U"p",  U"q",  U"r",  U"s",  U"t",  U"v",  U"x"};

constexpr std::array<std::u32string_view, 9> kCodas = {U"", U"c", U"ch", U"m", U"n",
                                                        U"ng", U"nh", U"p", U"t"};

std::size_t match_onset(const std::vector<Letter>& letters, const OnsetPolicy& policy) {
  for (const auto onset : kOnsets) {
    if (onset.size() > letters.size()) continue;
    bool match = true;
    for (std::size_t i = 0; i < onset.size(); ++i) {
      if (letters[i].base != onset[i]) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    // "gi"/"qu" act as onsets only in front of another vowel ("gì" is g + ì).
    if (onset == U"gi" || onset == U"qu") {
      const bool enabled = onset == U"gi" ? policy.gi_is_onset : policy.qu_is_onset;
      if (!enabled || letters.size() <= 2 || !is_vowel(letters[2].base)) continue;
    }
    return onset.size();
  }
  return 0;
}

// Index of the vowel carrying the tone in a de-toned rhyme.
std::optional<std::size_t> tone_position(std::u32string_view rhyme) {
  std::size_t run = 0;
  while (run < rhyme.size() && is_vowel(rhyme[run])) ++run;
  if (run == 0) return std::nullopt;
  for (std::size_t i = run; i-- > 0;) {
    if (has_quality_mark(rhyme[i])) return i;
  }
  if (run < rhyme.size()) return run - 1;  // closed syllable: last vowel
  return run == 3 ? 1 : 0;
}

struct Analysis {
  std::string onset;
  std::u32string rhyme;  // de-toned
  ToneMark tone = ToneMark::none;
  bool well_formed = false;
};

Analysis analyze_letters(const Decomposed& d, const OnsetPolicy& policy) {
  Analysis a;
  const auto& letters = d.letters;
  const std::size_t onset_len = match_onset(letters, policy);
  for (std::size_t i = 0; i < onset_len; ++i) utf8::append(a.onset, letters[i].base);

  int marks = 0;
  ToneMark tone = ToneMark::ngang;
  for (const auto& l : letters) {
    if (l.tone != ToneMark::ngang) {
      ++marks;
      tone = l.tone;
    }
  }

  std::u32string rest;
  for (std::size_t i = onset_len; i < letters.size(); ++i) rest.push_back(letters[i].base);
  std::size_t run = 0;
  while (run < rest.size() && is_vowel(rest[run])) ++run;
  const std::u32string_view coda = std::u32string_view(rest).substr(run);
  const bool coda_ok = std::find(kCodas.begin(), kCodas.end(), coda) != kCodas.end();

  if (d.clean && marks <= 1 && run >= 1 && run <= 3 && coda_ok) {
    a.rhyme = std::move(rest);
    a.tone = tone;
    a.well_formed = true;
  }
  return a;
}

std::u32string strip_u32(std::u32string_view text) {
  std::size_t first = 0;
  std::size_t last = text.size();
  auto edge = [](char32_t cp) { return utf8::is_space(cp) || utf8::is_punctuation(cp); };
  while (first < last && edge(text[first])) ++first;
  while (last > first && edge(text[last - 1])) --last;
  return std::u32string(text.substr(first, last - first));
}

Syllable analyze_stripped(std::string raw, std::u32string_view stripped, const OnsetPolicy& policy) {
  if (stripped.empty()) throw EmptyToken();
  const Decomposed d = decompose_letters(stripped);
  const Analysis a = analyze_letters(d, policy);

  Syllable s;
  s.raw = std::move(raw);
  s.onset = a.onset;
  if (a.well_formed) {
    s.rhyme_key = utf8::encode(a.rhyme);
    s.tone = a.tone;
    s.normalized = s.onset + retone(s.rhyme_key, a.tone);
  } else {
    s.tone = ToneMark::none;
    for (const auto& l : d.letters) utf8::append(s.normalized, compose_letter(l));
  }
  s.tone_class = tone_class_of(s.tone);
  s.pitch_register = register_of(s.tone);
  return s;
}

std::u32string detone(std::u32string_view text) {
  std::u32string out;
  for (const auto& l : decompose_letters(text).letters) out.push_back(l.base);
  return out;
}

}  // namespace

std::string_view to_string(ToneMark tone) noexcept {
  switch (tone) {
    case ToneMark::ngang: return "ngang";
    case ToneMark::huyen: return "huyen";
    case ToneMark::sac: return "sac";
    case ToneMark::hoi: return "hoi";
    case ToneMark::nga: return "nga";
    case ToneMark::nang: return "nang";
    case ToneMark::none: break;
  }
  return "none";
}

std::string_view to_string(ToneClass cls) noexcept {
  switch (cls) {
    case ToneClass::even: return "even";
    case ToneClass::uneven: return "uneven";
    case ToneClass::undefined: break;
  }
  return "undefined";
}

std::string_view to_string(Register reg) noexcept {
  switch (reg) {
    case Register::high: return "high";
    case Register::low: return "low";
    case Register::not_applicable: break;
  }
  return "n/a";
}

std::string strip_punctuation(std::string_view token) {
  return utf8::encode(strip_u32(utf8::decode(token)));
}

std::string retone(std::string_view rhyme_key, ToneMark tone) {
  if (tone == ToneMark::ngang || tone == ToneMark::none) return std::string(rhyme_key);
  std::u32string rhyme = utf8::decode(rhyme_key);
  const auto pos = tone_position(rhyme);
  if (!pos) return std::string(rhyme_key);
  rhyme[*pos] = compose_letter({rhyme[*pos], tone});
  return utf8::encode(rhyme);
}

std::string normalize(std::string_view token, const OnsetPolicy& policy) {
  return analyze(token, policy).normalized;
}

Syllable analyze(std::string_view token, const OnsetPolicy& policy) {
  const std::u32string stripped = strip_u32(utf8::decode(token));
  return analyze_stripped(std::string(token), stripped, policy);
}

std::vector<Syllable> tokenize_line(std::string_view line, const OnsetPolicy& policy) {
  std::vector<Syllable> out;
  const std::u32string text = utf8::decode(line);
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && utf8::is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !utf8::is_space(text[i])) ++i;
    if (start == i) break;
    const std::u32string_view token = std::u32string_view(text).substr(start, i - start);
    const std::u32string stripped = strip_u32(token);
    if (stripped.empty()) continue;
    out.push_back(analyze_stripped(utf8::encode(token), stripped, policy));
  }
  return out;
}

NearRhymeTable NearRhymeTable::parse(std::istream& in) {
  NearRhymeTable table;
  std::string line;
  while (std::getline(in, line)) {
    const auto body = utf8::trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::istringstream words{std::string(body)};
    std::vector<std::string> members;
    for (std::string w; words >> w;) members.push_back(w);
    table.add_class(members);
  }
  return table;
}

NearRhymeTable NearRhymeTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path.string());
  return parse(in);
}

void NearRhymeTable::add_class(const std::vector<std::string>& members) {
  if (members.size() < 2) return;
  const int id = next_class_++;
  for (const auto& m : members) {
    auto& ids = classes_of_[utf8::encode(detone(utf8::decode(m)))];
    if (ids.empty() || ids.back() != id) ids.push_back(id);
  }
}

bool NearRhymeTable::same_class(std::string_view a, std::string_view b) const {
  const auto ia = classes_of_.find(std::string(a));
  const auto ib = classes_of_.find(std::string(b));
  if (ia == classes_of_.end() || ib == classes_of_.end()) return false;
  for (int id : ia->second) {
    if (std::find(ib->second.begin(), ib->second.end(), id) != ib->second.end()) return true;
  }
  return false;
}

bool rhymes(const Syllable& a, const Syllable& b, const NearRhymeTable* near) {
  if (!a.well_formed() || !b.well_formed()) return false;
  if (a.rhyme_key == b.rhyme_key) return true;
  return near != nullptr && near->same_class(a.rhyme_key, b.rhyme_key);
}

}  // namespace vpoem
