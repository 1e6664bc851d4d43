#include "vpoem/harness.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "vpoem/classifier.hpp"
#include "vpoem/parallel.hpp"
#include "vpoem/utf8.hpp"

namespace vpoem {

namespace {

std::vector<std::string> normalized_tokens(std::string_view text, const OnsetPolicy& policy) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto eol = text.find('\n', start);
    const auto line = text.substr(start, eol == std::string_view::npos ? text.npos : eol - start);
    for (auto& s : tokenize_line(line, policy)) out.push_back(std::move(s.normalized));
    if (eol == std::string_view::npos) break;
    start = eol + 1;
  }
  return out;
}

ScoreBreakdown zero_score(GenreLabel genre, std::size_t n) {
  ScoreBreakdown s;
  s.genre = genre;
  s.n = n;
  s.n_effective = n + n % 2;
  return s;
}

const Scorer& default_scorer() {
  static const Scorer scorer;
  return scorer;
}

EvalRecord evaluate_one(const PromptRecord& record, Generator& generator, bool blind,
                        const EvalOptions& options) {
  const Scorer& scorer = options.scorer ? *options.scorer : default_scorer();
  const PromptTemplate& tmpl =
      options.prompt_template ? *options.prompt_template : PromptTemplate::vietnamese();
  EvalRecord out;
  out.id = record.source.id;
  out.mode = record.mode;
  out.blind = blind;
  out.declared = record.genre();
  out.prompt = blind ? tmpl.mask_genre(record.prompt, record.genre()) : record.prompt;

  try {
    out.generated = generator.generate({out.prompt, out.id});
  } catch (const Error& e) {
    out.failed = true;
    out.diagnostic = e.what();
    return out;
  }
  if (utf8::trim(out.generated).empty()) {
    out.failed = true;
    out.diagnostic = "generator returned no text";
    return out;
  }
  std::optional<Poem> poem;
  try {
    poem.emplace(Poem::parse(out.generated, GenreLabel::unknown, options.onsets));
  } catch (const EmptyPoem& e) {
    out.failed = true;
    out.diagnostic = e.what();
    return out;
  }

  out.genre = blind ? classify(signature(*poem), scorer.rules()).genre : out.declared;
  if (out.genre == GenreLabel::unknown) {
    out.score = zero_score(GenreLabel::unknown, poem->size());
    out.flagged = true;
    out.diagnostic = blind ? "unclassified length signature \"" + signature(*poem).rendered() + "\""
                           : "record has no declared genre";
  } else {
    out.score = scorer.score(poem->with_genre(out.genre));
  }
  out.keyword_coverage = keyword_coverage(record.keywords, out.generated, options.onsets);
  return out;
}

EvalResult run(const std::vector<PromptRecord>& testset, Generator& generator, bool blind,
               const EvalOptions& options) {
  std::vector<std::size_t> indices(testset.size());
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  auto records = parallel_map(
      std::move(indices),
      [&](std::size_t i) { return evaluate_one(testset[i], generator, blind, options); },
      options.concurrency);
  return aggregate(std::move(records), blind);
}

void add(MeanScore& m, double score) {
  // Running sums in record order; the division happens once at the end.
  m.mean += score;
  ++m.count;
}

void finish(MeanScore& m) {
  if (m.count > 0) m.mean /= static_cast<double>(m.count);
}

std::optional<double> optional_double(const Json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

GenreLabel genre_from(const Json& j, const char* key) {
  if (!j.contains(key)) return GenreLabel::unknown;
  const auto text = j[key].get<std::string>();
  const auto g = parse_genre(text);
  if (!g) throw UnknownGenre(text);
  return *g;
}

}  // namespace

std::vector<PromptRecord> read_testset(std::istream& in) {
  CorpusReader reader(in);
  std::vector<PromptRecord> out;
  while (auto item = reader.next()) {
    if (auto* bad = std::get_if<MalformedRecord>(&*item)) throw *bad;
    out.push_back(PromptRecord::from_record(std::get<PoemRecord>(*item), reader.line_number()));
  }
  return out;
}

std::vector<PromptRecord> read_testset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path.string());
  return read_testset(in);
}

std::unique_ptr<Generator> make_generator(const GeneratorSpec& spec,
                                          const std::vector<PromptRecord>& testset) {
  spec.validate();
  switch (spec.kind) {
    case GeneratorKind::stub: return std::make_unique<StubGenerator>(spec.canned);
    case GeneratorKind::replay: {
      auto replay = std::make_unique<ReplayGenerator>();
      for (const auto& r : testset) replay->add(r.source.id, r.prompt, r.completion);
      return replay;
    }
    case GeneratorKind::http: return std::make_unique<HttpGenerator>(spec);
  }
  throw InvalidConfig("unknown generator kind");
}

std::optional<double> keyword_coverage(const std::vector<std::string>& keywords,
                                       std::string_view text, const OnsetPolicy& policy) {
  if (keywords.empty()) return std::nullopt;
  const auto haystack = normalized_tokens(text, policy);
  std::size_t found = 0;
  for (const auto& k : keywords) {
    const auto needle = normalized_tokens(k, policy);
    if (needle.empty()) continue;
    if (std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
        haystack.end()) {
      ++found;
    }
  }
  return static_cast<double>(found) / static_cast<double>(keywords.size());
}

Json EvalRecord::to_json() const {
  Json j = Json::object();
  j["id"] = id;
  j["mode"] = std::string(vpoem::to_string(mode));
  j["blind"] = blind;
  j["prompt"] = prompt;
  j["generated"] = generated;
  j["declared_genre"] = std::string(vpoem::to_string(declared));
  j["genre"] = std::string(vpoem::to_string(genre));
  j["score"] = score ? vpoem::to_json(*score) : Json();
  j["keyword_coverage"] = keyword_coverage ? Json(*keyword_coverage) : Json();
  j["failed"] = failed;
  j["flagged"] = flagged;
  j["diagnostic"] = diagnostic;
  return j;
}

EvalRecord EvalRecord::from_json(const Json& j) {
  EvalRecord r;
  r.id = j.at("id").get<std::string>();
  r.mode = parse_prompt_mode(j.value("mode", std::string("text2poem")));
  r.blind = j.value("blind", false);
  r.prompt = j.value("prompt", std::string());
  r.generated = j.value("generated", std::string());
  r.declared = genre_from(j, "declared_genre");
  r.genre = genre_from(j, "genre");
  if (j.contains("score") && !j["score"].is_null()) r.score = score_from_json(j["score"]);
  r.keyword_coverage = optional_double(j, "keyword_coverage");
  r.failed = j.value("failed", false);
  r.flagged = j.value("flagged", false);
  r.diagnostic = j.value("diagnostic", std::string());
  return r;
}

std::size_t EvalResult::failures() const {
  std::size_t n = 0;
  for (const auto& [_, m] : modes) n += m.failures;
  return n;
}

EvalResult aggregate(std::vector<EvalRecord> records, bool blind) {
  EvalResult result;
  result.blind = blind;
  for (const auto& r : records) {
    ModeAggregate& mode = result.modes[r.mode];
    if (r.failed || !r.score) {
      ++mode.failures;
      continue;
    }
    add(mode.overall, r.score->score);
    add(mode.per_genre[r.genre], r.score->score);
  }
  for (auto& [_, mode] : result.modes) {
    finish(mode.overall);
    for (auto& [__, g] : mode.per_genre) finish(g);
  }
  result.records = std::move(records);
  return result;
}

EvalResult evaluate(const std::vector<PromptRecord>& testset, Generator& generator,
                    const EvalOptions& options) {
  return run(testset, generator, false, options);
}

EvalResult blind_evaluate(const std::vector<PromptRecord>& testset, Generator& generator,
                          const EvalOptions& options) {
  return run(testset, generator, true, options);
}

std::string to_jsonl(const EvalRecord& record) {
  return record.to_json().dump(-1, ' ', false, Json::error_handler_t::replace);
}

EvalResult read_eval_result(std::istream& in) {
  std::vector<EvalRecord> records;
  std::optional<bool> blind;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (utf8::trim(line).empty()) continue;
    try {
      records.push_back(EvalRecord::from_json(Json::parse(line)));
    } catch (const std::exception& e) {
      throw MalformedRecord(number, e.what());
    }
    if (blind && *blind != records.back().blind) {
      throw MalformedRecord(number, "mixes blind and declared-genre results");
    }
    blind = records.back().blind;
  }
  return aggregate(std::move(records), blind.value_or(false));
}

EvalResult read_eval_result(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path.string());
  return read_eval_result(in);
}

Json summary_json(const EvalResult& result) {
  Json j = Json::object();
  j["blind"] = result.blind;
  j["records"] = result.records.size();
  j["failures"] = result.failures();
  Json modes = Json::object();
  for (const auto& [mode, agg] : result.modes) {
    Json m = Json::object();
    m["count"] = agg.overall.count;
    m["mean"] = agg.overall.mean;
    m["failures"] = agg.failures;
    Json genres = Json::object();
    for (const auto& [genre, g] : agg.per_genre) {
      genres[std::string(to_string(genre))] = {{"count", g.count}, {"mean", g.mean}};
    }
    m["per_genre"] = std::move(genres);
    modes[std::string(to_string(mode))] = std::move(m);
  }
  j["modes"] = std::move(modes);
  return j;
}

}  // namespace vpoem
