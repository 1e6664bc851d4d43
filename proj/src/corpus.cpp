#include "vpoem/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "vpoem/classifier.hpp"
#include "vpoem/parallel.hpp"
#include "vpoem/utf8.hpp"

namespace vpoem {

namespace {

// Fields with dedicated members; everything else goes to PoemRecord::extra.
constexpr std::string_view kKnownFields[] = {"id",    "genre", "text",    "title",
                                             "score", "flagged", "diagnostic"};

bool is_known_field(std::string_view key) {
  return std::find(std::begin(kKnownFields), std::end(kKnownFields), key) != std::end(kKnownFields);
}

GenreLabel genre_field(const Json& j, std::size_t line) {
  if (j.is_null()) return GenreLabel::unknown;
  if (!j.is_string()) throw MalformedRecord(line, "genre must be a string");
  const auto label = parse_genre(j.get<std::string>());
  if (!label) throw MalformedRecord(line, "unknown genre \"" + j.get<std::string>() + "\"");
  return *label;
}

const Scorer& default_scorer() {
  static const Scorer scorer;
  return scorer;
}

void mark_unscorable(PoemRecord& record, GenreLabel genre, std::size_t n, std::string why) {
  ScoreBreakdown zero;
  zero.genre = genre;
  zero.n = n;
  zero.n_effective = n + n % 2;
  record.score = zero;
  record.flagged = true;
  record.diagnostic = std::move(why);
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

}  // namespace

Json to_json(const ScoreBreakdown& s) {
  Json j = Json::object();
  j["L"] = s.L;
  j["T"] = s.T;
  j["R"] = s.R;
  j["score"] = s.score;
  j["genre"] = std::string(to_string(s.genre));
  j["n"] = s.n;
  j["n_effective"] = s.n_effective;
  return j;
}

ScoreBreakdown score_from_json(const Json& j) {
  ScoreBreakdown s;
  s.L = j.at("L").get<double>();
  s.T = j.at("T").get<double>();
  s.R = j.at("R").get<double>();
  s.score = j.at("score").get<double>();
  if (j.contains("genre")) {
    const auto g = parse_genre(j["genre"].get<std::string>());
    if (!g) throw UnknownGenre(j["genre"].get<std::string>());
    s.genre = *g;
  }
  s.n = j.value("n", std::size_t{0});
  s.n_effective = j.value("n_effective", s.n + s.n % 2);
  return s;
}

Json to_json(const PoemRecord& r) {
  Json j = Json::object();
  j["id"] = r.id;
  j["genre"] = std::string(to_string(r.genre));
  if (r.title) j["title"] = *r.title;
  j["text"] = r.text;
  if (r.score) j["score"] = to_json(*r.score);
  if (r.flagged) {
    j["flagged"] = true;
    j["diagnostic"] = r.diagnostic;
  }
  if (r.extra.is_object()) {
    for (const auto& [key, value] : r.extra.items()) {
      if (!j.contains(key)) j[key] = value;
    }
  }
  return j;
}

PoemRecord record_from_json(const Json& j, std::size_t line) {
  if (!j.is_object()) throw MalformedRecord(line, "record is not an object");
  PoemRecord r;
  const auto text = j.find("text");
  if (text == j.end()) throw MalformedRecord(line, "missing text field");
  if (!text->is_string()) throw MalformedRecord(line, "text must be a string");
  r.text = text->get<std::string>();
  if (utf8::trim(r.text).empty()) throw MalformedRecord(line, "text is blank");

  if (const auto id = j.find("id"); id != j.end() && !id->is_null()) {
    if (id->is_string()) {
      r.id = id->get<std::string>();
    } else if (id->is_number_integer()) {
      r.id = std::to_string(id->get<long long>());
    } else {
      throw MalformedRecord(line, "id must be a string or integer");
    }
  } else {
    r.id = "line-" + std::to_string(line);
  }
  if (const auto g = j.find("genre"); g != j.end()) r.genre = genre_field(*g, line);
  if (const auto t = j.find("title"); t != j.end() && !t->is_null()) {
    if (!t->is_string()) throw MalformedRecord(line, "title must be a string");
    r.title = t->get<std::string>();
  }
  if (const auto s = j.find("score"); s != j.end() && !s->is_null()) {
    try {
      r.score = score_from_json(*s);
    } catch (const std::exception& e) {
      throw MalformedRecord(line, std::string("bad score: ") + e.what());
    }
  }
  r.flagged = j.value("flagged", false);
  r.diagnostic = j.value("diagnostic", std::string());
  for (const auto& [key, value] : j.items()) {
    if (!is_known_field(key)) r.extra[key] = value;
  }
  return r;
}

std::string to_jsonl(const PoemRecord& record) {
  return to_json(record).dump(-1, ' ', false, Json::error_handler_t::replace);
}

CorpusReader::CorpusReader(std::unique_ptr<std::ifstream> file)
    : owned_(std::move(file)), in_(owned_.get()) {}

CorpusReader CorpusReader::open(const std::filesystem::path& path) {
  auto file = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*file) throw FileNotFound(path.string());
  return CorpusReader(std::move(file));
}

std::optional<CorpusItem> CorpusReader::next() {
  std::string text;
  while (std::getline(*in_, text)) {
    ++line_;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (utf8::trim(text).empty()) continue;
    try {
      Json j;
      try {
        j = Json::parse(text);
      } catch (const Json::parse_error& e) {
        throw MalformedRecord(line_, std::string("invalid JSON: ") + e.what());
      }
      PoemRecord record = record_from_json(j, line_);
      const auto [it, inserted] = seen_ids_.emplace(record.id, line_);
      if (!inserted) {
        throw MalformedRecord(line_, "duplicate id \"" + record.id + "\" (first on line " +
                                         std::to_string(it->second) + ")");
      }
      return CorpusItem(std::move(record));
    } catch (const MalformedRecord& e) {
      return CorpusItem(e);
    }
  }
  return std::nullopt;
}

std::vector<CorpusItem> read_corpus(const std::filesystem::path& path) {
  auto reader = CorpusReader::open(path);
  std::vector<CorpusItem> items;
  while (auto item = reader.next()) items.push_back(std::move(*item));
  return items;
}

GenreChoice GenreChoice::parse(std::string_view text) {
  if (text == "auto") return {};
  if (text == "declared") return {Source::declared, GenreLabel::unknown};
  const auto g = parse_genre(text);
  if (!g || *g == GenreLabel::unknown) throw UnknownGenre(std::string(text));
  return {Source::fixed, *g};
}

PoemRecord score_record(PoemRecord record, const ScoreOptions& options) {
  const Scorer& scorer = options.scorer ? *options.scorer : default_scorer();
  try {
    const Poem poem = Poem::parse(record.text, GenreLabel::unknown, options.onsets);
    GenreLabel genre = GenreLabel::unknown;
    switch (options.genre.source) {
      case GenreChoice::Source::fixed: genre = options.genre.fixed; break;
      case GenreChoice::Source::declared: genre = record.genre; break;
      case GenreChoice::Source::classify: break;
    }
    if (genre == GenreLabel::unknown) {
      genre = classify(signature(poem), scorer.rules()).genre;
    }
    if (genre == GenreLabel::unknown) {
      mark_unscorable(record, genre, poem.size(),
                      "unclassified length signature \"" + signature(poem).rendered() + "\"");
      return record;
    }
    record.score = scorer.score(poem.with_genre(genre));
    record.flagged = false;
    record.diagnostic.clear();
  } catch (const EmptyPoem& e) {
    mark_unscorable(record, GenreLabel::unknown, 0, e.what());
  }
  return record;
}

void score_corpus(const std::function<std::optional<CorpusItem>()>& source,
                  const ScoreOptions& options, const std::function<void(CorpusItem&&)>& sink) {
  ordered_parallel_map<CorpusItem>(
      source,
      [&options](CorpusItem&& item) -> CorpusItem {
        if (auto* record = std::get_if<PoemRecord>(&item)) {
          return score_record(std::move(*record), options);
        }
        return std::move(item);
      },
      [&sink](CorpusItem&& item) { sink(std::move(item)); }, options.jobs);
}

std::vector<PoemRecord> score_corpus(std::vector<PoemRecord> records,
                                     const ScoreOptions& options) {
  return parallel_map(
      std::move(records), [&options](PoemRecord&& r) { return score_record(std::move(r), options); },
      options.jobs);
}

std::size_t histogram_bucket(double score) {
  if (!(score > 0.0)) return 0;
  const auto b = static_cast<std::size_t>(std::floor(score * kHistogramBuckets + 1e-9));
  return std::min(b, kHistogramBuckets - 1);
}

CorpusFilter::CorpusFilter(double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InvalidConfig(fmt::format("threshold must lie in [0, 1], got {}", threshold));
  }
  stats_.threshold = threshold;
}

bool CorpusFilter::offer(const PoemRecord& record) {
  ++stats_.input;
  const double s = record.score ? record.score->score : 0.0;
  const GenreLabel g = record.score ? record.score->genre : record.genre;
  auto [it, _] = stats_.histogram.try_emplace(g);
  ++it->second[histogram_bucket(s)];
  const bool keep = record.score.has_value() && s >= stats_.threshold;
  if (keep) ++stats_.kept;
  return keep;
}

FilterResult filter_corpus(const std::vector<PoemRecord>& records, double threshold) {
  CorpusFilter filter(threshold);
  FilterResult result;
  for (const auto& r : records) {
    if (filter.offer(r)) result.kept.push_back(r);
  }
  result.stats = filter.stats();
  return result;
}

void StatsAccumulator::add(const PoemRecord& record) {
  ++total_;
  if (record.flagged) ++flagged_;
  const GenreLabel g = record.score ? record.score->genre : record.genre;
  auto& scores = scores_[g];
  if (record.score) scores.push_back(record.score->score);
  counts_[g] += 1;
}

CorpusSummary StatsAccumulator::summary() const {
  CorpusSummary s;
  s.total = total_;
  s.flagged = flagged_;
  for (const auto& [genre, count] : counts_) {
    GenreSummary g;
    g.count = count;
    const auto& scores = scores_.at(genre);
    if (!scores.empty()) {
      g.mean = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
      g.median = median_of(scores);
    }
    s.genres[genre] = g;
  }
  return s;
}

CorpusSummary corpus_stats(const std::vector<PoemRecord>& records) {
  StatsAccumulator acc;
  for (const auto& r : records) acc.add(r);
  return acc.summary();
}

Json to_json(const FilterStats& stats) {
  Json j = Json::object();
  j["threshold"] = stats.threshold;
  j["input"] = stats.input;
  j["kept"] = stats.kept;
  j["rejected"] = stats.rejected();
  Json hist = Json::object();
  for (const auto& [genre, buckets] : stats.histogram) {
    hist[std::string(to_string(genre))] = buckets;
  }
  j["bucket_width"] = 1.0 / kHistogramBuckets;
  j["histogram"] = std::move(hist);
  return j;
}

Json to_json(const CorpusSummary& summary) {
  Json j = Json::object();
  j["total"] = summary.total;
  j["flagged"] = summary.flagged;
  Json genres = Json::object();
  for (const auto& [genre, g] : summary.genres) {
    genres[std::string(to_string(genre))] = {{"count", g.count}, {"mean", g.mean}, {"median", g.median}};
  }
  j["genres"] = std::move(genres);
  return j;
}

std::string render_table(const FilterStats& stats) {
  std::string out = fmt::format("threshold  {:.2f}\ninput      {}\nkept       {}\nrejected   {}\n",
                                stats.threshold, stats.input, stats.kept, stats.rejected());
  if (stats.histogram.empty()) return out;
  out += fmt::format("\n{:<13}", "score");
  for (const auto& [genre, _] : stats.histogram) out += fmt::format("{:>9}", to_string(genre));
  out += '\n';
  for (std::size_t b = kHistogramBuckets; b-- > 0;) {
    const double lo = static_cast<double>(b) / kHistogramBuckets;
    const double hi = static_cast<double>(b + 1) / kHistogramBuckets;
    out += fmt::format("[{:.2f}, {:.2f}{}", lo, hi, b + 1 == kHistogramBuckets ? "]" : ")");
    for (const auto& [_, buckets] : stats.histogram) out += fmt::format("{:>9}", buckets[b]);
    out += '\n';
  }
  return out;
}

std::string render_table(const CorpusSummary& summary) {
  std::string out = fmt::format("{:<9}{:>8}{:>8}{:>8}\n", "genre", "count", "mean", "median");
  for (const auto& [genre, g] : summary.genres) {
    out += fmt::format("{:<9}{:>8}{:>8.3f}{:>8.3f}\n", to_string(genre), g.count, g.mean, g.median);
  }
  out += fmt::format("{:<9}{:>8}\n{:<9}{:>8}\n", "total", summary.total, "flagged", summary.flagged);
  return out;
}

}  // namespace vpoem
