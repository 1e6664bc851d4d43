#include "fixtures.hpp"

#include <stdexcept>
#include <variant>

#include "poems.hpp"

namespace testsupport {

using namespace vpoem;

std::vector<PromptRecord> gold_testset(PoemGen& gen, std::size_t n, const std::vector<GenreLabel>& genres) {
  std::vector<PromptRecord> out;
  DatasetOptions options;
  options.keywords = 2;
  while (out.size() < n) {
    const GenreLabel g = genres[out.size() % genres.size()];
    PoemRecord r;
    r.id = "gold-" + std::to_string(out.size());
    r.genre = g;
    r.text = render_plain(gen.perfect(g, 2 * gen.uniform(2, 6)));
    DatasetItem item = make_prompt_record(r, options);
    // Poems with too few content words are redrawn.
    if (auto* pr = std::get_if<PromptRecord>(&item)) out.push_back(std::move(*pr));
  }
  return out;
}

EvalRecord eval_record(const std::string& id, PromptMode mode, GenreLabel genre, double score) {
  EvalRecord r;
  r.id = id;
  r.mode = mode;
  r.declared = genre;
  r.genre = genre;
  ScoreBreakdown b;
  b.genre = genre;
  b.score = score;
  r.score = b;
  r.generated = "ta";
  return r;
}

std::vector<EvalResult> report_results() {
  const auto t2p = PromptMode::text2poem;
  const auto p2p = PromptMode::poem2poem;
  EvalResult a = aggregate({eval_record("a1", t2p, GenreLabel::luc_bat, 0.805),
                            eval_record("a2", t2p, GenreLabel::chu_7, 0.712),
                            eval_record("a3", t2p, GenreLabel::chu_4, 0.5),
                            eval_record("a4", p2p, GenreLabel::luc_bat, 0.931)},
                           false);
  EvalResult b = aggregate({eval_record("b1", t2p, GenreLabel::luc_bat, 0.678)}, false);
  return {a, b};
}

}  // namespace testsupport
