#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vpoem/harness.hpp"

namespace testsupport {

class PoemGen;

/// Gold text-to-poem records over perfect generated poems, genres in rotation.
std::vector<vpoem::PromptRecord> gold_testset(PoemGen& gen, std::size_t n,
                                              const std::vector<vpoem::GenreLabel>& genres);

vpoem::EvalRecord eval_record(const std::string& id, vpoem::PromptMode mode, vpoem::GenreLabel genre,
                              double score);

/// Two declared-genre results behind tests/data/report_golden.txt.
std::vector<vpoem::EvalResult> report_results();
inline const std::vector<std::string> kReportLabels = {"Model A", "Model B"};

}  // namespace testsupport
