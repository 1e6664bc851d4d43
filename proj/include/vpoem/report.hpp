#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vpoem/harness.hpp"

namespace vpoem {

/// Columns in display order.
enum class ReportColumn { luc_bat, blind, chu_7, chu_8, chu_5, chu_4 };

inline constexpr std::array<ReportColumn, 6> kReportColumns = {
    ReportColumn::luc_bat, ReportColumn::blind, ReportColumn::chu_7,
    ReportColumn::chu_8,   ReportColumn::chu_5, ReportColumn::chu_4};

std::string_view column_title(ReportColumn column) noexcept;

using ReportCells = std::array<std::optional<double>, kReportColumns.size()>;

struct ReportRow {
  std::string label;
  std::map<PromptMode, ReportCells> cells;
};

struct ReportTable {
  std::vector<ReportRow> rows;  // first-appearance order of labels
};

/// One row per distinct label. Declared-genre results fill the genre
/// columns, blind results the Blind column; when two results with the same
/// label fill the same cell the later one wins.
/// Throws LengthMismatch when the lists differ in length.
ReportTable build_report(const std::vector<EvalResult>& results,
                         const std::vector<std::string>& labels);

/// Bordered text table with one section per prompt mode that has data;
/// missing cells show "-".
std::string render_text(const ReportTable& table);
/// Comma-separated: mode, model, then one column per score; missing cells empty.
std::string render_csv(const ReportTable& table);

}  // namespace vpoem
