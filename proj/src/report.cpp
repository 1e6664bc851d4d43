#include "vpoem/report.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "vpoem/utf8.hpp"

namespace vpoem {

namespace {

constexpr PromptMode kModes[] = {PromptMode::text2poem, PromptMode::poem2poem};

std::string_view section_title(PromptMode mode) {
  return mode == PromptMode::text2poem ? "text-to-poem" : "poem-to-poem";
}

std::optional<std::size_t> genre_column(GenreLabel genre) {
  switch (genre) {
    case GenreLabel::luc_bat: return 0;
    case GenreLabel::chu_7: return 2;
    case GenreLabel::chu_8: return 3;
    case GenreLabel::chu_5: return 4;
    case GenreLabel::chu_4: return 5;
    case GenreLabel::unknown: break;
  }
  return std::nullopt;
}

std::size_t display_width(std::string_view text) { return utf8::decode(text).size(); }

std::string pad_right(std::string_view text, std::size_t width) {
  std::string out(text);
  out.append(width - std::min(width, display_width(text)), ' ');
  return out;
}

std::string pad_left(std::string_view text, std::size_t width) {
  return std::string(width - std::min(width, display_width(text)), ' ') + std::string(text);
}

bool has_data(const ReportTable& table, PromptMode mode) {
  return std::any_of(table.rows.begin(), table.rows.end(), [mode](const ReportRow& row) {
    const auto it = row.cells.find(mode);
    return it != row.cells.end() &&
           std::any_of(it->second.begin(), it->second.end(), [](const auto& c) { return c.has_value(); });
  });
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string_view column_title(ReportColumn column) noexcept {
  switch (column) {
    case ReportColumn::luc_bat: return "Luc Bat";
    case ReportColumn::blind: return "Blind";
    case ReportColumn::chu_7: return "7 Chu";
    case ReportColumn::chu_8: return "8 Chu";
    case ReportColumn::chu_5: return "5 Chu";
    case ReportColumn::chu_4: return "4 Chu";
  }
  return "";
}

ReportTable build_report(const std::vector<EvalResult>& results,
                         const std::vector<std::string>& labels) {
  if (results.size() != labels.size()) throw LengthMismatch(results.size(), labels.size());
  ReportTable table;
  for (std::size_t i = 0; i < results.size(); ++i) {
    auto row = std::find_if(table.rows.begin(), table.rows.end(),
                            [&](const ReportRow& r) { return r.label == labels[i]; });
    if (row == table.rows.end()) {
      table.rows.push_back({labels[i], {}});
      row = std::prev(table.rows.end());
    }
    for (const auto& [mode, agg] : results[i].modes) {
      ReportCells& cells = row->cells[mode];
      if (results[i].blind) {
        if (agg.overall.count > 0) cells[1] = agg.overall.mean;
        continue;
      }
      for (const auto& [genre, mean] : agg.per_genre) {
        const auto col = genre_column(genre);
        if (col && mean.count > 0) cells[*col] = mean.mean;
      }
    }
  }
  return table;
}

std::string render_text(const ReportTable& table) {
  std::size_t first = display_width("Model");
  for (const auto& row : table.rows) first = std::max(first, display_width(row.label));
  std::vector<PromptMode> sections;
  for (PromptMode mode : kModes) {
    if (has_data(table, mode)) {
      sections.push_back(mode);
      first = std::max(first, display_width(section_title(mode)));
    }
  }
  std::vector<std::size_t> widths;
  for (ReportColumn c : kReportColumns) widths.push_back(std::max<std::size_t>(5, column_title(c).size()));

  std::string rule = "+" + std::string(first + 2, '-');
  for (std::size_t w : widths) rule += "+" + std::string(w + 2, '-');
  rule += "+\n";

  const auto line = [&](std::string_view head, const std::vector<std::string>& cells) {
    std::string out = "| " + pad_right(head, first) + " ";
    for (std::size_t i = 0; i < widths.size(); ++i) {
      out += "| " + pad_left(i < cells.size() ? cells[i] : std::string(), widths[i]) + " ";
    }
    return out + "|\n";
  };

  std::string out = rule;
  std::vector<std::string> titles;
  for (ReportColumn c : kReportColumns) titles.emplace_back(column_title(c));
  out += line("Model", titles);
  out += rule;
  for (PromptMode mode : sections) {
    out += line(section_title(mode), {});
    for (const auto& row : table.rows) {
      std::vector<std::string> cells(widths.size(), "-");
      if (const auto it = row.cells.find(mode); it != row.cells.end()) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
          if (it->second[i]) cells[i] = fmt::format("{:.3f}", *it->second[i]);
        }
      }
      out += line(row.label, cells);
    }
    out += rule;
  }
  return out;
}

std::string render_csv(const ReportTable& table) {
  std::string out = "mode,model";
  for (ReportColumn c : kReportColumns) out += "," + std::string(column_title(c));
  out += '\n';
  for (PromptMode mode : kModes) {
    if (!has_data(table, mode)) continue;
    for (const auto& row : table.rows) {
      out += std::string(to_string(mode)) + "," + csv_field(row.label);
      const auto it = row.cells.find(mode);
      for (std::size_t i = 0; i < kReportColumns.size(); ++i) {
        out += ',';
        if (it != row.cells.end() && it->second[i]) out += fmt::format("{}", *it->second[i]);
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace vpoem
