#include "tdteach/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "tdteach/error.hpp"

namespace tdteach::stats {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? comma : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

double parse_score(std::string_view field, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw FormatError("pairs csv line " + std::to_string(line_no) + ": bad score '" +
                      std::string(field) + "'");
  }
  return v;
}

}  // namespace

std::vector<ItemScores> read_pairs_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw FormatError("pairs csv: empty input");
  ++line_no;
  const auto header = split_fields(line);
  const std::vector<std::string_view> expected{"item", "participant", "mechanical", "humanlike"};
  if (header != expected) {
    throw FormatError("pairs csv: header must be item,participant,mechanical,humanlike");
  }

  std::vector<ItemScores> items;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 4) {
      throw FormatError("pairs csv line " + std::to_string(line_no) + ": expected 4 fields");
    }
    auto it = std::find_if(items.begin(), items.end(),
                           [&](const ItemScores& s) { return s.item == f[0]; });
    if (it == items.end()) {
      items.push_back(ItemScores{std::string(f[0]), {}, {}, {}});
      it = items.end() - 1;
    }
    if (std::find(it->participants.begin(), it->participants.end(), f[1]) != it->participants.end()) {
      throw FormatError("pairs csv line " + std::to_string(line_no) + ": participant '" +
                        std::string(f[1]) + "' repeated for item '" + it->item + "'");
    }
    it->participants.emplace_back(f[1]);
    it->mechanical.push_back(parse_score(f[2], line_no));
    it->humanlike.push_back(parse_score(f[3], line_no));
  }
  return items;
}

std::vector<ItemResult> paired_report(const std::vector<ItemScores>& items) {
  std::vector<ItemResult> out;
  for (const ItemScores& s : items) {
    out.push_back(ItemResult{s.item, s.mechanical.size(), paired_t_test(s.mechanical, s.humanlike)});
  }
  return out;
}

void write_report_csv(std::ostream& out, const std::vector<ItemResult>& results) {
  out << "item,n,df,t,p,mean_diff,degenerate\n";
  for (const ItemResult& r : results) {
    std::ostringstream row;
    row << std::setprecision(6) << r.item << ',' << r.n << ',' << r.test.df << ',' << r.test.t
        << ',' << r.test.p_two_tailed << ',' << r.test.mean_diff << ','
        << (r.test.degenerate ? "true" : "false");
    out << row.str() << '\n';
  }
}

}  // namespace tdteach::stats
