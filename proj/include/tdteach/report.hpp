#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tdteach/stats.hpp"

namespace tdteach::stats {

/// Scores of one questionnaire item, paired by participant.
struct ItemScores {
  std::string item;
  std::vector<std::string> participants;
  std::vector<double> mechanical;
  std::vector<double> humanlike;
};

/// Reads "item,participant,mechanical,humanlike" CSV (header required).
/// Items keep first-appearance order; a participant repeated within an item
/// is a FormatError.
std::vector<ItemScores> read_pairs_csv(std::istream& in);

struct ItemResult {
  std::string item;
  std::size_t n = 0;
  TTestResult test;
};

std::vector<ItemResult> paired_report(const std::vector<ItemScores>& items);

/// CSV: item,n,df,t,p,mean_diff,degenerate
void write_report_csv(std::ostream& out, const std::vector<ItemResult>& results);

}  // namespace tdteach::stats
