#include "autorisk/tasks.hpp"

namespace autorisk {

const std::array<std::string_view, kTaskCount>& task_codes() {
  static const std::array<std::string_view, kTaskCount> codes = {
      "human_share",
      "human_train",
      "human_speech",
      "human_sell",
      "human_advise",
      "human_influence",
      "human_negotiate",
      "itusage_email",
      "itusage_internet",
      "itusage_buy",
      "itusage_excel",
      "itusage_word",
      "itusage_code",
      "itusage_discuss",
      "physical_long",
      "physical_accurate",
      "planning_own",
      "planning_others",
      "planning_time",
      "problem_simple",
      "problem_complex",
      "reading_instruction",
      "reading_letter",
      "reading_news",
      "reading_article",
      "reading_book",
      "reading_manual",
      "reading_bill",
      "reading_graph",
      "wricalc_letter",
      "wricalc_news",
      "wricalc_report",
      "wricalc_form",
      "wricalc_budget",
      "wricalc_fraction",
      "wricalc_calculator",
      "wricalc_chart",
      "wricalc_simple",
      "wricalc_advanced",
  };
  return codes;
}

std::optional<std::size_t> task_index(std::string_view code) {
  const auto& codes = task_codes();
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (codes[i] == code) return i;
  }
  return std::nullopt;
}

}  // namespace autorisk
