#ifndef AUTORISK_TASKS_HPP
#define AUTORISK_TASKS_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace autorisk {

// The 39 PIAAC workplace-task items, grouped as human interaction, IT
// usage, physical work, planning, problem solving, reading, and
// writing/calculating. Column order in workers.csv follows this list.
inline constexpr std::size_t kTaskCount = 39;

const std::array<std::string_view, kTaskCount>& task_codes();

std::optional<std::size_t> task_index(std::string_view code);

}  // namespace autorisk

#endif
