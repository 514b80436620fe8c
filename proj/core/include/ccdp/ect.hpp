#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ccdp/corpus.hpp"

namespace ccdp {

/// Existing Conversation Thread: the grouping the messaging service itself
/// shows, derived from References / In-Reply-To chains and shared
/// iCalendar UIDs. Subject text plays no part.
struct Ect {
  std::string ect_id;
  std::vector<std::string> message_ids;  // corpus order: (sent_at, id)

  friend bool operator==(const Ect&, const Ect&) = default;
};

/// Partitions the corpus. References to ids missing from the corpus still
/// join the messages that cite them. Output is ordered by earliest member and
/// numbered "ect-0001", "ect-0002", ... in that order.
std::vector<Ect> build_ects(const Corpus& corpus);

/// message id -> index into `ects`.
std::unordered_map<std::string, std::size_t> index_ects(const std::vector<Ect>& ects);

/// Removes leading reply/forward markers (RE:, FW:, FWD:, TR:, also with
/// counts such as "RE[2]:"), case-insensitively and repeatedly, then trims and
/// collapses whitespace. Idempotent.
std::string normalize_subject(std::string_view subject);

}  // namespace ccdp
