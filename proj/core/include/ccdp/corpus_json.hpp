#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "ccdp/corpus.hpp"
#include "ccdp/error.hpp"

namespace ccdp {

// Fixture / interchange schema:
//   {"messages": [{"id", "kind", "from", "to": [], "cc": [], "sent_at",
//                  "subject", "attachments": [], "references": [],
//                  "in_reply_to": null|string, "ical_uid": null|string,
//                  "body"}]}
// kind is one of "email", "meeting", "meeting_notification"; sent_at is
// ISO-8601 UTC.

/// Strict loader: any deviation, including a duplicated id, throws
/// Error(kSchemaViolation) naming the JSON path. Self-addressed messages are
/// still excluded with a warning, as on every ingestion path.
Corpus load_corpus_json(std::istream& in, Warnings& warnings);
Corpus load_corpus_json(std::string_view text, Warnings& warnings);
Corpus load_corpus_json_file(const std::filesystem::path& path, Warnings& warnings);

std::string corpus_to_json(const Corpus& corpus);
std::string message_to_json(const Message& message);
Message message_from_json(std::string_view text);

}  // namespace ccdp
