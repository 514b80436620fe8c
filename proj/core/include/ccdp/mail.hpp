#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccdp/corpus.hpp"
#include "ccdp/error.hpp"

namespace ccdp {

struct IngestOptions {
  // When set, a calendar part only makes a message a Meeting or
  // MeetingNotification if its LOCATION or DESCRIPTION matches
  // `conference_url_pattern` (ECMAScript regex).
  bool require_conference_link = false;
  std::string conference_url_pattern = R"(https?://[^\s"'<>]+)";
};

/// The iCalendar properties that matter for threading, pulled from one
/// text/calendar MIME part.
struct CalendarPart {
  std::optional<std::string> method;  // uppercased
  std::optional<std::string> uid;
  std::string location;
  std::string description;
};

/// Unfolds content lines and reads METHOD plus the first VEVENT's UID,
/// LOCATION and DESCRIPTION.
CalendarPart parse_icalendar(std::string_view text);

struct KindClassification {
  MessageKind kind = MessageKind::kEmail;
  std::optional<std::string> ical_uid;
};

/// MeetingNotification if a calendar part carries METHOD REQUEST, REPLY or
/// CANCEL; Meeting if one carries no METHOD or PUBLISH; Email otherwise.
/// Parts without a UID never qualify, so the non-Email kinds always come with
/// an ical_uid.
KindClassification classify_calendar(std::span<const CalendarPart> parts,
                                     const IngestOptions& options = {});

MessageKind classify_kind(std::span<const CalendarPart> parts, const IngestOptions& options = {});

/// Parses one RFC 5322 message with optional MIME body.
/// Throws Error(kMalformedHeaders) without a From header,
/// Error(kUnparseableDate) when Date is missing or invalid.
Message parse_eml(std::string_view raw, const IngestOptions& options = {});

struct MboxEntryWarning {
  std::size_t byte_offset = 0;
  std::string message;
};

struct MboxResult {
  std::vector<Message> messages;
  std::vector<MboxEntryWarning> warnings;
};

/// Splits on "From " separator lines and parses every entry. Entries that
/// fail to parse become warnings; only stream failure throws (kIoFailure).
MboxResult parse_mbox(std::istream& in, const IngestOptions& options = {});
MboxResult parse_mbox(std::string_view data, const IngestOptions& options = {});

/// Renders a message as RFC 5322 + MIME such that parse_eml reproduces every
/// modeled field. Meetings get a text/calendar part built from ical_uid.
std::string to_eml(const Message& message);

/// mboxrd: "From " separator per message, ">From " escaping in content.
std::string to_mbox(std::span<const Message> messages);

/// RFC 2047 encoded-word decoding (Q and B, UTF-8 and ISO-8859-1).
std::string decode_encoded_words(std::string_view text);

}  // namespace ccdp
