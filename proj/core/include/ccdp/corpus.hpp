#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ccdp/error.hpp"
#include "ccdp/timestamp.hpp"

namespace ccdp {

/// A participant identified by a normalized email address: lowercased, with
/// display name, comments and angle brackets removed. The address always
/// contains exactly one '@'.
class Interlocutor {
 public:
  /// Throws std::invalid_argument if `raw` does not normalize to a valid address.
  explicit Interlocutor(std::string_view raw);

  /// Accepts "Name <a@b>", "<a@b>", "a@b (comment)" and similar forms.
  static std::optional<Interlocutor> parse(std::string_view raw);

  const std::string& address() const noexcept { return address_; }

  friend bool operator==(const Interlocutor&, const Interlocutor&) = default;
  friend auto operator<=>(const Interlocutor&, const Interlocutor&) = default;

 private:
  struct Normalized {};
  Interlocutor(Normalized, std::string address) : address_(std::move(address)) {}

  std::string address_;
};

enum class Role { kFrom, kTo, kCc, kAbsent };

enum class MessageKind { kEmail, kMeeting, kMeetingNotification };

std::string_view to_string(Role role) noexcept;
std::string_view to_string(MessageKind kind) noexcept;
std::optional<MessageKind> parse_message_kind(std::string_view text) noexcept;

struct Message {
  std::string id;
  MessageKind kind = MessageKind::kEmail;
  Interlocutor from{"unknown@invalid"};
  std::vector<Interlocutor> to;  // ordered, duplicate-free
  std::vector<Interlocutor> cc;  // ordered, duplicate-free
  Timestamp sent_at{};
  std::string subject;
  std::vector<std::string> attachments;
  std::vector<std::string> references;
  std::optional<std::string> in_reply_to;
  std::optional<std::string> ical_uid;
  std::string body;

  friend bool operator==(const Message&, const Message&) = default;
};

/// From > To > Cc > Absent.
Role role_of(const Message& message, const Interlocutor& who) noexcept;

/// True when the message has recipients and every one of them is the sender.
bool is_self_addressed(const Message& message) noexcept;

/// Removes duplicate recipients, drops the sender from To/Cc and a To
/// recipient from Cc.
void canonicalize_recipients(Message& message);

/// Strips surrounding whitespace and angle brackets from a Message-ID.
std::string normalize_message_id(std::string_view raw);

/// Immutable, id-indexed message collection iterated in (sent_at, id) order.
class Corpus {
 public:
  Corpus() = default;

  /// Ingestion path: duplicate ids keep the first occurrence, self-addressed
  /// messages are excluded. Each drop is reported in `warnings`.
  static Corpus from_messages(std::vector<Message> messages, Warnings& warnings);

  std::span<const Message> messages() const noexcept { return messages_; }
  std::size_t size() const noexcept { return messages_.size(); }
  bool empty() const noexcept { return messages_.empty(); }

  const Message* find(std::string_view id) const;
  /// Throws Error(kUnknownMessage).
  const Message& at(std::string_view id) const;
  std::optional<std::size_t> index_of(std::string_view id) const;

 private:
  std::vector<Message> messages_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace ccdp
