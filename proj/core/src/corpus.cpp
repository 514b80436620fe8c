#include "ccdp/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <tuple>

namespace ccdp {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string strip_comments(std::string_view raw) {
  std::string out;
  int depth = 0;
  bool quoted = false;
  for (char ch : raw) {
    if (quoted) {
      if (ch == '"') quoted = false;
      if (depth == 0) out.push_back(ch);
      continue;
    }
    if (ch == '"' && depth == 0) {
      quoted = true;
      out.push_back(ch);
    } else if (ch == '(') {
      ++depth;
    } else if (ch == ')') {
      if (depth > 0) --depth;
    } else if (depth == 0) {
      out.push_back(ch);
    }
  }
  return out;
}

}  // namespace

std::optional<Interlocutor> Interlocutor::parse(std::string_view raw) {
  const std::string text = strip_comments(raw);
  std::string_view candidate = trim(text);
  const auto open = candidate.rfind('<');
  if (open != std::string_view::npos) {
    const auto close = candidate.find('>', open);
    if (close == std::string_view::npos) return std::nullopt;
    candidate = trim(candidate.substr(open + 1, close - open - 1));
  }
  if (candidate.empty()) return std::nullopt;

  std::string address;
  address.reserve(candidate.size());
  for (char ch : candidate) {
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == '<' || ch == '>' || ch == '"' ||
        ch == ',' || ch == ';') {
      return std::nullopt;
    }
    address.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  const auto at = address.find('@');
  if (at == std::string::npos || at == 0 || at + 1 == address.size() ||
      address.find('@', at + 1) != std::string::npos) {
    return std::nullopt;
  }
  return Interlocutor(Normalized{}, std::move(address));
}

Interlocutor::Interlocutor(std::string_view raw) {
  auto parsed = parse(raw);
  if (!parsed) throw std::invalid_argument("not an email address: " + std::string(raw));
  address_ = std::move(parsed->address_);
}

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::kFrom: return "From";
    case Role::kTo: return "To";
    case Role::kCc: return "Cc";
    case Role::kAbsent: return "Absent";
  }
  return "Absent";
}

std::string_view to_string(MessageKind kind) noexcept {
  switch (kind) {
    case MessageKind::kEmail: return "email";
    case MessageKind::kMeeting: return "meeting";
    case MessageKind::kMeetingNotification: return "meeting_notification";
  }
  return "email";
}

std::optional<MessageKind> parse_message_kind(std::string_view text) noexcept {
  if (text == "email") return MessageKind::kEmail;
  if (text == "meeting") return MessageKind::kMeeting;
  if (text == "meeting_notification") return MessageKind::kMeetingNotification;
  return std::nullopt;
}

Role role_of(const Message& message, const Interlocutor& who) noexcept {
  if (message.from == who) return Role::kFrom;
  if (std::find(message.to.begin(), message.to.end(), who) != message.to.end()) return Role::kTo;
  if (std::find(message.cc.begin(), message.cc.end(), who) != message.cc.end()) return Role::kCc;
  return Role::kAbsent;
}

bool is_self_addressed(const Message& message) noexcept {
  if (message.to.empty() && message.cc.empty()) return false;
  const auto is_sender = [&](const Interlocutor& p) { return p == message.from; };
  return std::all_of(message.to.begin(), message.to.end(), is_sender) &&
         std::all_of(message.cc.begin(), message.cc.end(), is_sender);
}

void canonicalize_recipients(Message& message) {
  const auto dedupe = [&](std::vector<Interlocutor>& list, const std::vector<Interlocutor>& higher) {
    std::vector<Interlocutor> kept;
    kept.reserve(list.size());
    for (auto& p : list) {
      if (p == message.from) continue;
      if (std::find(higher.begin(), higher.end(), p) != higher.end()) continue;
      if (std::find(kept.begin(), kept.end(), p) != kept.end()) continue;
      kept.push_back(std::move(p));
    }
    list = std::move(kept);
  };
  dedupe(message.to, {});
  dedupe(message.cc, message.to);
}

std::string normalize_message_id(std::string_view raw) {
  std::string_view s = trim(raw);
  if (s.size() >= 2 && s.front() == '<' && s.back() == '>') s = trim(s.substr(1, s.size() - 2));
  return std::string(s);
}

Corpus Corpus::from_messages(std::vector<Message> messages, Warnings& warnings) {
  Corpus corpus;
  corpus.messages_.reserve(messages.size());
  for (auto& m : messages) {
    if (m.id.empty()) {
      warnings.push_back("message without id skipped");
      continue;
    }
    if (corpus.index_.count(m.id) != 0) {
      warnings.push_back("duplicate message id " + m.id + " ignored");
      continue;
    }
    if (is_self_addressed(m)) {
      warnings.push_back("self-addressed message " + m.id + " excluded");
      continue;
    }
    canonicalize_recipients(m);
    corpus.index_.emplace(m.id, 0);
    corpus.messages_.push_back(std::move(m));
  }
  std::sort(corpus.messages_.begin(), corpus.messages_.end(), [](const Message& a, const Message& b) {
    return std::tie(a.sent_at, a.id) < std::tie(b.sent_at, b.id);
  });
  for (std::size_t i = 0; i < corpus.messages_.size(); ++i) corpus.index_[corpus.messages_[i].id] = i;
  return corpus;
}

const Message* Corpus::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &messages_[it->second];
}

const Message& Corpus::at(std::string_view id) const {
  const Message* m = find(id);
  if (m == nullptr) throw Error(ErrorCode::kUnknownMessage, "no message with id " + std::string(id));
  return *m;
}

std::optional<std::size_t> Corpus::index_of(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace ccdp
