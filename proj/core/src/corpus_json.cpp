#include "ccdp/corpus_json.hpp"

#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ccdp {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void violation(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kSchemaViolation, path + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) violation(path, "missing field \"" + key + "\"");
  return *it;
}

std::string require_string(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_string()) violation(path + "." + key, "expected string");
  return v.get<std::string>();
}

std::optional<std::string> nullable_string(const json& obj, const std::string& key,
                                           const std::string& path) {
  const json& v = require(obj, key, path);
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) violation(path + "." + key, "expected string or null");
  return v.get<std::string>();
}

std::vector<std::string> string_array(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_array()) violation(path + "." + key, "expected array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) violation(path + "." + key + "[" + std::to_string(i) + "]", "expected string");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

Interlocutor address(const std::string& raw, const std::string& path) {
  auto p = Interlocutor::parse(raw);
  if (!p) violation(path, "invalid address \"" + raw + "\"");
  return std::move(*p);
}

Message message_from(const json& j, const std::string& path) {
  if (!j.is_object()) violation(path, "expected object");
  static const std::set<std::string> kFields = {"id",          "kind",        "from",     "to",
                                                "cc",          "sent_at",     "subject",  "attachments",
                                                "references",  "in_reply_to", "ical_uid", "body"};
  for (const auto& item : j.items()) {
    if (kFields.count(item.key()) == 0) violation(path + "." + item.key(), "unknown field");
  }

  Message m;
  m.id = require_string(j, "id", path);
  if (m.id.empty()) violation(path + ".id", "empty id");
  const std::string kind = require_string(j, "kind", path);
  const auto parsed_kind = parse_message_kind(kind);
  if (!parsed_kind) violation(path + ".kind", "unknown kind \"" + kind + "\"");
  m.kind = *parsed_kind;
  m.from = address(require_string(j, "from", path), path + ".from");
  const auto to = string_array(j, "to", path);
  for (std::size_t i = 0; i < to.size(); ++i) {
    m.to.push_back(address(to[i], path + ".to[" + std::to_string(i) + "]"));
  }
  const auto cc = string_array(j, "cc", path);
  for (std::size_t i = 0; i < cc.size(); ++i) {
    m.cc.push_back(address(cc[i], path + ".cc[" + std::to_string(i) + "]"));
  }
  const std::string sent_at = require_string(j, "sent_at", path);
  const auto ts = parse_iso8601(sent_at);
  if (!ts) violation(path + ".sent_at", "not an ISO-8601 timestamp: \"" + sent_at + "\"");
  m.sent_at = *ts;
  m.subject = require_string(j, "subject", path);
  m.attachments = string_array(j, "attachments", path);
  m.references = string_array(j, "references", path);
  m.in_reply_to = nullable_string(j, "in_reply_to", path);
  m.ical_uid = nullable_string(j, "ical_uid", path);
  m.body = require_string(j, "body", path);
  if (m.kind != MessageKind::kEmail && !m.ical_uid) {
    violation(path + ".ical_uid", "meetings and meeting notifications need an ical_uid");
  }
  return m;
}

ordered_json message_json(const Message& m) {
  ordered_json j;
  j["id"] = m.id;
  j["kind"] = std::string(to_string(m.kind));
  j["from"] = m.from.address();
  j["to"] = ordered_json::array();
  for (const auto& p : m.to) j["to"].push_back(p.address());
  j["cc"] = ordered_json::array();
  for (const auto& p : m.cc) j["cc"].push_back(p.address());
  j["sent_at"] = format_iso8601(m.sent_at);
  j["subject"] = m.subject;
  j["attachments"] = m.attachments;
  j["references"] = m.references;
  j["in_reply_to"] = m.in_reply_to ? ordered_json(*m.in_reply_to) : ordered_json(nullptr);
  j["ical_uid"] = m.ical_uid ? ordered_json(*m.ical_uid) : ordered_json(nullptr);
  j["body"] = m.body;
  return j;
}

}  // namespace

Corpus load_corpus_json(std::string_view text, Warnings& warnings) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    violation("$", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) violation("$", "expected object");
  const json& list = require(root, "messages", "$");
  if (!list.is_array()) violation("$.messages", "expected array");

  std::vector<Message> messages;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "$.messages[" + std::to_string(i) + "]";
    Message m = message_from(list[i], path);
    if (!seen.insert(m.id).second) violation(path + ".id", "duplicate id \"" + m.id + "\"");
    messages.push_back(std::move(m));
  }
  return Corpus::from_messages(std::move(messages), warnings);
}

Corpus load_corpus_json(std::istream& in, Warnings& warnings) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "failed reading corpus stream");
  return load_corpus_json(std::string_view(text), warnings);
}

Corpus load_corpus_json_file(const std::filesystem::path& path, Warnings& warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return load_corpus_json(in, warnings);
}

std::string corpus_to_json(const Corpus& corpus) {
  ordered_json root;
  root["messages"] = ordered_json::array();
  for (const auto& m : corpus.messages()) root["messages"].push_back(message_json(m));
  return root.dump(2) + "\n";
}

std::string message_to_json(const Message& message) { return message_json(message).dump(); }

Message message_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    violation("$", std::string("invalid JSON: ") + e.what());
  }
  return message_from(j, "$");
}

}  // namespace ccdp
