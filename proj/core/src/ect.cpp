#include "ccdp/ect.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>

#include "ccdp/union_find.hpp"

namespace ccdp {

std::vector<Ect> build_ects(const Corpus& corpus) {
  const auto messages = corpus.messages();
  UnionFind sets(messages.size());

  // Ids cited but absent from the corpus become phantom nodes; calendar UIDs
  // get their own node namespace so they can never collide with message ids.
  std::map<std::string, std::size_t, std::less<>> phantom;
  std::map<std::string, std::size_t, std::less<>> calendar;
  const auto node_for_id = [&](const std::string& id) {
    if (auto idx = corpus.index_of(id)) return *idx;
    auto [it, inserted] = phantom.try_emplace(id, 0);
    if (inserted) it->second = sets.add();
    return it->second;
  };

  for (std::size_t i = 0; i < messages.size(); ++i) {
    const Message& m = messages[i];
    for (const auto& ref : m.references) sets.unite(i, node_for_id(ref));
    if (m.in_reply_to) sets.unite(i, node_for_id(*m.in_reply_to));
    if (m.kind != MessageKind::kEmail && m.ical_uid) {
      auto [it, inserted] = calendar.try_emplace(*m.ical_uid, 0);
      if (inserted) it->second = sets.add();
      sets.unite(i, it->second);
    }
  }

  // Corpus order is (sent_at, id), so the first member seen of each component
  // is its earliest message and components come out in earliest-member order.
  std::map<std::size_t, std::size_t> ect_of_root;
  std::vector<Ect> ects;
  for (std::size_t i = 0; i < messages.size(); ++i) {
    const std::size_t root = sets.find(i);
    auto [it, inserted] = ect_of_root.try_emplace(root, ects.size());
    if (inserted) ects.emplace_back();
    ects[it->second].message_ids.push_back(messages[i].id);
  }
  for (std::size_t i = 0; i < ects.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "ect-%04zu", i + 1);
    ects[i].ect_id = buf;
  }
  return ects;
}

std::unordered_map<std::string, std::size_t> index_ects(const std::vector<Ect>& ects) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ects.size(); ++i) {
    for (const auto& id : ects[i].message_ids) index.emplace(id, i);
  }
  return index;
}

namespace {

bool is_space(char ch) { return std::isspace(static_cast<unsigned char>(ch)) != 0; }

// Length of a reply/forward marker at the start of `s`, or 0.
std::size_t marker_length(std::string_view s) {
  static constexpr std::string_view kPrefixes[] = {"fwd", "fw", "re", "tr"};
  for (std::string_view prefix : kPrefixes) {
    if (s.size() < prefix.size()) continue;
    bool match = true;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i]) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    std::size_t pos = prefix.size();
    while (pos < s.size() && is_space(s[pos])) ++pos;
    if (pos < s.size() && (s[pos] == '[' || s[pos] == '(')) {
      const char close = s[pos] == '[' ? ']' : ')';
      std::size_t end = pos + 1;
      while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
      if (end == pos + 1 || end >= s.size() || s[end] != close) continue;
      pos = end + 1;
      while (pos < s.size() && is_space(s[pos])) ++pos;
    }
    if (pos < s.size() && s[pos] == ':') return pos + 1;
  }
  return 0;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char ch : s) {
    if (is_space(ch)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(ch);
    }
  }
  return out;
}

}  // namespace

std::string normalize_subject(std::string_view subject) {
  std::string current = collapse_whitespace(subject);
  while (true) {
    const std::size_t n = marker_length(current);
    if (n == 0) return current;
    current = collapse_whitespace(std::string_view(current).substr(n));
  }
}

}  // namespace ccdp
