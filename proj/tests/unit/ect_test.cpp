#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ccdp/ect.hpp"
#include "test_support.hpp"

namespace ccdp {
namespace {

using testing::email;

std::set<std::set<std::string>> as_sets(const std::vector<Ect>& ects) {
  std::set<std::set<std::string>> out;
  for (const auto& e : ects) out.emplace(e.message_ids.begin(), e.message_ids.end());
  return out;
}

TEST(BuildEcts, UnrelatedEmailsAreSingletons) {
  const Corpus c = testing::corpus_of({
      email("a", "p@x.org", {"q@x.org"}, {}, "2017-01-01T00:00:00Z"),
      email("b", "p@x.org", {"q@x.org"}, {}, "2017-01-02T00:00:00Z"),
      email("c", "p@x.org", {"q@x.org"}, {}, "2017-01-03T00:00:00Z"),
  });
  const auto ects = build_ects(c);
  ASSERT_EQ(ects.size(), 3u);
  EXPECT_EQ(ects[0], (Ect{"ect-0001", {"a"}}));
  EXPECT_EQ(ects[1], (Ect{"ect-0002", {"b"}}));
  EXPECT_EQ(ects[2], (Ect{"ect-0003", {"c"}}));
}

TEST(BuildEcts, ReplyAndReferenceAreTransitive) {
  auto a = email("A", "p@x.org", {"q@x.org"}, {}, "2017-01-01T00:00:00Z");
  auto b = email("B", "q@x.org", {"p@x.org"}, {}, "2017-01-02T00:00:00Z");
  b.in_reply_to = "A";
  auto c = email("C", "r@x.org", {"p@x.org"}, {}, "2017-01-03T00:00:00Z");
  c.references = {"A"};
  const auto ects = build_ects(testing::corpus_of({c, b, a}));
  ASSERT_EQ(ects.size(), 1u);
  EXPECT_EQ(ects[0].message_ids, (std::vector<std::string>{"A", "B", "C"}));
}

TEST(BuildEcts, SharedIcalUidJoinsInviteAndAcceptance) {
  auto invite = email("inv", "p@x.org", {"q@x.org"}, {}, "2017-01-01T00:00:00Z", "Call");
  invite.kind = MessageKind::kMeetingNotification;
  invite.ical_uid = "evt-1";
  auto accept = email("acc", "q@x.org", {"p@x.org"}, {}, "2017-01-01T02:00:00Z", "Accepted: Call");
  accept.kind = MessageKind::kMeetingNotification;
  accept.ical_uid = "evt-1";
  auto meeting = email("mtg", "p@x.org", {"q@x.org"}, {}, "2017-01-05T00:00:00Z", "Call");
  meeting.kind = MessageKind::kMeeting;
  meeting.ical_uid = "evt-1";
  auto other = email("oth", "p@x.org", {"q@x.org"}, {}, "2017-01-02T00:00:00Z", "Call");
  other.kind = MessageKind::kMeetingNotification;
  other.ical_uid = "evt-2";
  const auto ects = build_ects(testing::corpus_of({invite, accept, meeting, other}));
  EXPECT_EQ(as_sets(ects), (std::set<std::set<std::string>>{{"inv", "acc", "mtg"}, {"oth"}}));
}

TEST(BuildEcts, NotificationReplyingToEmailThreadMerges) {
  auto mail = email("mail", "p@x.org", {"q@x.org"}, {}, "2017-01-01T00:00:00Z");
  auto invite = email("inv", "p@x.org", {"q@x.org"}, {}, "2017-01-02T00:00:00Z");
  invite.kind = MessageKind::kMeetingNotification;
  invite.ical_uid = "evt";
  invite.in_reply_to = "mail";
  auto accept = email("acc", "q@x.org", {"p@x.org"}, {}, "2017-01-03T00:00:00Z");
  accept.kind = MessageKind::kMeetingNotification;
  accept.ical_uid = "evt";
  EXPECT_EQ(build_ects(testing::corpus_of({mail, invite, accept})).size(), 1u);
}

TEST(BuildEcts, PhantomReferenceJoinsCiters) {
  auto a = email("a", "p@x.org", {"q@x.org"}, {}, "2017-01-01T00:00:00Z");
  a.in_reply_to = "lost@x";
  auto b = email("b", "q@x.org", {"p@x.org"}, {}, "2017-01-02T00:00:00Z");
  b.references = {"lost@x"};
  auto c = email("c", "q@x.org", {"p@x.org"}, {}, "2017-01-03T00:00:00Z");
  c.references = {"elsewhere@x"};
  EXPECT_EQ(as_sets(build_ects(testing::corpus_of({a, b, c}))),
            (std::set<std::set<std::string>>{{"a", "b"}, {"c"}}));
}

TEST(BuildEcts, UidDoesNotCollideWithMessageIds) {
  auto a = email("same", "p@x.org", {"q@x.org"}, {}, "2017-01-01T00:00:00Z");
  auto b = email("b", "p@x.org", {"q@x.org"}, {}, "2017-01-02T00:00:00Z");
  b.kind = MessageKind::kMeeting;
  b.ical_uid = "same";
  EXPECT_EQ(build_ects(testing::corpus_of({a, b})).size(), 2u);
}

TEST(BuildEcts, SubjectNeverGroups) {
  const auto ects = build_ects(testing::corpus_of({
      email("a", "p@x.org", {"q@x.org"}, {}, "2017-01-01T00:00:00Z", "Budget"),
      email("b", "q@x.org", {"p@x.org"}, {}, "2017-01-02T00:00:00Z", "RE: Budget"),
  }));
  EXPECT_EQ(ects.size(), 2u);
}

TEST(BuildEcts, OrderedByEarliestMember) {
  auto late_root = email("z", "p@x.org", {"q@x.org"}, {}, "2017-01-01T00:00:00Z");
  auto early = email("a", "p@x.org", {"q@x.org"}, {}, "2017-01-02T00:00:00Z");
  auto reply = email("y", "q@x.org", {"p@x.org"}, {}, "2017-01-03T00:00:00Z");
  reply.in_reply_to = "z";
  const auto ects = build_ects(testing::corpus_of({early, reply, late_root}));
  ASSERT_EQ(ects.size(), 2u);
  EXPECT_EQ(ects[0].message_ids, (std::vector<std::string>{"z", "y"}));
  EXPECT_EQ(ects[1].message_ids, (std::vector<std::string>{"a"}));
}

TEST(BuildEcts, PartitionAndBruteForceEquivalence) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<std::size_t> size(1, 50);
    const auto messages = testing::random_messages(rng, size(rng));
    const Corpus corpus = testing::corpus_of(messages);
    const auto ects = build_ects(corpus);
    std::multiset<std::string> seen;
    for (const auto& e : ects) {
      EXPECT_FALSE(e.message_ids.empty());
      seen.insert(e.message_ids.begin(), e.message_ids.end());
    }
    std::multiset<std::string> all;
    for (const auto& m : corpus.messages()) all.insert(m.id);
    EXPECT_EQ(seen, all);
    EXPECT_EQ(as_sets(ects), testing::bfs_threads(messages));
  }
}

TEST(BuildEcts, InvariantUnderInputOrder) {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 20; ++trial) {
    auto messages = testing::random_messages(rng, 30);
    const auto first = build_ects(testing::corpus_of(messages));
    std::shuffle(messages.begin(), messages.end(), rng);
    EXPECT_EQ(build_ects(testing::corpus_of(messages)), first);
  }
}

TEST(IndexEcts, MapsEveryMessage) {
  const std::vector<Ect> ects = {{"ect-0001", {"a", "b"}}, {"ect-0002", {"c"}}};
  const auto index = index_ects(ects);
  EXPECT_EQ(index.at("a"), 0u);
  EXPECT_EQ(index.at("b"), 0u);
  EXPECT_EQ(index.at("c"), 1u);
}

TEST(NormalizeSubject, Examples) {
  EXPECT_EQ(normalize_subject("RE: RE: Budget Q3"), "Budget Q3");
  EXPECT_EQ(normalize_subject(""), "");
  EXPECT_EQ(normalize_subject("Budget Q3"), "Budget Q3");
}

TEST(NormalizeSubject, MarkersCountsAndWhitespace) {
  EXPECT_EQ(normalize_subject("  Fwd: re[2]: TR :  Hermes   closure  "), "Hermes closure");
  EXPECT_EQ(normalize_subject("FW:RE(3):Budget"), "Budget");
  EXPECT_EQ(normalize_subject("Re: "), "");
  EXPECT_EQ(normalize_subject("Regarding the budget"), "Regarding the budget");
  EXPECT_EQ(normalize_subject("Budget RE: later"), "Budget RE: later");
  EXPECT_EQ(normalize_subject("Tr\xC3\xA8s urgent"), "Tr\xC3\xA8s urgent");
}

TEST(NormalizeSubject, Idempotent) {
  std::mt19937_64 rng(303);
  const std::vector<std::string> pieces = {"RE:", "re :", "Fwd:", "FW:", "TR:", "RE[2]:", "(1)", "[x]", " ",
                                           "  ", "Budget", "re", "Tr", "closure", ":", "\t"};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<int> len(0, 8);
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    for (int n = len(rng); n > 0; --n) s += pieces[pick(rng)];
    const std::string once = normalize_subject(s);
    EXPECT_EQ(normalize_subject(once), once) << '"' << s << '"';
  }
}

}  // namespace
}  // namespace ccdp
