#include <gtest/gtest.h>

#include <map>
#include <random>

#include "ccdp/corpus.hpp"
#include "test_support.hpp"

namespace ccdp {
namespace {

using testing::email;

TEST(Interlocutor, NormalizesDisplayNamesAndCase) {
  const auto a = Interlocutor::parse("Helene Head <Helene.Head@Example.ORG>");
  ASSERT_TRUE(a);
  EXPECT_EQ(a->address(), "helene.head@example.org");
  EXPECT_EQ(*a, Interlocutor("helene.head@example.org"));
  EXPECT_EQ(Interlocutor::parse("x@y.org (Xavier)")->address(), "x@y.org");
  EXPECT_EQ(Interlocutor::parse("\"Last, First\" <f.l@y.org>")->address(), "f.l@y.org");
}

TEST(Interlocutor, RequiresExactlyOneAt) {
  EXPECT_FALSE(Interlocutor::parse(""));
  EXPECT_FALSE(Interlocutor::parse("no-at-sign"));
  EXPECT_FALSE(Interlocutor::parse("a@b@c"));
  EXPECT_THROW(Interlocutor("nobody"), std::invalid_argument);
}

TEST(Interlocutor, NoPlusTagFolding) {
  EXPECT_NE(Interlocutor("a+tag@x.org"), Interlocutor("a@x.org"));
}

TEST(MessageKind, StringRoundTrip) {
  for (auto k : {MessageKind::kEmail, MessageKind::kMeeting, MessageKind::kMeetingNotification}) {
    EXPECT_EQ(parse_message_kind(to_string(k)), k);
  }
  EXPECT_FALSE(parse_message_kind("fax"));
}

TEST(RoleOf, FromToCcAbsent) {
  auto m = email("m1", "a@x.org", {"b@x.org"}, {"c@x.org"});
  EXPECT_EQ(role_of(m, Interlocutor("a@x.org")), Role::kFrom);
  EXPECT_EQ(role_of(m, Interlocutor("b@x.org")), Role::kTo);
  EXPECT_EQ(role_of(m, Interlocutor("c@x.org")), Role::kCc);
  EXPECT_EQ(role_of(m, Interlocutor("d@x.org")), Role::kAbsent);
}

TEST(RoleOf, ToBeatsCcWhenListedTwice) {
  Message m = email("m1", "a@x.org", {"b@x.org"}, {"b@x.org"});
  EXPECT_EQ(role_of(m, Interlocutor("b@x.org")), Role::kTo);
}

TEST(RoleOf, MultisetLaw) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Message m = testing::random_message(rng, "m");
    std::multiset<std::string> present;
    for (const auto& p : testing::address_pool()) {
      if (role_of(m, Interlocutor(p)) != Role::kAbsent) present.insert(p);
    }
    std::multiset<std::string> expected{m.from.address()};
    for (const auto& p : m.to) expected.insert(p.address());
    for (const auto& p : m.cc) expected.insert(p.address());
    EXPECT_EQ(present, expected);
  }
}

TEST(Canonicalize, DropsSenderAndDuplicates) {
  Message m = email("m1", "a@x.org", {"b@x.org", "a@x.org", "b@x.org"}, {"b@x.org", "c@x.org", "a@x.org"});
  canonicalize_recipients(m);
  EXPECT_EQ(m.to, testing::people({"b@x.org"}));
  EXPECT_EQ(m.cc, testing::people({"c@x.org"}));
}

TEST(SelfAddressed, OnlyWhenEveryRecipientIsTheSender) {
  EXPECT_TRUE(is_self_addressed(email("m", "a@x.org", {"a@x.org"})));
  EXPECT_TRUE(is_self_addressed(email("m", "a@x.org", {}, {"a@x.org"})));
  EXPECT_FALSE(is_self_addressed(email("m", "a@x.org", {"a@x.org", "b@x.org"})));
  EXPECT_FALSE(is_self_addressed(email("m", "a@x.org", {"b@x.org"})));
}

TEST(MessageId, Normalization) {
  EXPECT_EQ(normalize_message_id("  <abc@host>  "), "abc@host");
  EXPECT_EQ(normalize_message_id("abc@host"), "abc@host");
}

TEST(Corpus, SortsBySentAtThenId) {
  const Corpus c = testing::corpus_of({
      email("b", "a@x.org", {"b@x.org"}, {}, "2017-04-20T10:00:00Z"),
      email("a", "a@x.org", {"b@x.org"}, {}, "2017-04-20T10:00:00Z"),
      email("c", "a@x.org", {"b@x.org"}, {}, "2017-04-19T10:00:00Z"),
  });
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.messages()[0].id, "c");
  EXPECT_EQ(c.messages()[1].id, "a");
  EXPECT_EQ(c.messages()[2].id, "b");
  EXPECT_EQ(c.index_of("b"), 2u);
}

TEST(Corpus, DuplicateIdsKeepFirstWithWarning) {
  Warnings w;
  auto first = email("dup", "a@x.org", {"b@x.org"});
  first.subject = "first";
  auto second = email("dup", "c@x.org", {"d@x.org"});
  second.subject = "second";
  const Corpus c = Corpus::from_messages({first, second}, w);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.at("dup").subject, "first");
  ASSERT_EQ(w.size(), 1u);
  EXPECT_NE(w[0].find("dup"), std::string::npos);
}

TEST(Corpus, ExcludesSelfAddressedWithWarning) {
  Warnings w;
  const Corpus c = Corpus::from_messages(
      {email("self", "a@x.org", {"a@x.org"}), email("ok", "a@x.org", {"b@x.org", "a@x.org"})}, w);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.find("self"), nullptr);
  EXPECT_EQ(c.at("ok").to, testing::people({"b@x.org"}));
  EXPECT_EQ(w.size(), 1u);
}

TEST(Corpus, UnknownIdThrows) {
  const Corpus c = testing::corpus_of({email("a", "a@x.org", {"b@x.org"})});
  try {
    c.at("zzz");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownMessage);
  }
  EXPECT_FALSE(c.index_of("zzz"));
}

TEST(Corpus, OrderIndependentOfInput) {
  std::mt19937_64 rng(11);
  auto messages = testing::random_messages(rng, 30);
  const Corpus a = testing::corpus_of(messages);
  std::reverse(messages.begin(), messages.end());
  const Corpus b = testing::corpus_of(messages);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.messages()[i], b.messages()[i]);
}

}  // namespace
}  // namespace ccdp
