#include <gtest/gtest.h>

#include <random>

#include "ccdp/corpus_json.hpp"
#include "ccdp/ect.hpp"
#include "ccdp/mail.hpp"
#include "test_support.hpp"

namespace ccdp {
namespace {

constexpr const char* kOne = R"({"messages": [{
  "id": "m1", "kind": "email", "from": "Alice <alice@x.org>", "to": ["bob@x.org"], "cc": [],
  "sent_at": "2017-04-20T16:22:00Z", "subject": "Budget", "attachments": ["a.xlsx"],
  "references": [], "in_reply_to": null, "ical_uid": null, "body": "hi"}]})";

ErrorCode code_of(std::string_view text) {
  Warnings w;
  try {
    load_corpus_json(text, w);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ccdp::Error thrown";
  return ErrorCode::kIoFailure;
}

std::string what_of(std::string_view text) {
  Warnings w;
  try {
    load_corpus_json(text, w);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

TEST(LoadCorpusJson, OneMessage) {
  Warnings w;
  const Corpus c = load_corpus_json(std::string_view(kOne), w);
  ASSERT_EQ(c.size(), 1u);
  const Message& m = c.at("m1");
  EXPECT_EQ(m.from, Interlocutor("alice@x.org"));
  EXPECT_EQ(m.attachments, std::vector<std::string>{"a.xlsx"});
  EXPECT_TRUE(w.empty());
}

TEST(LoadCorpusJson, DuplicateIdIsSchemaViolation) {
  const std::string text = R"({"messages": [
    {"id": "m1", "kind": "email", "from": "a@x.org", "to": ["b@x.org"], "cc": [], "sent_at": "2017-04-20T16:22:00Z",
     "subject": "", "attachments": [], "references": [], "in_reply_to": null, "ical_uid": null, "body": ""},
    {"id": "m1", "kind": "email", "from": "a@x.org", "to": ["b@x.org"], "cc": [], "sent_at": "2017-04-20T16:22:00Z",
     "subject": "", "attachments": [], "references": [], "in_reply_to": null, "ical_uid": null, "body": ""}]})";
  EXPECT_EQ(code_of(text), ErrorCode::kSchemaViolation);
  EXPECT_NE(what_of(text).find("$.messages[1].id"), std::string::npos);
}

TEST(LoadCorpusJson, ViolationsNameTheJsonPath) {
  std::string bad_from = kOne;
  bad_from.replace(bad_from.find("Alice <alice@x.org>"), 19, "not-an-address");
  EXPECT_EQ(code_of(bad_from), ErrorCode::kSchemaViolation);
  EXPECT_NE(what_of(bad_from).find("$.messages[0].from"), std::string::npos);

  std::string bad_date = kOne;
  bad_date.replace(bad_date.find("2017-04-20T16:22:00Z"), 20, "20/04/2017");
  EXPECT_NE(what_of(bad_date).find("$.messages[0].sent_at"), std::string::npos);

  std::string bad_kind = kOne;
  bad_kind.replace(bad_kind.find("\"email\""), 7, "\"fax\"");
  EXPECT_NE(what_of(bad_kind).find("$.messages[0].kind"), std::string::npos);

  EXPECT_EQ(code_of("not json"), ErrorCode::kSchemaViolation);
  EXPECT_EQ(code_of("[]"), ErrorCode::kSchemaViolation);
  EXPECT_EQ(code_of(R"({"messages": {}})"), ErrorCode::kSchemaViolation);
}

TEST(LoadCorpusJson, MeetingWithoutUidRejected) {
  std::string text = kOne;
  text.replace(text.find("\"email\""), 7, "\"meeting\"");
  EXPECT_EQ(code_of(text), ErrorCode::kSchemaViolation);
  EXPECT_NE(what_of(text).find("ical_uid"), std::string::npos);
}

TEST(LoadCorpusJson, UnknownFieldRejected) {
  std::string text = kOne;
  text.replace(text.find("\"body\""), 6, "\"colour\": 1, \"body\"");
  EXPECT_EQ(code_of(text), ErrorCode::kSchemaViolation);
}

TEST(LoadCorpusJson, BundledFixture) {
  Warnings w;
  const Corpus c = load_corpus_json_file(CCDP_FIXTURE_DIR "/corpus.json", w);
  EXPECT_EQ(c.size(), 11u);
  EXPECT_TRUE(w.empty());
  const auto ects = build_ects(c);
  ASSERT_EQ(ects.size(), 3u);
  EXPECT_EQ(ects[0].message_ids.size(), 7u);
  EXPECT_EQ(ects[1].message_ids.size(), 2u);
  EXPECT_EQ(ects[2].message_ids.size(), 2u);
}

TEST(LoadCorpusJson, MissingFileIsIoFailure) {
  Warnings w;
  try {
    load_corpus_json_file("/nonexistent/corpus.json", w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoFailure);
  }
}

TEST(CorpusJson, RoundTrip) {
  std::mt19937_64 rng(17);
  const Corpus c = testing::corpus_of(testing::random_messages(rng, 40));
  Warnings w;
  const Corpus back = load_corpus_json(std::string_view(corpus_to_json(c)), w);
  ASSERT_EQ(back.size(), c.size());
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(back.messages()[i], c.messages()[i]);
  EXPECT_EQ(corpus_to_json(back), corpus_to_json(c));
}

TEST(CorpusJson, MessageRoundTrip) {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 50; ++i) {
    Message m = testing::random_message(rng, "id-" + std::to_string(i));
    m.body = "Clôture\n";
    EXPECT_EQ(message_from_json(message_to_json(m)), m);
  }
}

TEST(CorpusJson, EquivalentToEmlIngestion) {
  std::mt19937_64 rng(23);
  const auto messages = testing::random_messages(rng, 25);
  std::vector<Message> via_eml;
  for (const auto& m : messages) via_eml.push_back(parse_eml(to_eml(m)));
  const Corpus a = testing::corpus_of(messages);
  const Corpus b = testing::corpus_of(via_eml);
  Warnings w;
  const Corpus c = load_corpus_json(std::string_view(corpus_to_json(a)), w);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(b.messages()[i], a.messages()[i]);
    EXPECT_EQ(c.messages()[i], a.messages()[i]);
  }
}

}  // namespace
}  // namespace ccdp
