#include <doctest.h>

#include "qpc/errors.hpp"
#include "qpc/transcript.hpp"

using namespace qpc;

TEST_CASE("events must arrive in step order") {
  ProtocolTranscript t;
  t.record(1, "TP1", "prepare");
  t.record(2, "TP1", "transmit", {{"to", "P1"}});
  t.record(2, "TP1", "decoy_check");
  CHECK_THROWS_AS(t.record(1, "TP1", "late"), StateError);
}

TEST_CASE("only the first abort is kept") {
  ProtocolTranscript t;
  t.abort(2, AbortCause::DecoyMismatch, "link 1");
  t.abort(3, AbortCause::StateCheckMismatch, "later");
  REQUIRE(t.abort_info().has_value());
  CHECK(t.abort_info()->step == 2);
  CHECK(t.abort_info()->cause == AbortCause::DecoyMismatch);
  CHECK_FALSE(t.completed());
}

TEST_CASE("transcript JSON round trip") {
  ProtocolTranscript t("proposed", true);
  t.record(1, "TP1", "prepare", {{"registers", 16}});
  t.record(3, "TP2", "state_check", {{"passed", false}});
  t.abort(3, AbortCause::StateCheckMismatch, "1 checked registers inconsistent");
  const auto doc = t.to_json();
  CHECK(doc.at("schema_version") == ProtocolTranscript::kSchemaVersion);
  CHECK(doc.at("status").at("cause") == "state_check_mismatch");
  CHECK(ProtocolTranscript::from_json(doc) == t);
  CHECK(ProtocolTranscript::from_json(nlohmann::json::parse(doc.dump())) == t);
}

TEST_CASE("recording off keeps only the status") {
  ProtocolTranscript t("proposed", false);
  int built = 0;
  t.note(1, "TP1", "prepare", [&] {
    ++built;
    return nlohmann::json::object();
  });
  CHECK(built == 0);
  CHECK(t.events().empty());
  t.complete();
  CHECK(t.completed());
}

TEST_CASE("abort cause strings") {
  for (auto c : {AbortCause::DecoyMismatch, AbortCause::StateCheckMismatch, AbortCause::AnnouncementConflict}) {
    CHECK(abort_cause_from_string(to_string(c)) == c);
  }
  CHECK_THROWS_AS(abort_cause_from_string("nope"), ContractError);
}
