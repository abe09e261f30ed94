#include "qpc/transcript.hpp"

#include "qpc/errors.hpp"

namespace qpc {

std::string_view to_string(AbortCause cause) noexcept {
  switch (cause) {
    case AbortCause::DecoyMismatch: return "decoy_mismatch";
    case AbortCause::StateCheckMismatch: return "state_check_mismatch";
    case AbortCause::AnnouncementConflict: return "announcement_conflict";
  }
  return "unknown";
}

AbortCause abort_cause_from_string(std::string_view text) {
  if (text == "decoy_mismatch") return AbortCause::DecoyMismatch;
  if (text == "state_check_mismatch") return AbortCause::StateCheckMismatch;
  if (text == "announcement_conflict") return AbortCause::AnnouncementConflict;
  throw ContractError("unknown abort cause '" + std::string(text) + "'");
}

ProtocolTranscript::ProtocolTranscript(std::string protocol, bool recording)
    : protocol_(std::move(protocol)), recording_(recording) {}

void ProtocolTranscript::record(int step, std::string actor, std::string kind, nlohmann::json payload) {
  if (step < last_step_) {
    throw StateError("transcript events must be in step order (" + std::to_string(step) + " after " +
                     std::to_string(last_step_) + ")");
  }
  last_step_ = step;
  if (!recording_) return;
  events_.push_back(TranscriptEvent{step, std::move(actor), std::move(kind), std::move(payload), std::nullopt});
}

void ProtocolTranscript::abort(int step, AbortCause cause, std::string detail) {
  if (abort_ || completed_) return;
  if (step < last_step_) throw StateError("abort recorded out of step order");
  last_step_ = step;
  abort_ = Abort{step, cause, detail};
  if (recording_) {
    events_.push_back(TranscriptEvent{step, "protocol", "abort", nlohmann::json{{"detail", std::move(detail)}},
                                      std::string(to_string(cause))});
  }
}

void ProtocolTranscript::complete() {
  if (abort_) return;
  completed_ = true;
  if (recording_) events_.push_back(TranscriptEvent{last_step_, "protocol", "complete", nlohmann::json::object(), {}});
}

nlohmann::json ProtocolTranscript::to_json() const {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : events_) {
    nlohmann::json item{{"step", e.step}, {"actor", e.actor}, {"kind", e.kind}, {"payload", e.payload}};
    if (e.cause) item["cause"] = *e.cause;
    events.push_back(std::move(item));
  }
  nlohmann::json status;
  if (abort_) {
    status = {{"state", "aborted"},
              {"step", abort_->step},
              {"cause", std::string(to_string(abort_->cause))},
              {"detail", abort_->detail}};
  } else {
    status = {{"state", completed_ ? "completed" : "incomplete"}};
  }
  return {{"schema_version", kSchemaVersion},
          {"protocol", protocol_},
          {"recording", recording_},
          {"last_step", last_step_},
          {"status", status},
          {"events", events}};
}

ProtocolTranscript ProtocolTranscript::from_json(const nlohmann::json& doc) {
  if (doc.at("schema_version").get<int>() != kSchemaVersion) {
    throw ContractError("unsupported transcript schema_version");
  }
  ProtocolTranscript t(doc.at("protocol").get<std::string>(), doc.at("recording").get<bool>());
  t.last_step_ = doc.at("last_step").get<int>();
  for (const auto& item : doc.at("events")) {
    TranscriptEvent e{item.at("step").get<int>(), item.at("actor").get<std::string>(),
                      item.at("kind").get<std::string>(), item.at("payload"), std::nullopt};
    if (item.contains("cause")) e.cause = item.at("cause").get<std::string>();
    t.events_.push_back(std::move(e));
  }
  const auto& status = doc.at("status");
  const auto state = status.at("state").get<std::string>();
  if (state == "aborted") {
    t.abort_ = Abort{status.at("step").get<int>(), abort_cause_from_string(status.at("cause").get<std::string>()),
                     status.at("detail").get<std::string>()};
  } else {
    t.completed_ = (state == "completed");
  }
  return t;
}

}  // namespace qpc
